"""Efficiently controllable graph families: construction, partitioning,
control-cost accounting and cluster-decoupled ground-state estimates."""

from .controllability import (CostModel, classify, elementary_cost, family_scan,
                              partition_metrics)
from .families import (FamilySpec, estimate_pc, gen_chain, gen_complete_blocks,
                       gen_erdos_renyi, gen_lattice, gen_percolated_lattice, gen_scale_free,
                       gen_sierpinski, sierpinski_partition)
from .graph import (BlockGraph, Graph, Partition, block_graph, build_graph,
                    connected_components, diameter, validate_partition)
from .groundstate import (approx_ground_energy, cluster_ground_energy, decouple,
                          exact_ground_energy)
from .hamiltonian import Hamiltonian, Term, build_hamiltonian
from .partitioner import (PartitionStrategy, delta_removal_partition, grow_blocks,
                          high_degree_partition)
from .schedule import block_path, build_schedule

__version__ = "0.1.0"
