"""Restarted Lanczos iteration for the lowest eigenvalue of a Hermitian operator."""

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .exceptions import ConvergenceError

__all__ = ["lanczos_ground"]


def lanczos_ground(matvec, dim, dtype=np.float64, tol=1e-10, krylov=64, max_restarts=500,
                   seed=0):
    """Lowest eigenvalue of a Hermitian operator given only its action.

    Runs Lanczos with full reorthogonalization for up to `krylov` steps,
    restarts from the lowest Ritz vector, and stops once the true residual
    ``||H y - theta y||`` of the normalized Ritz vector is at most `tol`.

    Parameters
    ----------
    matvec : callable
        ``v -> H v`` on arrays of length `dim`.
    dim : int
    dtype : numpy dtype
        ``complex128`` when `H` has complex entries.
    tol : float
        Absolute residual tolerance.
    krylov : int
        Maximum Krylov dimension per cycle.
    max_restarts : int
    seed : int
        Seed of the random start vector.

    Returns
    -------
    theta : float
        Ritz value (an upper bound on the lowest eigenvalue, within
        ``residual`` of an eigenvalue).
    residual : float
    matvecs : int

    Raises
    ------
    ConvergenceError
        If `tol` is not met after `max_restarts` cycles.
    """
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(dim)
    if np.issubdtype(dtype, np.complexfloating):
        v = v + 1j * rng.standard_normal(dim)
    v = v.astype(dtype)
    v /= np.linalg.norm(v)
    m = min(krylov, dim)
    basis = np.empty((m, dim), dtype=dtype)
    count = 0
    res = np.inf
    for _ in range(max_restarts):
        alpha = np.zeros(m)
        beta = np.zeros(m)
        basis[0] = v
        steps = m
        for j in range(m):
            w = matvec(basis[j])
            count += 1
            alpha[j] = np.vdot(basis[j], w).real
            w = w - alpha[j] * basis[j]
            if j:
                w -= beta[j - 1] * basis[j - 1]
            for _ in range(2):
                w -= (basis[:j + 1].conj() @ w) @ basis[:j + 1]
            b = np.linalg.norm(w)
            if j == m - 1 or b <= 1e-13 * max(1.0, abs(alpha[j])):
                steps = j + 1
                break
            beta[j] = b
            basis[j + 1] = w / b
        if steps == 1:
            theta, s = alpha[:1], np.ones((1, 1))
        else:
            theta, s = eigh_tridiagonal(alpha[:steps], beta[:steps - 1],
                                        select="i", select_range=(0, 0))
        y = s[:, 0] @ basis[:steps]
        y /= np.linalg.norm(y)
        hy = matvec(y)
        count += 1
        res = float(np.linalg.norm(hy - theta[0] * y))
        if res <= tol:
            return float(theta[0]), res, count
        v = y
    raise ConvergenceError(f"Lanczos did not converge: residual {res:.3e} > {tol:.3e} "
                           f"after {count} products", residual=res)
