"""Dense numerical kernels: steady-state Lyapunov solver, eigensolver
contract and covariance physicality checks.

The Lyapunov equation A V + V A^T = -D is solved by vectorization at
n = 8: the 64x64 system (A (x) I + I (x) A) vec(V) = -vec(D) is
factorized with partial pivoting and the result symmetrized.  At this
size the Kronecker solve is microseconds and trivially auditable, which
is why it is preferred over Schur-based schemes.
"""

from __future__ import annotations

import numpy as np

EPS_FLOOR = 1e-300


class SingularSystemError(Exception):
    """The vectorized Lyapunov system is rank deficient.

    Occurs exactly on the stability boundary, where eigenvalue pairs of
    the drift matrix sum to zero.
    """


class EigensolverError(Exception):
    """The iterative eigensolver failed to converge."""


def eigenvalues(M: np.ndarray) -> np.ndarray:
    """All eigenvalues of a real or complex square matrix (n <= 64).

    Backed by the LAPACK general eigensolver (balanced Hessenberg
    reduction followed by shifted QR iteration), which meets the
    backward-error bound ~ machine epsilon times the matrix norm.
    Non-convergence raises :class:`EigensolverError` instead of
    returning a partial spectrum.
    """
    M = np.asarray(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError("matrix must be square")
    if M.shape[0] > 64:
        raise ValueError("kernel is sized for n <= 64")
    if not np.all(np.isfinite(M)):
        raise ValueError("matrix entries must be finite")
    try:
        return np.linalg.eigvals(M)
    except np.linalg.LinAlgError as exc:
        raise EigensolverError(str(exc)) from exc


def solve_lyapunov(A: np.ndarray, D: np.ndarray) -> np.ndarray:
    """Unique symmetric solution V of A V + V A^T = -D for stable A.

    Callers must gate on stability first; on the stability boundary the
    factorization detects singularity and raises
    :class:`SingularSystemError`.
    """
    A = np.asarray(A, dtype=float)
    D = np.asarray(D, dtype=float)
    n = A.shape[0]
    if A.shape != (n, n) or D.shape != (n, n):
        raise ValueError("A and D must be square and conformable")
    eye = np.eye(n)
    K = np.kron(A, eye) + np.kron(eye, A)
    try:
        v = np.linalg.solve(K, -D.reshape(-1))
    except np.linalg.LinAlgError as exc:
        raise SingularSystemError(str(exc)) from exc
    V = v.reshape(n, n)
    return 0.5 * (V + V.T)


def lyapunov_residual(A: np.ndarray, V: np.ndarray,
                      D: np.ndarray) -> float:
    """Relative max-norm residual |A V + V A^T + D| / max(|D|, floor)."""
    R = A @ V + V @ A.T + D
    return float(np.abs(R).max() / max(np.abs(D).max(), EPS_FLOOR))


def symplectic_form(n_modes: int) -> np.ndarray:
    """Direct sum of n_modes blocks [[0, 1], [-1, 0]]."""
    return np.kron(np.eye(n_modes), np.array([[0.0, 1.0], [-1.0, 0.0]]))


def physicality_min_eig(V: np.ndarray) -> float:
    """Smallest eigenvalue of V + (i/2) Omega.

    Non-negative (up to roundoff) exactly when V is a bona fide quantum
    covariance matrix in the vacuum-variance-1/2 convention.
    """
    V = np.asarray(V, dtype=float)
    n_modes = V.shape[0] // 2
    H = V + 0.5j * symplectic_form(n_modes)
    return float(np.linalg.eigvalsh(H).min())
