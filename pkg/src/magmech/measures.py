"""Bipartite Gaussian correlation measures on reduced two-mode
covariance matrices: logarithmic negativity and directional Renyi-2
steering.

Conventions: vacuum variance 1/2 (a thermal mode has V = (N + 1/2) I),
so a pair is entangled iff the smallest partially-transposed symplectic
eigenvalue is below 1/2 and E_N = max(0, -ln(2 nu)).
"""

from __future__ import annotations

import math

import numpy as np

from .lyapunov import symplectic_form

MODES = ("a1", "a2", "m", "b")

PAIRS = (("a1", "a2"), ("a1", "m"), ("a2", "m"),
         ("a1", "b"), ("a2", "b"), ("m", "b"))

_PARTIAL_TRANSPOSE = np.diag([1.0, -1.0, 1.0, 1.0])
_OMEGA4 = symplectic_form(2)

ZERO_CLAMP = 1e-12
DUAL_METHOD_TOL = 1e-10


class PhysicalityError(Exception):
    """The two-mode covariance matrix is not a physical Gaussian state
    (beyond numerical tolerance)."""


def mode_indices(mode: str) -> tuple[int, int]:
    """Quadrature row/column indices of one mode in the 8x8 layout."""
    try:
        k = MODES.index(mode)
    except ValueError:
        raise ValueError(f"unknown mode {mode!r}; expected one of {MODES}")
    return 2 * k, 2 * k + 1


def reduce_pair(V: np.ndarray, pair: tuple[str, str]) -> np.ndarray:
    """4x4 covariance of two distinct modes, first-listed mode first."""
    first, second = pair
    if first == second:
        raise ValueError("modes of a pair must be distinct")
    i0, i1 = mode_indices(first)
    j0, j1 = mode_indices(second)
    idx = [i0, i1, j0, j1]
    return np.asarray(V)[np.ix_(idx, idx)]


def min_ptranspose_symplectic_eig(cm: np.ndarray) -> float:
    """Smallest symplectic eigenvalue of the partially transposed CM.

    Computed by two independent routes that must agree to 1e-10: the
    spectrum of i*Omega*(P cm P), and the closed form from the local and
    cross-block determinants.  Note det(B) of the off-diagonal block is
    used *signed*; it is negative for entangled states.
    """
    cm = np.asarray(cm, dtype=float)
    if cm.shape != (4, 4):
        raise ValueError("expected a 4x4 two-mode covariance matrix")

    tilde = _PARTIAL_TRANSPOSE @ cm @ _PARTIAL_TRANSPOSE
    spec = np.linalg.eigvals(1j * _OMEGA4 @ tilde)
    nu_eig = float(np.abs(spec).min())

    det_a = float(np.linalg.det(cm[:2, :2]))
    det_c = float(np.linalg.det(cm[2:, 2:]))
    det_b = float(np.linalg.det(cm[:2, 2:]))
    det_v = float(np.linalg.det(cm))
    sigma = det_a + det_c - 2.0 * det_b
    disc = sigma * sigma - 4.0 * det_v
    scale = max(1.0, sigma * sigma)
    if disc < -ZERO_CLAMP * scale:
        raise PhysicalityError(
            f"negative symplectic discriminant {disc:.3e}")
    inner = 0.5 * (sigma - math.sqrt(max(disc, 0.0)))
    if inner < -ZERO_CLAMP * max(1.0, abs(sigma)):
        raise PhysicalityError(
            f"negative squared symplectic eigenvalue {inner:.3e}")
    nu_cf = math.sqrt(max(inner, 0.0))

    # Forward-error allowance for the closed form: the discriminant is
    # computed with absolute error ~ eps * scale, which blows up as
    # 1/sqrt(disc) when the two symplectic eigenvalues (nearly)
    # coincide.  Only disagreement beyond that conditioning bound marks
    # a genuine inconsistency.
    disc_err = 64.0 * np.finfo(float).eps * max(scale, abs(4.0 * det_v))
    cond = disc_err / (4.0 * max(nu_eig, 1e-3)
                       * math.sqrt(max(disc, 0.0) + disc_err))
    if abs(nu_eig - nu_cf) > DUAL_METHOD_TOL * max(1.0, nu_cf) + cond:
        raise PhysicalityError(
            "symplectic eigenvalue methods disagree: "
            f"{nu_eig!r} (spectral) vs {nu_cf!r} (closed form)")
    return nu_eig


def log_negativity(cm: np.ndarray) -> float:
    """Logarithmic negativity max(0, -ln(2 nu-)) of a two-mode CM."""
    nu = min_ptranspose_symplectic_eig(cm)
    if nu <= 0.0:
        raise PhysicalityError("vanishing symplectic eigenvalue")
    value = -math.log(2.0 * nu)
    if abs(value) < ZERO_CLAMP:  # roundoff around the threshold nu = 1/2
        return 0.0
    return max(0.0, value)


def steering(cm: np.ndarray, direction: str = "forward") -> float:
    """Directional Gaussian steerability from the Renyi-2 entropy.

    ``forward`` quantifies first-mode -> second-mode steering through
    the first mode's local block; ``backward`` swaps the roles.
    Roundoff-scale magnitudes (below 1e-12) are reported as exact zero
    so that one-way statements are crisp.
    """
    cm = np.asarray(cm, dtype=float)
    if cm.shape != (4, 4):
        raise ValueError("expected a 4x4 two-mode covariance matrix")
    if direction not in ("forward", "backward"):
        raise ValueError(f"unknown direction {direction!r}")
    block = cm[:2, :2] if direction == "forward" else cm[2:, 2:]
    det_block = float(np.linalg.det(block))
    det_v = float(np.linalg.det(cm))
    if det_block <= 0.0:
        raise PhysicalityError(
            f"non-positive conditioning block determinant {det_block:.3e}")
    if det_v <= 0.0:
        raise PhysicalityError(
            f"non-positive covariance determinant {det_v:.3e}")
    # S(2*block) - S(2*cm) with S = (1/2) ln det
    value = 0.5 * math.log(det_block / (4.0 * det_v))
    if abs(value) < ZERO_CLAMP:  # roundoff; keep "no steering" crisp
        return 0.0
    return max(0.0, value)
