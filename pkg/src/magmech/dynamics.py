"""Linearized fluctuation dynamics: drift matrix, diffusion matrix and
the stability gate.

Quadrature ordering is (dI1, dphi1, dI2, dphi2, dx, dy, dq, dp): the two
cavity quadrature pairs, the magnon pair, then mechanical position and
momentum.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .lyapunov import EigensolverError, eigenvalues
from .params import PhysicalParams, effective_kappa_2, thermal_occupation

QUADRATURES = ("I1", "phi1", "I2", "phi2", "x", "y", "q", "p")

DRIFT_MODES = ("derived", "printed")


def drift_matrix(params: PhysicalParams, delta_eff: float,
                 G_mb_real: float, *, mode: str = "derived") -> np.ndarray:
    """8x8 drift matrix of the quadrature fluctuations.

    ``G_mb_real`` is the gauge-fixed (real, non-negative) effective
    magnon-phonon coupling; ``delta_eff`` the shifted magnon detuning.

    ``mode="derived"`` (default) builds the matrix from the
    linearization of the equations of motion: the cavity-2 diagonal
    carries the net damping kappa_2 - g, and the magnon block is a
    damped rotation (-kappa_m, +delta_eff / -delta_eff, -kappa_m).
    ``mode="printed"`` reproduces a legacy transcription that differs in
    exactly two places: intrinsic kappa_2 on the cavity-2 diagonal and a
    +delta_eff sign at row 6, column 5.  It is retained for audit only.
    """
    if G_mb_real < 0:
        raise ValueError("G_mb_real must be gauge-fixed non-negative")
    if mode not in DRIFT_MODES:
        raise ValueError(f"unknown drift mode {mode!r}")
    A = drift_matrix_general(params, delta_eff, complex(G_mb_real))
    if mode == "printed":
        A[2, 2] = A[3, 3] = -params.kappa_2
        A[5, 4] = delta_eff
    return A


def drift_matrix_general(params: PhysicalParams, delta_eff: float,
                         G_mb: complex) -> np.ndarray:
    """Drift matrix for an arbitrary (complex) effective coupling.

    Used to verify gauge invariance: a phase rotation of the magnon
    amplitude rotates ``G_mb`` and acts on the matrix as an orthogonal
    similarity, leaving the spectrum and all derived measures unchanged.
    """
    k1 = params.kappa_1
    k2t = effective_kappa_2(params)
    km = params.kappa_m
    d1, d2 = params.Delta_1, params.Delta_2
    gma, J = params.g_ma, params.J
    gr, gi = G_mb.real, G_mb.imag

    A = np.zeros((8, 8))
    A[0, 0] = -k1;  A[0, 1] = d1;   A[0, 3] = J;    A[0, 5] = gma
    A[1, 0] = -d1;  A[1, 1] = -k1;  A[1, 2] = -J;   A[1, 4] = -gma
    A[2, 1] = J;    A[2, 2] = -k2t; A[2, 3] = d2
    A[3, 0] = -J;   A[3, 2] = -d2;  A[3, 3] = -k2t
    A[4, 1] = gma;  A[4, 4] = -km;  A[4, 5] = delta_eff; A[4, 6] = -gr
    A[5, 0] = -gma; A[5, 4] = -delta_eff; A[5, 5] = -km; A[5, 6] = -gi
    A[6, 7] = params.omega_b
    A[7, 4] = -gi;  A[7, 5] = gr
    A[7, 6] = -params.omega_b; A[7, 7] = -params.gamma_b
    return A


def diffusion_matrix(params: PhysicalParams) -> tuple[np.ndarray, list[str]]:
    """Diagonal 8x8 noise matrix and any convention warnings.

    The cavity-1, magnon and mechanical entries are kappa*(2N+1) with
    the mode's thermal occupation (zero on the mechanical position).
    The cavity-2 entry ``d2`` depends on ``params.diffusion_convention``:

    - ``as_printed``:   (kappa_2 - g) * (2N2 + 1); negative when the
      cavity is net active, which is flagged with a warning.
    - ``absolute_value``: |kappa_2 - g| * (2N2 + 1), the minimal noise
      of a phase-insensitive amplifier at that net rate.
    - ``physical_sum``: (kappa_2 + g) * (2N2 + 1), loss and gain noises
      added independently.  The symmetrized correlators of the inverted
      gain reservoir carry the same (2N+1)/2 weight per quadrature as a
      lossy one, so loss and gain contributions simply add.
    """
    T = params.temperature_T
    n1 = thermal_occupation(params.omega_1, T)
    n2 = thermal_occupation(params.omega_2, T)
    nm = thermal_occupation(params.omega_m, T)
    nb = thermal_occupation(params.omega_b, T)

    k2t = effective_kappa_2(params)
    warnings: list[str] = []
    if params.diffusion_convention == "as_printed":
        d2 = k2t * (2.0 * n2 + 1.0)
        if k2t < 0:
            warnings.append(
                "negative diffusion: cavity-2 noise entry %.6g < 0 "
                "(as_printed with net gain)" % d2)
    elif params.diffusion_convention == "absolute_value":
        d2 = abs(k2t) * (2.0 * n2 + 1.0)
    else:  # physical_sum
        d2 = (params.kappa_2 + params.gain_g) * (2.0 * n2 + 1.0)

    diag = [params.kappa_1 * (2.0 * n1 + 1.0),
            params.kappa_1 * (2.0 * n1 + 1.0),
            d2, d2,
            params.kappa_m * (2.0 * nm + 1.0),
            params.kappa_m * (2.0 * nm + 1.0),
            0.0,
            params.gamma_b * (2.0 * nb + 1.0)]
    return np.diag(diag), warnings


@dataclass(frozen=True)
class StabilityReport:
    """Spectrum of the drift matrix and the resulting verdict.

    ``stable`` is true iff the largest real part is below the (kappa_1
    scaled) tolerance; ``indeterminate`` marks an eigensolver failure,
    which is never silently reported as stable or unstable.
    """

    eigenvalues: np.ndarray = field(repr=False)
    stable: bool
    margin: float
    indeterminate: bool = False


def stability(A: np.ndarray, kappa_1: float, *,
              tol_stab_rel: float = 1e-9) -> StabilityReport:
    """Classify the drift matrix by its spectrum.

    Stable iff every eigenvalue real part is < -tol_stab_rel*kappa_1.
    """
    try:
        ev = eigenvalues(A)
    except EigensolverError:
        return StabilityReport(np.full(A.shape[0], np.nan, complex),
                               False, float("nan"), indeterminate=True)
    margin = float(ev.real.max())
    return StabilityReport(ev, margin < -tol_stab_rel * kappa_1, margin)


def format_matrix(M: np.ndarray) -> str:
    """Row-major plain-text dump, 17 significant digits per entry."""
    return "\n".join(" ".join("%.17g" % v for v in row) for row in
                     np.atleast_2d(M)) + "\n"


def write_matrix(path, M: np.ndarray) -> None:
    """Write a matrix dump produced by :func:`format_matrix`."""
    with open(path, "w") as fh:
        fh.write(format_matrix(M))
