"""Mean-field steady state of the driven system.

The undepleted (classical) amplitudes obey a closed form once the
magnon-phonon self-consistency is resolved: the mechanical displacement
shifts the magnon detuning, Delta_eff = Delta_m + g_mb*<q>, while
<q> = -(g_mb/omega_b)|<m>|^2 depends on the magnon amplitude in turn.
In ``microscopic`` mode this scalar fixed point is iterated (damped
Picard); in ``direct_g`` mode the effective coupling and detuning are
taken from the parameter set and no iteration is needed.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .params import PhysicalParams, effective_kappa_2

SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class SteadyState:
    """Converged mean-field amplitudes.

    ``residual`` is the max-norm of the zero-derivative equations of
    motion relative to the drive amplitude; ``delta_eff`` is the
    self-consistent magnon detuning.
    """

    m_avg: complex
    a1_avg: complex
    a2_avg: complex
    q_avg: float
    p_avg: float
    delta_eff: float
    iterations_used: int
    residual: float
    converged: bool


def _closed_form(params: PhysicalParams, epsilon_d: float, delta_eff: float):
    """Amplitudes for a given (frozen) effective magnon detuning.

    The cavity-2 response uses the net damping kappa_2 - g, consistent
    with its equation of motion.  The cavity-1 amplitude is the reduced
    form -i*g_ma*f2*<m>/(J^2 + f1*f2); the uncanceled textbook variant
    carries a spurious extra factor that drops out identically.
    """
    if epsilon_d == 0.0:
        return 0j, 0j, 0j
    f1 = 1j * params.Delta_1 + params.kappa_1
    f2 = 1j * params.Delta_2 + effective_kappa_2(params)
    fm = 1j * delta_eff + params.kappa_m
    jj = params.J * params.J
    denom = fm * (jj + f1 * f2) + params.g_ma ** 2 * f2
    m = epsilon_d * (jj + f1 * f2) / denom
    a1 = -1j * params.g_ma * f2 * m / (jj + f1 * f2)
    # -i J a1 / f2 with the f2 cancellation done symbolically, so a
    # resonant undamped cavity 2 (f2 = 0) stays finite
    a2 = -params.J * params.g_ma * m / (jj + f1 * f2)
    return m, a1, a2


def mean_field_residual(params: PhysicalParams, state: SteadyState,
                        epsilon_d: float) -> float:
    """Max-norm of the steady-state equations, relative to epsilon_d.

    Substitutes the amplitudes into the five equations of motion with
    all time derivatives set to zero.  The magnon-phonon nonlinearity is
    only present in ``microscopic`` mode.
    """
    g_mb = params.g_mb if params.coupling_mode == "microscopic" else 0.0
    m, a1, a2, q, p = (state.m_avg, state.a1_avg, state.a2_avg,
                       state.q_avg, state.p_avg)
    r1 = -(1j * params.Delta_1 + params.kappa_1) * a1 \
        - 1j * params.g_ma * m - 1j * params.J * a2
    r2 = -(1j * params.Delta_2 + effective_kappa_2(params)) * a2 \
        - 1j * params.J * a1
    rm = -(1j * params.Delta_m + params.kappa_m) * m \
        - 1j * params.g_ma * a1 - 1j * g_mb * m * q + epsilon_d
    rq = params.omega_b * p
    rp = -params.omega_b * q - params.gamma_b * p - g_mb * abs(m) ** 2
    worst = max(abs(r1), abs(r2), abs(rm), abs(rq), abs(rp))
    return worst / max(abs(epsilon_d), 1e-300)


def solve_steady_state(params: PhysicalParams, epsilon_d: float, *,
                       tol_rel: float = 1e-12, max_iter: int = 1000,
                       damping: float = 0.5,
                       q_seed: float = 0.0) -> SteadyState:
    """Solve the mean-field equations for one parameter set.

    In ``direct_g`` mode the effective detuning equals ``Delta_m`` and a
    single linear solve suffices.  In ``microscopic`` mode the
    displacement fixed point q -> -(g_mb/omega_b)|m(q)|^2 is iterated
    with damped Picard steps from ``q_seed`` until the effective
    detuning moves by less than ``tol_rel * omega_b``.  The seed 0
    selects the branch continuously connected to the undriven solution.

    Never raises on non-convergence: the best iterate is returned with
    ``converged=False`` so that multistable points can be diagnosed by
    the caller (see :func:`find_self_consistent_roots`).
    """
    if epsilon_d < 0:
        raise ValueError("epsilon_d must be non-negative")

    if params.coupling_mode == "direct_g" or params.g_mb == 0.0:
        delta_eff = params.Delta_m
        m, a1, a2 = _closed_form(params, epsilon_d, delta_eff)
        state = SteadyState(m, a1, a2, 0.0, 0.0, delta_eff, 0, 0.0, True)
        res = mean_field_residual(params, state, epsilon_d)
        return SteadyState(m, a1, a2, 0.0, 0.0, delta_eff, 0, res, True)

    g_mb = params.g_mb
    q = q_seed
    converged = False
    iterations = 0
    tol = tol_rel * params.omega_b
    for iterations in range(1, max_iter + 1):
        delta_eff = params.Delta_m + g_mb * q
        m, _, _ = _closed_form(params, epsilon_d, delta_eff)
        q_next = (1.0 - damping) * q - damping * g_mb * abs(m) ** 2 \
            / params.omega_b
        shift = abs(g_mb * (q_next - q))
        q = q_next
        if shift < tol:
            converged = True
            break
    delta_eff = params.Delta_m + g_mb * q
    m, a1, a2 = _closed_form(params, epsilon_d, delta_eff)
    state = SteadyState(m, a1, a2, q, 0.0, delta_eff, iterations, 0.0,
                        converged)
    res = mean_field_residual(params, state, epsilon_d)
    return SteadyState(m, a1, a2, q, 0.0, delta_eff, iterations, res,
                       converged)


def find_self_consistent_roots(params: PhysicalParams, epsilon_d: float, *,
                               n_seeds: int = 32,
                               tol_rel: float = 1e-12,
                               max_iter: int = 1000) -> list[SteadyState]:
    """Scan displacement seeds for distinct self-consistent solutions.

    Returns all converged roots found from a coarse grid of seeds,
    deduplicated on the displacement, ordered with the branch connected
    to the undriven (q = 0 seed) solution first.  A single entry means
    the operating point is monostable.
    """
    if params.coupling_mode != "microscopic":
        return [solve_steady_state(params, epsilon_d, tol_rel=tol_rel,
                                   max_iter=max_iter)]
    first = solve_steady_state(params, epsilon_d, tol_rel=tol_rel,
                               max_iter=max_iter, q_seed=0.0)
    span = 8.0 * max(abs(first.q_avg), 1.0)
    roots = [first] if first.converged else []
    for k in range(n_seeds):
        seed = -span + 2.0 * span * k / max(n_seeds - 1, 1)
        cand = solve_steady_state(params, epsilon_d, tol_rel=tol_rel,
                                  max_iter=max_iter, q_seed=seed)
        if not cand.converged:
            continue
        scale = max(abs(cand.q_avg), 1.0)
        if all(abs(cand.q_avg - r.q_avg) > 1e-6 * scale for r in roots):
            roots.append(cand)
    return roots if roots else [first]


def effective_coupling(g_mb: float, m_avg: complex) -> complex:
    """Effective magnon-phonon coupling i*sqrt(2)*g_mb*<m> (complex)."""
    return 1j * SQRT2 * g_mb * m_avg


def gauge_phase(m_avg: complex) -> float:
    """Phase angle that rotates <m> so the effective coupling is real >= 0.

    Rotating ``m_avg`` by ``exp(1j*gauge_phase(m_avg))`` makes
    :func:`effective_coupling` real and non-negative.  This is the gauge
    in which the drift matrix takes its canonical form.
    """
    if m_avg == 0:
        return 0.0
    return -cmath.phase(1j * m_avg)
