"""Fixed-step Schrödinger integration, success measurement, run-time search.

The integrator is the classical explicit fourth-order Runge-Kutta method
with time-dependent coefficients evaluated at the substage times. No
renormalization is ever applied mid-run: the norm drift |norm(psi)-1| is the
accuracy diagnostic, and the automatic resolution mode doubles the step
count until the drift falls below its target.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (
    AlreadyAboveWindow,
    NonNormalizedInput,
    NotReached,
    StepCountTooSmall,
)
from .hamiltonians import adiabatic_interpolation, problem_hamiltonian
from .problems import CostFunction
from .qstate import LinearOperator, QuantumState, TimeDependentHamiltonian, uniform_state

DEFAULT_STEPS_PER_UNIT = 400.0
AUTO_DRIFT_TARGET = 1e-7
HARD_DRIFT_LIMIT = 1e-5
MAX_AUTO_DOUBLINGS = 10
INPUT_NORM_TOL = 1e-6  # admits states carrying drift from a previous leg


@dataclass(frozen=True)
class EvolutionResult:
    """Outcome of one integration.

    success_probability is filled only when a cost function was supplied;
    trajectory holds (t, state) snapshots at the requested sample times.
    """

    final_state: QuantumState
    success_probability: float | None
    trajectory: tuple | None
    step_count: int
    norm_drift: float


@dataclass(frozen=True)
class RunTimeSearchResult:
    """First run time found whose success probability lands in the window."""

    required_T: float
    achieved_b: float
    probe_count: int
    window: tuple


def _auto_steps(total_time: float, steps_per_unit: float) -> int:
    return max(1, math.ceil(total_time * steps_per_unit))


def _rk4(
    hamiltonian: TimeDependentHamiltonian,
    y0: np.ndarray,
    t_begin: float,
    t_end: float,
    steps: int,
    sample_slots: dict,
):
    """Integrate dy/dt = -i H(t) y from t_begin to t_end (either order)."""
    y = y0.astype(np.complex128, copy=True)
    span = t_end - t_begin
    dt = span / steps
    half = dt / 2.0
    if 0 in sample_slots:
        sample_slots[0] = (t_begin, y.copy())
    apply_at = hamiltonian.apply_at
    for k in range(steps):
        t = t_begin + k * dt
        k1 = apply_at(t, y)
        k1 *= -1j
        k2 = apply_at(t + half, y + half * k1)
        k2 *= -1j
        k3 = apply_at(t + half, y + half * k2)
        k3 *= -1j
        k4 = apply_at(t + dt, y + dt * k3)
        k4 *= -1j
        y = y + (dt / 6.0) * (k1 + 2.0 * (k2 + k3) + k4)
        if (k + 1) in sample_slots:
            sample_slots[k + 1] = (t_begin + (k + 1) * dt, y.copy())
    return y


def schrodinger_evolve(
    hamiltonian: TimeDependentHamiltonian,
    psi0: QuantumState,
    steps: int | None = None,
    direction: str = "forward",
    sample_times: Sequence[float] | None = None,
    cost: CostFunction | None = None,
    steps_per_unit: float = DEFAULT_STEPS_PER_UNIT,
    drift_target: float = AUTO_DRIFT_TARGET,
) -> EvolutionResult:
    """Integrate the Schrödinger equation over [0, T].

    direction="forward" starts from psi0 at t=0 and returns the state at
    t=T. direction="backward" treats psi0 as the state at t=T and integrates
    the same equation in reversed time, returning the state at t=0 (i.e. it
    applies the adjoint propagator U(T,0)^dagger). Sample times are snapped
    to the nearest step boundary; snapshots are recorded in traversal order.

    steps=None selects the automatic mode: start at `steps_per_unit` steps
    per unit time and double until the norm drift is below `drift_target`.
    An explicit step count is used as-is but rejected after the fact if the
    drift exceeds the hard 1e-5 limit.
    """
    if direction not in ("forward", "backward"):
        raise ValueError(f"direction must be forward or backward, got {direction!r}")
    if hamiltonian.dim != psi0.dim:
        raise ValueError(
            f"Hamiltonian dim {hamiltonian.dim} does not match state dim {psi0.dim}"
        )
    if abs(psi0.norm() - 1.0) > INPUT_NORM_TOL:
        raise NonNormalizedInput(f"input norm {psi0.norm():.9f} differs from 1")
    T = hamiltonian.total_time

    if T == 0.0:
        trajectory = None
        if sample_times is not None:
            trajectory = ((0.0, psi0),)
        b = success_probability(psi0, cost) if cost is not None else None
        return EvolutionResult(psi0, b, trajectory, steps if steps else 1, 0.0)

    t_begin, t_end = (0.0, T) if direction == "forward" else (T, 0.0)

    def run(step_count: int):
        slots: dict = {}
        if sample_times is not None:
            dt = (t_end - t_begin) / step_count
            for ts in sample_times:
                idx = int(round((ts - t_begin) / dt))
                slots[min(max(idx, 0), step_count)] = None
        y = _rk4(hamiltonian, psi0.amplitudes, t_begin, t_end, step_count, slots)
        drift = abs(float(np.linalg.norm(y)) - 1.0)
        return y, drift, slots

    if steps is None:
        step_count = _auto_steps(T, steps_per_unit)
        for _ in range(MAX_AUTO_DOUBLINGS + 1):
            y, drift, slots = run(step_count)
            if drift < drift_target:
                break
            step_count *= 2
        else:
            raise StepCountTooSmall(
                f"norm drift {drift:.3e} still above {drift_target:g} "
                f"after {MAX_AUTO_DOUBLINGS} doublings"
            )
    else:
        if steps < 1:
            raise ValueError(f"steps must be >= 1, got {steps}")
        step_count = int(steps)
        y, drift, slots = run(step_count)
        if drift > HARD_DRIFT_LIMIT:
            raise StepCountTooSmall(
                f"norm drift {drift:.3e} exceeds {HARD_DRIFT_LIMIT:g}; increase steps"
            )

    final = QuantumState(psi0.num_qubits, y)
    trajectory = None
    if sample_times is not None:
        entries = [slots[i] for i in sorted(slots)]
        trajectory = tuple(
            (t, QuantumState(psi0.num_qubits, vec)) for (t, vec) in entries
        )
    b = success_probability(final, cost) if cost is not None else None
    return EvolutionResult(final, b, trajectory, step_count, drift)


def success_probability(state: QuantumState, cost: CostFunction) -> float:
    """Probability mass of the state on the cost's ground set."""
    if state.dim != cost.dim:
        raise ValueError(f"state dim {state.dim} does not match cost dim {cost.dim}")
    amps = state.amplitudes[cost.ground_set]
    return float(np.sum(amps.real**2 + amps.imag**2))


def roundtrip_check(
    hamiltonian: TimeDependentHamiltonian, psi0: QuantumState, steps: int | None = None
) -> float:
    """Forward then backward evolution; returns ||psi' - psi0||."""
    fwd = schrodinger_evolve(hamiltonian, psi0, steps=steps)
    back = schrodinger_evolve(
        hamiltonian, fwd.final_state, steps=fwd.step_count, direction="backward"
    )
    return float(np.linalg.norm(back.final_state.amplitudes - psi0.amplitudes))


def required_run_time(
    begin: LinearOperator,
    cost: CostFunction,
    window: tuple = (0.2, 0.21),
    t_min: float = 0.1,
    t_max: float = 1e4,
    steps: int | None = None,
    steps_per_unit: float = DEFAULT_STEPS_PER_UNIT,
    psi0: QuantumState | None = None,
    probe_cap: int = 200,
) -> RunTimeSearchResult:
    """Smallest run time whose final success probability lands in `window`.

    Doubles T from t_min until b(T) >= window[0], then bisects down to the
    first T whose measured b lies inside the window. Success probability
    need not be monotone in T, so this returns the first landing found along
    that path, not a global minimum.
    """
    b_lo, b_hi = float(window[0]), float(window[1])
    if not (0.0 < b_lo < b_hi < 1.0):
        raise ValueError(f"window must satisfy 0 < lo < hi < 1, got {window}")
    if not (0.0 < t_min < t_max):
        raise ValueError(f"need 0 < t_min < t_max, got ({t_min}, {t_max})")
    if psi0 is None:
        psi0 = uniform_state(cost.num_qubits)
    problem = problem_hamiltonian(cost)
    probes = 0

    def b_at(T: float) -> float:
        nonlocal probes
        probes += 1
        H = adiabatic_interpolation(begin, problem, T)
        result = schrodinger_evolve(
            H, psi0, steps=steps, cost=cost, steps_per_unit=steps_per_unit
        )
        return result.success_probability

    b0 = b_at(t_min)
    if b0 >= b_lo:
        if b0 <= b_hi:
            return RunTimeSearchResult(t_min, b0, probes, (b_lo, b_hi))
        raise AlreadyAboveWindow(
            f"b({t_min}) = {b0:.6f} already exceeds window top {b_hi}"
        )

    # Doubling scan for a bracket [T_below, T_above] with b crossing b_lo.
    T_below, T_above, b_above = t_min, None, None
    T = t_min
    while T < t_max:
        T = min(2.0 * T, t_max)
        b = b_at(T)
        if b >= b_lo:
            T_above, b_above = T, b
            break
        T_below = T
        if probes >= probe_cap:
            raise NotReached(f"no entry into window within {probes} probes")
    if T_above is None:
        raise NotReached(f"b stayed below {b_lo} for all T up to {t_max}")

    while probes < probe_cap:
        if b_above <= b_hi:
            return RunTimeSearchResult(T_above, b_above, probes, (b_lo, b_hi))
        mid = 0.5 * (T_below + T_above)
        b_mid = b_at(mid)
        if b_mid >= b_lo:
            T_above, b_above = mid, b_mid
        else:
            T_below = mid
    raise NotReached(f"window not landed within {probe_cap} probes")
