"""Single-qubit adiabatic transitions and decoupled-problem composition.

Everything here concerns the canonical one-qubit schedule
H(s) = (1-s) * (1 - sigma_x)/2 + s * diag(0, 1) with s = t/T: closed-form
gap, accumulated gap integral, the transition probability q(T) out of the
instantaneous ground state, and the (1-q)^n composition for the decoupled
n-bit problem.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.integrate import quad

from .errors import GridExhausted
from .evolve import DEFAULT_STEPS_PER_UNIT, schrodinger_evolve
from .hamiltonians import adiabatic_interpolation, problem_hamiltonian, transverse_field_beginning
from .problems import hamming_cost
from .qstate import QuantumState, TimeDependentHamiltonian, uniform_state

MIN_GAP = 1.0 / math.sqrt(2.0)  # attained at s = 1/2


@dataclass(frozen=True)
class TwoLevelResult:
    """Adiabatic-frame trajectory of one run: coefficients on the
    instantaneous ground and excited states with dynamical phases removed."""

    total_time: float
    q: float
    s_grid: np.ndarray
    c0: np.ndarray
    c1: np.ndarray
    theta_grid: np.ndarray


def gap(s):
    """Instantaneous spectral gap g(s) = sqrt((1-s)^2 + s^2)."""
    s = np.asarray(s, dtype=float)
    out = np.sqrt((1.0 - s) ** 2 + s**2)
    return float(out) if out.ndim == 0 else out


def energies(s: float) -> tuple:
    """(E0, E1) of the single-qubit schedule at s."""
    g = gap(s)
    return (1.0 - g) / 2.0, (1.0 + g) / 2.0


def theta(s: float) -> float:
    """Accumulated gap integral theta(s) = int_0^s g."""
    if not 0.0 <= s <= 1.0:
        raise ValueError(f"s must lie in [0, 1], got {s}")
    val, err = quad(gap, 0.0, s, epsabs=1e-12, epsrel=1e-12)
    return float(val)


def _hamiltonian(total_time: float) -> TimeDependentHamiltonian:
    return adiabatic_interpolation(
        transverse_field_beginning(1),
        problem_hamiltonian(hamming_cost(1)),
        total_time,
    )


def eigenvector_pair(s: float) -> tuple:
    """Real orthonormal (phi0, phi1) at s, first nonvanishing entry positive.

    For this real symmetric schedule the parallel-transport phase condition
    <phi_i | d phi_i / ds> = 0 holds automatically for any smooth real
    normalized choice; the sign convention pins the remaining freedom.
    """
    a = (1.0 - s) / 2.0  # H = [[a, -a], [-a, a + s]]
    e0, e1 = energies(s)
    # For eigenvalue lam the two rows give v ~ (-a, lam - a) and
    # v ~ (lam - (a + s), -a); pick the better-conditioned branch.
    vecs = []
    for lam in (e0, e1):
        v1 = np.array([-a, lam - a])
        v2 = np.array([lam - (a + s), -a])
        v = v1 if np.linalg.norm(v1) >= np.linalg.norm(v2) else v2
        v = v / np.linalg.norm(v)
        nz = np.flatnonzero(np.abs(v) > 1e-12)[0]
        if v[nz] < 0:
            v = -v
        vecs.append(v)
    return vecs[0], vecs[1]


def transition_probability(T: float, steps: int | None = None) -> float:
    """q(T): probability of ending in the instantaneous excited state at s=1
    after starting from the ground state at s=0."""
    if T < 0:
        raise ValueError(f"run time must be nonnegative, got {T}")
    H = _hamiltonian(T) if T > 0 else _hamiltonian(1.0)
    if T == 0.0:
        final = uniform_state(1)
    else:
        final = schrodinger_evolve(H, uniform_state(1), steps=steps).final_state
    _, phi1 = eigenvector_pair(1.0)
    amp = complex(np.vdot(phi1.astype(np.complex128), final.amplitudes))
    return abs(amp) ** 2


def transition_probabilities(
    T_values: Sequence[float], steps_per_unit: float = DEFAULT_STEPS_PER_UNIT
) -> np.ndarray:
    """Vectorized q(T) over a batch of run times.

    All runs share one s-grid with max(T) * steps_per_unit steps, so every
    run is integrated at least as finely as the scalar path; agreement with
    transition_probability is a test invariant.
    """
    Ts = np.asarray(T_values, dtype=float)
    if Ts.ndim != 1 or Ts.size == 0:
        raise ValueError("T_values must be a nonempty one-dimensional sequence")
    if np.any(Ts < 0):
        raise ValueError("run times must be nonnegative")
    tmax = float(Ts.max())
    if tmax == 0.0:
        return np.full(Ts.shape, 0.5)
    M = max(1, math.ceil(steps_per_unit * tmax))
    ds = 1.0 / M
    psi = np.full((Ts.size, 2), 1.0 / math.sqrt(2.0), dtype=np.complex128)
    coef = (-1j) * Ts[:, None]

    def rhs(s, y):
        a = (1.0 - s) / 2.0
        y0, y1 = y[:, 0], y[:, 1]
        return coef * np.stack([a * (y0 - y1), -a * y0 + (a + s) * y1], axis=1)

    half = ds / 2.0
    for k in range(M):
        s = k * ds
        k1 = rhs(s, psi)
        k2 = rhs(s + half, psi + half * k1)
        k3 = rhs(s + half, psi + half * k2)
        k4 = rhs(s + ds, psi + ds * k3)
        psi = psi + (ds / 6.0) * (k1 + 2.0 * (k2 + k3) + k4)
    return np.abs(psi[:, 1]) ** 2


def adiabatic_frame(trajectory: Sequence, total_time: float) -> TwoLevelResult:
    """Project a sampled single-qubit trajectory onto the instantaneous
    eigenbasis with dynamical phases e^{-iT int E_i} removed.

    `trajectory` is the (t, state) sequence produced by schrodinger_evolve
    on the canonical schedule. |c0|^2 + |c1|^2 = 1 at every sample up to
    integrator drift, and |c1| at s=1 reproduces the transition amplitude.
    """
    if not trajectory:
        raise ValueError("empty trajectory")
    T = float(total_time)
    ts = np.array([t for t, _ in trajectory], dtype=float)
    s_grid = ts / T if T > 0 else ts
    order = np.argsort(s_grid)
    s_grid = s_grid[order]
    states = [trajectory[i][1] for i in order]

    c0 = np.empty(s_grid.size, dtype=np.complex128)
    c1 = np.empty(s_grid.size, dtype=np.complex128)
    theta_vals = np.empty(s_grid.size, dtype=float)
    for i, (s, state) in enumerate(zip(s_grid, states)):
        phi0, phi1 = eigenvector_pair(float(s))
        int_e0, _ = quad(lambda u: energies(u)[0], 0.0, s, epsabs=1e-12, epsrel=1e-12)
        int_e1, _ = quad(lambda u: energies(u)[1], 0.0, s, epsabs=1e-12, epsrel=1e-12)
        amps = state.amplitudes
        c0[i] = np.exp(1j * T * int_e0) * np.vdot(phi0.astype(np.complex128), amps)
        c1[i] = np.exp(1j * T * int_e1) * np.vdot(phi1.astype(np.complex128), amps)
        theta_vals[i] = int_e1 - int_e0  # theta(s) = int (E1 - E0)
    q = float(abs(c1[-1]) ** 2)
    return TwoLevelResult(T, q, s_grid, c0, c1, theta_vals)


def decoupled_success(n: int, T: float, steps: int | None = None) -> float:
    """p = (1 - q(T))^n for the decoupled n-bit problem."""
    if n < 1:
        raise ValueError(f"need at least one bit, got n={n}")
    return (1.0 - transition_probability(T, steps=steps)) ** n


# ---------------------------------------------------------------------------
# Scaling experiments
# ---------------------------------------------------------------------------

def transition_envelope(
    T_values: np.ndarray, q_values: np.ndarray, window: float | None = None
) -> np.ndarray:
    """Upper envelope of q over a sliding window of one oscillation period.

    q(T) passes through zeros roughly every 2*pi/theta(1); fitting a power
    law through raw values would chase those zeros, so the envelope takes
    the max over a window wide enough to contain one full oscillation.
    """
    Ts = np.asarray(T_values, dtype=float)
    qs = np.asarray(q_values, dtype=float)
    if window is None:
        window = 2.0 * math.pi / theta(1.0)
    half = window / 2.0
    return np.array([qs[(Ts >= t - half) & (Ts <= t + half)].max() for t in Ts])


@dataclass(frozen=True)
class PowerLawFit:
    slope: float
    intercept: float
    T_values: np.ndarray
    q_values: np.ndarray
    envelope: np.ndarray


def transition_power_law(
    t_min: float = 20.0,
    t_max: float = 160.0,
    num_points: int = 141,
    steps_per_unit: float = DEFAULT_STEPS_PER_UNIT,
) -> PowerLawFit:
    """Fit log(envelope of q) against log T over [t_min, t_max].

    Only points whose envelope window lies fully inside the range enter the
    fit, so edge windows do not bias the slope.
    """
    Ts = np.linspace(t_min, t_max, num_points)
    qs = transition_probabilities(Ts, steps_per_unit=steps_per_unit)
    window = 2.0 * math.pi / theta(1.0)
    env = transition_envelope(Ts, qs, window)
    inner = (Ts >= t_min + window / 2.0) & (Ts <= t_max - window / 2.0)
    slope, intercept = np.polyfit(np.log(Ts[inner]), np.log(env[inner]), 1)
    return PowerLawFit(float(slope), float(intercept), Ts, qs, env)


@dataclass(frozen=True)
class SqrtNScalingResult:
    exponent: float
    n_values: tuple
    t_stars: tuple
    target: float


def sqrt_n_scaling_experiment(
    n_list: Sequence[int] = (4, 8, 16, 32, 64),
    target: float = 0.2,
    T_grid: np.ndarray | None = None,
    steps_per_unit: float = DEFAULT_STEPS_PER_UNIT,
) -> SqrtNScalingResult:
    """Run-time threshold T*(n) for the decoupled problem and its exponent.

    For each n, T*(n) is the smallest grid T with (1-q(T))^n >= target; the
    exponent is the least-squares slope of log T* against log n.
    """
    if not 0.0 < target < 1.0:
        raise ValueError(f"target must lie in (0, 1), got {target}")
    if T_grid is None:
        T_grid = np.arange(0.25, 40.0001, 0.05)
    Ts = np.asarray(T_grid, dtype=float)
    qs = transition_probabilities(Ts, steps_per_unit=steps_per_unit)
    t_stars = []
    for n in n_list:
        p = (1.0 - qs) ** int(n)
        hits = np.flatnonzero(p >= target)
        if hits.size == 0:
            raise GridExhausted(
                f"no grid T reaches success {target} at n={n}; extend the grid"
            )
        t_stars.append(float(Ts[hits[0]]))
    if len(n_list) >= 2:
        slope, _ = np.polyfit(np.log(np.asarray(n_list, float)), np.log(t_stars), 1)
    else:
        slope = float("nan")
    return SqrtNScalingResult(float(slope), tuple(int(n) for n in n_list), tuple(t_stars), target)
