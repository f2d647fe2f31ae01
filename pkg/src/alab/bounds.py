"""Lower-bound evaluators and numerical verification of the proof machinery.

The two theorem evaluators return signed bound values; a vacuous bound
(<= 0) is reported as-is, never clamped, so tests can distinguish "holds"
from "holds trivially". The backward-difference diagnostic integrates only
the x=0 run and builds the other N-1 runs by exact diagonal-phase
conjugation, which the underlying symmetry licenses; the reference
evolution is diagonal and is evaluated in closed form.
"""

from __future__ import annotations

import csv
import itertools
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import BudgetExceeded, NotCanonical, ZeroSuccess
from .evolve import schrodinger_evolve, success_probability
from .hamiltonians import (
    adiabatic_interpolation,
    driver_plus_problem,
    problem_hamiltonian,
    projector_beginning,
)
from .problems import CostFunction, Permutation, scramble
from .qstate import (
    Diagonal,
    QuantumState,
    TimeDependentHamiltonian,
    fourier_state,
    uniform_state,
)

S_DIAG_MAX_DIM = 32
PERM_ENSEMBLE_MAX_DIM = 5


@dataclass(frozen=True)
class BoundReport:
    """A theorem's inputs, its bound, and the comparison against a run."""

    theorem: str
    inputs: dict
    bound_value: float
    measured_T: float | None = None
    satisfied: bool | None = None


# ---------------------------------------------------------------------------
# Formula evaluators
# ---------------------------------------------------------------------------

def theorem1_lower_bound(b: float, E: float, N: int, k: int) -> float:
    """T >= (b/E) * sqrt(N/k) - 2*sqrt(b)/E for the projector beginning."""
    if not 0.0 <= b <= 1.0:
        raise ValueError(f"success probability b={b} outside [0, 1]")
    if not E > 0:
        raise ValueError(f"E must be positive, got {E}")
    if not 1 <= k <= N:
        raise ValueError(f"need 1 <= k <= N, got k={k}, N={N}")
    return (b / E) * math.sqrt(N / k) - 2.0 * math.sqrt(b) / E


def grover_lower_bound(N: int, E: float) -> float:
    """T >= sqrt(N) / (2E) for driver-plus-oracle search."""
    if N < 1:
        raise ValueError(f"N must be positive, got {N}")
    if not E > 0:
        raise ValueError(f"E must be positive, got {E}")
    return math.sqrt(N) / (2.0 * E)


def h_star(cost: CostFunction) -> float:
    """sqrt(sum_z h(z)^2 / (N - 1)) for a cost in the h(0)=0 convention."""
    vals = cost.values
    if vals.size < 2:
        raise ValueError("need at least two domain points")
    if vals[0] != 0.0:
        raise NotCanonical("h_star needs the h(0)=0 convention; canonicalize first")
    return float(math.sqrt(float(np.sum(vals**2)) / (vals.size - 1)))


def theorem2_lower_bound(eps: float, b: float, h_star_value: float, N: int) -> float:
    """T >= eps^2*b*sqrt(N-1)/(16 h*) - eps*sqrt(eps/2)/(4 h*)."""
    if not 0.0 < eps <= 1.0:
        raise ValueError(f"eps={eps} outside (0, 1]")
    if not 0.0 <= b <= 1.0:
        raise ValueError(f"success probability b={b} outside [0, 1]")
    if not h_star_value > 0:
        raise ValueError(f"h* must be positive, got {h_star_value}")
    if N < 2:
        raise ValueError(f"need N >= 2, got {N}")
    main = eps**2 * b * math.sqrt(N - 1) / (16.0 * h_star_value)
    correction = eps * math.sqrt(eps / 2.0) / (4.0 * h_star_value)
    return main - correction


def theorem1_report(b: float, E: float, N: int, k: int, measured_T: float) -> BoundReport:
    bound = theorem1_lower_bound(b, E, N, k)
    return BoundReport(
        theorem="theorem1",
        inputs={"b": b, "E": E, "N": N, "k": k},
        bound_value=bound,
        measured_T=measured_T,
        satisfied=measured_T >= bound,
    )


# ---------------------------------------------------------------------------
# Backward-difference diagnostic (Theorem 1 proof machinery)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SDiagnostic:
    """S(t) = sum_x || U_x^+(T,t)|g_x> - U_R^+(T,t)|g_x> ||^2 on a t grid,
    together with the quantities its proof bounds it by."""

    t: np.ndarray
    S: np.ndarray
    b: float
    E: float
    total_time: float
    N: int
    k: int
    s0_rhs: float
    sum_ix_overlap: float
    b_values: np.ndarray
    interval_deltas: np.ndarray
    interval_allowed: np.ndarray

    @property
    def sqrt_nk(self) -> float:
        return math.sqrt(self.N * self.k)

    def checks(self) -> dict:
        """Each proof-step inequality at its stated tolerance."""
        return {
            "s_vanishes_at_T": bool(self.S[-1] < 1e-8),
            "s0_lower_bound": bool(self.S[0] >= self.s0_rhs - 1e-9),
            "pathwise_derivative_bound": bool(
                np.all(np.abs(self.interval_deltas) <= self.interval_allowed + 1e-9)
            ),
            "b_uniform_across_x": bool(np.max(np.abs(self.b_values - self.b)) < 1e-9),
            "ix_overlap_bound": bool(self.sum_ix_overlap <= self.sqrt_nk + 1e-8),
        }

    def all_pass(self) -> bool:
        return all(self.checks().values())


def s_diagnostic(
    cost: CostFunction,
    E: float,
    total_time: float,
    steps: int | None = None,
    t_samples: int = 33,
) -> SDiagnostic:
    """Run the backward-difference construction behind the projector bound.

    Evolves the uniform state forward under the x=0 projector interpolation,
    conjugates to the other N-1 phase-rotated beginnings, projects onto the
    ground subspace, and measures the divergence between backward evolution
    under each H_x and under the diagonal reference H_R on a t grid.
    """
    n = cost.num_qubits
    N = cost.dim
    if N > S_DIAG_MAX_DIM:
        raise BudgetExceeded(f"diagnostic needs N <= {S_DIAG_MAX_DIM}, got {N}")
    if t_samples < 2:
        raise ValueError("need at least 2 time samples")
    T = float(total_time)
    begin = projector_beginning(n, E)
    H = adiabatic_interpolation(begin, problem_hamiltonian(cost), T)

    forward = schrodinger_evolve(H, uniform_state(n), steps=steps, cost=cost)
    f0 = forward.final_state.amplitudes
    b = forward.success_probability
    if b < 1e-12:
        raise ZeroSuccess(f"success probability {b:.3e} too small to condition on")

    ground = cost.ground_set
    g0 = np.zeros(N, dtype=np.complex128)
    g0[ground] = f0[ground] / math.sqrt(b)

    t_grid = np.linspace(0.0, T, t_samples)
    backward = schrodinger_evolve(
        H,
        QuantumState(n, g0),
        steps=steps,
        direction="backward",
        sample_times=t_grid,
    )
    # Traversal order is T -> 0; re-sort ascending in t.
    samples = sorted(backward.trajectory, key=lambda pair: pair[0])
    ts = np.array([t for t, _ in samples])
    u0 = [state.amplitudes for _, state in samples]

    z = np.arange(N)
    h_vals = cost.values

    def reference_backward(t: float) -> np.ndarray:
        # U_R(T,t) is diagonal: phases exp(-i [E (T-t)^2/(2T) + h(z)(T^2-t^2)/(2T)]).
        phi = E * (T - t) ** 2 / (2.0 * T) + h_vals * (T**2 - t**2) / (2.0 * T)
        return np.exp(1j * phi) * g0

    fourier_phases = [
        np.exp(2j * np.pi * (x * z % N) / N) for x in range(N)
    ]

    S_vals = np.zeros(ts.size)
    for i, t in enumerate(ts):
        uR_t = reference_backward(float(t))
        u0_t = u0[i]
        total = 0.0
        for vx in fourier_phases:
            diff = vx * u0_t - vx * uR_t
            total += float(np.real(np.vdot(diff, diff)))
        S_vals[i] = total

    b_values = np.array(
        [float(np.sum(np.abs(vx[ground] * f0[ground]) ** 2)) for vx in fourier_phases]
    )

    i0 = reference_backward(0.0)
    sqrt_n_norm = 1.0 / math.sqrt(N)
    sum_ix = 0.0
    for x, vx in enumerate(fourier_phases):
        i_x = vx * i0
        x_state = vx * sqrt_n_norm  # V_x |s>, elementwise phases over uniform
        sum_ix += abs(complex(np.vdot(x_state, i_x)))

    k = cost.k
    s0_rhs = 2.0 * N * (1.0 - math.sqrt(1.0 - b)) - 2.0 * math.sqrt(b) * math.sqrt(N * k)
    deltas = np.diff(S_vals)
    t1, t2 = ts[:-1], ts[1:]
    allowed = 2.0 * E * math.sqrt(N * k) * ((t2 - t1) - (t2**2 - t1**2) / (2.0 * T))

    return SDiagnostic(
        t=ts,
        S=S_vals,
        b=b,
        E=float(E),
        total_time=T,
        N=N,
        k=k,
        s0_rhs=s0_rhs,
        sum_ix_overlap=sum_ix,
        b_values=b_values,
        interval_deltas=deltas,
        interval_allowed=allowed,
    )


def write_s_diag_csv(diag: SDiagnostic, path) -> None:
    """CSV schema: t,S,rhs_integral_bound.

    The bound column is int_t^T 2E(1-u/T)sqrt(Nk) du = E sqrt(Nk) (T-t)^2/T,
    which S(t) must stay below since S(T)=0.
    """
    coeff = diag.E * diag.sqrt_nk / diag.total_time
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t", "S", "rhs_integral_bound"])
        for t, s in zip(diag.t, diag.S):
            writer.writerow(
                [repr(float(t)), repr(float(s)), repr(float(coeff * (diag.total_time - t) ** 2))]
            )


# ---------------------------------------------------------------------------
# Lemma 2
# ---------------------------------------------------------------------------

def lemma2_check(
    states: Sequence[np.ndarray],
    phi: np.ndarray,
    b: float,
    basis: Sequence[np.ndarray] | None = None,
) -> tuple:
    """Check sum_i ||psi_i - phi||^2 >= b*L - 2*sqrt(L).

    The precondition |<psi_i|i>|^2 >= b is validated against the supplied
    orthonormal vectors (computational basis by default). Returns
    (holds, margin) with margin = LHS - RHS.
    """
    psi = [np.asarray(v, dtype=np.complex128) for v in states]
    L = len(psi)
    if L < 1:
        raise ValueError("need at least one state")
    phi = np.asarray(phi, dtype=np.complex128)
    if basis is None:
        dim = psi[0].size
        overlaps = [abs(psi[i][i]) ** 2 for i in range(L)]
        if L > dim:
            raise ValueError("more states than computational basis vectors")
    else:
        overlaps = [abs(complex(np.vdot(basis[i], psi[i]))) ** 2 for i in range(L)]
    if min(overlaps) < b - 1e-12:
        raise ValueError(
            f"precondition violated: min |<psi_i|i>|^2 = {min(overlaps):.6f} < b = {b}"
        )
    lhs = float(sum(np.linalg.norm(p - phi) ** 2 for p in psi))
    rhs = b * L - 2.0 * math.sqrt(L)
    return lhs >= rhs - 1e-12, lhs - rhs


# ---------------------------------------------------------------------------
# Permutation-ensemble experiments (Lemma 1, Theorem 2)
# ---------------------------------------------------------------------------

def _evolve_all_permutations(
    cost: CostFunction,
    driver: TimeDependentHamiltonian,
    c: Callable[[float], float],
    steps: int | None,
    psi0: QuantumState | None,
) -> dict:
    """Final states psi_pi(T) for every permutation of the domain."""
    N = cost.dim
    if N > PERM_ENSEMBLE_MAX_DIM:
        raise BudgetExceeded(
            f"exhaustive permutation runs need N <= {PERM_ENSEMBLE_MAX_DIM}, got {N}"
        )
    if psi0 is None:
        psi0 = uniform_state(cost.num_qubits)
    finals = {}
    for perm_tuple in itertools.permutations(range(N)):
        perm = Permutation(np.array(perm_tuple))
        scrambled = scramble(cost, perm)
        H = driver_plus_problem(driver, c, problem_hamiltonian(scrambled))
        result = schrodinger_evolve(H, psi0, steps=steps)
        finals[perm_tuple] = result.final_state.amplitudes
    return finals


@dataclass(frozen=True)
class Lemma1Result:
    pair_sum: float
    bound: float
    total_time: float
    h_star: float
    num_permutations: int
    convention: str = "ordered pairs (pi, pi o (a<->0)); each unordered pair counted twice"

    @property
    def satisfied(self) -> bool:
        return self.pair_sum <= self.bound


def lemma1_experiment(
    cost: CostFunction,
    driver: TimeDependentHamiltonian,
    c: Callable[[float], float],
    total_time: float,
    steps: int | None = None,
    psi0: QuantumState | None = None,
) -> Lemma1Result:
    """Exhaustive check of the transposition-pair divergence bound.

    Sums ||psi_pi(T) - psi_pi'(T)||^2 over ordered pairs pi' = pi o (a<->0)
    with a != 0 (N!(N-1) terms, each unordered pair twice, matching the
    derivation's counting) and compares against 4 h* T N! sqrt(N-1).
    """
    hs = h_star(cost)
    N = cost.dim
    if abs(driver.total_time - total_time) > 1e-12:
        raise ValueError("driver total_time must equal the experiment run time")
    finals = _evolve_all_permutations(cost, driver, c, steps, psi0)
    pair_sum = 0.0
    for perm_tuple, psi_pi in finals.items():
        perm = np.array(perm_tuple)
        for a in range(1, N):
            swapped = perm.copy()
            swapped[0], swapped[a] = swapped[a], swapped[0]
            psi_prime = finals[tuple(swapped)]
            diff = psi_pi - psi_prime
            pair_sum += float(np.real(np.vdot(diff, diff)))
    nfact = math.factorial(N)
    bound = 4.0 * hs * total_time * nfact * math.sqrt(N - 1)
    return Lemma1Result(pair_sum, bound, total_time, hs, nfact)


@dataclass(frozen=True)
class Theorem2Experiment:
    report: BoundReport
    eps: float
    successes: int
    num_permutations: int
    per_permutation_success: dict


def theorem2_experiment(
    cost: CostFunction,
    driver: TimeDependentHamiltonian,
    c: Callable[[float], float],
    total_time: float,
    b: float,
    steps: int | None = None,
    psi0: QuantumState | None = None,
) -> Theorem2Experiment:
    """Exhaustively measure the success fraction eps of one fixed algorithm
    over all N! scrambles and compare T against the scrambling bound.

    Success on pi means |<psi_pi(T)|pi(0)>|^2 >= b, i.e. mass at the
    scrambled minimizer. eps = 0 makes the theorem statement empty; the
    bound is then reported as 0 (vacuously satisfied).
    """
    hs = h_star(cost)
    N = cost.dim
    if abs(driver.total_time - total_time) > 1e-12:
        raise ValueError("driver total_time must equal the experiment run time")
    finals = _evolve_all_permutations(cost, driver, c, steps, psi0)
    success = {}
    for perm_tuple, psi_pi in finals.items():
        target = perm_tuple[0]  # pi(0): location of the scrambled minimum
        success[perm_tuple] = bool(abs(psi_pi[target]) ** 2 >= b)
    nfact = math.factorial(N)
    wins = sum(success.values())
    eps = wins / nfact
    bound = theorem2_lower_bound(eps, b, hs, N) if eps > 0 else 0.0
    report = BoundReport(
        theorem="theorem2",
        inputs={"eps": eps, "b": b, "h_star": hs, "N": N},
        bound_value=bound,
        measured_T=total_time,
        satisfied=total_time >= bound,
    )
    return Theorem2Experiment(report, eps, wins, nfact, success)
