"""Builders for every Hamiltonian the interpolation experiments use.

All problem Hamiltonians are diagonal in the computational basis; beginning
Hamiltonians have the uniform superposition as their ground state with
energy zero.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import CoefficientBoundViolated
from .problems import CostFunction, ExactCoverInstance
from .qstate import (
    Diagonal,
    LinearOperator,
    QuantumState,
    RankOneComplement,
    TimeDependentHamiltonian,
    TransverseFieldSum,
    basis_state,
    uniform_state,
)

# Grid used to spot-check |c(t)| <= 1 for composite algorithm Hamiltonians.
COEFF_CHECK_POINTS = 1001


@dataclass(frozen=True)
class InterpolationSpec:
    """A begin/problem pair with a total run time, H(t)=(1-t/T)B + (t/T)P."""

    begin: LinearOperator
    problem: LinearOperator
    total_time: float

    def __post_init__(self):
        if self.begin.dim != self.problem.dim:
            raise ValueError("begin and problem Hamiltonians differ in dimension")
        if not self.total_time > 0:
            raise ValueError(f"total_time must be positive, got {self.total_time}")

    def build(self) -> TimeDependentHamiltonian:
        return adiabatic_interpolation(self.begin, self.problem, self.total_time)


def problem_hamiltonian(cost: CostFunction) -> Diagonal:
    """Diagonal operator with entries h(z)."""
    return Diagonal(cost.values)


def projector_beginning(n: int, E: float | None = None) -> RankOneComplement:
    """E * (I - |s><s|), the structureless one-dimensional projector start.

    E defaults to n/2, the convention used for the run-time medians.
    """
    if E is None:
        E = n / 2
    if not E > 0:
        raise ValueError(f"E must be positive, got {E}")
    return RankOneComplement(float(E), uniform_state(n).amplitudes)


def transverse_field_beginning(n: int) -> TransverseFieldSum:
    """sum_j (1 - sigma_x^(j))/2, reflecting the bit structure."""
    if n < 1:
        raise ValueError(f"need at least one qubit, got n={n}")
    return TransverseFieldSum((1,) * n)


def clause_beginning(inst: ExactCoverInstance) -> TransverseFieldSum:
    """Transverse-field sum weighted by how many clauses touch each bit."""
    counts = [0] * inst.num_bits
    for clause in inst.clauses:
        for i in clause:
            counts[i] += 1
    return TransverseFieldSum(tuple(counts))


def grover_hamiltonian(n: int, w: int, E: float) -> RankOneComplement:
    """Oracle Hamiltonian E * (I - |w><w|) marking basis state w."""
    return RankOneComplement(float(E), basis_state(n, w).amplitudes)


def adiabatic_interpolation(
    begin: LinearOperator, problem: LinearOperator, total_time: float
) -> TimeDependentHamiltonian:
    """H(t) = (1 - t/T) * begin + (t/T) * problem."""
    if not total_time > 0:
        raise ValueError(f"total_time must be positive, got {total_time}")
    T = float(total_time)
    return TimeDependentHamiltonian(
        terms=((begin, lambda t: 1.0 - t / T), (problem, lambda t: t / T)),
        total_time=T,
    )


def constant_hamiltonian(op: LinearOperator, total_time: float) -> TimeDependentHamiltonian:
    """Time-independent H(t) = op on [0, total_time]."""
    return TimeDependentHamiltonian(terms=((op, lambda t: 1.0),), total_time=float(total_time))


def driver_plus_problem(
    driver: TimeDependentHamiltonian,
    c: Callable[[float], float],
    problem: LinearOperator,
) -> TimeDependentHamiltonian:
    """H(t) = H_D(t) + c(t) * problem with the contract |c(t)| <= 1.

    The bound is checked on a uniform 1001-point grid over [0, T], which
    covers every evaluation grid the fixed-step integrator uses in practice.
    """
    T = driver.total_time
    probe = np.linspace(0.0, T, COEFF_CHECK_POINTS) if T > 0 else np.array([0.0])
    cvals = np.array([c(t) for t in probe], dtype=float)
    worst = float(np.max(np.abs(cvals)))
    if worst > 1.0 + 1e-12:
        raise CoefficientBoundViolated(
            f"|c(t)| reaches {worst:.6g} > 1 on the check grid"
        )
    return TimeDependentHamiltonian(
        terms=driver.terms + ((problem, c),), total_time=T
    )


def reference_hamiltonian(
    E: float, problem: LinearOperator, total_time: float
) -> TimeDependentHamiltonian:
    """H_R(t) = (1 - t/T) * E * I + (t/T) * problem.

    The scalar term is carried as a constant diagonal rather than dropped;
    it only contributes a global phase, but backward-difference diagnostics
    compare phases through norms of differences, so it stays.
    """
    if not total_time > 0:
        raise ValueError(f"total_time must be positive, got {total_time}")
    T = float(total_time)
    scalar = Diagonal(np.full(problem.dim, float(E)))
    return TimeDependentHamiltonian(
        terms=((scalar, lambda t: 1.0 - t / T), (problem, lambda t: t / T)),
        total_time=T,
    )
