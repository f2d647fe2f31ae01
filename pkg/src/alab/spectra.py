"""Eigenvalue analysis along the interpolation.

Small operators are diagonalized densely; larger ones go through a
matrix-free Lanczos solve for the two lowest levels. The curve sampler
always evaluates s = 0.5 exactly so the kink diagnostic of the scrambled
problem is well-defined.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np
from scipy.sparse.linalg import ArpackNoConvergence, eigsh
from scipy.sparse.linalg import LinearOperator as _ScipyOp

from .config import DEFAULT_LIMITS
from .errors import DimensionTooLarge, NoConvergence
from .hamiltonians import problem_hamiltonian, transverse_field_beginning
from .problems import hamming_cost, random_permutation, scramble
from .qstate import LinearOperator, WeightedSum

# Dimension below which the "iterative" path just diagonalizes densely;
# ARPACK needs k < N and behaves poorly on tiny problems.
_DENSE_FALLBACK_DIM = 64
_LANCZOS_SEED = 20051219


@dataclass(frozen=True)
class SpectralCurve:
    """Sampled (s, E0, E1) triples along an interpolation."""

    s: np.ndarray
    e0: np.ndarray
    e1: np.ndarray

    def __post_init__(self):
        s = np.asarray(self.s, dtype=float)
        e0 = np.asarray(self.e0, dtype=float)
        e1 = np.asarray(self.e1, dtype=float)
        if not (s.shape == e0.shape == e1.shape):
            raise ValueError("s, e0, e1 must have matching shapes")
        for name, arr in (("s", s), ("e0", e0), ("e1", e1)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def gap(self) -> np.ndarray:
        return self.e1 - self.e0

    @property
    def samples(self) -> tuple:
        return tuple(zip(self.s, self.e0, self.e1, self.gap))

    def min_gap(self) -> float:
        return float(self.gap.min())


def dense_spectrum(op: LinearOperator, max_qubits: int | None = None) -> np.ndarray:
    """All eigenvalues, sorted ascending, via dense diagonalization."""
    if max_qubits is None:
        max_qubits = DEFAULT_LIMITS.max_dense_qubits
    if op.dim > 1 << max_qubits:
        raise DimensionTooLarge(
            f"dim {op.dim} exceeds dense budget 2**{max_qubits}"
        )
    return np.linalg.eigvalsh(op.to_dense())


def low_lying(
    op: LinearOperator,
    count: int = 2,
    tol: float = 1e-11,
    maxiter: int | None = None,
) -> np.ndarray:
    """The `count` smallest eigenvalues, sorted ascending.

    Uses matrix-free Lanczos with a fixed deterministic start vector; small
    dimensions take the dense route directly. Pathological Lanczos failures
    (e.g. a fully degenerate spectrum) fall back to dense diagonalization
    when the dense budget allows it.
    """
    N = op.dim
    if count < 1 or count > N:
        raise ValueError(f"count {count} out of range for dim {N}")
    if N < _DENSE_FALLBACK_DIM or count >= N - 1:
        return np.linalg.eigvalsh(op.to_dense())[:count]
    # Lanczos loses any eigendirection the operator annihilates (our
    # beginning Hamiltonians and canonical costs have exact 0 eigenvalues),
    # so solve the positively shifted problem A + sigma*I and shift back.
    sigma = 1.0 + 0.25 * op.norm_upper_bound()
    sci = _ScipyOp(
        (N, N), matvec=lambda v: op.apply(v) + sigma * v, dtype=np.complex128
    )
    v0 = np.random.default_rng(_LANCZOS_SEED).standard_normal(N)
    try:
        vals = eigsh(
            sci,
            k=count,
            which="SA",
            v0=v0,
            tol=tol,
            maxiter=maxiter,
            ncv=min(N, max(40, 4 * count + 1)),
            return_eigenvectors=False,
        )
    except ArpackNoConvergence as exc:
        raise NoConvergence(f"Lanczos did not converge: {exc}") from exc
    except Exception:
        if N <= 1 << DEFAULT_LIMITS.max_dense_qubits:
            return np.linalg.eigvalsh(op.to_dense())[:count]
        raise
    return np.sort(vals) - sigma


def interpolation_operator(
    begin: LinearOperator, problem: LinearOperator, s: float
) -> WeightedSum:
    """(1-s) * begin + s * problem."""
    return WeightedSum(((1.0 - s, begin), (s, problem)))


def _sample_grid(num_samples: int) -> np.ndarray:
    if num_samples < 2:
        raise ValueError(f"need at least 2 samples, got {num_samples}")
    grid = np.linspace(0.0, 1.0, num_samples)
    if not np.any(grid == 0.5):
        grid = np.sort(np.append(grid, 0.5))
    return grid


def spectral_curve(
    begin: LinearOperator, problem: LinearOperator, num_samples: int = 101
) -> SpectralCurve:
    """E0 and E1 of (1-s)*begin + s*problem on a uniform s grid.

    The grid always contains s = 0.5; for even num_samples it is inserted,
    making the grid one point longer.
    """
    grid = _sample_grid(num_samples)
    e0 = np.empty_like(grid)
    e1 = np.empty_like(grid)
    for i, s in enumerate(grid):
        e0[i], e1[i] = low_lying(interpolation_operator(begin, problem, float(s)), 2)
    return SpectralCurve(grid, e0, e1)


def scrambled_curve_experiment(
    n: int, seed: int, num_samples: int = 101
) -> tuple:
    """Spectral curves for the decoupled problem and a scrambled copy.

    Both use the transverse-field beginning Hamiltonian; the scrambled curve
    applies a seed-determined random permutation to the Hamming cost while
    the driver stays fixed. Returns (decoupled, scrambled) curves with raw
    (unscaled) energies.
    """
    begin = transverse_field_beginning(n)
    cost = hamming_cost(n)
    perm = random_permutation(1 << n, seed)
    decoupled = spectral_curve(begin, problem_hamiltonian(cost), num_samples)
    scrambled = spectral_curve(
        begin, problem_hamiltonian(scramble(cost, perm)), num_samples
    )
    return decoupled, scrambled


def write_curve_csv(curve: SpectralCurve, num_qubits: int, path) -> None:
    """CSV schema: s,E0,E1,gap,E0_over_n with one row per sample."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["s", "E0", "E1", "gap", "E0_over_n"])
        for s, e0, e1, gap in curve.samples:
            writer.writerow(
                [repr(float(v)) for v in (s, e0, e1, gap, e0 / num_qubits)]
            )
