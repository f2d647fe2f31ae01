"""Complex state vectors and Hermitian operators with matrix-free application.

States live in the computational basis of n qubits: index z runs over
0..2**n-1 and bit j of z is (z >> j) & 1 (bit 0 is least significant).
Operators never materialize unless explicitly asked to; application costs
O(N) for diagonal and rank-one-complement forms and O(n N) for transverse
field sums.
"""

from __future__ import annotations

import abc
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import DimensionMismatch, NonHermitianResult

NORM_TOL = 1e-9
EXPECTATION_IMAG_TOL = 1e-10


def _frozen(array: np.ndarray) -> np.ndarray:
    out = np.ascontiguousarray(array)
    out.setflags(write=False)
    return out


# ---------------------------------------------------------------------------
# States
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class QuantumState:
    """A length-2**n complex amplitude vector.

    The amplitude array is read-only after construction; operations that
    transform states allocate new vectors.
    """

    num_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        if self.num_qubits < 1:
            raise ValueError(f"need at least one qubit, got n={self.num_qubits}")
        amps = np.asarray(self.amplitudes, dtype=np.complex128)
        if amps.ndim != 1 or amps.size != 1 << self.num_qubits:
            raise DimensionMismatch(
                f"amplitude vector of length {amps.size} does not match n={self.num_qubits}"
            )
        object.__setattr__(self, "amplitudes", _frozen(amps))

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def is_normalized(self, tol: float = NORM_TOL) -> bool:
        return abs(self.norm() - 1.0) <= tol

    def overlap(self, other: "QuantumState") -> complex:
        """<self|other>."""
        if other.dim != self.dim:
            raise DimensionMismatch("states of different dimension")
        return complex(np.vdot(self.amplitudes, other.amplitudes))


def uniform_state(n: int) -> QuantumState:
    """Equal-amplitude superposition over all 2**n basis states."""
    if n < 1:
        raise ValueError(f"need at least one qubit, got n={n}")
    N = 1 << n
    return QuantumState(n, np.full(N, 1.0 / np.sqrt(N), dtype=np.complex128))


def basis_state(n: int, z: int) -> QuantumState:
    """Computational basis state |z>."""
    N = 1 << n
    if not 0 <= z < N:
        raise ValueError(f"basis index {z} out of range for n={n}")
    amps = np.zeros(N, dtype=np.complex128)
    amps[z] = 1.0
    return QuantumState(n, amps)


def fourier_state(n: int, x: int) -> QuantumState:
    """State with amplitude exp(2*pi*i*z*x/N)/sqrt(N) at z.

    These N vectors form an orthonormal basis; x=0 reproduces the uniform
    superposition.
    """
    N = 1 << n
    if not 0 <= x < N:
        raise ValueError(f"fourier index {x} out of range for n={n}")
    z = np.arange(N)
    amps = np.exp(2j * np.pi * (x * z % N) / N) / np.sqrt(N)
    return QuantumState(n, amps)


# ---------------------------------------------------------------------------
# Operators
# ---------------------------------------------------------------------------

class LinearOperator(abc.ABC):
    """Hermitian operator applied matrix-free to complex vectors."""

    @property
    @abc.abstractmethod
    def dim(self) -> int:
        """Dimension N of the space the operator acts on."""

    @abc.abstractmethod
    def apply(self, vec: np.ndarray) -> np.ndarray:
        """Return A @ vec as a new array; the input is never mutated."""

    @abc.abstractmethod
    def to_dense(self) -> np.ndarray:
        """Materialize the operator, built from its structure (not via apply)."""

    @abc.abstractmethod
    def norm_upper_bound(self) -> float:
        """A cheap upper bound on the spectral radius."""

    def _check_dim(self, vec: np.ndarray) -> np.ndarray:
        vec = np.asarray(vec, dtype=np.complex128)
        if vec.shape != (self.dim,):
            raise DimensionMismatch(
                f"vector of shape {vec.shape} does not match operator dim {self.dim}"
            )
        return vec


@dataclass(frozen=True)
class Diagonal(LinearOperator):
    """Operator diagonal in the computational basis, real entries."""

    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=np.float64)
        if vals.ndim != 1 or vals.size < 1:
            raise ValueError("diagonal needs a one-dimensional value array")
        object.__setattr__(self, "values", _frozen(vals))

    @property
    def dim(self) -> int:
        return self.values.size

    def apply(self, vec: np.ndarray) -> np.ndarray:
        vec = self._check_dim(vec)
        return self.values * vec

    def to_dense(self) -> np.ndarray:
        return np.diag(self.values.astype(np.complex128))

    def norm_upper_bound(self) -> float:
        return float(np.max(np.abs(self.values)))


@dataclass(frozen=True)
class RankOneComplement(LinearOperator):
    """E * (I - |v><v|) for a unit-norm axis vector |v> and E > 0.

    Spectrum is {0, E}: eigenvalue 0 exactly on the axis, E on its
    orthogonal complement.
    """

    scale: float
    axis: np.ndarray

    def __post_init__(self):
        if not self.scale > 0:
            raise ValueError(f"scale must be positive, got {self.scale}")
        axis = np.asarray(self.axis, dtype=np.complex128)
        if axis.ndim != 1:
            raise ValueError("axis must be a vector")
        if abs(np.linalg.norm(axis) - 1.0) > NORM_TOL:
            raise ValueError("axis must be unit norm")
        object.__setattr__(self, "axis", _frozen(axis))

    @property
    def dim(self) -> int:
        return self.axis.size

    def apply(self, vec: np.ndarray) -> np.ndarray:
        vec = self._check_dim(vec)
        return self.scale * (vec - self.axis * np.vdot(self.axis, vec))

    def to_dense(self) -> np.ndarray:
        eye = np.eye(self.dim, dtype=np.complex128)
        return self.scale * (eye - np.outer(self.axis, self.axis.conj()))

    def norm_upper_bound(self) -> float:
        return float(self.scale)


_HALF_FLIP = np.array([[0.5, -0.5], [-0.5, 0.5]])  # (1 - sigma_x) / 2


@dataclass(frozen=True)
class TransverseFieldSum(LinearOperator):
    """sum_j d_j * (1 - sigma_x^(j)) / 2 with nonnegative integer weights d_j.

    Ground state is the uniform superposition with eigenvalue 0.
    """

    multiplicities: tuple

    def __post_init__(self):
        mult = tuple(int(d) for d in self.multiplicities)
        if len(mult) < 1:
            raise ValueError("need at least one qubit")
        if any(d < 0 for d in mult):
            raise ValueError("multiplicities must be nonnegative")
        object.__setattr__(self, "multiplicities", mult)

    @property
    def num_qubits(self) -> int:
        return len(self.multiplicities)

    @property
    def dim(self) -> int:
        return 1 << len(self.multiplicities)

    def apply(self, vec: np.ndarray) -> np.ndarray:
        vec = self._check_dim(vec)
        n = self.num_qubits
        out = (0.5 * sum(self.multiplicities)) * vec
        for j, d in enumerate(self.multiplicities):
            if d == 0:
                continue
            # View with bit j as the middle axis; reversing it flips the bit.
            flipped = vec.reshape(1 << (n - 1 - j), 2, 1 << j)[:, ::-1, :]
            out -= (0.5 * d) * flipped.reshape(-1)
        return out

    def to_dense(self) -> np.ndarray:
        n = self.num_qubits
        out = np.zeros((self.dim, self.dim), dtype=np.complex128)
        for j, d in enumerate(self.multiplicities):
            if d == 0:
                continue
            term = np.kron(np.eye(1 << (n - 1 - j)), np.kron(_HALF_FLIP, np.eye(1 << j)))
            out += d * term
        return out

    def norm_upper_bound(self) -> float:
        return float(sum(self.multiplicities))


@dataclass(frozen=True)
class WeightedSum(LinearOperator):
    """Real-weighted sum of Hermitian operators sharing one dimension."""

    terms: tuple

    def __post_init__(self):
        terms = tuple((float(c), op) for c, op in self.terms)
        if not terms:
            raise ValueError("weighted sum needs at least one term")
        dims = {op.dim for _, op in terms}
        if len(dims) != 1:
            raise DimensionMismatch(f"mixed dimensions in weighted sum: {sorted(dims)}")
        object.__setattr__(self, "terms", terms)

    @property
    def dim(self) -> int:
        return self.terms[0][1].dim

    def apply(self, vec: np.ndarray) -> np.ndarray:
        vec = self._check_dim(vec)
        out = self.terms[0][0] * self.terms[0][1].apply(vec)
        for coeff, op in self.terms[1:]:
            out += coeff * op.apply(vec)
        return out

    def to_dense(self) -> np.ndarray:
        out = self.terms[0][0] * self.terms[0][1].to_dense()
        for coeff, op in self.terms[1:]:
            out = out + coeff * op.to_dense()
        return out

    def norm_upper_bound(self) -> float:
        return float(sum(abs(c) * op.norm_upper_bound() for c, op in self.terms))


# ---------------------------------------------------------------------------
# Time dependence
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TimeDependentHamiltonian:
    """H(t) = sum_i c_i(t) * A_i on [0, total_time].

    Coefficient functions must stay finite on the interval; they are spot
    checked on a coarse grid at construction. A zero total_time is allowed
    and means the identity evolution.
    """

    terms: tuple
    total_time: float

    def __post_init__(self):
        terms = tuple((op, fn) for op, fn in self.terms)
        if not terms:
            raise ValueError("need at least one term")
        dims = {op.dim for op, _ in terms}
        if len(dims) != 1:
            raise DimensionMismatch(f"mixed dimensions in Hamiltonian: {sorted(dims)}")
        T = float(self.total_time)
        if T < 0:
            raise ValueError(f"total_time must be nonnegative, got {T}")
        probe = np.linspace(0.0, T, 17) if T > 0 else np.array([0.0])
        for i, (_, fn) in enumerate(terms):
            samples = [fn(t) for t in probe]
            if not np.all(np.isfinite(samples)):
                raise ValueError(f"coefficient function of term {i} is not finite on [0, T]")
        object.__setattr__(self, "terms", terms)
        object.__setattr__(self, "total_time", T)

    @property
    def dim(self) -> int:
        return self.terms[0][0].dim

    def apply_at(self, t: float, vec: np.ndarray) -> np.ndarray:
        """H(t) @ vec."""
        op0, fn0 = self.terms[0]
        out = fn0(t) * op0.apply(vec)
        for op, fn in self.terms[1:]:
            out += fn(t) * op.apply(vec)
        return out

    def frozen_at(self, t: float) -> WeightedSum:
        """The instantaneous operator H(t) as a weighted sum."""
        return WeightedSum(tuple((fn(t), op) for op, fn in self.terms))


# ---------------------------------------------------------------------------
# Operations
# ---------------------------------------------------------------------------

def apply(op: LinearOperator, state: QuantumState) -> np.ndarray:
    """A|psi> as a raw (generally unnormalized) complex vector."""
    if op.dim != state.dim:
        raise DimensionMismatch(
            f"operator dim {op.dim} does not match state dim {state.dim}"
        )
    return op.apply(state.amplitudes)


def expectation(op: LinearOperator, state: QuantumState) -> float:
    """<psi|A|psi>, checked to be real.

    An imaginary part above 1e-10 signals a non-Hermitian construction and
    raises instead of being silently discarded.
    """
    value = complex(np.vdot(state.amplitudes, apply(op, state)))
    if abs(value.imag) > EXPECTATION_IMAG_TOL:
        raise NonHermitianResult(
            f"expectation has imaginary part {value.imag:.3e}; operator is not Hermitian"
        )
    return value.real
