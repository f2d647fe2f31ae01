"""Classical cost functions, Exact Cover instances, and permutation scrambling.

Bit convention: bit j of the assignment z is (z >> j) & 1, so bit 0 is the
least significant bit of the basis index.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import DegenerateMinimum, DimensionMismatch, GenerationExhausted

# Built-in problems emit exact integers, so ground-set detection is an exact
# comparison; the relative guard covers user-supplied real-valued costs.
GROUND_REL_TOL = 1e-12


@dataclass(frozen=True)
class CostFunction:
    """A classical cost h(z) on z in [0, 2**n) with cached minimum data."""

    num_qubits: int
    values: np.ndarray

    def __post_init__(self):
        if self.num_qubits < 1:
            raise ValueError(f"need at least one qubit, got n={self.num_qubits}")
        vals = np.asarray(self.values, dtype=np.float64)
        if vals.shape != (1 << self.num_qubits,):
            raise DimensionMismatch(
                f"cost of length {vals.size} does not match n={self.num_qubits}"
            )
        if not np.all(np.isfinite(vals)):
            raise ValueError("cost values must be finite")
        if vals.min() < 0:
            raise ValueError("cost values must be nonnegative")
        vals = np.ascontiguousarray(vals)
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)
        mn = float(vals.min())
        tol = GROUND_REL_TOL * max(1.0, abs(mn))
        ground = np.flatnonzero(vals <= mn + tol)
        ground.setflags(write=False)
        object.__setattr__(self, "_min_value", mn)
        object.__setattr__(self, "_ground_set", ground)

    @property
    def dim(self) -> int:
        return self.values.size

    @property
    def min_value(self) -> float:
        return self._min_value

    @property
    def ground_set(self) -> np.ndarray:
        """Indices attaining the minimum, sorted ascending."""
        return self._ground_set

    @property
    def k(self) -> int:
        """Ground-state degeneracy |ground_set|."""
        return self._ground_set.size


@dataclass(frozen=True)
class ExactCoverInstance:
    """Clauses (i, j, k) of distinct bit indices; a clause is satisfied when
    exactly one of the three bits is 1."""

    num_bits: int
    clauses: tuple

    def __post_init__(self):
        if self.num_bits < 3:
            raise ValueError("Exact Cover needs at least 3 bits")
        clauses = tuple(tuple(int(i) for i in c) for c in self.clauses)
        for c in clauses:
            if len(c) != 3 or len(set(c)) != 3:
                raise ValueError(f"clause {c} must have 3 distinct indices")
            if not all(0 <= i < self.num_bits for i in c):
                raise ValueError(f"clause {c} out of range for n={self.num_bits}")
        object.__setattr__(self, "clauses", clauses)

    @property
    def num_clauses(self) -> int:
        return len(self.clauses)


@dataclass(frozen=True)
class Permutation:
    """A bijection on [0, N) with its inverse cached."""

    forward: np.ndarray

    def __post_init__(self):
        fwd = np.asarray(self.forward, dtype=np.int64)
        if fwd.ndim != 1 or fwd.size < 1:
            raise ValueError("permutation needs a one-dimensional index array")
        if not np.array_equal(np.sort(fwd), np.arange(fwd.size)):
            raise ValueError("forward map is not a bijection on [0, N)")
        inv = np.empty_like(fwd)
        inv[fwd] = np.arange(fwd.size)
        fwd = np.ascontiguousarray(fwd)
        fwd.setflags(write=False)
        inv.setflags(write=False)
        object.__setattr__(self, "forward", fwd)
        object.__setattr__(self, "_inverse", inv)

    @property
    def size(self) -> int:
        return self.forward.size

    @property
    def inverse(self) -> np.ndarray:
        return self._inverse

    def __call__(self, z: int) -> int:
        return int(self.forward[z])

    @staticmethod
    def identity(N: int) -> "Permutation":
        return Permutation(np.arange(N))

    @staticmethod
    def transposition(N: int, a: int, b: int) -> "Permutation":
        fwd = np.arange(N)
        fwd[a], fwd[b] = fwd[b], fwd[a]
        return Permutation(fwd)

    def compose(self, other: "Permutation") -> "Permutation":
        """self after other: (self.compose(other))(z) = self(other(z))."""
        if other.size != self.size:
            raise DimensionMismatch("permutations of different size")
        return Permutation(self.forward[other.forward])


# ---------------------------------------------------------------------------
# Cost builders
# ---------------------------------------------------------------------------

def hamming_cost(n: int) -> CostFunction:
    """Decoupled n-bit cost h(z) = z_1 + ... + z_n (the Hamming weight)."""
    if n < 1:
        raise ValueError(f"need at least one qubit, got n={n}")
    z = np.arange(1 << n)
    vals = np.zeros(1 << n, dtype=np.float64)
    for j in range(n):
        vals += (z >> j) & 1
    return CostFunction(n, vals)


def exact_cover_cost(inst: ExactCoverInstance) -> CostFunction:
    """Number of violated clauses: a clause (i,j,k) is violated unless
    z_i + z_j + z_k = 1."""
    n = inst.num_bits
    z = np.arange(1 << n)
    vals = np.zeros(1 << n, dtype=np.float64)
    for (i, j, k) in inst.clauses:
        ones = ((z >> i) & 1) + ((z >> j) & 1) + ((z >> k) & 1)
        vals += ones != 1
    return CostFunction(n, vals)


def grover_cost(n: int, w: int) -> CostFunction:
    """Oracle-style cost: 0 at the marked string w, 1 everywhere else."""
    N = 1 << n
    if not 0 <= w < N:
        raise ValueError(f"marked index {w} out of range for n={n}")
    vals = np.ones(N, dtype=np.float64)
    vals[w] = 0.0
    return CostFunction(n, vals)


# ---------------------------------------------------------------------------
# Instance generation
# ---------------------------------------------------------------------------

def generate_exact_cover_usa(
    n: int, seed: int, max_restarts: int = 10_000
) -> ExactCoverInstance:
    """Random Exact Cover instance with exactly one satisfying assignment.

    Construction: starting from the empty clause list (all 2**n strings
    satisfying), add uniformly random clauses over distinct index triples,
    skipping triples already present, and recount the satisfying set by brute
    force after each addition. A count of zero restarts the draw; the build
    stops when the count is exactly one. Deterministic for a fixed seed.
    """
    if not 4 <= n <= 22:
        raise ValueError(f"bit count {n} outside supported range [4, 22]")
    rng = np.random.default_rng(seed)
    N = 1 << n
    z = np.arange(N)
    bits = [(z >> j) & 1 for j in range(n)]
    max_distinct = n * (n - 1) * (n - 2) // 6
    for _ in range(max_restarts):
        sat = np.ones(N, dtype=bool)
        clauses: list = []
        seen: set = set()
        while len(seen) < max_distinct:
            triple = tuple(sorted(int(i) for i in rng.choice(n, size=3, replace=False)))
            if triple in seen:
                continue
            seen.add(triple)
            i, j, k = triple
            sat = sat & (bits[i] + bits[j] + bits[k] == 1)
            count = int(sat.sum())
            if count == 0:
                break
            clauses.append(triple)
            if count == 1:
                return ExactCoverInstance(n, tuple(clauses))
        # either went unsatisfiable or exhausted all triples with count > 1
    raise GenerationExhausted(
        f"no unique-assignment instance after {max_restarts} restarts (n={n}, seed={seed})"
    )


def count_satisfying(inst: ExactCoverInstance) -> int:
    """Brute-force count of assignments with zero violated clauses."""
    return int(np.count_nonzero(exact_cover_cost(inst).values == 0))


# ---------------------------------------------------------------------------
# Scrambling
# ---------------------------------------------------------------------------

def random_permutation(N: int, seed: int) -> Permutation:
    """Uniform random permutation of [0, N), deterministic per seed."""
    if N < 1:
        raise ValueError(f"size must be positive, got {N}")
    return Permutation(np.random.default_rng(seed).permutation(N))


def scramble(cost: CostFunction, perm: Permutation) -> CostFunction:
    """Relabel the domain: values'[z] = values[perm^-1(z)].

    The multiset of values is preserved and the ground set maps through the
    permutation.
    """
    if perm.size != cost.dim:
        raise DimensionMismatch(
            f"permutation size {perm.size} does not match cost dim {cost.dim}"
        )
    return CostFunction(cost.num_qubits, cost.values[perm.inverse])


def canonicalize_for_theorem2(cost: CostFunction) -> CostFunction:
    """Shift to min 0 and move the unique minimizer to z=0.

    The relabeling is the single transposition argmin <-> 0, so the value
    multiset (up to the shift) is untouched.
    """
    if cost.k != 1:
        raise DegenerateMinimum(
            f"canonical form needs a unique minimizer, got k={cost.k}"
        )
    vals = cost.values - cost.min_value
    w = int(cost.ground_set[0])
    if w != 0:
        vals = vals.copy()
        vals[0], vals[w] = vals[w], vals[0]
    return CostFunction(cost.num_qubits, vals)


# ---------------------------------------------------------------------------
# Instance serialization
# ---------------------------------------------------------------------------

def instance_to_text(inst: ExactCoverInstance) -> str:
    """Plain-text form: one `n=<int>` line then one `clause i j k` per line."""
    lines = [f"n={inst.num_bits}"]
    lines.extend(f"clause {i} {j} {k}" for (i, j, k) in inst.clauses)
    return "\n".join(lines) + "\n"


def instance_from_text(text: str) -> ExactCoverInstance:
    n = None
    clauses = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("n="):
            n = int(line[2:])
        elif line.startswith("clause"):
            parts = line.split()
            if len(parts) != 4:
                raise ValueError(f"malformed clause line: {raw!r}")
            clauses.append(tuple(int(p) for p in parts[1:]))
        else:
            raise ValueError(f"unrecognized line: {raw!r}")
    if n is None:
        raise ValueError("missing n= header line")
    return ExactCoverInstance(n, tuple(clauses))


def save_instance(inst: ExactCoverInstance, path) -> None:
    with open(path, "w") as fh:
        fh.write(instance_to_text(inst))


def load_instance(path) -> ExactCoverInstance:
    with open(path) as fh:
        return instance_from_text(fh.read())
