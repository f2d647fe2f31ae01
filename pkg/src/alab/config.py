"""Size budgets shared by the dense and matrix-free code paths."""

from dataclasses import dataclass


@dataclass(frozen=True)
class Limits:
    """Qubit caps for the two expensive regimes.

    Evolution holds dense length-2**n state vectors; spectra additionally
    materialize 2**n x 2**n matrices, so the dense cap sits lower.
    """

    max_evolution_qubits: int = 20
    max_dense_qubits: int = 12


DEFAULT_LIMITS = Limits()
