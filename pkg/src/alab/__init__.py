"""Matrix-free adiabatic-evolution laboratory.

State-vector simulation of interpolating Hamiltonians, run-time searches,
spectral-gap sweeps, and numerical verification of the Grover-type lower
bounds that make unstructured adiabatic optimization fail.
"""

__version__ = "0.1.0"

from .bounds import (
    BoundReport,
    SDiagnostic,
    grover_lower_bound,
    h_star,
    lemma1_experiment,
    lemma2_check,
    s_diagnostic,
    theorem1_lower_bound,
    theorem2_experiment,
    theorem2_lower_bound,
)
from .evolve import (
    EvolutionResult,
    RunTimeSearchResult,
    required_run_time,
    roundtrip_check,
    schrodinger_evolve,
    success_probability,
)
from .hamiltonians import (
    InterpolationSpec,
    adiabatic_interpolation,
    clause_beginning,
    constant_hamiltonian,
    driver_plus_problem,
    grover_hamiltonian,
    problem_hamiltonian,
    projector_beginning,
    reference_hamiltonian,
    transverse_field_beginning,
)
from .problems import (
    CostFunction,
    ExactCoverInstance,
    Permutation,
    canonicalize_for_theorem2,
    exact_cover_cost,
    generate_exact_cover_usa,
    grover_cost,
    hamming_cost,
    random_permutation,
    scramble,
)
from .qstate import (
    Diagonal,
    LinearOperator,
    QuantumState,
    RankOneComplement,
    TimeDependentHamiltonian,
    TransverseFieldSum,
    WeightedSum,
    apply,
    basis_state,
    expectation,
    fourier_state,
    uniform_state,
)
from .spectra import SpectralCurve, dense_spectrum, low_lying, spectral_curve
from .twolevel import (
    decoupled_success,
    gap,
    sqrt_n_scaling_experiment,
    theta,
    transition_probability,
)
