"""Ground-state energies and Hawking-style observables for a discretized
black-hole Hamiltonian, via exact diagonalization and a simulated VQE."""

from .ansatz import AnsatzFamily, AnsatzKind, build, parameter_count
from .circuits import (
    Circuit,
    Gate,
    GateKind,
    StateVector,
    expectation,
    run,
    sampled_expectation,
)
from .errors import (
    BhvqeError,
    DegenerateDataError,
    DimensionMismatchError,
    DomainError,
    NegativeInterceptError,
    NonFiniteObjectiveError,
    NotHermitianError,
    NotPowerOfTwoError,
    OutOfRangeError,
    ParamLengthMismatchError,
    QubitMismatchError,
    TooFewQubitsError,
    UnsupportedLatticeError,
)
from .hamiltonian import (
    BlackHoleParams,
    HamiltonianLayout,
    PauliHamiltonian,
    assemble,
    exact_ground_energy,
    metric_prefactor,
    pauli_decompose,
    to_matrix,
    to_text,
)
from .lattice import (
    LatticeSpec,
    dft_matrix,
    momentum_operator,
    momentum_squared,
    position_operator,
)
from .linalg import PauliTerm, hermitian_eigensystem, pauli_matrix
from .observables import (
    FitResult,
    SweepRecord,
    fit_energy_vs_mass,
    fit_energy_vs_radius,
    mass_from_energy,
    power,
    sweep,
    temperature,
)
from .vqe import SpsaConfig, VqeResult, spsa_minimize, vqe_run

__version__ = "0.1.0"

__all__ = [
    "AnsatzFamily",
    "AnsatzKind",
    "BhvqeError",
    "BlackHoleParams",
    "Circuit",
    "DegenerateDataError",
    "DimensionMismatchError",
    "DomainError",
    "FitResult",
    "Gate",
    "GateKind",
    "HamiltonianLayout",
    "LatticeSpec",
    "NegativeInterceptError",
    "NonFiniteObjectiveError",
    "NotHermitianError",
    "NotPowerOfTwoError",
    "OutOfRangeError",
    "ParamLengthMismatchError",
    "PauliHamiltonian",
    "PauliTerm",
    "QubitMismatchError",
    "SpsaConfig",
    "StateVector",
    "SweepRecord",
    "TooFewQubitsError",
    "UnsupportedLatticeError",
    "VqeResult",
    "assemble",
    "build",
    "dft_matrix",
    "exact_ground_energy",
    "expectation",
    "fit_energy_vs_mass",
    "fit_energy_vs_radius",
    "hermitian_eigensystem",
    "mass_from_energy",
    "metric_prefactor",
    "momentum_operator",
    "momentum_squared",
    "parameter_count",
    "pauli_decompose",
    "pauli_matrix",
    "position_operator",
    "power",
    "run",
    "sampled_expectation",
    "spsa_minimize",
    "sweep",
    "temperature",
    "to_matrix",
    "to_text",
    "vqe_run",
]
