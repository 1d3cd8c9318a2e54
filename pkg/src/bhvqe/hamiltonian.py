"""Black-hole Hamiltonian assembly and Pauli-basis conversion.

The metric prefactor (1/2)(1 + GM/2r)^(1/4) multiplies a sum of squared
momentum operators. Two layouts are supported:

* ``paper-chain``: the printed 4-qubit form, one squared-momentum block on
  each overlapping qubit pair (0,1), (1,2), (2,3). Requires N = 4.
* ``disjoint``: one squared-momentum block per spatial dimension on its own
  group of log2(N) qubits, for 1 to 3 dimensions.

Both directions of the matrix <-> Pauli-term conversion live here as well.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product

import numpy as np

from . import lattice, linalg
from .errors import DomainError, NotPowerOfTwoError, UnsupportedLatticeError
from .lattice import LatticeSpec
from .linalg import PauliTerm

PAPER_CHAIN = "paper-chain"
DISJOINT = "disjoint"

# Coefficients below this are machine noise, not physics, and are dropped.
COEFF_PRUNE_TOL = 1e-12


@dataclass(frozen=True)
class BlackHoleParams:
    """Mass and observation radius in Planck units (G = 1)."""

    mass: float
    radius: float
    g_const: float = 1.0

    def __post_init__(self):
        if not (self.mass > 0):
            raise DomainError(f"mass must be > 0, got {self.mass}")
        if not (self.radius > 0):
            raise DomainError(f"radius must be > 0, got {self.radius}")
        if not math.isfinite(self.rho):
            raise DomainError(f"GM/2r is not finite for mass={self.mass}, radius={self.radius}")

    @property
    def rho(self) -> float:
        """Dimensionless ratio GM/2r; the only combination the Hamiltonian sees."""
        return self.g_const * self.mass / (2.0 * self.radius)


@dataclass(frozen=True)
class HamiltonianLayout:
    """Which multi-dimensional assembly to build."""

    variant: str = PAPER_CHAIN
    dims: int = 3  # disjoint layout only

    def __post_init__(self):
        if self.variant not in (PAPER_CHAIN, DISJOINT):
            raise ValueError(f"unknown layout variant {self.variant!r}")
        if self.variant == DISJOINT and self.dims not in (1, 2, 3):
            raise ValueError(f"disjoint layout needs dims in 1..3, got {self.dims}")


@dataclass(frozen=True)
class PauliHamiltonian:
    """Hermitian operator as a merged, pruned, lexicographically sorted term list."""

    n_qubits: int
    terms: tuple[PauliTerm, ...]

    def __post_init__(self):
        for t in self.terms:
            if t.n_qubits != self.n_qubits:
                raise ValueError(f"term {t.string} does not act on {self.n_qubits} qubits")
        strings = [t.string for t in self.terms]
        if len(set(strings)) != len(strings):
            raise ValueError("duplicate Pauli strings; coefficients must be merged")

    def coefficient(self, string: str) -> float:
        """Coefficient of one string (0.0 if absent)."""
        for t in self.terms:
            if t.string == string:
                return t.coefficient
        return 0.0

    def scaled(self, factor: float) -> "PauliHamiltonian":
        return _from_mapping(self.n_qubits, {t.string: t.coefficient * factor for t in self.terms})


def _from_mapping(n_qubits: int, coeffs: dict[str, float]) -> PauliHamiltonian:
    kept = sorted((s, c) for s, c in coeffs.items() if abs(c) > COEFF_PRUNE_TOL)
    return PauliHamiltonian(n_qubits, tuple(PauliTerm(c, s) for s, c in kept))


def metric_prefactor(params: BlackHoleParams) -> float:
    """Schwarzschild energy scale (1/2)(1 + GM/2r)^(1/4)."""
    if not (params.mass > 0) or not (params.radius > 0):
        raise DomainError("mass and radius must be positive")
    return 0.5 * (1.0 + params.rho) ** 0.25


def pauli_decompose(m: np.ndarray, prune_tol: float = COEFF_PRUNE_TOL) -> PauliHamiltonian:
    """Expand a Hermitian 2^n x 2^n matrix over Pauli strings.

    The coefficient of string s is Tr[P_s m] / 2^n; magnitudes at or below
    prune_tol are dropped. Raises NotPowerOfTwoError for incompatible
    dimensions and NotHermitianError for non-Hermitian input.
    """
    m = linalg.as_matrix(m)
    dim = m.shape[0]
    n = dim.bit_length() - 1
    if dim < 2 or 2**n != dim:
        raise NotPowerOfTwoError(f"matrix dimension {dim} is not a power of two")
    linalg.require_hermitian(m)

    coeffs: dict[str, float] = {}
    for letters in product(linalg.PAULI_LETTERS, repeat=n):
        string = "".join(letters)
        p = linalg.pauli_matrix(string)
        # Tr[P m] with P Hermitian; Hermitian input keeps this real to ~1e-15
        raw = complex(np.einsum("ij,ji->", p, m)) / dim
        if abs(raw.imag) > linalg.HERMITICITY_TOL:
            raise ValueError(f"coefficient of {string} has imaginary residue {raw.imag:.3e}")
        if abs(raw.real) > prune_tol:
            coeffs[string] = raw.real
    return _from_mapping(n, coeffs)


def to_matrix(h: PauliHamiltonian) -> np.ndarray:
    """Dense matrix of a Pauli-term Hamiltonian."""
    dim = 2**h.n_qubits
    m = np.zeros((dim, dim), dtype=complex)
    for t in h.terms:
        m += t.coefficient * linalg.pauli_matrix(t.string)
    return m


def _embed(pair_string: str, start: int, n_qubits: int) -> str:
    letters = ["I"] * n_qubits
    for offset, letter in enumerate(pair_string):
        letters[start + offset] = letter
    return "".join(letters)


def assemble(
    params: BlackHoleParams | None,
    layout: HamiltonianLayout,
    spec: LatticeSpec,
    inner_half: bool = False,
) -> PauliHamiltonian:
    """Build the black-hole Hamiltonian in Pauli form.

    Args:
        params: mass/radius setting the metric prefactor, or None for a
            prefactor normalized to 1.
        layout: paper-chain (4 qubits, overlapping pairs) or disjoint
            (one block of log2(N) qubits per dimension).
        spec: lattice size N per dimension; paper-chain requires N = 4.
        inner_half: restore the literal (p^2)/2 per block instead of the
            p^2 the printed Pauli coefficients correspond to.

    Returns:
        PauliHamiltonian with merged coefficients, every block scaled by the
        metric prefactor.
    """
    scale = 1.0 if params is None else metric_prefactor(params)
    if inner_half:
        scale *= 0.5

    block = pauli_decompose(lattice.momentum_squared(spec))
    block_qubits = spec.n_qubits

    if layout.variant == PAPER_CHAIN:
        if spec.n_points != 4:
            raise UnsupportedLatticeError(
                f"paper-chain layout is defined for N=4 only, got N={spec.n_points}"
            )
        n_qubits = 4
        starts = [0, 1, 2]
    else:
        n_qubits = layout.dims * block_qubits
        starts = [d * block_qubits for d in range(layout.dims)]

    coeffs: dict[str, float] = {}
    for start in starts:
        for t in block.terms:
            s = _embed(t.string, start, n_qubits)
            coeffs[s] = coeffs.get(s, 0.0) + scale * t.coefficient
    return _from_mapping(n_qubits, coeffs)


def exact_ground_energy(h: PauliHamiltonian) -> float:
    """Smallest eigenvalue of the dense Hamiltonian matrix (n_qubits <= 6)."""
    if h.n_qubits > 6:
        raise DomainError(f"exact diagonalization limited to 6 qubits, got {h.n_qubits}")
    eigenvalues, _ = linalg.hermitian_eigensystem(to_matrix(h))
    return float(eigenvalues[0])


def to_text(h: PauliHamiltonian, sig_digits: int = 12) -> str:
    """One `<coefficient> <letters>` line per term, sorted by letters."""
    return "\n".join(f"{t.coefficient:.{sig_digits}g} {t.string}" for t in h.terms)
