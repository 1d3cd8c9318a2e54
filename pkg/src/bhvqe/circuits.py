"""Statevector simulation of parameterized circuits and Pauli expectation values.

States are 2^n complex vectors; qubit 0 is the leftmost tensor factor, so it
owns the most significant bit of a basis-state index. Expectation values are
evaluated term by term through amplitude manipulation; the dense matrix route
exists only as a test oracle. Shot-noise estimates sample the Born
distribution in each term's eigenbasis with a seeded generator.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import ParamLengthMismatchError, QubitMismatchError
from .hamiltonian import PauliHamiltonian

EXPECTATION_IMAG_TOL = 1e-10


class GateKind(Enum):
    U3 = "u3"
    RY = "ry"
    CNOT = "cnot"
    CU3 = "cu3"


N_PARAM_SLOTS = {GateKind.U3: 3, GateKind.RY: 1, GateKind.CNOT: 0, GateKind.CU3: 3}
N_QUBITS_USED = {GateKind.U3: 1, GateKind.RY: 1, GateKind.CNOT: 2, GateKind.CU3: 2}


@dataclass(frozen=True)
class Gate:
    """One gate instance: kind, target qubit(s), and its parameter-slot indices.

    Two-qubit gates list the control qubit first.
    """

    kind: GateKind
    qubits: tuple[int, ...]
    param_slots: tuple[int, ...] = ()

    def __post_init__(self):
        if len(self.qubits) != N_QUBITS_USED[self.kind]:
            raise ValueError(f"{self.kind.value} acts on {N_QUBITS_USED[self.kind]} qubit(s)")
        if len(set(self.qubits)) != len(self.qubits):
            raise ValueError("gate qubits must be distinct")
        if len(self.param_slots) != N_PARAM_SLOTS[self.kind]:
            raise ValueError(f"{self.kind.value} takes {N_PARAM_SLOTS[self.kind]} parameter slot(s)")


@dataclass(frozen=True)
class Circuit:
    """Ordered gate list over n_qubits with n_params free parameter slots."""

    n_qubits: int
    gates: tuple[Gate, ...]
    n_params: int

    def __post_init__(self):
        seen: set[int] = set()
        for g in self.gates:
            for q in g.qubits:
                if not 0 <= q < self.n_qubits:
                    raise ValueError(f"gate qubit {q} out of range for {self.n_qubits} qubits")
            for s in g.param_slots:
                if not 0 <= s < self.n_params:
                    raise ValueError(f"parameter slot {s} out of range")
                if s in seen:
                    raise ValueError(f"parameter slot {s} referenced twice")
                seen.add(s)
        if len(seen) != self.n_params:
            raise ValueError("every parameter slot must be referenced exactly once")


@dataclass(frozen=True)
class StateVector:
    """Normalized amplitudes over 2^n basis states (qubit 0 = most significant bit)."""

    n_qubits: int
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.amplitudes.shape != (2**self.n_qubits,):
            raise ValueError("amplitude count must be 2^n_qubits")


def u3_matrix(theta: float, phi: float, lam: float) -> np.ndarray:
    """General single-qubit rotation; U3(0,0,0) = I, U3(pi,0,pi) = X."""
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return np.array(
        [
            [c, -np.exp(1j * lam) * s],
            [np.exp(1j * phi) * s, np.exp(1j * (phi + lam)) * c],
        ]
    )


def ry_matrix(theta: float) -> np.ndarray:
    """Y rotation, the phi = lam = 0 slice of U3."""
    return u3_matrix(theta, 0.0, 0.0)


def _apply_1q(state: np.ndarray, matrix: np.ndarray, qubit: int) -> np.ndarray:
    moved = np.moveaxis(state, qubit, 0)
    return np.moveaxis(np.tensordot(matrix, moved, axes=([1], [0])), 0, qubit)


def _apply_controlled(state: np.ndarray, matrix: np.ndarray, control: int, target: int) -> np.ndarray:
    out = state.copy()
    sel: list = [slice(None)] * state.ndim
    sel[control] = 1
    sub = out[tuple(sel)]
    # dropping the control axis shifts later axis indices down by one
    t = target - 1 if target > control else target
    out[tuple(sel)] = _apply_1q(sub, matrix, t)
    return out


_X_MATRIX = np.array([[0, 1], [1, 0]], dtype=complex)


def run(circuit: Circuit, params: np.ndarray) -> StateVector:
    """Apply the circuit's gates in order to |0...0>.

    CNOT flips the target where the control is 1; CU3 applies the U3 matrix
    on the target under the same condition.
    """
    params = np.asarray(params, dtype=float)
    if params.shape != (circuit.n_params,):
        raise ParamLengthMismatchError(
            f"circuit has {circuit.n_params} parameter slots, got {params.shape}"
        )
    n = circuit.n_qubits
    state = np.zeros([2] * n, dtype=complex)
    state[(0,) * n] = 1.0
    for g in circuit.gates:
        angles = params[list(g.param_slots)]
        if g.kind is GateKind.U3:
            state = _apply_1q(state, u3_matrix(*angles), g.qubits[0])
        elif g.kind is GateKind.RY:
            state = _apply_1q(state, ry_matrix(angles[0]), g.qubits[0])
        elif g.kind is GateKind.CNOT:
            state = _apply_controlled(state, _X_MATRIX, g.qubits[0], g.qubits[1])
        else:
            state = _apply_controlled(state, u3_matrix(*angles), g.qubits[0], g.qubits[1])
    return StateVector(n, state.reshape(-1))


def apply_pauli_string(amplitudes: np.ndarray, letters: str) -> np.ndarray:
    """P|psi> for a Pauli string, acting axis by axis on the reshaped state."""
    n = len(letters)
    t = amplitudes.reshape([2] * n)
    for q, letter in enumerate(letters):
        if letter == "I":
            continue
        shape = [1] * n
        shape[q] = 2
        if letter == "X":
            t = np.flip(t, axis=q)
        elif letter == "Y":
            t = np.flip(t, axis=q) * np.array([-1j, 1j]).reshape(shape)
        else:  # Z
            t = t * np.array([1.0, -1.0]).reshape(shape)
    return t.reshape(-1)


def _check_qubits(state: StateVector, h: PauliHamiltonian):
    if state.n_qubits != h.n_qubits:
        raise QubitMismatchError(
            f"state has {state.n_qubits} qubits, Hamiltonian has {h.n_qubits}"
        )


def expectation(state: StateVector, h: PauliHamiltonian) -> float:
    """Exact <psi|H|psi>, summed term by term."""
    _check_qubits(state, h)
    psi = state.amplitudes
    value = 0.0 + 0.0j
    for t in h.terms:
        value += t.coefficient * np.vdot(psi, apply_pauli_string(psi, t.string))
    if abs(value.imag) > EXPECTATION_IMAG_TOL:
        raise ValueError(f"expectation has imaginary residue {value.imag:.3e}")
    return float(value.real)


# Basis changes that map each Pauli's eigenbasis onto the computational basis:
# H for X, H S^dagger for Y.
_HAD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
_MEASURE_ROTATION = {"X": _HAD, "Y": _HAD @ np.diag([1, -1j])}


def sampled_expectation(state: StateVector, h: PauliHamiltonian, shots: int, seed: int) -> float:
    """Shot-noise estimate of <psi|H|psi>.

    Each term is measured in its own eigenbasis: rotate the state, sample
    `shots` outcomes from the Born distribution, and average the resulting
    +/-1 eigenvalues. Identity terms contribute exactly. Deterministic for a
    fixed seed; the estimator's mean is the exact expectation.
    """
    _check_qubits(state, h)
    if shots < 1:
        raise ValueError(f"shots must be >= 1, got {shots}")
    n = state.n_qubits
    dim = 2**n
    rng = np.random.default_rng(seed)
    total = 0.0
    for term in h.terms:
        support = [q for q, letter in enumerate(term.string) if letter != "I"]
        if not support:
            total += term.coefficient
            continue
        rotated = state.amplitudes.reshape([2] * n)
        for q in support:
            letter = term.string[q]
            if letter in _MEASURE_ROTATION:
                rotated = _apply_1q(rotated, _MEASURE_ROTATION[letter], q)
        probs = np.abs(rotated.reshape(-1)) ** 2
        probs = probs / probs.sum()
        # eigenvalue of an outcome = parity of its bits on the term's support
        mask = sum(1 << (n - 1 - q) for q in support)
        eigs = np.array([1.0 - 2.0 * (bin(i & mask).count("1") & 1) for i in range(dim)])
        counts = rng.multinomial(shots, probs)
        total += term.coefficient * float(counts @ eigs) / shots
    return total
