"""Dense state-vector simulation for small qubit registers.

Bit ordering: character ``k`` of a bitstring reports qubit ``k`` and qubit 0
is the most significant bit of the basis index, so ``"10"`` is index 2.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

MAX_QUBITS = 8

_SQRT_HALF = 1.0 / np.sqrt(2.0)

_FIXED_MATRICES = {
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
    "H": np.array([[1, 1], [1, -1]], dtype=complex) * _SQRT_HALF,
}

_CNOT = np.array(
    [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex
)

GATE_KINDS = ("RX", "RZ", "X", "Y", "Z", "H", "CNOT")


class SimulatorError(ValueError):
    """Raised for malformed gates, bitstrings or sampling requests."""


def rx_matrix(theta: float) -> np.ndarray:
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)


def rz_matrix(theta: float) -> np.ndarray:
    return np.array(
        [[np.exp(-0.5j * theta), 0], [0, np.exp(0.5j * theta)]], dtype=complex
    )


@dataclass(frozen=True)
class Gate:
    """One circuit element.

    ``targets`` holds a single qubit index, or ``(control, target)`` for CNOT.
    ``angle`` is only meaningful for the rotations RX and RZ.
    """

    kind: str
    targets: tuple[int, ...]
    angle: float | None = None

    def __post_init__(self):
        if self.kind not in GATE_KINDS:
            raise SimulatorError(f"unknown gate kind {self.kind!r}")
        arity = 2 if self.kind == "CNOT" else 1
        if len(self.targets) != arity:
            raise SimulatorError(f"{self.kind} takes {arity} qubit index(es)")
        if self.kind == "CNOT" and self.targets[0] == self.targets[1]:
            raise SimulatorError("CNOT control and target must differ")
        if self.kind in ("RX", "RZ"):
            if self.angle is None or not np.isfinite(self.angle):
                raise SimulatorError(f"{self.kind} needs a finite angle")
        elif self.angle is not None:
            raise SimulatorError(f"{self.kind} takes no angle")

    @classmethod
    def rx(cls, qubit: int, theta: float) -> "Gate":
        return cls("RX", (qubit,), float(theta))

    @classmethod
    def rz(cls, qubit: int, theta: float) -> "Gate":
        return cls("RZ", (qubit,), float(theta))

    @classmethod
    def cnot(cls, control: int, target: int) -> "Gate":
        return cls("CNOT", (control, target))

    def matrix(self) -> np.ndarray:
        """The 2x2 (or 4x4 for CNOT, control first) unitary."""
        if self.kind == "RX":
            return rx_matrix(self.angle)
        if self.kind == "RZ":
            return rz_matrix(self.angle)
        if self.kind == "CNOT":
            return _CNOT.copy()
        return _FIXED_MATRICES[self.kind].copy()


@dataclass
class StateVector:
    n_qubits: int
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        if not 1 <= self.n_qubits <= MAX_QUBITS:
            raise SimulatorError(f"n_qubits must be in [1, {MAX_QUBITS}]")
        amps = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if amps.shape[0] != 2**self.n_qubits:
            raise SimulatorError(
                f"expected {2**self.n_qubits} amplitudes, got {amps.shape[0]}"
            )
        self.amplitudes = amps

    @classmethod
    def zero(cls, n_qubits: int) -> "StateVector":
        amps = np.zeros(2**n_qubits, dtype=complex)
        amps[0] = 1.0
        return cls(n_qubits, amps)

    @classmethod
    def basis(cls, bitstring: str) -> "StateVector":
        n = len(bitstring)
        amps = np.zeros(2**n, dtype=complex)
        amps[bitstring_index(bitstring, n)] = 1.0
        return cls(n, amps)

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def norm_squared(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)


@dataclass(frozen=True)
class ShotHistogram:
    n_qubits: int
    counts: dict[str, int]
    shots: int

    def __post_init__(self):
        if sum(self.counts.values()) != self.shots:
            raise SimulatorError("histogram counts do not sum to shots")
        for key, value in self.counts.items():
            if len(key) != self.n_qubits or set(key) - {"0", "1"}:
                raise SimulatorError(f"bad histogram key {key!r}")
            if value < 0:
                raise SimulatorError("negative count")

    def frequency(self, bitstring: str) -> float:
        return self.counts.get(bitstring, 0) / self.shots


def bitstring_index(bitstring: str, n_qubits: int) -> int:
    if len(bitstring) != n_qubits or set(bitstring) - {"0", "1"}:
        raise SimulatorError(
            f"bitstring {bitstring!r} is not {n_qubits} characters of 0/1"
        )
    return int(bitstring, 2)


def index_bitstring(index: int, n_qubits: int) -> str:
    return format(index, f"0{n_qubits}b")


def _apply_single(amps: np.ndarray, n: int, qubit: int, mat: np.ndarray) -> np.ndarray:
    view = amps.reshape(2**qubit, 2, 2 ** (n - qubit - 1))
    return np.einsum("ab,ibj->iaj", mat, view).reshape(-1)


def _apply_cnot(amps: np.ndarray, n: int, control: int, target: int) -> np.ndarray:
    out = amps.reshape((2,) * n).copy()
    sel = [slice(None)] * n
    sel[control] = 1
    sub = out[tuple(sel)]
    # axis index of ``target`` inside the control=1 slice
    axis = target - (1 if target > control else 0)
    out[tuple(sel)] = np.flip(sub, axis=axis)
    return out.reshape(-1)


def apply_gate(state: StateVector, gate: Gate) -> StateVector:
    """Return a new state with ``gate`` applied; ``state`` is left untouched."""
    n = state.n_qubits
    for q in gate.targets:
        if not 0 <= q < n:
            raise SimulatorError(f"qubit index {q} out of range for {n} qubits")
    if gate.kind == "CNOT":
        amps = _apply_cnot(state.amplitudes, n, *gate.targets)
    else:
        amps = _apply_single(state.amplitudes, n, gate.targets[0], gate.matrix())
    return StateVector(n, amps)


def apply_circuit(state: StateVector, gates) -> StateVector:
    for gate in gates:
        state = apply_gate(state, gate)
    return state


def exact_probability(state: StateVector, bitstring: str) -> float:
    idx = bitstring_index(bitstring, state.n_qubits)
    return float(abs(state.amplitudes[idx]) ** 2)


def make_rng(seed: int) -> np.random.Generator:
    """PCG64 generator; the algorithm is pinned so results match across machines."""
    return np.random.Generator(np.random.PCG64(seed))


def sample(state: StateVector, shots: int, seed: int) -> ShotHistogram:
    """Draw ``shots`` full-register measurements from the exact distribution.

    A single multinomial draw from a PCG64 stream seeded with ``seed``, so the
    histogram is a pure function of ``(state, shots, seed)``.
    """
    if int(shots) != shots or shots < 1:
        raise SimulatorError("shots must be a positive integer")
    probs = state.probabilities()
    probs = probs / probs.sum()
    draws = make_rng(seed).multinomial(int(shots), probs)
    counts = {
        index_bitstring(i, state.n_qubits): int(c)
        for i, c in enumerate(draws)
        if c > 0
    }
    return ShotHistogram(state.n_qubits, counts, int(shots))
