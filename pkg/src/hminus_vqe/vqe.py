"""Ansatz circuit, shot-based Z-expectation estimates and energy evaluation."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .pauli import PauliError, PauliSum, string_matrix, to_matrix
from .statevector import (
    Gate,
    ShotHistogram,
    SimulatorError,
    StateVector,
    apply_circuit,
    index_bitstring,
    sample,
)

DEFAULT_SHOTS = 8192
TWO_PI = 2 * np.pi


@dataclass(frozen=True)
class AnsatzConfig:
    """Layered RZ-RX-RZ rotations with a CNOT entangler after each layer.

    Angles are laid out block by block: ``depth`` layers of ``n_qubits``
    blocks, then one final layer of blocks, three angles (a, b, c) each.
    """

    n_qubits: int = 2
    depth: int = 1

    def __post_init__(self):
        if self.n_qubits < 2:
            raise ValueError("ansatz needs at least two qubits")
        if self.depth < 1:
            raise ValueError("depth must be at least 1")

    @property
    def n_params(self) -> int:
        return 3 * self.n_qubits * (self.depth + 1)

    def entangler(self) -> list[Gate]:
        """Forward CNOT ladder then the reverse ladder; CNOT(0,1), CNOT(1,0) for two qubits."""
        n = self.n_qubits
        forward = [Gate.cnot(q, q + 1) for q in range(n - 1)]
        backward = [Gate.cnot(q + 1, q) for q in reversed(range(n - 1))]
        return forward + backward

    def circuit(self, params) -> list[Gate]:
        params = np.asarray(params, dtype=float).reshape(-1)
        if params.shape[0] != self.n_params:
            raise ValueError(
                f"ansatz with {self.n_qubits} qubits, depth {self.depth} takes "
                f"{self.n_params} angles, got {params.shape[0]}"
            )
        if not np.all(np.isfinite(params)):
            raise ValueError("angles must be finite")
        blocks = params.reshape(self.depth + 1, self.n_qubits, 3)
        gates: list[Gate] = []
        for layer in range(self.depth + 1):
            for q in range(self.n_qubits):
                a, b, c = blocks[layer, q]
                # U = RZ(c) RX(b) RZ(a): RZ(a) acts first
                gates += [Gate.rz(q, a), Gate.rx(q, b), Gate.rz(q, c)]
            if layer < self.depth:
                gates += self.entangler()
        return gates


def canonical_angles(params) -> np.ndarray:
    return np.mod(np.asarray(params, dtype=float), TWO_PI)


def prepare_ansatz(config: AnsatzConfig, params) -> StateVector:
    """Run the ansatz gate by gate on |0...0>."""
    return apply_circuit(StateVector.zero(config.n_qubits), config.circuit(params))


def block_unitaries(angles: np.ndarray) -> np.ndarray:
    """Closed form of RZ(c) RX(b) RZ(a) for a (..., 3) array of angles."""
    a, b, c = angles[..., 0], angles[..., 1], angles[..., 2]
    cb, sb = np.cos(b / 2), np.sin(b / 2)
    plus, minus = np.exp(-0.5j * (a + c)), np.exp(-0.5j * (c - a))
    u = np.empty(angles.shape[:-1] + (2, 2), dtype=complex)
    u[..., 0, 0] = cb * plus
    u[..., 0, 1] = -1j * sb * minus
    u[..., 1, 0] = -1j * sb * np.conj(minus)
    u[..., 1, 1] = cb * np.conj(plus)
    return u


@lru_cache(maxsize=None)
def _entangler_permutation(n_qubits: int) -> np.ndarray:
    # basis index k maps to perm^-1; new_amps = amps[perm]
    idx = np.arange(2**n_qubits)
    state = StateVector(n_qubits, idx.astype(complex))
    state = apply_circuit(state, AnsatzConfig(n_qubits, 1).entangler())
    return state.amplitudes.real.round().astype(int)


@lru_cache(maxsize=None)
def _layer_subscripts(n_qubits: int) -> str:
    letters = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ"
    outs, ins = letters[:n_qubits], letters[n_qubits : 2 * n_qubits]
    mats = ",".join(o + i for o, i in zip(outs, ins))
    return f"{mats},{ins}->{outs}"


def ansatz_amplitudes(config: AnsatzConfig, params) -> np.ndarray:
    """Same state as :func:`prepare_ansatz`, with each block fused into one 2x2."""
    params = np.asarray(params, dtype=float).reshape(-1)
    if params.shape[0] != config.n_params:
        raise ValueError(
            f"ansatz with {config.n_qubits} qubits, depth {config.depth} takes "
            f"{config.n_params} angles, got {params.shape[0]}"
        )
    n = config.n_qubits
    units = block_unitaries(params.reshape(config.depth + 1, n, 3))
    subscripts = _layer_subscripts(n)
    perm = _entangler_permutation(n)
    psi = np.zeros((2,) * n, dtype=complex)
    psi[(0,) * n] = 1.0
    for layer in range(config.depth + 1):
        psi = np.einsum(subscripts, *units[layer], psi)
        if layer < config.depth:
            psi = psi.reshape(-1)[perm].reshape((2,) * n)
    return psi.reshape(-1)


def _probabilities_from_hist(hist: ShotHistogram) -> dict[str, float]:
    if hist.shots <= 0 or not hist.counts:
        raise SimulatorError("empty histogram")
    return {k: v / hist.shots for k, v in hist.counts.items()}


def z_expectations_from_probabilities(p: dict[str, float]) -> tuple[float, float, float]:
    """(<Z0 I>, <I Z1>, <Z0 Z1>) from two-qubit outcome probabilities."""
    p00, p01, p10, p11 = (p.get(k, 0.0) for k in ("00", "01", "10", "11"))
    z0 = p00 + p01 - p10 - p11
    z1 = p00 - p01 + p10 - p11
    z0z1 = p00 - p01 - p10 + p11
    return z0, z1, z0z1


def estimate_pauli_z_expectations(hist: ShotHistogram) -> tuple[float, float, float]:
    if hist.n_qubits != 2:
        raise SimulatorError("Z-expectation formulas are defined for two qubits")
    return z_expectations_from_probabilities(_probabilities_from_hist(hist))


def z_pattern_expectation(p: dict[str, float], ops: str) -> float:
    """Expectation of an I/Z string from outcome probabilities, any width."""
    where = [k for k, c in enumerate(ops) if c == "Z"]
    total = 0.0
    for bits, prob in p.items():
        parity = sum(bits[k] == "1" for k in where) % 2
        total += -prob if parity else prob
    return total


@dataclass
class EnergyEstimate:
    energy: float
    term_expectations: dict[str, float]
    shots_per_term: int = 0
    variance: float | None = None
    extra: dict = field(default_factory=dict)


def _check_widths(h: PauliSum, n: int):
    if h.n_qubits != n:
        raise PauliError(f"Hamiltonian acts on {h.n_qubits} qubits, state has {n}")


def energy_from_histogram(h: PauliSum, hist: ShotHistogram) -> EnergyEstimate:
    """Sampled energy; every Z pattern is read off the same histogram."""
    _check_widths(h, hist.n_qubits)
    if not h.is_diagonal():
        raise PauliError(
            "shot-based estimation supports I/Z terms only; X/Y terms need basis rotations"
        )
    p = _probabilities_from_hist(hist)
    if hist.n_qubits == 2:
        z0, z1, z0z1 = z_expectations_from_probabilities(p)
        table = {"II": 1.0, "ZI": z0, "IZ": z1, "ZZ": z0z1}
        expectations = {ops: table[ops] for ops, _ in h}
    else:
        expectations = {ops: z_pattern_expectation(p, ops) for ops, _ in h}
    total = sum(coeff * expectations[ops] for ops, coeff in h)
    return EnergyEstimate(float(total), expectations, hist.shots)


def exact_energy(h: PauliSum, state: StateVector) -> EnergyEstimate:
    _check_widths(h, state.n_qubits)
    psi = state.amplitudes
    expectations = {}
    for ops, _ in h:
        if set(ops) <= {"I", "Z"}:
            signs = np.real(np.diag(string_matrix(ops)))
            value = float(np.dot(signs, np.abs(psi) ** 2))
        else:
            value = np.vdot(psi, string_matrix(ops) @ psi)
            if abs(value.imag) > 1e-10:
                raise PauliError("Pauli expectation has an imaginary residue")
            value = float(value.real)
        expectations[ops] = value
    total = sum(coeff * expectations[ops] for ops, coeff in h)
    return EnergyEstimate(float(total), expectations, 0)


def energy(h: PauliSum, source, shots: int = 0, seed: int = 0) -> EnergyEstimate:
    """Energy of a histogram, or of a state (exact if ``shots == 0``, else sampled)."""
    if isinstance(source, ShotHistogram):
        return energy_from_histogram(h, source)
    if shots == 0:
        return exact_energy(h, source)
    if not h.is_diagonal():
        raise PauliError(
            "shot-based estimation supports I/Z terms only; X/Y terms need basis rotations"
        )
    return energy_from_histogram(h, sample(source, shots, seed))


def variance(h: PauliSum, state: StateVector) -> float:
    """<H^2> - <H>^2 from the dense matrix."""
    _check_widths(h, state.n_qubits)
    psi = state.amplitudes
    h_psi = to_matrix(h) @ psi
    mean = np.vdot(psi, h_psi).real
    return float(np.vdot(h_psi, h_psi).real - mean**2)


def derived_seed(base_seed: int, counter: int) -> int:
    """Per-evaluation sampling seed from a run seed and an evaluation counter."""
    return int(np.random.SeedSequence([base_seed, counter]).generate_state(1)[0])


def energy_function(h: PauliSum, config: AnsatzConfig, shots: int = 0, seed: int = 0):
    """Return ``f(params) -> energy`` for use as an optimizer objective.

    With ``shots > 0`` the k-th call samples with ``derived_seed(seed, k)``,
    so a run is reproducible as long as calls happen in a fixed order.
    """
    _check_widths(h, config.n_qubits)
    if shots < 0:
        raise ValueError("shots must be >= 0")
    if shots and not h.is_diagonal():
        raise PauliError(
            "shot-based estimation supports I/Z terms only; X/Y terms need basis rotations"
        )
    if shots == 0 and h.is_diagonal():
        diag = np.real(np.diag(to_matrix(h)))

        def exact(params):
            psi = ansatz_amplitudes(config, params)
            return float(np.dot(diag, (psi * psi.conj()).real))

        return exact
    if shots == 0:
        mat = to_matrix(h)

        def exact_dense(params):
            psi = ansatz_amplitudes(config, params)
            return float(np.vdot(psi, mat @ psi).real)

        return exact_dense

    counter = itertools.count()

    def sampled(params):
        state = StateVector(config.n_qubits, ansatz_amplitudes(config, params))
        return energy_from_histogram(h, sample(state, shots, derived_seed(seed, next(counter)))).energy

    return sampled


def outcome_probabilities(state: StateVector) -> dict[str, float]:
    return {
        index_bitstring(i, state.n_qubits): float(p)
        for i, p in enumerate(state.probabilities())
    }
