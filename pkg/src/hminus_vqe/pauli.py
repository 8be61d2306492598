"""Pauli strings with exact phase tracking and real-weighted Pauli sums.

A string such as ``"ZI"`` puts letter ``k`` on qubit ``k`` (qubit 0 leftmost,
most significant in the state vector). Phases are stored as an exponent
``k`` meaning ``i**k`` so long products never accumulate rounding error.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Mapping

import numpy as np

from .linalg import hermitian_eigenvalues
from .statevector import MAX_QUBITS, StateVector

LETTERS = "IXYZ"
PHASES = (1, 1j, -1, -1j)
CANON_TOL = 1e-14
HERMITIAN_TOL = 1e-12

_SINGLE = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

# (a, b) -> (phase exponent, letter) for the single-qubit product a*b
_PRODUCT = {}
for _a in LETTERS:
    _PRODUCT[("I", _a)] = (0, _a)
    _PRODUCT[(_a, "I")] = (0, _a)
    _PRODUCT[(_a, _a)] = (0, "I")
for _a, _b, _c in (("X", "Y", "Z"), ("Y", "Z", "X"), ("Z", "X", "Y")):
    _PRODUCT[(_a, _b)] = (1, _c)
    _PRODUCT[(_b, _a)] = (3, _c)


class PauliError(ValueError):
    pass


def multiply_strings(a: str, b: str) -> tuple[int, str]:
    """Product of two bare Pauli strings as ``(phase exponent, string)``."""
    if len(a) != len(b):
        raise PauliError(f"width mismatch: {len(a)} vs {len(b)}")
    k = 0
    out = []
    for x, y in zip(a, b):
        dk, letter = _PRODUCT[(x, y)]
        k += dk
        out.append(letter)
    return k % 4, "".join(out)


@dataclass(frozen=True)
class PauliTerm:
    ops: str
    phase: int = 0

    def __post_init__(self):
        if not self.ops or set(self.ops) - set(LETTERS):
            raise PauliError(f"bad Pauli string {self.ops!r}")
        if not isinstance(self.phase, (int, np.integer)):
            raise PauliError("phase must be an integer exponent of i")
        object.__setattr__(self, "phase", int(self.phase) % 4)

    @property
    def width(self) -> int:
        return len(self.ops)

    @property
    def phase_value(self) -> complex:
        return PHASES[self.phase]

    def __mul__(self, other: "PauliTerm") -> "PauliTerm":
        return multiply(self, other)

    def __str__(self):
        return ("", "i", "-", "-i")[self.phase] + self.ops


def multiply(a: PauliTerm, b: PauliTerm) -> PauliTerm:
    k, ops = multiply_strings(a.ops, b.ops)
    return PauliTerm(ops, a.phase + b.phase + k)


def string_matrix(ops: str) -> np.ndarray:
    return reduce(np.kron, (_SINGLE[c] for c in ops))


def term_matrix(term: PauliTerm) -> np.ndarray:
    return term.phase_value * string_matrix(term.ops)


class PauliSum:
    """Real-weighted sum of Pauli strings, canonical on construction.

    Duplicate strings are merged and coefficients below ``1e-14`` in
    magnitude dropped. Complex input is accepted only if every imaginary
    part is below ``1e-12``.
    """

    def __init__(self, n_qubits: int, terms: Mapping[str, complex] | Iterable = ()):
        if not 1 <= n_qubits:
            raise PauliError("n_qubits must be positive")
        self.n_qubits = n_qubits
        items = terms.items() if isinstance(terms, Mapping) else terms
        merged: dict[str, complex] = {}
        for ops, coeff in items:
            if isinstance(ops, PauliTerm):
                coeff = coeff * ops.phase_value
                ops = ops.ops
            if len(ops) != n_qubits or set(ops) - set(LETTERS):
                raise PauliError(f"bad Pauli string {ops!r} for {n_qubits} qubits")
            merged[ops] = merged.get(ops, 0) + coeff
        clean = {}
        for ops, coeff in merged.items():
            coeff = complex(coeff)
            if abs(coeff.imag) > HERMITIAN_TOL:
                raise PauliError(
                    f"non-Hermitian residue {coeff.imag:.3e} on {ops}"
                )
            if abs(coeff.real) >= CANON_TOL:
                clean[ops] = coeff.real
        self._terms = dict(sorted(clean.items()))

    @property
    def terms(self) -> dict[str, float]:
        return dict(self._terms)

    def coefficient(self, ops: str) -> float:
        return self._terms.get(ops, 0.0)

    def __len__(self):
        return len(self._terms)

    def __iter__(self):
        return iter(self._terms.items())

    def __eq__(self, other):
        if not isinstance(other, PauliSum):
            return NotImplemented
        return self.n_qubits == other.n_qubits and self._terms == other._terms

    def isclose(self, other: "PauliSum", atol: float = 1e-12) -> bool:
        if self.n_qubits != other.n_qubits:
            return False
        keys = set(self._terms) | set(other._terms)
        return all(
            abs(self.coefficient(k) - other.coefficient(k)) <= atol for k in keys
        )

    def __add__(self, other: "PauliSum") -> "PauliSum":
        if self.n_qubits != other.n_qubits:
            raise PauliError("width mismatch")
        return PauliSum(self.n_qubits, list(self) + list(other))

    def __rmul__(self, scalar: float) -> "PauliSum":
        return PauliSum(self.n_qubits, [(k, scalar * v) for k, v in self])

    def is_diagonal(self) -> bool:
        return all(set(ops) <= {"I", "Z"} for ops in self._terms)

    def to_text(self) -> str:
        """One ``<coefficient> <letters>`` line per term."""
        return "\n".join(f"{coeff!r} {ops}" for ops, coeff in self._terms.items())

    @classmethod
    def from_text(cls, text: str) -> "PauliSum":
        rows = [line.split() for line in text.splitlines() if line.strip()]
        if not rows:
            raise PauliError("empty Pauli sum text")
        n = len(rows[0][1])
        return cls(n, [(ops, float(c)) for c, ops in rows])

    def __repr__(self):
        return f"PauliSum({self.n_qubits}, {self._terms!r})"


def to_matrix(h: PauliSum) -> np.ndarray:
    if h.n_qubits > MAX_QUBITS:
        raise PauliError(f"register too wide for dense oracle ({h.n_qubits} > {MAX_QUBITS})")
    dim = 2**h.n_qubits
    out = np.zeros((dim, dim), dtype=complex)
    for ops, coeff in h:
        out += coeff * string_matrix(ops)
    return out


def exact_expectation(state: StateVector, h: PauliSum) -> float:
    if state.n_qubits != h.n_qubits:
        raise PauliError("state and operator widths differ")
    psi = state.amplitudes
    value = np.vdot(psi, to_matrix(h) @ psi)
    if abs(value.imag) > 1e-10:
        raise PauliError(f"expectation has imaginary residue {value.imag:.3e}")
    return float(value.real)


def eigenvalues(h: PauliSum) -> np.ndarray:
    return hermitian_eigenvalues(to_matrix(h))


def min_eigenvalue(h: PauliSum) -> float:
    return float(eigenvalues(h)[0])
