"""Second-quantized fermion operators and their qubit encodings.

Factors are ``(mode, action)`` pairs with action 1 for creation and 0 for
annihilation, written in text as ``"0^ 1"``. Mode 0 is the most significant
bit of the occupation-number basis, matching the qubit ordering of
:mod:`hminus_vqe.statevector`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

from .pauli import PauliSum, multiply_strings, PHASES, string_matrix

MAX_MODES = 8
COEFF_TOL = 1e-14
HERMITIAN_TOL = 1e-10

Factor = tuple[int, int]
Factors = tuple[Factor, ...]


class FermionError(ValueError):
    pass


@dataclass(frozen=True)
class FermionTerm:
    coefficient: complex
    factors: Factors = ()

    def __str__(self):
        return f"{_fmt_coeff(self.coefficient)} " + " ".join(
            f"{m}^" if a else str(m) for m, a in self.factors
        )


def _fmt_coeff(c: complex) -> str:
    c = complex(c)
    return repr(c.real) if c.imag == 0 else repr(c)


class FermionOperator:
    """Sum of coefficient-weighted products of ladder operators."""

    def __init__(self, mode_count: int, terms: Mapping[Factors, complex] | Iterable = ()):
        if mode_count < 1:
            raise FermionError("mode_count must be positive")
        self.mode_count = mode_count
        items = terms.items() if isinstance(terms, Mapping) else terms
        merged: dict[Factors, complex] = {}
        for item in items:
            if isinstance(item, FermionTerm):
                factors, coeff = item.factors, item.coefficient
            else:
                factors, coeff = item
            factors = tuple((int(m), int(a)) for m, a in factors)
            for m, a in factors:
                if not 0 <= m < mode_count:
                    raise FermionError(f"mode {m} out of range for {mode_count} modes")
                if a not in (0, 1):
                    raise FermionError(f"action must be 0 or 1, got {a}")
            merged[factors] = merged.get(factors, 0) + complex(coeff)
        self._terms = {k: v for k, v in merged.items() if abs(v) >= COEFF_TOL}

    @classmethod
    def ladder(cls, mode_count: int, mode: int, create: bool) -> "FermionOperator":
        return cls(mode_count, {((mode, int(create)),): 1.0})

    @classmethod
    def identity(cls, mode_count: int, coeff: complex = 1.0) -> "FermionOperator":
        return cls(mode_count, {(): coeff})

    @property
    def terms(self) -> dict[Factors, complex]:
        return dict(self._terms)

    def __iter__(self):
        return iter(self._terms.items())

    def __len__(self):
        return len(self._terms)

    def _check(self, other):
        if self.mode_count != other.mode_count:
            raise FermionError("mode count mismatch")

    def __add__(self, other: "FermionOperator") -> "FermionOperator":
        self._check(other)
        return FermionOperator(self.mode_count, list(self) + list(other))

    def __sub__(self, other: "FermionOperator") -> "FermionOperator":
        return self + (-1.0) * other

    def __mul__(self, other):
        if isinstance(other, FermionOperator):
            self._check(other)
            out = [(fa + fb, ca * cb) for fa, ca in self for fb, cb in other]
            return FermionOperator(self.mode_count, out)
        return FermionOperator(self.mode_count, [(f, c * other) for f, c in self])

    __rmul__ = __mul__

    def adjoint(self) -> "FermionOperator":
        return FermionOperator(
            self.mode_count,
            [(tuple((m, 1 - a) for m, a in reversed(f)), np.conj(c)) for f, c in self],
        )

    def isclose(self, other: "FermionOperator", atol: float = 1e-12) -> bool:
        diff = self - other
        return all(abs(c) <= atol for _, c in diff)

    def is_hermitian(self, atol: float = 1e-12) -> bool:
        return normal_order(self).isclose(normal_order(self.adjoint()), atol)

    def to_text(self) -> str:
        return "\n".join(str(FermionTerm(c, f)) for f, c in self._terms.items())

    @classmethod
    def from_text(cls, text: str, mode_count: int | None = None) -> "FermionOperator":
        """Parse ``<coeff> <factor>...`` lines such as ``0.5 0^ 1^ 1 0``."""
        terms = []
        highest = -1
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            head, *rest = line.split()
            try:
                coeff = complex(head)
                factors = tuple(
                    (int(tok[:-1]), 1) if tok.endswith("^") else (int(tok), 0)
                    for tok in rest
                )
            except ValueError as exc:
                raise FermionError(f"line {lineno}: cannot parse {line!r}") from exc
            highest = max([highest] + [m for m, _ in factors])
            terms.append((factors, coeff))
        n = mode_count if mode_count is not None else max(highest + 1, 1)
        return cls(n, terms)

    def __repr__(self):
        return f"FermionOperator({self.mode_count}, {self._terms!r})"


def _order_term(factors: Factors, coeff: complex) -> list[tuple[Factors, complex]]:
    """Normal-order one product; may branch into several terms."""
    factors = list(factors)
    n = len(factors)
    for i in range(1, n):
        j = i
        while j > 0:
            (m_l, a_l), (m_r, a_r) = factors[j - 1], factors[j]
            # target: creators left, then higher mode index first
            if (a_r, m_r) > (a_l, m_l):
                if m_l == m_r and a_l == 0 and a_r == 1:
                    # a_m a_m^ = 1 - a_m^ a_m
                    contracted = tuple(factors[: j - 1] + factors[j + 1:])
                    swapped = factors[: j - 1] + [factors[j], factors[j - 1]] + factors[j + 1:]
                    return _order_term(contracted, coeff) + _order_term(tuple(swapped), -coeff)
                factors[j - 1], factors[j] = factors[j], factors[j - 1]
                coeff = -coeff
                j -= 1
            elif (a_r, m_r) == (a_l, m_l):
                return []
            else:
                break
    return [(tuple(factors), coeff)]


def normal_order(op: FermionOperator) -> FermionOperator:
    """Creation operators left of annihilators, each block by descending mode."""
    out = []
    for factors, coeff in op:
        out.extend(_order_term(factors, coeff))
    return FermionOperator(op.mode_count, out)


# --- dense Fock-space oracle ---------------------------------------------


def ladder_matrix(mode_count: int, mode: int, create: bool) -> np.ndarray:
    """Matrix of a single ladder operator, built by enumerating occupations."""
    dim = 2**mode_count
    mat = np.zeros((dim, dim), dtype=complex)
    for idx in range(dim):
        occ = [(idx >> (mode_count - 1 - k)) & 1 for k in range(mode_count)]
        if occ[mode] == int(create):
            continue
        sign = (-1) ** sum(occ[:mode])
        occ[mode] = int(create)
        new = int("".join(map(str, occ)), 2)
        mat[new, idx] = sign
    return mat


def fock_matrix(op: FermionOperator) -> np.ndarray:
    dim = 2**op.mode_count
    ladders = {
        (m, a): ladder_matrix(op.mode_count, m, bool(a))
        for m in range(op.mode_count)
        for a in (0, 1)
    }
    out = np.zeros((dim, dim), dtype=complex)
    for factors, coeff in op:
        mat = np.eye(dim, dtype=complex)
        for f in factors:
            mat = mat @ ladders[f]
        out += coeff * mat
    return out


# --- qubit encodings -----------------------------------------------------

ComplexTerms = dict[str, complex]


def _product(a: ComplexTerms, b: ComplexTerms) -> ComplexTerms:
    out: ComplexTerms = {}
    for sa, ca in a.items():
        for sb, cb in b.items():
            k, s = multiply_strings(sa, sb)
            out[s] = out.get(s, 0) + ca * cb * PHASES[k]
    return {s: c for s, c in out.items() if abs(c) >= COEFF_TOL}


def _letters(n: int, placed: Mapping[int, str]) -> str:
    return "".join(placed.get(q, "I") for q in range(n))


def terms_matrix(terms: ComplexTerms, n_qubits: int) -> np.ndarray:
    dim = 2**n_qubits
    out = np.zeros((dim, dim), dtype=complex)
    for s, c in terms.items():
        out += c * string_matrix(s)
    return out


def _encode(op: FermionOperator, ladder_image) -> ComplexTerms:
    n = op.mode_count
    identity = "I" * n
    total: ComplexTerms = {}
    for factors, coeff in op:
        acc: ComplexTerms = {identity: complex(coeff)}
        for mode, action in factors:
            acc = _product(acc, ladder_image(mode, action))
        for s, c in acc.items():
            total[s] = total.get(s, 0) + c
    return {s: c for s, c in total.items() if abs(c) >= COEFF_TOL}


def _to_pauli_sum(terms: ComplexTerms, n: int) -> PauliSum:
    worst = max((abs(c.imag) for c in terms.values()), default=0.0)
    if worst > HERMITIAN_TOL:
        raise FermionError(
            f"encoded operator is not Hermitian (imaginary residue {worst:.3e})"
        )
    return PauliSum(n, {s: c.real for s, c in terms.items()})


def jordan_wigner_terms(op: FermionOperator) -> ComplexTerms:
    """Jordan-Wigner image with complex coefficients (any operator)."""
    n = op.mode_count
    if n > MAX_MODES:
        raise FermionError(f"at most {MAX_MODES} modes supported")

    def image(mode: int, action: int) -> ComplexTerms:
        # a = (X + iY)/2 on the mode's qubit, Z on every lower qubit
        zs = {q: "Z" for q in range(mode)}
        sign = -1j if action else 1j
        return {
            _letters(n, {**zs, mode: "X"}): 0.5,
            _letters(n, {**zs, mode: "Y"}): 0.5 * sign,
        }

    return _encode(op, image)


def jordan_wigner(op: FermionOperator) -> PauliSum:
    return _to_pauli_sum(jordan_wigner_terms(op), op.mode_count)


@dataclass(frozen=True)
class EncodingMatrix:
    """Binary matrix mapping occupation numbers to stored qubit values."""

    kind: str
    entries: tuple[tuple[int, ...], ...]

    @property
    def n(self) -> int:
        return len(self.entries)

    def array(self) -> np.ndarray:
        return np.array(self.entries, dtype=np.uint8)

    def rows(self) -> list[str]:
        return ["".join(map(str, r)) for r in self.entries]


ENCODING_KINDS = ("jordan_wigner", "parity", "bravyi_kitaev")


def _bk_matrix(n: int) -> np.ndarray:
    size = 1
    beta = np.ones((1, 1), dtype=np.uint8)
    while size < n:
        nxt = np.zeros((2 * size, 2 * size), dtype=np.uint8)
        nxt[:size, :size] = beta
        nxt[size:, size:] = beta
        nxt[2 * size - 1, :size] = 1
        beta, size = nxt, 2 * size
    return beta[:n, :n]


def build_encoding_matrix(kind: str, n: int) -> EncodingMatrix:
    if not 1 <= n <= MAX_MODES:
        raise FermionError(f"unsupported mode count {n}; need 1..{MAX_MODES}")
    if kind == "parity":
        mat = np.tril(np.ones((n, n), dtype=np.uint8))
    elif kind == "bravyi_kitaev":
        mat = _bk_matrix(n)
    elif kind == "jordan_wigner":
        mat = np.eye(n, dtype=np.uint8)
    else:
        raise FermionError(f"unknown encoding kind {kind!r}")
    return EncodingMatrix(kind, tuple(tuple(int(v) for v in row) for row in mat))


def gf2_inverse(mat: np.ndarray) -> np.ndarray:
    n = mat.shape[0]
    aug = np.concatenate([mat.astype(np.uint8) % 2, np.eye(n, dtype=np.uint8)], axis=1)
    for col in range(n):
        pivots = np.nonzero(aug[col:, col])[0]
        if pivots.size == 0:
            raise FermionError("encoding matrix is singular over GF(2)")
        p = col + pivots[0]
        aug[[col, p]] = aug[[p, col]]
        for r in range(n):
            if r != col and aug[r, col]:
                aug[r] ^= aug[col]
    return aug[:, n:]


def encoding_sets(matrix: EncodingMatrix, mode: int) -> tuple[set[int], set[int], set[int]]:
    """Update, parity and flip qubit sets of ``mode``.

    update: qubits whose stored value changes when the mode's occupation flips.
    parity: qubits whose XOR equals the occupation parity of lower modes.
    flip:   qubits whose XOR equals the mode's own occupation.
    """
    a = matrix.array()
    inv = gf2_inverse(a)
    update = set(np.nonzero(a[:, mode])[0].tolist())
    parity = set(np.nonzero(inv[:mode].sum(axis=0) % 2)[0].tolist())
    flip = set(np.nonzero(inv[mode])[0].tolist())
    return update, parity, flip


def encoded_ladder(matrix: EncodingMatrix, mode: int, create: bool) -> ComplexTerms:
    """Qubit image of one ladder operator under a binary encoding.

    a_m^ = X_U . Z_P . (1 + Z_F)/2: project onto an empty mode, apply the
    lower-mode parity sign, then flip every qubit that stores mode ``m``.
    The annihilator projects onto an occupied mode before the same flip.
    """
    n = matrix.n
    update, parity, flip = encoding_sets(matrix, mode)
    x_u = {_letters(n, {q: "X" for q in update}): 1.0}
    z_p = {_letters(n, {q: "Z" for q in parity}): 1.0}
    proj = {
        "I" * n: 0.5,
        _letters(n, {q: "Z" for q in flip}): 0.5 if create else -0.5,
    }
    # annihilator: project onto an occupied mode instead, then the same flip
    return _product(_product(x_u, z_p), proj)


def encoded_terms(op: FermionOperator, matrix: EncodingMatrix) -> ComplexTerms:
    if op.mode_count != matrix.n:
        raise FermionError(
            f"operator has {op.mode_count} modes, encoding matrix is {matrix.n}x{matrix.n}"
        )
    images = {
        (m, a): encoded_ladder(matrix, m, bool(a))
        for m in range(matrix.n)
        for a in (0, 1)
    }
    return _encode(op, lambda m, a: images[(m, a)])


def encoded_transform(op: FermionOperator, matrix: EncodingMatrix) -> PauliSum:
    return _to_pauli_sum(encoded_terms(op, matrix), op.mode_count)


def encode(op: FermionOperator, encoding: str) -> PauliSum:
    """Encode by name: ``jordan_wigner``, ``parity`` or ``bravyi_kitaev``."""
    if encoding == "jordan_wigner":
        return jordan_wigner(op)
    return encoded_transform(op, build_encoding_matrix(encoding, op.mode_count))
