import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hminus_vqe.linalg import hermitian_eigenvalues, jacobi_symmetric
from hminus_vqe.pauli import (
    PauliError,
    PauliSum,
    PauliTerm,
    eigenvalues,
    exact_expectation,
    min_eigenvalue,
    multiply,
    term_matrix,
    to_matrix,
)
from hminus_vqe.statevector import Gate, StateVector, apply_circuit

from conftest import pauli_oracle, random_state


def term_oracle(t: PauliTerm):
    return (1j ** t.phase) * pauli_oracle(t.ops)


@pytest.mark.parametrize(
    "a, b, expected",
    [
        (PauliTerm("X"), PauliTerm("Y"), PauliTerm("Z", 1)),
        (PauliTerm("Z"), PauliTerm("Z"), PauliTerm("I", 0)),
        (PauliTerm("Y"), PauliTerm("X"), PauliTerm("Z", 3)),
        (PauliTerm("XZ"), PauliTerm("YZ"), PauliTerm("ZI", 1)),
    ],
)
def test_multiply_known_products(a, b, expected):
    assert multiply(a, b) == expected


def test_xz_times_yz_matrix_oracle():
    got = term_oracle(multiply(PauliTerm("XZ"), PauliTerm("YZ")))
    np.testing.assert_allclose(got, pauli_oracle("XZ") @ pauli_oracle("YZ"))


def test_width_mismatch():
    with pytest.raises(PauliError):
        multiply(PauliTerm("X"), PauliTerm("XX"))


def test_phase_normalized_to_cyclic_group():
    assert PauliTerm("X", 7).phase == 3
    assert PauliTerm("X", -1).phase_value == -1j


terms = lambda w: st.builds(PauliTerm, st.text("IXYZ", min_size=w, max_size=w), st.integers(0, 3))


@settings(max_examples=200)
@given(st.integers(1, 4).flatmap(lambda w: st.tuples(terms(w), terms(w), terms(w))))
def test_associativity(abc):
    a, b, c = abc
    assert multiply(multiply(a, b), c) == multiply(a, multiply(b, c))


@settings(max_examples=200)
@given(st.integers(1, 3).flatmap(lambda w: st.tuples(terms(w), terms(w))))
def test_matrix_homomorphism(ab):
    a, b = ab
    np.testing.assert_allclose(
        term_matrix(multiply(a, b)), term_oracle(a) @ term_oracle(b), atol=1e-12
    )


def test_to_matrix_examples():
    np.testing.assert_allclose(to_matrix(PauliSum(1, {"Z": 1.0})), np.diag([1, -1]))
    half = PauliSum(2, {"II": 0.5, "ZI": -0.5})
    np.testing.assert_allclose(to_matrix(half), np.diag([0, 0, 1, 1]))


def test_canonicalization_merges_and_drops():
    s = PauliSum(2, [("ZI", 0.5), ("ZI", 0.25), ("XX", 1e-15), ("IZ", 1.0), ("IZ", -1.0)])
    assert s.terms == {"ZI": 0.75}
    s2 = PauliSum(1, [("X", 1 + 1e-13j)])
    assert s2.terms == {"X": 1.0}
    with pytest.raises(PauliError):
        PauliSum(1, [("X", 1 + 1e-6j)])


def test_phased_terms_fold_into_coefficients():
    s = PauliSum(1, [(PauliTerm("Z", 2), 0.5)])
    assert s.terms == {"Z": -0.5}


@settings(max_examples=100)
@given(
    st.integers(1, 3).flatmap(
        lambda w: st.dictionaries(
            st.text("IXYZ", min_size=w, max_size=w), st.floats(-5, 5), min_size=1, max_size=6
        )
    )
)
def test_to_matrix_is_hermitian(terms):
    w = len(next(iter(terms)))
    m = to_matrix(PauliSum(w, terms))
    np.testing.assert_allclose(m, m.conj().T, atol=1e-12)


def test_exact_expectation_examples():
    assert exact_expectation(StateVector.zero(2), PauliSum(2, {"ZI": 1.0})) == 1.0
    bell = apply_circuit(StateVector.zero(2), [Gate("H", (0,)), Gate.cnot(0, 1)])
    assert exact_expectation(bell, PauliSum(2, {"ZZ": 1.0})) == pytest.approx(1.0)
    with pytest.raises(PauliError):
        exact_expectation(bell, PauliSum(1, {"Z": 1.0}))


def test_expectation_within_spectrum(rng):
    h = PauliSum(3, {"XXI": 0.7, "ZIZ": -0.3, "IYY": 0.2, "ZZZ": 0.5, "III": -0.1})
    spectrum = np.linalg.eigvalsh(pauli_oracle("XXI") * 0.7 + pauli_oracle("ZIZ") * -0.3
                                  + pauli_oracle("IYY") * 0.2 + pauli_oracle("ZZZ") * 0.5
                                  - 0.1 * np.eye(8))
    for _ in range(1000):
        e = exact_expectation(random_state(rng, 3), h)
        assert spectrum[0] - 1e-12 <= e <= spectrum[-1] + 1e-12


def test_min_eigenvalue_examples():
    assert min_eigenvalue(PauliSum(1, {"Z": 1.0})) == pytest.approx(-1.0, abs=1e-12)
    eq16_physical = PauliSum(2, {"II": -0.421875, "ZI": 0.171875, "IZ": 0.171875, "ZZ": 0.078125})
    np.testing.assert_allclose(np.diag(to_matrix(eq16_physical)).real, [0, -0.5, -0.5, -0.6875])
    assert min_eigenvalue(eq16_physical) == pytest.approx(-0.6875, abs=1e-10)


def test_too_wide_for_oracle():
    with pytest.raises(PauliError):
        to_matrix(PauliSum(9, {"Z" * 9: 1.0}))


def test_jacobi_matches_lapack(rng):
    for n in (1, 2, 5, 16):
        a = rng.normal(size=(n, n))
        a = a + a.T
        np.testing.assert_allclose(jacobi_symmetric(a), np.linalg.eigvalsh(a), atol=1e-10)
    c = rng.normal(size=(8, 8)) + 1j * rng.normal(size=(8, 8))
    c = c + c.conj().T
    np.testing.assert_allclose(hermitian_eigenvalues(c), np.linalg.eigvalsh(c), atol=1e-10)


def test_jacobi_on_pauli_sum_with_degenerate_spectrum():
    h = PauliSum(2, {"XX": 1.0, "YY": 1.0, "ZZ": 1.0})
    np.testing.assert_allclose(eigenvalues(h), [-3, 1, 1, 1], atol=1e-12)


def test_text_round_trip():
    h = PauliSum(2, {"II": 0.578125, "ZI": -0.328125, "IZ": -0.328125, "ZZ": 0.078125})
    text = h.to_text()
    assert "-0.328125 ZI" in text.splitlines()
    assert PauliSum.from_text(text) == h


def test_jacobi_large_diagonal_tiny_coupling():
    a = np.diag([40.0, -3.0, 7.5, 0.25])
    a[0, 1] = a[1, 0] = 1e-9
    np.testing.assert_allclose(jacobi_symmetric(a), np.linalg.eigvalsh(a), atol=1e-12)
