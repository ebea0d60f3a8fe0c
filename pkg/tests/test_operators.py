import math

import numpy as np
import pytest

from manyletter import (
    CapacityError,
    MessageMatrix,
    Observable,
    ShapeMismatchError,
    SpaceShape,
    ValidationError,
    basis_state,
    canonical_matrix,
    commutator_norm,
    ensemble_average,
    expectation,
    expected_length,
    grand_canonical_matrix,
    length_operator,
    length_projector,
    letter_matrix,
    message_matrix,
    superpose,
)
from manyletter import tolerances as tol

from .conftest import ensemble_from_terms, random_ensemble_terms, random_terms, state_from_terms
from .oracles import enumerate_strings

S = 1 / math.sqrt(2)


def test_length_operator_diagonal():
    L = length_operator(SpaceShape(2, 2))
    np.testing.assert_array_equal(L.diagonal, [0, 1, 1, 2, 2, 2, 2])
    np.testing.assert_array_equal(length_operator(SpaceShape(3, 0)).to_dense(), [[0]])


@pytest.mark.parametrize("K, N", [(1, 4), (2, 4), (3, 3), (4, 2)])
def test_length_multiplicities(K, N):
    L = length_operator(SpaceShape(K, N))
    values, counts = np.unique(L.diagonal, return_counts=True)
    assert list(values) == list(range(N + 1))
    assert list(counts) == [K**n for n in range(N + 1)]


def test_length_operator_is_sum_of_weighted_projectors():
    shape = SpaceShape(3, 3)
    total = sum(n * length_projector(shape, n).to_observable().diagonal for n in range(4))
    np.testing.assert_array_equal(total, length_operator(shape).diagonal)


def test_projector_algebra():
    shape = SpaceShape(2, 3)
    P = [length_projector(shape, n).to_observable().to_dense() for n in range(4)]
    for n in range(4):
        for m in range(4):
            expected = P[n] if n == m else np.zeros_like(P[n])
            np.testing.assert_allclose(P[n] @ P[m], expected, atol=tol.HERM)
    np.testing.assert_allclose(sum(P), np.eye(shape.D), atol=tol.HERM)
    assert [length_projector(shape, n).trace() for n in range(4)] == [1, 2, 4, 8]


def test_projector_examples():
    shape = SpaceShape(2, 2)
    phi = superpose([(1, basis_state(shape, (0,))), (1, basis_state(shape, (0, 0)))])
    out = length_projector(shape, 1).apply(phi)
    assert not out.normalized
    assert out.amplitudes == pytest.approx({1: S})
    empty = basis_state(shape, ())
    assert length_projector(shape, 0)(empty).amplitudes == {0: 1}
    assert length_projector(SpaceShape(2, 2), 2).trace() == 4
    with pytest.raises(ValidationError):
        length_projector(shape, 3)


def test_projector_weights_sum_to_one(nprng):
    for _ in range(50):
        K, N = int(nprng.integers(1, 4)), int(nprng.integers(0, 5))
        phi = state_from_terms(random_terms(nprng, K, N), K, N)
        total = sum(length_projector(phi.shape, n)(phi).norm_squared() for n in range(N + 1))
        assert total == pytest.approx(1, abs=tol.NORM)


def test_expectation_examples():
    shape = SpaceShape(2, 2)
    L = length_operator(shape)
    assert expectation(L, basis_state(shape, (0, 0))) == 2
    phi = superpose([(1, basis_state(shape, (0,))), (1, basis_state(shape, (0, 0)))])
    assert expectation(L, phi) == pytest.approx(1.5)
    assert expectation(Observable.identity(shape), phi) == pytest.approx(1)
    # dense path agrees with diagonal path
    Ld = Observable(shape, matrix=L.to_dense())
    assert expectation(Ld, phi) == pytest.approx(1.5)


def test_expectation_matches_component_formula(nprng):
    for _ in range(100):
        K, N = int(nprng.integers(1, 4)), int(nprng.integers(0, 5))
        terms = random_terms(nprng, K, N)
        phi = state_from_terms(terms, K, N)
        direct = sum(abs(a) ** 2 * len(s) for s, a in terms.items())
        assert expectation(length_operator(phi.shape), phi) == pytest.approx(direct, abs=1e-10)


def test_expectation_rejects_non_hermitian_and_mismatch():
    shape = SpaceShape(1, 1)
    with pytest.raises(ValidationError):
        Observable(shape, matrix=[[0, 1], [0, 0]])
    with pytest.raises(ShapeMismatchError):
        expectation(length_operator(SpaceShape(2, 1)), basis_state(shape, ()))


def test_from_dense_hermitizes_small_asymmetry():
    shape = SpaceShape(1, 1)
    A = Observable.from_dense(shape, [[1, 1e-9], [0, 2]], hermitize=True)
    np.testing.assert_allclose(A.matrix, [[1, 5e-10], [5e-10, 2]])
    with pytest.raises(ValidationError):
        Observable.from_dense(shape, [[1, 1e-6], [0, 2]], hermitize=True)


def test_ensemble_average_examples(qubit):
    shape = SpaceShape(2, 2)
    zz = MessageMatrix.pure(basis_state(shape, (0, 0)))
    assert ensemble_average(Observable.identity(shape), zz) == pytest.approx(1)
    assert ensemble_average(length_operator(shape), zz) == pytest.approx(2)
    sigma = grand_canonical_matrix(letter_matrix(qubit, [0.5, 0.5]), [0.5, 0.25, 0.25])
    assert ensemble_average(length_operator(sigma.shape), sigma) == pytest.approx(0.75)


def test_ensemble_average_is_weighted_expectation(nprng):
    for _ in range(30):
        K, N = int(nprng.integers(1, 4)), int(nprng.integers(0, 4))
        entries = random_ensemble_terms(nprng, K, N)
        ens = ensemble_from_terms(entries, K, N)
        sigma = message_matrix(ens)
        M = nprng.normal(size=(ens.shape.D,) * 2) + 1j * nprng.normal(size=(ens.shape.D,) * 2)
        A = Observable(ens.shape, matrix=M + M.conj().T)
        direct = sum(p * expectation(A, st) for st, p in ens.entries)
        assert ensemble_average(A, sigma) == pytest.approx(direct, abs=1e-10)


def test_expected_length_examples(qubit):
    shape = SpaceShape(2, 3)
    assert expected_length(basis_state(shape, ())) == 0
    phi = superpose([(1, basis_state(shape, (0,))), (1, basis_state(shape, (1, 1)))])
    assert expected_length(phi) == pytest.approx(1.5)
    sigma = canonical_matrix(letter_matrix(qubit, [0.3, 0.7]), 3, max_length=4)
    assert expected_length(sigma) == pytest.approx(3)


def test_commutator_norm_examples():
    shape = SpaceShape(2, 2)
    L = length_operator(shape)
    assert commutator_norm(L, L) == 0
    for n in range(3):
        assert commutator_norm(L, length_projector(shape, n)) == 0
    phi = superpose([(1, basis_state(shape, (0,))), (1, basis_state(shape, (0, 0)))])
    sigma = MessageMatrix.pure(phi)
    # brute force: dense products
    Ld = np.diag([0, 1, 1, 2, 2, 2, 2]).astype(complex)
    brute = np.max(np.abs(Ld @ sigma.matrix - sigma.matrix @ Ld))
    assert brute == pytest.approx(0.5)
    assert commutator_norm(L, sigma) == pytest.approx(brute)
    assert commutator_norm(sigma, L) == pytest.approx(brute)
    assert commutator_norm(Observable(shape, matrix=Ld), sigma) == pytest.approx(brute)


def test_dense_cap():
    big = SpaceShape(2, 12)  # D = 8191
    L = length_operator(big)  # diagonal is fine
    assert L.diagonal.size == 8191
    with pytest.raises(CapacityError):
        L.to_dense()
    with pytest.raises(CapacityError):
        Observable(big, matrix=np.zeros((1, 1)))


def test_sparse_length_expectation_beyond_dense_cap():
    shape = SpaceShape(4, 8)  # D = 87381
    phi = superpose([(1, basis_state(shape, (3,) * 8)), (1, basis_state(shape, ()))])
    assert expected_length(phi) == pytest.approx(4)


def test_enumeration_independent_length_check():
    shape = SpaceShape(3, 3)
    strings = enumerate_strings(3, 3)
    np.testing.assert_array_equal(length_operator(shape).diagonal, [len(s) for s in strings])
