import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from sfqec import hilbert
from sfqec.errors import DimensionMismatchError, InvalidDimensionError, NotPSDError

finite = st.floats(-2, 2, allow_nan=False, allow_infinity=False)


def hermitian_from(re, im):
    m = re + 1j * im
    return 0.5 * (m + m.conj().T)


def test_ladder_operators():
    dim = 12
    a, ad, n = hilbert.annihilation(dim), hilbert.creation(dim), hilbert.number(dim)
    assert np.allclose(ad, a.conj().T)
    assert np.allclose(ad @ a, n)
    comm = a @ ad - ad @ a
    # truncation leaves the last diagonal entry at -(dim - 1)
    assert np.allclose(np.diag(comm)[:-1], 1)
    assert comm[-1, -1] == pytest.approx(1 - dim)
    assert np.allclose(np.diag(n), np.arange(dim))
    assert np.allclose(hilbert.identity(dim), np.eye(dim))


@pytest.mark.parametrize("dim", [0, 1, -3, 2.5, "4"])
def test_invalid_dimension(dim):
    with pytest.raises(InvalidDimensionError):
        hilbert.annihilation(dim)


def test_matrix_exponential_diagonal_and_nilpotent():
    d = np.diag([0.1, -1.0, 2.0 + 1j])
    assert np.allclose(hilbert.matrix_exponential(d), np.diag(np.exp(np.diag(d))))
    nil = np.array([[0, 1.0], [0, 0]])
    assert np.allclose(hilbert.matrix_exponential(nil), [[1, 1], [0, 1]])


@settings(max_examples=30, deadline=None)
@given(arrays(float, (4, 4), elements=finite), arrays(float, (4, 4), elements=finite))
def test_matrix_exponential_of_anti_hermitian_is_unitary(re, im):
    h = hermitian_from(re, im)
    u = hilbert.matrix_exponential(1j * h)
    assert np.allclose(u.conj().T @ u, np.eye(4), atol=1e-10)
    # Taylor series oracle
    series, term = np.eye(4, dtype=complex), np.eye(4, dtype=complex)
    for k in range(1, 60):
        term = term @ (1j * h) / k
        series = series + term
    assert np.allclose(u, series, atol=1e-9)


@settings(max_examples=30, deadline=None)
@given(arrays(float, (5, 5), elements=finite), arrays(float, (5, 5), elements=finite))
def test_hermitian_sqrt_squares_back(re, im):
    m = re + 1j * im
    psd = m @ m.conj().T
    root = hilbert.hermitian_sqrt(psd)
    assert hilbert.is_hermitian(root)
    assert np.allclose(root @ root, psd, atol=1e-8 * max(1.0, np.abs(psd).max()))
    assert np.linalg.eigvalsh(root).min() >= -1e-12


def test_hermitian_sqrt_rejects_negative_and_clips_roundoff():
    with pytest.raises(NotPSDError):
        hilbert.hermitian_sqrt(np.diag([1.0, -0.5]))
    root = hilbert.hermitian_sqrt(np.diag([1.0, -1e-14]))
    assert np.allclose(root, np.diag([1.0, 0.0]))


def test_hermitian_pinv_sqrt():
    m = np.diag([4.0, 0.25, 0.0])
    assert np.allclose(hilbert.hermitian_pinv_sqrt(m), np.diag([0.5, 2.0, 0.0]))


def test_partial_trace_outer_matches_loops(rng):
    outer, inner = 3, 4
    a = rng.normal(size=(12, 12)) + 1j * rng.normal(size=(12, 12))
    expect = np.zeros((inner, inner), dtype=complex)
    for u in range(outer):
        expect += a[u * inner:(u + 1) * inner, u * inner:(u + 1) * inner]
    assert np.allclose(hilbert.partial_trace_outer(a, outer), expect)
    with pytest.raises(DimensionMismatchError):
        hilbert.partial_trace_outer(a, 5)


def test_partial_trace_of_product():
    x = np.array([[0.3, 0.1j], [-0.1j, 0.7]])
    y = np.diag([1.0, 2.0, 3.0])
    assert np.allclose(hilbert.partial_trace_outer(np.kron(x, y), 2), np.trace(x) * y)


def test_gram_schmidt_orthonormal_and_drops_dependent(rng):
    v = [rng.normal(size=6) + 1j * rng.normal(size=6) for _ in range(3)]
    vecs = v + [v[0] + 2j * v[1], np.zeros(6)]
    basis, dropped = hilbert.gram_schmidt(vecs)
    assert dropped == [3, 4]
    q = np.column_stack(basis)
    assert np.allclose(q.conj().T @ q, np.eye(3), atol=1e-12)


def test_gram_schmidt_nearly_parallel():
    e = np.array([1.0, 0, 0])
    basis, dropped = hilbert.gram_schmidt([e, e + 1e-7 * np.array([0, 1.0, 0])])
    assert dropped == []
    assert abs(np.vdot(basis[0], basis[1])) < 1e-12


@pytest.mark.parametrize("rank", [None, 1, 3])
def test_random_density_matrix(rank):
    rho = hilbert.random_density_matrix(8, 7, rank=rank)
    assert np.trace(rho).real == pytest.approx(1.0)
    assert hilbert.is_hermitian(rho)
    w = np.linalg.eigvalsh(rho)
    assert w.min() > -1e-12
    if rank is not None:
        assert np.sum(w > 1e-12) == rank
    assert np.allclose(rho, hilbert.random_density_matrix(8, 7, rank=rank))


def test_is_hermitian():
    assert hilbert.is_hermitian(np.array([[1, 1j], [-1j, 2]]))
    assert not hilbert.is_hermitian(np.array([[1, 1j], [1j, 2]]))
    assert not hilbert.is_hermitian(np.ones((2, 3)))
    assert math.isclose(np.trace(hilbert.number(5)).real, 10)
