import numpy as np
import pytest
from hypothesis import given

from cstarframes.algebra import (
    AlgebraDescriptor,
    AlgebraElement,
    as_element,
    hermitian_eigenvalues,
    inverse,
    is_central,
    is_hermitian,
    is_positive,
    is_unitary,
    op_norm,
    order_leq,
)
from cstarframes.errors import (
    BlockPatternViolation,
    DescriptorMismatch,
    NotHermitian,
    ShapeMismatch,
    SingularElement,
)

from conftest import descriptors, seeds


def test_descriptor_basics():
    d = AlgebraDescriptor((2, 1))
    assert d.n == 3 and d.dim == 5 and d.offsets == (0, 2)
    assert AlgebraDescriptor.full(3).blocks == (3,)
    assert AlgebraDescriptor.commutative(2).blocks == (1, 1)
    with pytest.raises(ShapeMismatch):
        AlgebraDescriptor(())
    with pytest.raises(ShapeMismatch):
        AlgebraDescriptor((2, 0))


def test_from_dense_round_trip_and_block_pattern():
    d = AlgebraDescriptor((2, 1))
    m = np.array([[1, 2, 0], [3, 4, 0], [0, 0, 5]], dtype=complex)
    a = d.from_dense(m)
    assert np.array_equal(a.dense, m)
    m[0, 2] = 1e-3
    with pytest.raises(BlockPatternViolation):
        d.from_dense(m)


def test_elements_are_immutable():
    a = AlgebraDescriptor((2,)).identity()
    with pytest.raises(ValueError):
        a.blocks[0][0, 0] = 3


def test_mixed_descriptors_rejected():
    a = AlgebraDescriptor((2,)).identity()
    b = AlgebraDescriptor((1, 1)).identity()
    with pytest.raises(DescriptorMismatch):
        a + b


def test_as_element_accepts_dense_and_blocks():
    d = AlgebraDescriptor((1, 1))
    assert as_element(d, np.diag([1.0, 2.0])).allclose(as_element(d, [[[1.0]], [[2.0]]]))


@given(descriptors, seeds)
def test_cstar_identity(desc, seed):
    a = desc.random(np.random.default_rng(seed))
    assert np.isclose(op_norm(a.H @ a), op_norm(a) ** 2, rtol=1e-12)


@given(descriptors, seeds)
def test_norm_is_submultiplicative_and_star_invariant(desc, seed):
    rng = np.random.default_rng(seed)
    a, b = desc.random(rng), desc.random(rng)
    assert op_norm(a @ b) <= op_norm(a) * op_norm(b) * (1 + 1e-12)
    assert np.isclose(op_norm(a.H), op_norm(a), rtol=1e-12)


@given(descriptors, seeds)
def test_inverse(desc, seed):
    a = desc.random(np.random.default_rng(seed))
    assert (a @ inverse(a)).allclose(desc.identity(), atol=1e-8 * (1 + op_norm(a)))


def test_singular_element():
    d = AlgebraDescriptor((2, 1))
    a = d.from_dense(np.diag([1.0, 1.0, 0.0]))
    with pytest.raises(SingularElement):
        inverse(a)


def test_hermitian_eigenvalues():
    d = AlgebraDescriptor((2, 1))
    a = d.from_dense(np.array([[2, 1, 0], [1, 2, 0], [0, 0, -1]], dtype=float))
    assert np.allclose(hermitian_eigenvalues(a), [-1, 1, 3])
    with pytest.raises(NotHermitian):
        hermitian_eigenvalues(d.from_dense(np.array([[0, 1, 0], [0, 0, 0], [0, 0, 0]])))


@given(descriptors, seeds)
def test_order(desc, seed):
    rng = np.random.default_rng(seed)
    a = desc.random(rng, hermitian=True)
    b = desc.random(rng)
    assert is_positive(b.H @ b)
    report = order_leq(a, a + b.H @ b)
    assert report.holds and report.witness is None
    assert is_hermitian(a)


def test_order_failure_has_witness():
    d = AlgebraDescriptor((2,))
    a = d.from_dense(np.diag([1.0, 0.0]))
    report = order_leq(a, d.zeros())
    assert not report and report.margin == pytest.approx(-1.0)
    v = report.witness
    assert np.real(np.conj(v) @ (d.zeros() - a).dense @ v) < 0


def test_centrality():
    d = AlgebraDescriptor((1, 1))
    assert is_central(d.from_dense(np.diag([2.0, -3.0])))
    d2 = AlgebraDescriptor((2, 1))
    assert is_central(d2.from_dense(np.diag([2.0, 2.0, 5.0])))
    assert not is_central(d2.from_dense(np.diag([2.0, 1.0, 5.0])))


@given(descriptors, seeds)
def test_random_unitary(desc, seed):
    u = desc.random_unitary(np.random.default_rng(seed))
    assert is_unitary(u)
    assert not is_unitary(u * 2)


def test_algebra_element_arithmetic():
    d = AlgebraDescriptor((1, 1))
    a = AlgebraElement(d, [np.array([[1j]]), np.array([[2.0]])])
    assert (a.H.dense == np.diag([-1j, 2.0])).all()
    assert ((a - a) + a * 2 / 2).allclose(a)
    assert (-a).allclose(a * -1)
