import numpy as np
import pytest
from hypothesis import given

from cstarframes import frames, sums
from cstarframes.algebra import AlgebraDescriptor, op_norm
from cstarframes.errors import AffinityViolated, HypothesisViolated, NotCentral
from cstarframes.frames import operator_eigenvalues, operator_inverse
from cstarframes.measure import L2Element
from cstarframes.duals import combine, null_bessel_family
from cstarframes.module import ModuleOperator, left_act

from conftest import descriptors, random_frame, ranks, seeds


def frame_and_dual(desc, k, seed):
    rng = np.random.default_rng(seed)
    F, rule = random_frame(desc, k, rng)
    return F, frames.canonical_dual(F, rule), rule, rng


def invertible_pair(desc, k, rng):
    X1 = ModuleOperator.random(desc, k, rng) + 3 * ModuleOperator.identity(desc, k)
    return X1, operator_inverse(X1).H


@given(descriptors, ranks, seeds)
def test_operator_sum_frame(desc, k, seed):
    F, G, rule, rng = frame_and_dual(desc, k, seed)
    X1, X2 = invertible_pair(desc, k, rng)
    H, cert = sums.operator_sum_frame(F, G, X1, X2, rule)
    assert cert.hypothesis_residual <= 1e-12
    QH = frames.frame_operator(H, rule)
    assert operator_eigenvalues(QH)[0] >= 2 - 1e-9 * (1 + cert.optimal.upper)
    assert cert.holds


def test_operator_sum_frame_hypothesis(example):
    F, G, rule = example
    d = F.descriptor
    with pytest.raises(HypothesisViolated):
        sums.operator_sum_frame(F, G, 2 * ModuleOperator.identity(d), ModuleOperator.identity(d), rule)


@given(descriptors, ranks, seeds)
def test_operator_sum_dual_iff(desc, k, seed):
    F, G, rule, rng = frame_and_dual(desc, k, seed)
    K = G + sums_null(F, rule, rng)
    X1 = ModuleOperator.random(desc, k, rng)
    if rng.random() < 0.5:
        X2 = ModuleOperator.identity(desc, k) - X1
    else:
        X2 = ModuleOperator.random(desc, k, rng)
    res = sums.operator_sum_dual(F, G, K, X1, X2, rule)
    assert abs(res.certificate.residual_norm - res.iff_residual) <= 1e-9


def sums_null(F, rule, rng):
    family = null_bessel_family(F, F.degree, rule)
    return combine(family, rng.standard_normal(len(family)))


@given(descriptors, ranks, seeds)
def test_pair_under_operators(desc, k, seed):
    F, G, rule, rng = frame_and_dual(desc, k, seed)
    X1, X2 = invertible_pair(desc, k, rng)
    pair = sums.dual_pair_under_operators(F, G, X1, X2, rule)
    assert pair.algebraic_residual <= 1e-10
    assert abs(pair.certificate.residual_norm - pair.algebraic_residual) <= 1e-9


@given(descriptors, ranks, seeds)
def test_scaled_bessel_bound(desc, k, seed):
    F, _, rule, rng = frame_and_dual(desc, k, seed)
    a = desc.random(rng)
    rep = sums.scaled_map(a, F, rule, samples=5, rng=rng)
    assert rep.bound_holds
    assert rep.bessel_bound <= frames.bessel_bound(F, rule) * op_norm(a) ** 2 * (1 + 1e-12) + 1e-12


@given(descriptors, ranks, seeds)
def test_unitary_invariance(desc, k, seed):
    F, G, rule, rng = frame_and_dual(desc, k, seed)
    u = desc.random_unitary(rng)
    rep = sums.scaled_map(u, F, rule, samples=0)
    Q = frames.frame_operator(F, rule)
    assert rep.unitary_residual <= 1e-10 * (1 + Q.norm())
    assert np.allclose(frames.optimal_frame_bounds(rep.map, rule),
                       frames.optimal_frame_bounds(F, rule), rtol=1e-10, atol=1e-12)
    assert sums.unitary_dual_transfer(F, G, u, rule).holds


def test_unitary_transfer_needs_unitary(example):
    F, G, rule = example
    with pytest.raises(HypothesisViolated):
        sums.unitary_dual_transfer(F, G, F.descriptor.scalar(2.0), rule)


def test_central_scaling_residuals():
    desc = AlgebraDescriptor((1, 2))
    F, _, rule, rng = frame_and_dual(desc, 1, 5)
    a = desc.from_dense(np.diag([2.0, -1j, -1j]))
    rep = sums.scaled_map(a, F, rule, samples=20, rng=rng)
    assert all(v <= 1e-10 for v in rep.central_residuals.values())
    assert rep.unitary_residual is None


def test_central_sum_dual():
    desc = AlgebraDescriptor((1, 1))
    F, G, rule, rng = frame_and_dual(desc, 1, 11)
    K = G + sums_null(F, rule, rng)
    a1 = desc.from_dense(np.diag([0.25, 3.0]))
    a2 = desc.identity() - a1
    out = sums.central_sum_dual(F, G, K, a1, a2, rule)
    assert frames.is_dual_pair(F, out, rule).residual_norm <= 1e-10
    with pytest.raises(AffinityViolated):
        sums.central_sum_dual(F, G, K, a1, a1, rule)


def test_central_sum_rejects_noncentral():
    desc = AlgebraDescriptor((2,))
    F, G, rule, _ = frame_and_dual(desc, 1, 12)
    a1 = desc.from_dense(np.diag([1.0, 0.0]))
    with pytest.raises(NotCentral):
        sums.central_sum_dual(F, G, G, a1, desc.identity() - a1, rule)


def test_affine_sum_dual(example):
    F, G, rule = example
    can = frames.canonical_dual(F, rule)
    out = sums.affine_sum_dual(F, G, can, 2.0, -1.0, rule)
    assert frames.is_dual_pair(F, out, rule).residual_norm <= 1e-12
    assert out.allclose(2 * G - can)
    with pytest.raises(AffinityViolated):
        sums.affine_sum_dual(F, G, can, 0.3, 0.8, rule)


def test_identity_check(example):
    F, G, rule = example
    d = F.descriptor
    ok = sums.identity_check(F, G, ModuleOperator.identity(d), rule)
    assert ok.is_dual and ok.algebraic_residual == 0
    bad = sums.identity_check(F, G, ModuleOperator.scalar(d, 1, 1.5), rule)
    assert not bad.is_dual
    assert bad.dual_residual == pytest.approx(bad.algebraic_residual)


def test_synthesis_of_central_scaling():
    desc = AlgebraDescriptor((1, 1))
    F, _, rule, rng = frame_and_dual(desc, 2, 13)
    a = desc.from_dense(np.diag([2.0, 5.0]))
    phi = L2Element.random(rule, desc, rng)
    lhs = frames.synthesis(F.scaled(a), phi)
    assert lhs.allclose(left_act(a, frames.synthesis(F, phi)), atol=1e-10)
