import numpy as np
import pytest
from hypothesis import given

from cstarframes import duals, frames
from cstarframes.algebra import AlgebraDescriptor
from cstarframes.errors import NotADual, NullityViolated, ShapeMismatch
from cstarframes.measure import Discrete, FrameMap, build_rule
from cstarframes.module import LEFT, RIGHT, ModuleElement, elem_norm

from conftest import descriptors, random_frame, ranks, seeds


def random_dual(F, rule, rng, degree=1):
    """Canonical dual plus a random combination of the degree-``degree`` null family."""
    family = duals.null_bessel_family(F, degree, rule)
    coeffs = rng.standard_normal(len(family)) + 1j * rng.standard_normal(len(family))
    D = frames.canonical_dual(F, rule)
    return D + duals.combine(family, coeffs) if family else D


@pytest.mark.parametrize("convention", [RIGHT, LEFT])
def test_sequence_iterates_are_duals(example, convention):
    F, G, rule = example
    seq = duals.dual_sequence(F, G, 5, rule, convention)
    for i, V in enumerate(seq):
        closed = duals.dual_sequence_closed(F, G, i, rule, convention)
        scale = 1 + np.max(np.abs(closed.parts[0]))
        assert np.max(np.abs(V.parts[0] - closed.parts[0])) <= 1e-12 * scale
        assert frames.is_dual_pair(F, V, rule).residual_norm <= 1e-10 * scale


def test_correction_closed_form(example):
    F, G, rule = example
    corr = duals.sequence_correction(F, G, rule, LEFT)
    V1 = duals.dual_sequence_step(F, G, rule, LEFT)
    assert V1.allclose(frames.canonical_dual(F, rule) + corr)


@given(descriptors, ranks, seeds)
def test_right_convention_always_dual(desc, k, seed):
    rng = np.random.default_rng(seed)
    F, rule = random_frame(desc, k, rng)
    D = random_dual(F, rule, rng)
    V = duals.dual_sequence_step(F, D, rule, RIGHT, certify=False)
    scale = 1 + max(np.max(np.abs(p)) for p in V.parts)
    assert frames.is_dual_pair(F, V, rule).residual_norm <= 1e-9 * scale


def test_left_convention_needs_rank_one():
    rng = np.random.default_rng(3)
    F, rule = random_frame(AlgebraDescriptor((2,)), 2, rng)
    with pytest.raises(ShapeMismatch):
        duals.dual_sequence_step(F, frames.canonical_dual(F, rule), rule, LEFT)


def test_sequence_rejects_non_dual(example):
    F, G, rule = example
    with pytest.raises(NotADual):
        duals.dual_sequence_step(F, 2 * G, rule)
    with pytest.raises(ValueError):
        duals.dual_sequence_closed(F, G, -1, rule)


def test_decompose(example):
    F, G, rule = example
    dec = duals.dual_decompose(F, G, rule)
    assert dec.is_dual and dec.nullity_residual <= 1e-12
    assert (frames.canonical_dual(F, rule) + dec.null_part).allclose(G)
    bad = duals.dual_decompose(F, 2 * G, rule)
    assert not bad.is_dual and bad.nullity_residual > 0.1


def test_example_null_family(example):
    F, G, rule = example
    assert len(duals.null_bessel_family(F, 0, rule)) == 0
    family = duals.null_bessel_family(F, 1, rule)
    assert len(family) == 4
    for L in family:
        assert frames.cross_gram(F, L, rule).norm() <= 1e-13
    with pytest.raises(ValueError):
        duals.null_bessel_family(F, 5, rule)


@given(descriptors, ranks, seeds)
def test_family_members_are_duals(desc, k, seed):
    rng = np.random.default_rng(seed)
    F, rule = random_frame(desc, k, rng)
    D = random_dual(F, rule, rng)
    scale = 1 + max(np.max(np.abs(p)) for p in D.parts)
    assert frames.is_dual_pair(F, D, rule).residual_norm <= 1e-9 * scale


def test_k_round_trip(example):
    F, G, rule = example
    K, checks = duals.k_operator_from_dual(F, G, rule, samples=100)
    assert checks.synthesis_residual <= 1e-12
    assert checks.bound_holds and checks.sampled_norm <= checks.exact_norm * (1 + 1e-12)
    back = duals.dual_from_k_operator(F, K, rule)
    assert np.max(np.abs(back.parts[0] - G.parts[0])) <= 1e-13


def test_k_from_non_null_part(example):
    F, G, rule = example
    with pytest.raises(NullityViolated):
        duals.dual_from_k_operator(F, F, rule)


def test_kernel_symmetry(example):
    F, G, rule = example
    grid = np.linspace(0, 1, 20)
    can = duals.kernel_symmetry_check(F, frames.canonical_dual(F, rule), grid)
    assert can.symmetric and can.max_deviation <= 1e-10
    rep = duals.kernel_symmetry_check(F, G, grid)
    assert not rep.symmetric and rep.max_deviation >= 0.1
    w, g = rep.witness
    Fw, Fg, Gw, Gg = F(w).dense, F(g).dense, G(w).dense, G(g).dense
    direct = Fw @ Gg.conj().T - Gw @ Fg.conj().T
    assert np.linalg.norm(direct, 2) == pytest.approx(rep.max_deviation)


def test_kernel_symmetry_needs_points(example):
    F, G, _ = example
    with pytest.raises(ValueError):
        duals.kernel_symmetry_check(F, G)


@given(descriptors, ranks, seeds)
def test_minimality(desc, k, seed):
    rng = np.random.default_rng(seed)
    F, rule = random_frame(desc, k, rng)
    D = random_dual(F, rule, rng)
    rep = duals.minimality_check(F, D, rule)
    assert rep.margin >= -1e-10 * (1 + abs(rep.gap))
    can = duals.minimality_check(F, frames.canonical_dual(F, rule), rule)
    assert abs(can.margin) <= 1e-10 and abs(can.gap) <= 1e-10 * (1 + abs(rep.gap))
    assert can.canonical


def test_minimality_example(example):
    F, G, rule = example
    rep = duals.minimality_check(F, G, rule)
    assert rep.verdict and not rep.canonical
    assert rep.gap == pytest.approx(1.0)


def test_tabulated_maps_work_on_discrete_space():
    d = AlgebraDescriptor((1, 1))
    rule = build_rule(Discrete((0.0, 1.0, 2.0), (1.0, 0.5, 2.0)), 0)
    rng = np.random.default_rng(9)
    F = FrameMap.tabulated(rule, [ModuleElement.random(d, 1, rng) for _ in range(3)])
    D = random_dual(F, rule, rng, degree=0)
    assert frames.is_dual_pair(F, D, rule).holds
    rep = duals.kernel_symmetry_check(F, frames.canonical_dual(F, rule), rule=rule)
    assert rep.symmetric
    f = ModuleElement.random(d, 1, rng)
    K, checks = duals.k_operator_from_dual(F, D, rule, samples=10)
    assert checks.synthesis_residual <= 1e-12 and elem_norm(f) > 0
