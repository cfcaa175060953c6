"""Constructions and characterisations of duals of a continuous frame.

Every dual of ``F`` has the form ``S^{-1} F + L`` with ``int F^* L d mu = 0``
(the *null* condition).  The functions below build duals from a given one,
split a dual into canonical part plus null part, enumerate null parts of a
given polynomial degree, and test the two properties that single out the
canonical dual.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence

import numpy as np
from scipy.linalg import null_space

from . import tolerances
from .errors import NotADual, NullityViolated
from .frames import (
    bessel_bound,
    canonical_dual,
    cross_gram,
    frame_operator,
    is_dual_pair,
    operator_eigenvalues,
    operator_inverse,
    operator_order,
    analysis,
    require_frame,
    synthesis,
)
from .measure import FrameMap, L2Element, QuadratureRule
from .module import RIGHT, ModuleElement, elem_norm


def require_dual(F: FrameMap, G: FrameMap, rule: QuadratureRule, tol: Optional[float] = None,
                 what: str = "map"):
    cert = is_dual_pair(F, G, rule, tol)
    if not cert.holds:
        raise NotADual(f"{what} is not a dual of the frame (residual {cert.residual_norm:.3e})",
                       residual=cert.residual_norm)
    return cert


def dual_sequence_step(F: FrameMap, G: FrameMap, rule: QuadratureRule, convention: str = RIGHT,
                       tol: Optional[float] = None, certify: bool = True) -> FrameMap:
    """Next dual ``S^{-1} F(w) + S G(w) - F(w)``.

    ``convention`` chooses how the frame operator is applied pointwise (see
    ``module.apply_operator``).  The right convention always yields a dual; the
    left one does when ``Q`` commutes with the values of ``F``.  With
    ``certify`` the output is checked and ``NotADual`` raised on failure.
    """
    require_frame(F, rule, tol)
    require_dual(F, G, rule, tol, "input map")
    Q = frame_operator(F, rule)
    out = (F.transformed(operator_inverse(Q), convention)
           + G.transformed(Q, convention) - F)
    if certify:
        require_dual(F, out, rule, tol, f"{convention}-convention iterate")
    return out


def dual_sequence(F: FrameMap, G: FrameMap, steps: int, rule: QuadratureRule,
                  convention: str = RIGHT, tol: Optional[float] = None) -> list[FrameMap]:
    """``[V_1, ..., V_steps]`` obtained by iterating ``dual_sequence_step`` from ``G``."""
    out, current = [], G
    for _ in range(steps):
        current = dual_sequence_step(F, current, rule, convention, tol)
        out.append(current)
    return out


def sequence_correction(F: FrameMap, G: FrameMap, rule: QuadratureRule,
                        convention: str = RIGHT) -> FrameMap:
    """``S G(w) - F(w)``; the closed-form iterates are ``S^{-1}F + S^i (S G - F)``."""
    return G.transformed(frame_operator(F, rule), convention) - F


def dual_sequence_closed(F: FrameMap, G: FrameMap, i: int, rule: QuadratureRule,
                         convention: str = RIGHT, tol: Optional[float] = None,
                         certify: bool = True) -> FrameMap:
    """``V_{i+1} = S^{-1} F + S^{i+1} G - S^i F``, equal to ``i + 1`` steps from ``G``."""
    if i < 0:
        raise ValueError("index must be nonnegative")
    require_frame(F, rule, tol)
    require_dual(F, G, rule, tol, "input map")
    Q = frame_operator(F, rule)
    out = (F.transformed(operator_inverse(Q), convention)
           + G.transformed(Q.power(i + 1), convention)
           - F.transformed(Q.power(i), convention))
    if certify:
        require_dual(F, out, rule, tol, f"closed-form iterate {i + 1}")
    return out


class DualDecomposition(NamedTuple):
    null_part: FrameMap
    nullity_residual: float
    is_dual: bool


def dual_decompose(F: FrameMap, G: FrameMap, rule: QuadratureRule,
                   tol: Optional[float] = None) -> DualDecomposition:
    """Split ``G = S^{-1} F + L`` and measure ``||int F^* L d mu||``.

    ``G`` is a dual exactly when the residual vanishes.
    """
    tol = tolerances.pick(tol, tolerances.DUAL)
    L = G - canonical_dual(F, rule)
    residual = cross_gram(F, L, rule).norm()
    return DualDecomposition(L, residual, residual <= tol)


def null_bessel_family(F: FrameMap, degree: int, rule: QuadratureRule,
                       rcond: Optional[float] = None) -> list[FrameMap]:
    """Basis of the polynomial maps ``L`` of degree ``<= degree`` with ``int F^* L = 0``.

    Writing ``L(w) = sum_p w^p C_p``, the condition is
    ``sum_p (int w^p F(w)^* d mu) C_p = 0``; it acts on each column of the
    coefficients separately, so a null vector of the stacked moment matrix
    gives one basis map per column index.
    """
    if degree < 0:
        raise ValueError("degree must be nonnegative")
    require_frame(F, rule)
    if F.is_polynomial and rule.degree < F.degree + degree:
        raise ValueError(
            f"rule is exact to degree {rule.degree}, the null condition needs {F.degree + degree}")
    powers = np.vander(rule.nodes, degree + 1, increasing=True)
    basis = []
    desc, k = F.descriptor, F.rank
    for j, s in enumerate(F.samples(rule)):
        b = desc.blocks[j]
        m = k * b
        moments = np.einsum("q,qp,qai->pia", rule.weights, powers, s.conj())
        stacked = np.hstack(list(moments))
        Z = null_space(stacked, rcond=rcond) if rcond is not None else null_space(stacked)
        for z in Z.T:
            for col in range(m):
                parts = [np.zeros((degree + 1, bb, k * bb), dtype=np.complex128)
                         for bb in desc.blocks]
                parts[j][:, :, col] = z.reshape(degree + 1, b)
                basis.append(FrameMap(desc, k, "polynomial", parts))
    return basis


def combine(maps: Sequence[FrameMap], coefficients: Sequence[complex]) -> FrameMap:
    out = None
    for M, c in zip(maps, coefficients):
        out = c * M if out is None else out + c * M
    return out


@dataclass(frozen=True)
class KOperator:
    """``K f = (w -> <f, L(w)>)`` for the null part ``L = G - S^{-1} F``."""

    frame: FrameMap
    null_part: FrameMap
    rule: QuadratureRule

    def __call__(self, f: ModuleElement) -> L2Element:
        return analysis(self.null_part, f, self.rule)

    def norm(self) -> float:
        """Exact operator norm ``sqrt(max eig int L^* L)``."""
        return math.sqrt(max(bessel_bound(self.null_part, self.rule), 0.0))

    def synthesis_residual(self, f: ModuleElement) -> float:
        """``||T_F K f||``, zero for a genuine dual."""
        return elem_norm(synthesis(self.frame, self(f)))


class KChecks(NamedTuple):
    synthesis_residual: float
    sampled_norm: float
    exact_norm: float
    norm_bound: float

    @property
    def bound_holds(self) -> bool:
        return self.sampled_norm <= self.norm_bound and self.exact_norm <= self.norm_bound * (1 + 1e-12)


def k_operator_from_dual(F: FrameMap, G: FrameMap, rule: QuadratureRule, samples: int = 100,
                         rng: Optional[np.random.Generator] = None,
                         tol: Optional[float] = None) -> tuple[KOperator, KChecks]:
    """The operator ``K`` attached to the dual ``G`` together with its checks.

    ``synthesis_residual`` is the largest ``||T_F K f|| / ||f||`` and
    ``sampled_norm`` the largest ``||K f|| / ||f||`` over ``samples`` random
    ``f``; ``norm_bound`` is ``sqrt(D) + 1 / sqrt(A)`` with ``D`` the least
    Bessel bound of ``G`` and ``A`` the optimal lower bound of ``F``.
    """
    bounds = require_frame(F, rule, tol)
    require_dual(F, G, rule, tol)
    K = KOperator(F, G - canonical_dual(F, rule), rule)
    rng = np.random.default_rng(0) if rng is None else rng
    worst_tfk = worst_norm = 0.0
    for _ in range(samples):
        f = ModuleElement.random(F.descriptor, F.rank, rng)
        nf = elem_norm(f)
        worst_tfk = max(worst_tfk, K.synthesis_residual(f) / nf)
        worst_norm = max(worst_norm, K(f).norm() / nf)
    bound = math.sqrt(bessel_bound(G, rule)) + 1 / math.sqrt(bounds.lower)
    return K, KChecks(worst_tfk, worst_norm, K.norm(), bound)


def dual_from_k_operator(F: FrameMap, L, rule: QuadratureRule,
                         tol: Optional[float] = None) -> FrameMap:
    """``S^{-1} F + L`` for a null part ``L`` (a ``FrameMap`` or ``KOperator``)."""
    if isinstance(L, KOperator):
        L = L.null_part
    tol = tolerances.pick(tol, tolerances.DUAL)
    residual = cross_gram(F, L, rule).norm()
    if residual > tol:
        raise NullityViolated(f"int F^* L d mu has norm {residual:.3e}", residual=residual)
    return canonical_dual(F, rule) + L


def _values_at(F: FrameMap, points: np.ndarray) -> list[np.ndarray]:
    if F.is_polynomial:
        V = np.vander(points, F.degree + 1, increasing=True)
        return [np.einsum("qp,pab->qab", V, c) for c in F.parts]
    idx = [F.rule.node_index(x) for x in points]
    return [p[idx] for p in F.parts]


class SymmetryReport(NamedTuple):
    max_deviation: float
    witness: tuple[float, float]
    symmetric: bool


def kernel_symmetry_check(F: FrameMap, G: FrameMap, grid=None,
                          rule: Optional[QuadratureRule] = None,
                          tol: float = 1e-10) -> SymmetryReport:
    """``max ||<F(w), G(g)> - <G(w), F(g)>||`` over ``grid x grid``.

    ``grid`` defaults to the nodes of ``rule``.  A dual with a large deviation
    is not the canonical dual.
    """
    F.same_shape(G)
    if grid is None:
        if rule is None:
            raise ValueError("either grid or rule is required")
        grid = rule.nodes
    pts = np.asarray(grid, dtype=float)
    worst, witness = -1.0, (math.nan, math.nan)
    for f, g in zip(_values_at(F, pts), _values_at(G, pts)):
        D = (np.einsum("wam,gbm->wgab", f, g.conj())
             - np.einsum("wam,gbm->wgab", g, f.conj()))
        norms = np.linalg.norm(D, ord=2, axis=(-2, -1))
        i, j = np.unravel_index(int(np.argmax(norms)), norms.shape)
        if norms[i, j] > worst:
            worst, witness = float(norms[i, j]), (float(pts[i]), float(pts[j]))
    return SymmetryReport(worst, witness, worst <= tol)


class MinimalityReport(NamedTuple):
    """``margin`` is ``min eig(Q_D - Q^{-1})`` and ``gap`` its largest eigenvalue.

    ``margin >= 0`` is the minimality inequality; ``gap`` vanishes exactly
    when ``D`` is the canonical dual.
    """

    margin: float
    gap: float
    verdict: bool
    canonical: bool


def minimality_check(F: FrameMap, D: FrameMap, rule: QuadratureRule,
                     tol: Optional[float] = None) -> MinimalityReport:
    require_frame(F, rule, tol)
    require_dual(F, D, rule, tol)
    Qinv = operator_inverse(frame_operator(F, rule))
    QD = frame_operator(D, rule)
    vals = operator_eigenvalues(QD - Qinv)
    order = operator_order(Qinv, QD, tol)
    cutoff = tolerances.pick(tol, tolerances.POSITIVITY) * (1.0 + Qinv.norm())
    return MinimalityReport(float(vals[0]), float(vals[-1]), order.holds, float(vals[-1]) <= cutoff)
