"""Synthesis, analysis and frame operators, frame bounds and certificates.

With right-multiplication operators the frame operator of ``F`` is the Gram
matrix ``Q = int F(w)^* F(w) d mu(w)`` (blockwise), and the frame inequality

    A <f, f> <= <f Q, f> <= B <f, f>   for all f

holds exactly when ``A I <= Q <= B I``.  Frame bounds therefore reduce to the
extreme eigenvalues of ``Q``, and duality of ``(F, G)`` to the matrix identity
``int G(w)^* F(w) d mu(w) = I``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from . import tolerances
from .algebra import AlgebraDescriptor, AlgebraElement, inverse, order_leq
from .errors import NotAFrame, ShapeMismatch
from .measure import FrameMap, L2Element, QuadratureRule
from .module import RIGHT, ModuleElement, ModuleOperator


def operator_algebra(T: ModuleOperator) -> AlgebraElement:
    """View an operator on ``A^k`` as an element of the C*-algebra ``M_k(A)``."""
    desc = AlgebraDescriptor(tuple(T.rank * b for b in T.descriptor.blocks))
    return AlgebraElement(desc, T.parts)


def from_operator_algebra(T: ModuleOperator, a: AlgebraElement) -> ModuleOperator:
    return ModuleOperator(T.descriptor, T.rank, a.blocks)


def operator_eigenvalues(T: ModuleOperator) -> np.ndarray:
    """Eigenvalues of a Hermitian operator, ascending (no Hermitian check)."""
    vals = [np.linalg.eigvalsh((p + p.conj().T) / 2) for p in T.parts]
    return np.sort(np.concatenate(vals))


def operator_inverse(T: ModuleOperator, tol: Optional[float] = None) -> ModuleOperator:
    return from_operator_algebra(T, inverse(operator_algebra(T), tol))


def operator_order(S: ModuleOperator, T: ModuleOperator, tol: Optional[float] = None):
    """``S <= T`` in ``M_k(A)``; see ``algebra.order_leq``."""
    return order_leq(operator_algebra(S), operator_algebra(T), tol)


def witness_element(T: ModuleOperator, vector: np.ndarray) -> ModuleElement:
    """Module element ``f`` whose first row in one block is ``vector^*``.

    For an operator ``D`` with ``<v, D v> = m`` this gives ``<f D, f>`` with
    ``m`` in its corresponding diagonal entry.
    """
    parts, start = [], 0
    for b in T.descriptor.blocks:
        m = T.rank * b
        part = np.zeros((b, m), dtype=np.complex128)
        part[0] = np.conj(vector[start:start + m])
        parts.append(part)
        start += m
    return ModuleElement(T.descriptor, T.rank, parts)


def cross_gram(G: FrameMap, F: FrameMap, rule: QuadratureRule) -> ModuleOperator:
    """``int G(w)^* F(w) d mu(w)`` as an operator."""
    G.same_shape(F)
    w = rule.weights
    parts = [np.einsum("q,qai,qaj->ij", w, g.conj(), f)
             for g, f in zip(G.samples(rule), F.samples(rule))]
    return ModuleOperator(F.descriptor, F.rank, parts)


def frame_operator(F: FrameMap, rule: QuadratureRule) -> ModuleOperator:
    return cross_gram(F, F, rule)


def analysis(F: FrameMap, f: ModuleElement, rule: QuadratureRule) -> L2Element:
    """``w -> <f, F(w)>`` at the nodes of ``rule``."""
    if f.descriptor != F.descriptor or f.rank != F.rank:
        raise ShapeMismatch("element and frame map have different algebra or rank")
    parts = [np.einsum("ab,qcb->qac", x, s.conj()) for x, s in zip(f.parts, F.samples(rule))]
    return L2Element(rule, F.descriptor, parts)


def synthesis(F: FrameMap, phi: L2Element) -> ModuleElement:
    """``int phi(w) F(w) d mu(w)``."""
    if phi.descriptor != F.descriptor:
        raise ShapeMismatch("L2 element and frame map use different algebras")
    rule = phi.rule
    parts = [np.einsum("q,qab,qbc->ac", rule.weights, p, s)
             for p, s in zip(phi.parts, F.samples(rule))]
    return ModuleElement(F.descriptor, F.rank, parts)


class FrameBounds(NamedTuple):
    lower: float
    upper: float


def optimal_frame_bounds(F: FrameMap, rule: QuadratureRule) -> FrameBounds:
    vals = operator_eigenvalues(frame_operator(F, rule))
    return FrameBounds(float(vals[0]), float(vals[-1]))


def bessel_bound(F: FrameMap, rule: QuadratureRule) -> float:
    """The least Bessel constant, ``max eig(Q)``."""
    return optimal_frame_bounds(F, rule).upper


def _frame_floor(bounds: FrameBounds, tol: Optional[float]) -> float:
    return tolerances.pick(tol, tolerances.POSITIVITY) * (1.0 + abs(bounds.upper))


def is_frame(F: FrameMap, rule: QuadratureRule, tol: Optional[float] = None) -> bool:
    bounds = optimal_frame_bounds(F, rule)
    return bounds.lower > _frame_floor(bounds, tol)


def require_frame(F: FrameMap, rule: QuadratureRule, tol: Optional[float] = None) -> FrameBounds:
    bounds = optimal_frame_bounds(F, rule)
    if bounds.lower <= _frame_floor(bounds, tol):
        raise NotAFrame(f"lower frame bound {bounds.lower:.3e} is not positive",
                        residual=bounds.lower)
    return bounds


@dataclass(frozen=True)
class FrameCertificate:
    """Outcome of checking ``A I <= Q <= B I``.

    ``verdict`` is ``"frame"`` when both claimed bounds hold and the lower one
    is positive, ``"bessel_only"`` when only the upper bound holds, and
    ``"not_bessel_evidence"`` when the claimed upper bound fails.
    """

    claimed: Optional[FrameBounds]
    optimal: FrameBounds
    lower_margin: float
    upper_margin: float
    verdict: str
    witness: Optional[ModuleElement] = None

    @property
    def holds(self) -> bool:
        return self.verdict == "frame"


def verify_claimed_bounds(F: FrameMap, A: float, B: float, rule: QuadratureRule,
                          tol: Optional[float] = None) -> FrameCertificate:
    Q = frame_operator(F, rule)
    eye = ModuleOperator.identity(F.descriptor, F.rank)
    lower = operator_order(A * eye, Q, tol)
    upper = operator_order(Q, B * eye, tol)
    optimal = optimal_frame_bounds(F, rule)
    witness = None
    if not upper.holds:
        verdict = "not_bessel_evidence"
        witness = witness_element(Q, upper.witness)
    elif not lower.holds or A <= 0:
        verdict = "bessel_only"
        if lower.witness is not None:
            witness = witness_element(Q, lower.witness)
    else:
        verdict = "frame"
    return FrameCertificate(FrameBounds(float(A), float(B)), optimal,
                            lower.margin, upper.margin, verdict, witness)


def certify_frame(F: FrameMap, rule: QuadratureRule, tol: Optional[float] = None) -> FrameCertificate:
    """Certificate at the optimal bounds (margins are zero by construction)."""
    opt = optimal_frame_bounds(F, rule)
    verdict = "frame" if opt.lower > _frame_floor(opt, tol) else "bessel_only"
    return FrameCertificate(None, opt, 0.0, 0.0, verdict)


@dataclass(frozen=True)
class DualCertificate:
    """``residual = int G^* F d mu - I``; the pair is dual iff its norm is at most ``tol``."""

    residual: ModuleOperator
    residual_norm: float
    tol: float

    @property
    def holds(self) -> bool:
        return self.residual_norm <= self.tol

    @property
    def verdict(self) -> str:
        return "dual" if self.holds else "not_dual"


def is_dual_pair(F: FrameMap, G: FrameMap, rule: QuadratureRule,
                 tol: Optional[float] = None) -> DualCertificate:
    tol = tolerances.pick(tol, tolerances.DUAL)
    R = cross_gram(G, F, rule) - ModuleOperator.identity(F.descriptor, F.rank)
    return DualCertificate(R, R.norm(), tol)


def canonical_dual(F: FrameMap, rule: QuadratureRule, tol: Optional[float] = None,
                   side: str = RIGHT) -> FrameMap:
    """``S_F^{-1} F``, i.e. ``w -> F(w) Q^{-1}``."""
    require_frame(F, rule, tol)
    return F.transformed(operator_inverse(frame_operator(F, rule)), side)


@dataclass(frozen=True)
class RieszDiagnostic:
    """Surjectivity of the analysis operator.

    ``rank`` is the complex rank of the analysis operator sampled at the rule's
    nodes, ``domain_dim`` the complex dimension of ``A^k`` and
    ``codomain_dim`` that of the sampled ``L^2`` space.  ``structural`` is set
    for nonatomic measures, where ``L^2(Omega, A)`` is infinite-dimensional
    and surjectivity is impossible whatever the sampled ranks say.
    """

    verdict: str
    rank: int
    domain_dim: int
    codomain_dim: int
    structural: bool
    smallest_kept: float
    largest_dropped: float

    @property
    def gap(self) -> int:
        return self.codomain_dim - self.rank


def riesz_type_diagnostic(F: FrameMap, rule: QuadratureRule, tol: Optional[float] = None,
                          ambiguity: float = 1e-6) -> RieszDiagnostic:
    """Decide whether ``F`` has a unique dual via the rank of its analysis operator.

    Each row of ``f`` is analysed independently, so per block the analysis
    operator is ``n_j`` copies of the stacked conjugated samples.  Singular
    values between ``rank_tol`` and ``ambiguity`` (both relative to the
    largest) make the verdict ``"inconclusive"``.
    """
    require_frame(F, rule, tol)
    rank_tol = 1e-10 if tol is None else float(tol)
    rank = dom = cod = 0
    smallest_kept, largest_dropped = math.inf, 0.0
    ambiguous = False
    for s, b in zip(F.samples(rule), F.descriptor.blocks):
        M = s.conj().reshape(-1, s.shape[-1])
        sv = np.linalg.svd(M, compute_uv=False)
        top = sv[0] if sv.size else 0.0
        kept = sv > rank_tol * top
        ambiguous |= bool(np.any((sv > rank_tol * top) & (sv < ambiguity * top)))
        if kept.any():
            smallest_kept = min(smallest_kept, float(sv[kept][-1] / top))
        if (~kept).any():
            largest_dropped = max(largest_dropped, float(sv[~kept][0] / top))
        rank += b * int(kept.sum())
        dom += b * s.shape[-1]
        cod += b * M.shape[0]
    structural = not rule.is_discrete
    if structural:
        verdict = "not_riesz_type"
    elif ambiguous:
        verdict = "inconclusive"
    else:
        verdict = "riesz_type" if rank == cod else "not_riesz_type"
    return RieszDiagnostic(verdict, rank, dom, cod, structural, smallest_kept, largest_dropped)
