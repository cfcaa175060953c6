"""Sums of a frame and its duals under operators and algebra elements.

Operators act on the right, so ``L F`` is the map ``w -> F(w) X`` and the
composition ``L_1 L_2^*`` is represented by ``X_2^* X_1``.  For square
matrices ``X_2^* X_1 = I`` and ``X_1 X_2^* = I`` are the same condition.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from . import tolerances
from .algebra import AlgebraElement, is_central, is_unitary, op_norm
from .duals import require_dual
from .errors import AffinityViolated, HypothesisViolated, NotCentral
from .frames import (
    DualCertificate,
    FrameBounds,
    bessel_bound,
    frame_operator,
    is_dual_pair,
    operator_order,
    optimal_frame_bounds,
    require_frame,
    synthesis,
)
from .measure import FrameMap, L2Element, QuadratureRule
from .module import ModuleOperator, elem_norm, left_act


def _identity_like(X: ModuleOperator) -> ModuleOperator:
    return ModuleOperator.identity(X.descriptor, X.rank)


@dataclass(frozen=True)
class SumFrameCertificate:
    """Bounds of ``H = L_1 F + L_2 G``.

    ``guaranteed`` are the bounds ``2`` and ``B_F ||X_1||^2 + 2 + B_G ||X_2||^2``
    implied by the hypotheses; ``optimal`` are the extreme eigenvalues of the
    frame operator of ``H``.
    """

    hypothesis_residual: float
    guaranteed: FrameBounds
    optimal: FrameBounds
    lower_margin: float
    upper_margin: float

    @property
    def holds(self) -> bool:
        return self.lower_margin >= -1e-9 and self.upper_margin >= -1e-9


def operator_sum_frame(F: FrameMap, G: FrameMap, X1: ModuleOperator, X2: ModuleOperator,
                       rule: QuadratureRule, tol: Optional[float] = None,
                       ) -> tuple[FrameMap, SumFrameCertificate]:
    """``w -> F(w) X1 + G(w) X2`` for a dual ``G`` and ``X1 X2^* = I``."""
    tol_h = 1e-12 if tol is None else float(tol)
    residual = (X1 @ X2.H - _identity_like(X1)).norm()
    if residual > tol_h:
        raise HypothesisViolated(f"||X1 X2^* - I|| = {residual:.3e}", residual=residual)
    require_frame(F, rule, tol)
    require_dual(F, G, rule, tol)
    H = F.transformed(X1) + G.transformed(X2)
    QH = frame_operator(H, rule)
    guaranteed = FrameBounds(
        2.0,
        bessel_bound(F, rule) * X1.norm() ** 2 + 2.0 + bessel_bound(G, rule) * X2.norm() ** 2,
    )
    eye = _identity_like(X1)
    lower = operator_order(guaranteed.lower * eye, QH, tol)
    upper = operator_order(QH, guaranteed.upper * eye, tol)
    cert = SumFrameCertificate(residual, guaranteed, optimal_frame_bounds(H, rule),
                               lower.margin, upper.margin)
    return H, cert


class PairCertificate(NamedTuple):
    certificate: DualCertificate
    algebraic_residual: float


def dual_pair_under_operators(F: FrameMap, G: FrameMap, X1: ModuleOperator, X2: ModuleOperator,
                              rule: QuadratureRule, tol: Optional[float] = None) -> PairCertificate:
    """Certify ``(L_1 F, L_2 G)`` as a dual pair.

    The integral residual ``int (G X2)^* (F X1) - I`` and the algebraic one
    ``X2^* X1 - I`` agree whenever ``G`` is a dual of ``F``.
    """
    require_dual(F, G, rule, tol)
    cert = is_dual_pair(F.transformed(X1), G.transformed(X2), rule, tol)
    return PairCertificate(cert, (X2.H @ X1 - _identity_like(X1)).norm())


@dataclass(frozen=True)
class ScaledMap:
    """``a F`` with its Bessel data.

    ``unitary_residual`` is ``||Q_{aF} - Q_F||`` when ``a`` is unitary.  When
    ``a`` is central, ``central_residuals`` holds the deviations of
    ``Q_{aF}`` from ``Q_F`` times ``a^* a`` on either side and of
    ``T_{aF} phi`` from ``a T_F phi`` for random ``phi``.
    """

    map: FrameMap
    bessel_bound: float
    claimed_bound: float
    unitary_residual: Optional[float]
    central_residuals: Optional[dict]

    @property
    def bound_holds(self) -> bool:
        return self.bessel_bound <= self.claimed_bound * (1 + 1e-12) + 1e-12


def _diag_operator(a: AlgebraElement, rank: int) -> ModuleOperator:
    return ModuleOperator(a.descriptor, rank,
                          [np.kron(np.eye(rank), p) for p in a.blocks])


def scaled_map(a: AlgebraElement, F: FrameMap, rule: QuadratureRule, samples: int = 20,
               rng: Optional[np.random.Generator] = None) -> ScaledMap:
    aF = F.scaled(a)
    B = bessel_bound(F, rule)
    QF = frame_operator(F, rule)
    QaF = frame_operator(aF, rule)
    unitary = None
    if is_unitary(a):
        unitary = (QaF - QF).norm()
    central = None
    if is_central(a):
        aa = _diag_operator(a.H @ a, F.rank)
        rng = np.random.default_rng(0) if rng is None else rng
        worst = 0.0
        for _ in range(samples):
            phi = L2Element.random(rule, F.descriptor, rng)
            diff = synthesis(aF, phi) - left_act(a, synthesis(F, phi))
            worst = max(worst, elem_norm(diff))
        central = {
            "frame_operator_right": (QaF - QF @ aa).norm(),
            "frame_operator_left": (QaF - aa @ QF).norm(),
            "synthesis": worst,
        }
    return ScaledMap(aF, bessel_bound(aF, rule), B * op_norm(a) ** 2, unitary, central)


def central_sum_dual(F: FrameMap, G: FrameMap, K: FrameMap, a1: AlgebraElement,
                     a2: AlgebraElement, rule: QuadratureRule,
                     tol: Optional[float] = None) -> FrameMap:
    """``a1 G + a2 K`` for central ``a1, a2`` with ``a1 + a2 = 1``."""
    for name, a in (("a1", a1), ("a2", a2)):
        if not is_central(a):
            raise NotCentral(f"{name} is not central")
    one = a1.descriptor.identity()
    affinity = op_norm(a1 + a2 - one)
    if affinity > tolerances.pick(tol, 1e-12):
        raise AffinityViolated(f"||a1 + a2 - 1|| = {affinity:.3e}", residual=affinity)
    require_dual(F, G, rule, tol, "G")
    require_dual(F, K, rule, tol, "K")
    out = G.scaled(a1) + K.scaled(a2)
    require_dual(F, out, rule, tol, "central combination")
    return out


class OperatorSumDual(NamedTuple):
    map: FrameMap
    iff_residual: float
    certificate: DualCertificate


def operator_sum_dual(F: FrameMap, G: FrameMap, K: FrameMap, X1: ModuleOperator,
                      X2: ModuleOperator, rule: QuadratureRule,
                      tol: Optional[float] = None) -> OperatorSumDual:
    """``V_1 G + V_2 K``; a dual exactly when ``X1 + X2 = I``.

    Since ``int (G X1 + K X2)^* F = X1^* + X2^*`` for duals ``G, K``, the dual
    residual equals ``||X1 + X2 - I||`` up to rounding.
    """
    require_dual(F, G, rule, tol, "G")
    require_dual(F, K, rule, tol, "K")
    out = G.transformed(X1) + K.transformed(X2)
    iff = (X1 + X2 - _identity_like(X1)).norm()
    return OperatorSumDual(out, iff, is_dual_pair(F, out, rule, tol))


def affine_sum_dual(F: FrameMap, G: FrameMap, K: FrameMap, alpha: complex, beta: complex,
                    rule: QuadratureRule, tol: Optional[float] = None) -> FrameMap:
    """``alpha G + beta K`` with ``alpha + beta = 1``."""
    gap = abs(alpha + beta - 1)
    if gap > tolerances.pick(tol, 1e-12):
        raise AffinityViolated(f"|alpha + beta - 1| = {gap:.3e}", residual=gap)
    desc, k = F.descriptor, F.rank
    result = operator_sum_dual(F, G, K, ModuleOperator.scalar(desc, k, alpha),
                               ModuleOperator.scalar(desc, k, beta), rule, tol)
    if not result.certificate.holds:
        raise AffinityViolated("affine combination failed certification",
                               residual=result.certificate.residual_norm)
    return result.map


class IdentityCheck(NamedTuple):
    """``algebraic_residual = ||X - I||``; ``dual_residual`` certifies ``G X`` against ``F``."""

    algebraic_residual: float
    dual_residual: float
    is_dual: bool


def identity_check(F: FrameMap, G: FrameMap, X: ModuleOperator, rule: QuadratureRule,
                   tol: Optional[float] = None) -> IdentityCheck:
    require_dual(F, G, rule, tol)
    cert = is_dual_pair(F, G.transformed(X), rule, tol)
    return IdentityCheck((X - _identity_like(X)).norm(), cert.residual_norm, cert.holds)


def unitary_dual_transfer(F: FrameMap, G: FrameMap, a: AlgebraElement,
                          rule: QuadratureRule, tol: Optional[float] = None) -> DualCertificate:
    """Certificate that ``a G`` is a dual of ``a F`` for unitary ``a``."""
    if not is_unitary(a):
        raise HypothesisViolated("element is not unitary")
    return is_dual_pair(F.scaled(a), G.scaled(a), rule, tol)

