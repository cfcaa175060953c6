"""Golden reproduction of the worked 2x2 example.

``A = M_2(C)`` acting on itself, ``Omega = [0, 1]`` with Lebesgue measure,
``F(w) = w [[2, 1], [1, 3]]`` and the dual ``G(w) = w G1 - J``.  Each displayed
matrix is stored exactly (as fractions) and compared entrywise with what the
library computes.
"""

from __future__ import annotations

from fractions import Fraction as Fr
from typing import NamedTuple, Optional

import numpy as np

from . import duals, frames
from .algebra import AlgebraDescriptor
from .measure import FrameMap, Interval, build_rule
from .module import LEFT, RIGHT, ModuleElement

F0 = [[2, 1], [1, 3]]
G1 = [[Fr(33, 10), Fr(9, 10)], [Fr(9, 10), Fr(27, 10)]]
G0 = [[-1, -1], [-1, -1]]

FRAME_OPERATOR = [[Fr(5, 3), Fr(5, 3)], [Fr(5, 3), Fr(10, 3)]]
FRAME_OPERATOR_INV = [[Fr(6, 5), Fr(-3, 5)], [Fr(-3, 5), Fr(3, 5)]]
CANONICAL_SLOPE = [[Fr(9, 5), Fr(-3, 5)], [Fr(-3, 5), Fr(6, 5)]]
V1_SLOPE = [[Fr(102, 15), Fr(66, 15)], [Fr(69, 10), Fr(87, 10)]]
V1_OFFSET = [[Fr(-50, 15), Fr(-50, 15)], [Fr(-50, 10), Fr(-50, 10)]]
CORRECTION_SLOPE = [[5, 5], [Fr(15, 2), Fr(15, 2)]]
CORRECTION_OFFSET = [[Fr(-10, 3), Fr(-10, 3)], [-5, -5]]
CLAIMED_BOUNDS = (Fr(1, 2), Fr(9, 2))


def as_array(m) -> np.ndarray:
    return np.array([[complex(x) for x in row] for row in m], dtype=np.complex128)


def family_member(alpha, beta, gamma, delta) -> FrameMap:
    """The displayed four-parameter family of duals."""
    params = np.array([[alpha, beta], [gamma, delta]], dtype=float)
    return example_map(as_array(CANONICAL_SLOPE) + params, -2 / 3 * params)


DESCRIPTOR = AlgebraDescriptor((2,))


def example_map(slope, offset) -> FrameMap:
    me = lambda m: ModuleElement.from_dense(DESCRIPTOR, 1, as_array(m))  # noqa: E731
    return FrameMap.polynomial([me(offset), me(slope)])


def example_frame() -> FrameMap:
    return example_map(F0, [[0, 0], [0, 0]])


def example_dual() -> FrameMap:
    return example_map(G1, G0)


def example_rule():
    return build_rule(Interval(0.0, 1.0), 4)


class GoldenCheck(NamedTuple):
    name: str
    error: float
    tol: float

    @property
    def passed(self) -> bool:
        return self.error <= self.tol


def _maxerr(a, b) -> float:
    return float(np.max(np.abs(np.asarray(a) - np.asarray(b))))


def run_example25(tol: Optional[float] = None, steps: int = 4) -> list[GoldenCheck]:
    """Compare every displayed matrix with the computed one.

    Entrywise comparisons use ``tol`` (default ``1e-12``); dual certificates
    use the library's dual threshold.
    """
    tol = 1e-12 if tol is None else float(tol)
    F, G, rule = example_frame(), example_dual(), example_rule()
    Q = frames.frame_operator(F, rule)
    checks = [
        GoldenCheck("frame_operator", _maxerr(Q.dense, as_array(FRAME_OPERATOR)), tol),
        GoldenCheck("frame_operator_inverse",
                    _maxerr(frames.operator_inverse(Q).dense, as_array(FRAME_OPERATOR_INV)), tol),
    ]
    can = frames.canonical_dual(F, rule)
    c0, c1 = (c.dense for c in can.coefficients)
    checks.append(GoldenCheck("canonical_dual", max(_maxerr(c1, as_array(CANONICAL_SLOPE)),
                                                    _maxerr(c0, 0)), tol))
    lo, hi = CLAIMED_BOUNDS
    cert = frames.verify_claimed_bounds(F, float(lo), float(hi), rule)
    checks.append(GoldenCheck("claimed_bounds_certify", 0.0 if cert.holds else 1.0, 0.0))
    opt = frames.optimal_frame_bounds(F, rule)
    exact = ((15 - 5 * np.sqrt(5)) / 6, (15 + 5 * np.sqrt(5)) / 6)
    checks.append(GoldenCheck("optimal_bounds", _maxerr(opt, exact), tol))
    checks.append(GoldenCheck("G_is_dual", frames.is_dual_pair(F, G, rule).residual_norm, tol))
    checks.append(GoldenCheck("canonical_is_dual",
                              frames.is_dual_pair(F, can, rule).residual_norm, tol))

    V1 = duals.dual_sequence_step(F, G, rule, LEFT)
    v0, v1 = (c.dense for c in V1.coefficients)
    checks.append(GoldenCheck("V1", max(_maxerr(v1, as_array(V1_SLOPE)),
                                        _maxerr(v0, as_array(V1_OFFSET))), tol))
    corr = duals.sequence_correction(F, G, rule, LEFT)
    k0, k1 = (c.dense for c in corr.coefficients)
    checks.append(GoldenCheck("V_correction_factor",
                              max(_maxerr(k1, as_array(CORRECTION_SLOPE)),
                                  _maxerr(k0, as_array(CORRECTION_OFFSET))), tol))
    # displayed closed form: S^{-1}F(w) + Q^i (correction)(w), against the iterates
    iterate = V1
    Qd = as_array(FRAME_OPERATOR)
    for i in range(1, steps + 1):
        iterate = duals.dual_sequence_step(F, iterate, rule, LEFT)
        shown = example_map(as_array(CANONICAL_SLOPE) + np.linalg.matrix_power(Qd, i) @ as_array(CORRECTION_SLOPE),
                            np.linalg.matrix_power(Qd, i) @ as_array(CORRECTION_OFFSET))
        scale = max(1.0, float(np.max(np.abs(shown.parts[0]))))
        err = _maxerr(iterate.parts[0], shown.parts[0]) / scale
        checks.append(GoldenCheck(f"V{i + 1}_closed_form", err, tol))
        checks.append(GoldenCheck(f"V{i + 1}_is_dual",
                                  frames.is_dual_pair(F, iterate, rule).residual_norm / scale, tol))
    for params in [(0, 0, 0, 0), (1.5, 1.5, 1.5, 1.5), (1, -2, 0.5, 3)]:
        member = family_member(*params)
        checks.append(GoldenCheck(f"family_{params}_is_dual",
                                  frames.is_dual_pair(F, member, rule).residual_norm, tol))
    # the displayed G is the member with all parameters 3/2
    checks.append(GoldenCheck("G_in_family",
                              _maxerr(family_member(1.5, 1.5, 1.5, 1.5).parts[0], G.parts[0]), tol))
    right = duals.dual_sequence_step(F, G, rule, RIGHT)
    checks.append(GoldenCheck("V1_right_is_dual",
                              frames.is_dual_pair(F, right, rule).residual_norm, tol))
    return checks
