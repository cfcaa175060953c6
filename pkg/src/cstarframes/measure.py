"""Measure spaces, quadrature, ``L^2(Omega, A)`` and frame maps.

Every integral over ``(Omega, mu)`` is replaced by a quadrature rule that is
exact on the polynomial integrands produced by polynomial frame maps, so the
certificates built on top of it are machine-precision identities rather than
approximations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from numbers import Number
from typing import Callable, Optional, Sequence, Union

import numpy as np
from numpy.polynomial import legendre
from numpy.polynomial import polynomial as P

from .algebra import AlgebraDescriptor, AlgebraElement, _frozen, op_norm
from .errors import (
    DescriptorMismatch,
    NegativeWeight,
    OffNodeEvaluation,
    RuleMismatch,
    ShapeMismatch,
)
from .module import (
    LEFT,
    RIGHT,
    ModuleElement,
    ModuleOperator,
    _check_side,
)


@dataclass(frozen=True)
class Interval:
    """``[a, b]`` with density ``w(omega) = sum_i weight[i] omega^i`` (Lebesgue by default)."""

    a: float
    b: float
    weight: tuple[float, ...] = (1.0,)

    def __post_init__(self):
        if not self.a < self.b:
            raise ValueError(f"interval requires a < b, got [{self.a}, {self.b}]")
        w = np.trim_zeros(np.asarray(self.weight, dtype=float), "b")
        if w.size == 0:
            raise ValueError("weight polynomial is identically zero")
        object.__setattr__(self, "weight", tuple(float(c) for c in w))

    @property
    def weight_degree(self) -> int:
        return len(self.weight) - 1

    def moment(self, p: int) -> float:
        """Closed-form ``int_a^b omega^p w(omega) d omega``."""
        total = 0.0
        for i, c in enumerate(self.weight):
            e = p + i + 1
            total += c * (self.b ** e - self.a ** e) / e
        return total


@dataclass(frozen=True)
class Discrete:
    """Finitely many atoms ``points[q]`` with masses ``masses[q] > 0``."""

    points: tuple[float, ...]
    masses: tuple[float, ...]

    def __post_init__(self):
        pts = tuple(float(x) for x in self.points)
        ms = tuple(float(m) for m in self.masses)
        if not pts or len(pts) != len(ms):
            raise ValueError("discrete space needs equally many points and masses (at least one)")
        if any(m <= 0 for m in ms):
            raise ValueError("discrete masses must be positive")
        if len(set(pts)) != len(pts):
            raise ValueError("discrete points must be distinct")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "masses", ms)

    def moment(self, p: int) -> float:
        return float(sum(m * x ** p for x, m in zip(self.points, self.masses)))


MeasureSpace = Union[Interval, Discrete]


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    """Nodes and weights reproducing ``int p d mu`` for ``deg p <= degree``.

    ``degree`` is ``math.inf`` for discrete spaces, where the rule *is* the
    measure.
    """

    nodes: np.ndarray
    weights: np.ndarray
    degree: float
    space: Optional[MeasureSpace] = field(default=None, repr=False)

    def __post_init__(self):
        nodes = np.array(self.nodes, dtype=float)
        weights = np.array(self.weights, dtype=float)
        if nodes.ndim != 1 or nodes.shape != weights.shape:
            raise ShapeMismatch("nodes and weights must be 1-d arrays of equal length")
        nodes.flags.writeable = False
        weights.flags.writeable = False
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)

    def __len__(self):
        return len(self.nodes)

    @property
    def is_discrete(self) -> bool:
        return isinstance(self.space, Discrete) or math.isinf(self.degree)

    def same_as(self, other: "QuadratureRule") -> bool:
        return self is other or (
            np.array_equal(self.nodes, other.nodes) and np.array_equal(self.weights, other.weights)
        )

    def require_same(self, other: "QuadratureRule"):
        if not self.same_as(other):
            raise RuleMismatch("objects are tabulated on different quadrature rules")

    def node_index(self, omega: float) -> int:
        hits = np.flatnonzero(self.nodes == omega)
        if hits.size == 0:
            raise OffNodeEvaluation(f"{omega!r} is not a node of this rule")
        return int(hits[0])

    def integrate(self, values: np.ndarray) -> np.ndarray:
        """``sum_q w_q values[q]`` over the leading axis."""
        values = np.asarray(values)
        if values.shape[0] != len(self):
            raise ShapeMismatch(f"{values.shape[0]} values for {len(self)} nodes")
        return np.tensordot(self.weights, values, axes=(0, 0))


def build_rule(space: MeasureSpace, target_degree: int) -> QuadratureRule:
    """Quadrature exact for polynomials of degree ``<= target_degree`` against ``mu``.

    Intervals get a Gauss-Legendre rule with enough nodes to also absorb the
    weight polynomial; discrete spaces return their own atoms.
    """
    if target_degree < 0:
        raise ValueError("target_degree must be nonnegative")
    if isinstance(space, Discrete):
        return QuadratureRule(space.points, space.masses, math.inf, space)
    dw = space.weight_degree
    count = max(1, math.ceil((target_degree + dw + 1) / 2))
    x, w = legendre.leggauss(count)
    half = (space.b - space.a) / 2
    nodes = space.a + half * (x + 1)
    density = P.polyval(nodes, space.weight)
    if np.any(density < 0):
        q = int(np.argmin(density))
        raise NegativeWeight(f"weight polynomial is negative ({density[q]:.3e}) at node {nodes[q]:.6g}")
    return QuadratureRule(nodes, half * w * density, 2 * count - 1 - dw, space)


def integrate_alg(rule: QuadratureRule, values: Sequence[AlgebraElement]) -> AlgebraElement:
    if len(values) != len(rule):
        raise ShapeMismatch(f"{len(values)} values for {len(rule)} nodes")
    desc = values[0].descriptor
    if any(v.descriptor != desc for v in values):
        raise DescriptorMismatch("values belong to different algebras")
    parts = [rule.integrate(np.stack([v.blocks[j] for v in values]))
             for j in range(len(desc.blocks))]
    return AlgebraElement(desc, parts)


@dataclass(frozen=True, eq=False)
class L2Element:
    """An element of ``L^2(Omega, A)`` known through its values at the rule's nodes."""

    rule: QuadratureRule
    descriptor: AlgebraDescriptor
    parts: tuple[np.ndarray, ...] = field(repr=False)

    def __post_init__(self):
        parts = tuple(_frozen(p) for p in self.parts)
        N = len(self.rule)
        for p, b in zip(parts, self.descriptor.blocks):
            if p.shape != (N, b, b):
                raise ShapeMismatch(f"L2 part of shape {p.shape}, expected {(N, b, b)}")
        if len(parts) != len(self.descriptor.blocks):
            raise ShapeMismatch("one part per algebra block is required")
        object.__setattr__(self, "parts", parts)

    @classmethod
    def from_samples(cls, rule: QuadratureRule, samples: Sequence[AlgebraElement]) -> "L2Element":
        if len(samples) != len(rule):
            raise ShapeMismatch(f"{len(samples)} samples for {len(rule)} nodes")
        desc = samples[0].descriptor
        return cls(rule, desc, [np.stack([s.blocks[j] for s in samples])
                                for j in range(len(desc.blocks))])

    @classmethod
    def from_function(cls, rule: QuadratureRule,
                      fn: Callable[[float], AlgebraElement]) -> "L2Element":
        return cls.from_samples(rule, [fn(w) for w in rule.nodes])

    @classmethod
    def zeros(cls, rule: QuadratureRule, descriptor: AlgebraDescriptor) -> "L2Element":
        return cls(rule, descriptor, [np.zeros((len(rule), b, b)) for b in descriptor.blocks])

    @classmethod
    def random(cls, rule: QuadratureRule, descriptor: AlgebraDescriptor,
               rng: np.random.Generator) -> "L2Element":
        parts = []
        for b in descriptor.blocks:
            shape = (len(rule), b, b)
            parts.append(rng.standard_normal(shape) + 1j * rng.standard_normal(shape))
        return cls(rule, descriptor, parts)

    def sample(self, q: int) -> AlgebraElement:
        return AlgebraElement(self.descriptor, [p[q] for p in self.parts])

    @property
    def samples(self) -> list[AlgebraElement]:
        return [self.sample(q) for q in range(len(self.rule))]

    def _check(self, other):
        if not isinstance(other, L2Element):
            raise TypeError(f"expected L2Element, got {type(other).__name__}")
        if other.descriptor != self.descriptor:
            raise DescriptorMismatch("L2 elements over different algebras")
        self.rule.require_same(other.rule)

    def _new(self, parts):
        return L2Element(self.rule, self.descriptor, parts)

    def __add__(self, other):
        self._check(other)
        return self._new([a + b for a, b in zip(self.parts, other.parts)])

    def __sub__(self, other):
        self._check(other)
        return self._new([a - b for a, b in zip(self.parts, other.parts)])

    def __mul__(self, c):
        if not isinstance(c, Number):
            return NotImplemented
        return self._new([c * p for p in self.parts])

    __rmul__ = __mul__

    def norm(self) -> float:
        return math.sqrt(op_norm(l2_inner(self, self)))


def l2_inner(phi: L2Element, psi: L2Element) -> AlgebraElement:
    """``int phi(w) psi(w)^* d mu(w)``."""
    phi._check(psi)
    w = phi.rule.weights
    return AlgebraElement(phi.descriptor, [
        np.einsum("q,qab,qcb->ac", w, a, b.conj()) for a, b in zip(phi.parts, psi.parts)
    ])


@dataclass(frozen=True, eq=False)
class FrameMap:
    """A map ``Omega -> A^k``.

    ``kind == "polynomial"``: ``parts[j][p]`` is the block-``j`` part of the
    coefficient of ``omega**p``; the map can be evaluated anywhere.

    ``kind == "tabulated"``: ``parts[j][q]`` is the block-``j`` part of the
    value at ``rule.nodes[q]``; only those nodes can be evaluated.
    """

    descriptor: AlgebraDescriptor
    rank: int
    kind: str
    parts: tuple[np.ndarray, ...] = field(repr=False)
    rule: Optional[QuadratureRule] = field(default=None, repr=False)

    def __post_init__(self):
        if self.kind not in ("polynomial", "tabulated"):
            raise ValueError(f"unknown frame map kind {self.kind!r}")
        if self.kind == "tabulated" and self.rule is None:
            raise ValueError("tabulated maps need a quadrature rule")
        parts = tuple(_frozen(p) for p in self.parts)
        if len(parts) != len(self.descriptor.blocks):
            raise ShapeMismatch("one part per algebra block is required")
        lead = parts[0].shape[0]
        for p, b in zip(parts, self.descriptor.blocks):
            if p.ndim != 3 or p.shape[1:] != (b, self.rank * b) or p.shape[0] != lead:
                raise ShapeMismatch(f"frame map part of shape {p.shape} does not fit block {b}")
        if self.kind == "tabulated" and lead != len(self.rule):
            raise ShapeMismatch(f"{lead} samples for a rule with {len(self.rule)} nodes")
        if self.kind == "polynomial" and lead < 1:
            raise ShapeMismatch("polynomial maps need at least one coefficient")
        object.__setattr__(self, "parts", parts)

    # construction

    @classmethod
    def polynomial(cls, coeffs: Sequence[ModuleElement]) -> "FrameMap":
        """``omega -> sum_p omega**p coeffs[p]``."""
        if not coeffs:
            raise ShapeMismatch("at least one coefficient is required")
        c0 = coeffs[0]
        for c in coeffs:
            c0._check(c)
        parts = [np.stack([c.parts[j] for c in coeffs]) for j in range(len(c0.parts))]
        return cls(c0.descriptor, c0.rank, "polynomial", parts)

    @classmethod
    def tabulated(cls, rule: QuadratureRule, samples: Sequence[ModuleElement]) -> "FrameMap":
        if len(samples) != len(rule):
            raise ShapeMismatch(f"{len(samples)} samples for {len(rule)} nodes")
        c0 = samples[0]
        for c in samples:
            c0._check(c)
        parts = [np.stack([c.parts[j] for c in samples]) for j in range(len(c0.parts))]
        return cls(c0.descriptor, c0.rank, "tabulated", parts, rule)

    @classmethod
    def constant(cls, f: ModuleElement) -> "FrameMap":
        return cls.polynomial([f])

    @classmethod
    def zeros(cls, descriptor: AlgebraDescriptor, rank: int = 1) -> "FrameMap":
        return cls.polynomial([ModuleElement.zeros(descriptor, rank)])

    @classmethod
    def random_polynomial(cls, descriptor: AlgebraDescriptor, rank: int, degree: int,
                          rng: np.random.Generator) -> "FrameMap":
        return cls.polynomial([ModuleElement.random(descriptor, rank, rng)
                               for _ in range(degree + 1)])

    # inspection

    @property
    def is_polynomial(self) -> bool:
        return self.kind == "polynomial"

    @property
    def degree(self) -> Optional[int]:
        """Polynomial degree (length of the coefficient list minus one)."""
        return self.parts[0].shape[0] - 1 if self.is_polynomial else None

    @property
    def coefficients(self) -> list[ModuleElement]:
        if not self.is_polynomial:
            raise TypeError("tabulated maps have no coefficients")
        return [ModuleElement(self.descriptor, self.rank, [p[i] for p in self.parts])
                for i in range(self.degree + 1)]

    def __call__(self, omega: float) -> ModuleElement:
        return eval_frame_map(self, omega)

    def samples(self, rule: QuadratureRule) -> list[np.ndarray]:
        """Per-block arrays of shape ``(N, n_j, k n_j)`` with the values at the nodes."""
        if self.is_polynomial:
            V = np.vander(rule.nodes, self.degree + 1, increasing=True)
            return [np.einsum("qp,pab->qab", V, c) for c in self.parts]
        self.rule.require_same(rule)
        return list(self.parts)

    def tabulate(self, rule: QuadratureRule) -> "FrameMap":
        return FrameMap(self.descriptor, self.rank, "tabulated", self.samples(rule), rule)

    def same_shape(self, other: "FrameMap"):
        if not isinstance(other, FrameMap):
            raise TypeError(f"expected FrameMap, got {type(other).__name__}")
        if other.descriptor != self.descriptor or other.rank != self.rank:
            raise ShapeMismatch("frame maps have different algebra or rank")

    def allclose(self, other: "FrameMap", atol: float = 1e-12) -> bool:
        self.same_shape(other)
        if self.is_polynomial and other.is_polynomial:
            d = max(self.degree, other.degree)
            return all(np.allclose(_pad(a, d), _pad(b, d), rtol=0, atol=atol)
                       for a, b in zip(self.parts, other.parts))
        rule = self.rule if not self.is_polynomial else other.rule
        return all(np.allclose(a, b, rtol=0, atol=atol)
                   for a, b in zip(self.samples(rule), other.samples(rule)))

    # pointwise arithmetic

    def _map_parts(self, fn) -> "FrameMap":
        return FrameMap(self.descriptor, self.rank, self.kind,
                        [fn(j, p) for j, p in enumerate(self.parts)], self.rule)

    def __add__(self, other):
        if not isinstance(other, FrameMap):
            return NotImplemented
        self.same_shape(other)
        if self.is_polynomial and other.is_polynomial:
            d = max(self.degree, other.degree)
            return FrameMap(self.descriptor, self.rank, "polynomial",
                            [_pad(a, d) + _pad(b, d) for a, b in zip(self.parts, other.parts)])
        rule = other.rule if self.is_polynomial else self.rule
        return FrameMap(self.descriptor, self.rank, "tabulated",
                        [a + b for a, b in zip(self.samples(rule), other.samples(rule))], rule)

    def __neg__(self):
        return self._map_parts(lambda j, p: -p)

    def __sub__(self, other):
        if not isinstance(other, FrameMap):
            return NotImplemented
        return self + (-other)

    def __mul__(self, c):
        if not isinstance(c, Number):
            return NotImplemented
        return self._map_parts(lambda j, p: c * p)

    __rmul__ = __mul__

    def scaled(self, a: AlgebraElement) -> "FrameMap":
        """Pointwise left action ``omega -> a F(omega)``."""
        if a.descriptor != self.descriptor:
            raise DescriptorMismatch("algebra element and frame map use different algebras")
        return self._map_parts(lambda j, p: np.einsum("ab,qbc->qac", a.blocks[j], p))

    def transformed(self, T: ModuleOperator, side: str = RIGHT) -> "FrameMap":
        """Pointwise ``omega -> T F(omega)``; see ``module.apply_operator`` for ``side``."""
        _check_side(side)
        if T.descriptor != self.descriptor or T.rank != self.rank:
            raise ShapeMismatch("operator and frame map have different algebra or rank")
        if side == RIGHT:
            return self._map_parts(lambda j, p: np.einsum("qab,bc->qac", p, T.parts[j]))
        if self.rank != 1:
            raise ShapeMismatch("left application is defined only for rank-one modules")
        return self._map_parts(lambda j, p: np.einsum("ab,qbc->qac", T.parts[j], p))

    def polynomial_multiple(self, poly: Sequence[float]) -> "FrameMap":
        """Pointwise product with the scalar polynomial ``sum_i poly[i] omega**i``."""
        if not self.is_polynomial:
            vals = P.polyval(self.rule.nodes, poly)
            return self._map_parts(lambda j, p: vals[:, None, None] * p)
        poly = np.asarray(poly, dtype=np.complex128)
        parts = []
        for c in self.parts:
            out = np.zeros((c.shape[0] + len(poly) - 1,) + c.shape[1:], dtype=np.complex128)
            for i, s in enumerate(poly):
                out[i:i + c.shape[0]] += s * c
            parts.append(out)
        return FrameMap(self.descriptor, self.rank, "polynomial", parts)


def _pad(c: np.ndarray, degree: int) -> np.ndarray:
    extra = degree + 1 - c.shape[0]
    if extra <= 0:
        return c
    return np.concatenate([c, np.zeros((extra,) + c.shape[1:], dtype=c.dtype)])


def eval_frame_map(F: FrameMap, omega: float) -> ModuleElement:
    if F.is_polynomial:
        powers = omega ** np.arange(F.degree + 1)
        return ModuleElement(F.descriptor, F.rank,
                             [np.tensordot(powers, c, axes=(0, 0)) for c in F.parts])
    q = F.rule.node_index(omega)
    return ModuleElement(F.descriptor, F.rank, [p[q] for p in F.parts])


def map_transform(F: FrameMap, action, side: str = RIGHT) -> FrameMap:
    """Apply one pointwise action to ``F``.

    ``action`` may be an ``AlgebraElement`` (left scaling ``a F``), a
    ``ModuleOperator`` (applied on ``side``), another ``FrameMap`` (sum) or a
    complex scalar.
    """
    if isinstance(action, AlgebraElement):
        return F.scaled(action)
    if isinstance(action, ModuleOperator):
        return F.transformed(action, side)
    if isinstance(action, FrameMap):
        return F + action
    if isinstance(action, Number):
        return F * action
    raise TypeError(f"unsupported action {type(action).__name__}")


def default_degree(*maps: FrameMap) -> int:
    """Rule degree ``2 d + 2`` for the largest polynomial degree ``d`` among ``maps``."""
    d = max((m.degree for m in maps if m.is_polynomial), default=0)
    return 2 * d + 2


__all__ = [
    "Interval", "Discrete", "MeasureSpace", "QuadratureRule", "build_rule",
    "integrate_alg", "L2Element", "l2_inner", "FrameMap", "eval_frame_map",
    "map_transform", "default_degree", "LEFT", "RIGHT",
]
