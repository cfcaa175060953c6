"""The Hilbert module ``U = A^k`` over a block-diagonal matrix algebra.

An element ``f = (f_1, ..., f_k)`` is a row of ``k`` algebra elements.  Its
block-``j`` part is the ``n_j x k n_j`` matrix ``[f_1^(j) ... f_k^(j)]``;
the inner product is ``<f, g> = sum_i f_i g_i^*``, computed blockwise as
``f^(j) g^(j)*``.

Adjointable operators on ``U`` are ``k x k`` matrices over ``A``, i.e. one
``k n_j x k n_j`` matrix per block, acting on the right: ``T f = f X``.
The adjoint is the conjugate transpose.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from numbers import Number
from typing import Optional, Sequence

import numpy as np

from .algebra import (
    AlgebraDescriptor,
    AlgebraElement,
    _frozen,
    order_leq,
)
from .errors import DescriptorMismatch, ShapeMismatch

RIGHT = "right"
LEFT = "left"


def _check_side(side: str) -> str:
    if side not in (RIGHT, LEFT):
        raise ValueError(f"side must be 'right' or 'left', got {side!r}")
    return side


def split_row(descriptor: AlgebraDescriptor, rank: int, dense) -> list[np.ndarray]:
    """Dense ``n x kn`` block row -> per-block ``n_j x k n_j`` parts."""
    m = np.asarray(dense, dtype=np.complex128)
    n = descriptor.n
    if m.shape != (n, rank * n):
        raise ShapeMismatch(f"expected shape {(n, rank * n)}, got {m.shape}")
    comps = [descriptor.from_dense(m[:, i * n:(i + 1) * n]) for i in range(rank)]
    return [np.hstack([c.blocks[j] for c in comps]) for j in range(len(descriptor.blocks))]


@dataclass(frozen=True, eq=False)
class ModuleElement:
    descriptor: AlgebraDescriptor
    rank: int
    parts: tuple[np.ndarray, ...] = field(repr=False)

    def __post_init__(self):
        parts = tuple(_frozen(p) for p in self.parts)
        if self.rank < 1:
            raise ShapeMismatch("module rank must be >= 1")
        if len(parts) != len(self.descriptor.blocks):
            raise ShapeMismatch("one part per algebra block is required")
        for p, b in zip(parts, self.descriptor.blocks):
            if p.shape != (b, self.rank * b):
                raise ShapeMismatch(f"part of shape {p.shape}, expected {(b, self.rank * b)}")
        object.__setattr__(self, "parts", parts)

    @classmethod
    def from_components(cls, components: Sequence[AlgebraElement]) -> "ModuleElement":
        if not components:
            raise ShapeMismatch("at least one component is required")
        desc = components[0].descriptor
        for c in components:
            if c.descriptor != desc:
                raise DescriptorMismatch("components belong to different algebras")
        parts = [np.hstack([c.blocks[j] for c in components]) for j in range(len(desc.blocks))]
        return cls(desc, len(components), parts)

    @classmethod
    def from_dense(cls, descriptor: AlgebraDescriptor, rank: int, dense) -> "ModuleElement":
        return cls(descriptor, rank, split_row(descriptor, rank, dense))

    @classmethod
    def zeros(cls, descriptor: AlgebraDescriptor, rank: int = 1) -> "ModuleElement":
        return cls(descriptor, rank, [np.zeros((b, rank * b)) for b in descriptor.blocks])

    @classmethod
    def random(cls, descriptor: AlgebraDescriptor, rank: int, rng: np.random.Generator,
               scale: float = 1.0) -> "ModuleElement":
        parts = []
        for b in descriptor.blocks:
            shape = (b, rank * b)
            parts.append(scale * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)))
        return cls(descriptor, rank, parts)

    @property
    def components(self) -> list[AlgebraElement]:
        out = []
        for i in range(self.rank):
            out.append(AlgebraElement(
                self.descriptor,
                [p[:, i * b:(i + 1) * b] for p, b in zip(self.parts, self.descriptor.blocks)],
            ))
        return out

    @property
    def dense(self) -> np.ndarray:
        return np.hstack([c.dense for c in self.components])

    def _check(self, other):
        if not isinstance(other, ModuleElement):
            raise TypeError(f"expected ModuleElement, got {type(other).__name__}")
        if other.descriptor != self.descriptor or other.rank != self.rank:
            raise ShapeMismatch("module elements have different algebra or rank")

    def _new(self, parts):
        return ModuleElement(self.descriptor, self.rank, parts)

    def __add__(self, other):
        self._check(other)
        return self._new([a + b for a, b in zip(self.parts, other.parts)])

    def __sub__(self, other):
        self._check(other)
        return self._new([a - b for a, b in zip(self.parts, other.parts)])

    def __neg__(self):
        return self._new([-p for p in self.parts])

    def __mul__(self, c):
        if not isinstance(c, Number):
            return NotImplemented
        return self._new([c * p for p in self.parts])

    __rmul__ = __mul__

    def allclose(self, other: "ModuleElement", atol: float = 1e-12) -> bool:
        self._check(other)
        return all(np.allclose(a, b, rtol=0, atol=atol) for a, b in zip(self.parts, other.parts))


@dataclass(frozen=True, eq=False)
class ModuleOperator:
    """Adjointable operator on ``A^k``, acting by right multiplication."""

    descriptor: AlgebraDescriptor
    rank: int
    parts: tuple[np.ndarray, ...] = field(repr=False)

    def __post_init__(self):
        parts = tuple(_frozen(p) for p in self.parts)
        if len(parts) != len(self.descriptor.blocks):
            raise ShapeMismatch("one part per algebra block is required")
        for p, b in zip(parts, self.descriptor.blocks):
            m = self.rank * b
            if p.shape != (m, m):
                raise ShapeMismatch(f"operator part of shape {p.shape}, expected {(m, m)}")
        object.__setattr__(self, "parts", parts)

    @classmethod
    def identity(cls, descriptor: AlgebraDescriptor, rank: int = 1) -> "ModuleOperator":
        return cls(descriptor, rank, [np.eye(rank * b) for b in descriptor.blocks])

    @classmethod
    def scalar(cls, descriptor: AlgebraDescriptor, rank: int, c: complex) -> "ModuleOperator":
        return cls(descriptor, rank, [c * np.eye(rank * b) for b in descriptor.blocks])

    @classmethod
    def from_entries(cls, entries: Sequence[Sequence[AlgebraElement]]) -> "ModuleOperator":
        """Build from a ``k x k`` grid of algebra elements."""
        k = len(entries)
        if k == 0 or any(len(row) != k for row in entries):
            raise ShapeMismatch("operator entries must form a square grid")
        desc = entries[0][0].descriptor
        parts = []
        for j in range(len(desc.blocks)):
            parts.append(np.block([[entries[i][l].blocks[j] for l in range(k)] for i in range(k)]))
        return cls(desc, k, parts)

    @classmethod
    def from_dense(cls, descriptor: AlgebraDescriptor, rank: int, dense) -> "ModuleOperator":
        m = np.asarray(dense, dtype=np.complex128)
        n = descriptor.n
        if m.shape != (rank * n, rank * n):
            raise ShapeMismatch(f"expected shape {(rank * n, rank * n)}, got {m.shape}")
        entries = [[descriptor.from_dense(m[i * n:(i + 1) * n, l * n:(l + 1) * n])
                    for l in range(rank)] for i in range(rank)]
        return cls.from_entries(entries)

    @classmethod
    def from_algebra(cls, a: AlgebraElement) -> "ModuleOperator":
        """Rank-one operator ``f -> f a``."""
        return cls(a.descriptor, 1, a.blocks)

    @classmethod
    def random(cls, descriptor: AlgebraDescriptor, rank: int, rng: np.random.Generator,
               scale: float = 1.0) -> "ModuleOperator":
        parts = []
        for b in descriptor.blocks:
            shape = (rank * b, rank * b)
            parts.append(scale * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)))
        return cls(descriptor, rank, parts)

    @property
    def entries(self) -> list[list[AlgebraElement]]:
        out = []
        for i in range(self.rank):
            row = []
            for l in range(self.rank):
                row.append(AlgebraElement(self.descriptor, [
                    p[i * b:(i + 1) * b, l * b:(l + 1) * b]
                    for p, b in zip(self.parts, self.descriptor.blocks)
                ]))
            out.append(row)
        return out

    @property
    def dense(self) -> np.ndarray:
        return np.block([[e.dense for e in row] for row in self.entries])

    @property
    def H(self) -> "ModuleOperator":
        return self._new([p.conj().T for p in self.parts])

    def _new(self, parts):
        return ModuleOperator(self.descriptor, self.rank, parts)

    def _check(self, other):
        if not isinstance(other, ModuleOperator):
            raise TypeError(f"expected ModuleOperator, got {type(other).__name__}")
        if other.descriptor != self.descriptor or other.rank != self.rank:
            raise ShapeMismatch("operators have different algebra or rank")

    def __add__(self, other):
        self._check(other)
        return self._new([a + b for a, b in zip(self.parts, other.parts)])

    def __sub__(self, other):
        self._check(other)
        return self._new([a - b for a, b in zip(self.parts, other.parts)])

    def __neg__(self):
        return self._new([-p for p in self.parts])

    def __mul__(self, c):
        if not isinstance(c, Number):
            return NotImplemented
        return self._new([c * p for p in self.parts])

    __rmul__ = __mul__

    def __matmul__(self, other):
        """Product of the representing matrices (not operator composition).

        Because operators act on the right, ``compose(S, T)`` (first ``T``,
        then ``S``) is represented by ``T @ S``.
        """
        if not isinstance(other, ModuleOperator):
            return NotImplemented
        self._check(other)
        return self._new([a @ b for a, b in zip(self.parts, other.parts)])

    def power(self, p: int) -> "ModuleOperator":
        return self._new([np.linalg.matrix_power(x, p) for x in self.parts])

    def norm(self) -> float:
        return max(float(np.linalg.norm(p, 2)) for p in self.parts)

    def allclose(self, other: "ModuleOperator", atol: float = 1e-12) -> bool:
        self._check(other)
        return all(np.allclose(a, b, rtol=0, atol=atol) for a, b in zip(self.parts, other.parts))


def compose(outer: ModuleOperator, inner_op: ModuleOperator) -> ModuleOperator:
    """The operator ``f -> outer(inner_op(f))``."""
    return inner_op @ outer


def inner(f: ModuleElement, g: ModuleElement) -> AlgebraElement:
    f._check(g)
    return AlgebraElement(f.descriptor, [a @ b.conj().T for a, b in zip(f.parts, g.parts)])


def left_act(a: AlgebraElement, f: ModuleElement) -> ModuleElement:
    if a.descriptor != f.descriptor:
        raise DescriptorMismatch("algebra element and module element use different algebras")
    return f._new([x @ p for x, p in zip(a.blocks, f.parts)])


def elem_norm(f: ModuleElement) -> float:
    """``||<f, f>||^(1/2)``, i.e. the largest singular value of the block row."""
    return max(float(np.linalg.norm(p, 2)) for p in f.parts)


def apply_operator(T: ModuleOperator, f: ModuleElement, side: str = RIGHT) -> ModuleElement:
    """Apply ``T`` to ``f``.

    ``side="right"`` is the module action ``f X``.  ``side="left"`` forms
    ``X f`` and only makes sense for rank one; it reproduces computations that
    multiply by the frame operator matrix from the left.
    """
    _check_side(side)
    if T.descriptor != f.descriptor or T.rank != f.rank:
        raise ShapeMismatch("operator and element have different algebra or rank")
    if side == RIGHT:
        return f._new([p @ x for p, x in zip(f.parts, T.parts)])
    if f.rank != 1:
        raise ShapeMismatch("left application is defined only for rank-one modules")
    return f._new([x @ p for p, x in zip(f.parts, T.parts)])


def operator_adjoint(T: ModuleOperator) -> ModuleOperator:
    return T.H


def operator_norm_bound_check(T: ModuleOperator, samples: int = 0,
                              rng: Optional[np.random.Generator] = None,
                              tol: Optional[float] = None) -> float:
    """Smallest ``k`` with ``<Tf, Tf> <= k <f, f>`` for all ``f``: ``||X||^2``.

    With ``samples > 0`` the inequality is also checked in the C*-order on that
    many random ``f``; an ``AssertionError`` signals a violation.
    """
    k = T.norm() ** 2
    if samples:
        rng = np.random.default_rng() if rng is None else rng
        for _ in range(samples):
            f = ModuleElement.random(T.descriptor, T.rank, rng)
            Tf = apply_operator(T, f)
            report = order_leq(inner(Tf, Tf), k * inner(f, f), tol)
            assert report.holds, f"norm bound violated, margin {report.margin:.3e}"
    return k


def module_operator(descriptor: AlgebraDescriptor, rank: int, value) -> ModuleOperator:
    """Coerce a scalar, algebra element (rank one) or dense matrix to an operator."""
    if isinstance(value, ModuleOperator):
        if value.descriptor != descriptor or value.rank != rank:
            raise ShapeMismatch("operator has different algebra or rank")
        return value
    if isinstance(value, Number):
        return ModuleOperator.scalar(descriptor, rank, value)
    if isinstance(value, AlgebraElement):
        if rank != 1:
            raise ShapeMismatch("an algebra element is an operator only on rank-one modules")
        return ModuleOperator.from_algebra(value)
    return ModuleOperator.from_dense(descriptor, rank, value)

