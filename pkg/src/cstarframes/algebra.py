"""Finite-dimensional C*-algebras of block-diagonal complex matrices.

An algebra ``A = M_{n_1} + ... + M_{n_m}`` is described by its block sizes.
Elements store one square array per block, so the off-block zeros are never
materialised and cannot drift.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from numbers import Number
from typing import NamedTuple, Optional

import numpy as np
from scipy.linalg import block_diag

from . import tolerances
from .errors import (
    BlockPatternViolation,
    DescriptorMismatch,
    NotHermitian,
    ShapeMismatch,
    SingularElement,
)


def _frozen(arr) -> np.ndarray:
    out = np.array(arr, dtype=np.complex128, copy=True)
    out.flags.writeable = False
    return out


@dataclass(frozen=True)
class AlgebraDescriptor:
    """Block sizes ``[n_1, ..., n_m]`` of a block-diagonal matrix algebra."""

    blocks: tuple[int, ...]

    def __post_init__(self):
        blocks = tuple(int(b) for b in self.blocks)
        if not blocks or any(b < 1 for b in blocks):
            raise ShapeMismatch(f"block sizes must be positive, got {self.blocks!r}")
        object.__setattr__(self, "blocks", blocks)

    @classmethod
    def full(cls, n: int) -> "AlgebraDescriptor":
        return cls((n,))

    @classmethod
    def commutative(cls, n: int) -> "AlgebraDescriptor":
        return cls((1,) * n)

    @property
    def n(self) -> int:
        return sum(self.blocks)

    @property
    def offsets(self) -> tuple[int, ...]:
        return tuple(int(o) for o in np.cumsum((0,) + self.blocks[:-1]))

    @property
    def dim(self) -> int:
        """Dimension of the algebra as a complex vector space."""
        return sum(b * b for b in self.blocks)

    def identity(self) -> "AlgebraElement":
        return AlgebraElement(self, [np.eye(b) for b in self.blocks])

    def zeros(self) -> "AlgebraElement":
        return AlgebraElement(self, [np.zeros((b, b)) for b in self.blocks])

    def scalar(self, c: complex) -> "AlgebraElement":
        return AlgebraElement(self, [c * np.eye(b) for b in self.blocks])

    def from_dense(self, matrix) -> "AlgebraElement":
        """Split a dense ``n x n`` matrix into blocks.

        Raises ``BlockPatternViolation`` if any entry outside the diagonal
        blocks is nonzero.
        """
        m = np.asarray(matrix, dtype=np.complex128)
        if m.shape != (self.n, self.n):
            raise ShapeMismatch(f"expected {self.n}x{self.n} matrix, got shape {m.shape}")
        mask = np.ones(m.shape, dtype=bool)
        parts = []
        for off, b in zip(self.offsets, self.blocks):
            parts.append(m[off:off + b, off:off + b])
            mask[off:off + b, off:off + b] = False
        if np.any(m[mask] != 0):
            i, j = np.argwhere(mask & (m != 0))[0]
            raise BlockPatternViolation(
                f"entry ({i}, {j}) lies outside the diagonal blocks {self.blocks}"
            )
        return AlgebraElement(self, parts)

    def random(self, rng: np.random.Generator, hermitian: bool = False,
               scale: float = 1.0) -> "AlgebraElement":
        parts = []
        for b in self.blocks:
            x = rng.standard_normal((b, b)) + 1j * rng.standard_normal((b, b))
            if hermitian:
                x = (x + x.conj().T) / 2
            parts.append(scale * x)
        return AlgebraElement(self, parts)

    def random_unitary(self, rng: np.random.Generator) -> "AlgebraElement":
        parts = []
        for b in self.blocks:
            z = rng.standard_normal((b, b)) + 1j * rng.standard_normal((b, b))
            q, r = np.linalg.qr(z)
            d = np.diagonal(r)
            parts.append(q * (d / np.abs(d)))
        return AlgebraElement(self, parts)


@dataclass(frozen=True, eq=False)
class AlgebraElement:
    """An element of a block-diagonal matrix algebra.

    ``blocks`` holds one ``n_j x n_j`` complex array per diagonal block.
    Instances are immutable; arithmetic returns new elements.
    """

    descriptor: AlgebraDescriptor
    blocks: tuple[np.ndarray, ...] = field(repr=False)

    def __post_init__(self):
        parts = tuple(_frozen(p) for p in self.blocks)
        if len(parts) != len(self.descriptor.blocks):
            raise ShapeMismatch(
                f"{len(parts)} blocks given for descriptor {self.descriptor.blocks}"
            )
        for p, b in zip(parts, self.descriptor.blocks):
            if p.shape != (b, b):
                raise ShapeMismatch(f"block of shape {p.shape}, expected {(b, b)}")
        object.__setattr__(self, "blocks", parts)

    @property
    def dense(self) -> np.ndarray:
        return block_diag(*self.blocks).astype(np.complex128)

    @property
    def H(self) -> "AlgebraElement":
        """The involution ``a*``."""
        return AlgebraElement(self.descriptor, [p.conj().T for p in self.blocks])

    adjoint = H

    def _check(self, other: "AlgebraElement"):
        if not isinstance(other, AlgebraElement):
            raise TypeError(f"expected AlgebraElement, got {type(other).__name__}")
        if other.descriptor != self.descriptor:
            raise DescriptorMismatch(
                f"descriptors differ: {self.descriptor.blocks} vs {other.descriptor.blocks}"
            )

    def __add__(self, other):
        self._check(other)
        return AlgebraElement(self.descriptor, [a + b for a, b in zip(self.blocks, other.blocks)])

    def __sub__(self, other):
        self._check(other)
        return AlgebraElement(self.descriptor, [a - b for a, b in zip(self.blocks, other.blocks)])

    def __neg__(self):
        return AlgebraElement(self.descriptor, [-a for a in self.blocks])

    def __mul__(self, c):
        if not isinstance(c, Number):
            return NotImplemented
        return AlgebraElement(self.descriptor, [c * a for a in self.blocks])

    __rmul__ = __mul__

    def __truediv__(self, c):
        return self * (1 / c)

    def __matmul__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        self._check(other)
        return AlgebraElement(self.descriptor, [a @ b for a, b in zip(self.blocks, other.blocks)])

    def allclose(self, other: "AlgebraElement", atol: float = 1e-12) -> bool:
        self._check(other)
        return all(np.allclose(a, b, rtol=0, atol=atol) for a, b in zip(self.blocks, other.blocks))

    def __repr__(self):
        return f"AlgebraElement(blocks={self.descriptor.blocks}, dense=\n{self.dense})"


def op_norm(a: AlgebraElement) -> float:
    """C*-norm: the largest singular value over all blocks."""
    return max(float(np.linalg.norm(p, 2)) if p.size else 0.0 for p in a.blocks)


def hermitian_defect(a: AlgebraElement) -> float:
    return op_norm(a - a.H)


def is_hermitian(a: AlgebraElement, tol: Optional[float] = None) -> bool:
    tol = tolerances.pick(tol, tolerances.HERMITIAN)
    return hermitian_defect(a) <= tol * (1.0 + op_norm(a))


def _block_eigh(a: AlgebraElement):
    """Eigen-decomposition of each (symmetrised) block, embedded into C^n."""
    vals, vecs = [], []
    for off, p in zip(a.descriptor.offsets, a.blocks):
        w, v = np.linalg.eigh((p + p.conj().T) / 2)
        for idx in range(len(w)):
            full = np.zeros(a.descriptor.n, dtype=np.complex128)
            full[off:off + len(w)] = v[:, idx]
            vals.append(float(w[idx]))
            vecs.append(full)
    return np.array(vals), vecs


def hermitian_eigenvalues(a: AlgebraElement, tol: Optional[float] = None) -> np.ndarray:
    """All ``n`` eigenvalues of a Hermitian element, ascending."""
    if not is_hermitian(a, tol):
        raise NotHermitian(
            f"element is not Hermitian (defect {hermitian_defect(a):.3e})",
            residual=hermitian_defect(a),
        )
    vals, _ = _block_eigh(a)
    return np.sort(vals)


class OrderReport(NamedTuple):
    """Outcome of ``a <= b`` in the C*-order.

    ``margin`` is the smallest eigenvalue of ``b - a``; ``witness`` is a unit
    vector ``v`` in ``C^n`` with ``<v, (b-a) v> = margin`` when the test fails.
    """

    holds: bool
    margin: float
    hermitian_defect: float
    witness: Optional[np.ndarray]

    def __bool__(self):
        return self.holds


def order_leq(a: AlgebraElement, b: AlgebraElement, tol: Optional[float] = None) -> OrderReport:
    a._check(b)
    tol = tolerances.pick(tol, tolerances.POSITIVITY)
    d = b - a
    scale = 1.0 + op_norm(d)
    defect = hermitian_defect(d)
    vals, vecs = _block_eigh(d)
    i = int(np.argmin(vals))
    margin = float(vals[i])
    holds = defect <= tol * scale and margin >= -tol * scale
    return OrderReport(holds, margin, defect, None if holds else vecs[i])


def is_positive(a: AlgebraElement, tol: Optional[float] = None) -> OrderReport:
    return order_leq(a.descriptor.zeros(), a, tol)


def inverse(a: AlgebraElement, tol: Optional[float] = None) -> AlgebraElement:
    tol = tolerances.pick(tol, tolerances.INVERTIBILITY)
    norm = op_norm(a)
    smin = min(float(np.linalg.svd(p, compute_uv=False)[-1]) for p in a.blocks)
    if norm == 0.0 or smin <= tol * norm:
        raise SingularElement(
            f"smallest singular value {smin:.3e} is below {tol:g} x norm {norm:.3e}",
            residual=smin,
        )
    return AlgebraElement(a.descriptor, [np.linalg.inv(p) for p in a.blocks])


def is_central(a: AlgebraElement, tol: Optional[float] = None) -> bool:
    """True iff every diagonal block is a multiple of its identity.

    This is exactly the center of ``M_{n_1} + ... + M_{n_m}``.
    """
    tol = tolerances.pick(tol, tolerances.CENTRALITY)
    cutoff = tol * max(op_norm(a), 1.0)
    for p in a.blocks:
        b = p.shape[0]
        c = np.trace(p) / b
        if np.linalg.norm(p - c * np.eye(b), 2) > cutoff:
            return False
    return True


def is_unitary(a: AlgebraElement, tol: float = 1e-12) -> bool:
    one = a.descriptor.identity()
    return op_norm(a.H @ a - one) <= tol and op_norm(a @ a.H - one) <= tol


def as_element(descriptor: AlgebraDescriptor, value) -> AlgebraElement:
    """Coerce a scalar, dense matrix, block list or element to ``AlgebraElement``."""
    if isinstance(value, AlgebraElement):
        if value.descriptor != descriptor:
            raise DescriptorMismatch("element belongs to a different algebra")
        return value
    if isinstance(value, Number):
        return descriptor.scalar(value)
    if isinstance(value, np.ndarray) or np.ndim(value) == 2:
        return descriptor.from_dense(value)
    return AlgebraElement(descriptor, list(value))
