"""Isometric dilation of a noncontraction on the countable direct sum.

The carrier is the direct sum of countably many copies of the base space,
with the indefinite product of the first copy and the negated Hilbert
product on every later copy.  Finitely supported vectors realize this space
exactly: the dilation only ever grows support by one block, so no truncation
error enters the block-vector path.

The dilation sends ``x1 . x2 . x3 ...`` to ``T x1 . D x1 . x2 . x3 ...``
where ``D`` is the positive square root of the defect ``T* J T - J``.  It
intertwines with the first-block projection (``T p = p V``) and preserves
the sum-space product exactly in exact arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    KreinOperator,
    Signature,
    classify,
    domain_defect,
    hermitian_part,
    indefinite_product,
    operator_norm,
)
from .errors import DimensionMismatch, NotNoncontraction
from .subspace import AngularOperator

__all__ = [
    "BlockVector",
    "DilationOperator",
    "block_vector",
    "zero_vector",
    "embed",
    "project",
    "hilbert_norm",
    "defect_root",
    "dilate",
    "dilation_hat_product",
    "apply_dilation",
    "truncate_dilation",
    "hat_signature",
    "pushdown_subspace",
]


@dataclass(frozen=True)
class BlockVector:
    """Finitely supported element of the countable direct sum.

    Block 1 is the distinguished copy (image of the canonical embedding and
    target of the canonical projection).  Trailing zero blocks are trimmed
    on construction, so support equals the stored length.
    """

    base: Signature
    blocks: tuple

    def __post_init__(self):
        dim = self.base.dim
        cleaned = []
        for b in self.blocks:
            v = np.array(b, dtype=np.complex128, copy=True)
            if v.shape != (dim,):
                raise DimensionMismatch(f"block shape {v.shape} does not match base dimension {dim}")
            if not np.all(np.isfinite(v)):
                raise ValueError("block vector has non-finite entries")
            v.setflags(write=False)
            cleaned.append(v)
        while cleaned and not np.any(cleaned[-1]):
            cleaned.pop()
        object.__setattr__(self, "blocks", tuple(cleaned))

    @property
    def support(self) -> int:
        return len(self.blocks)

    def block(self, index: int) -> np.ndarray:
        """Block at 1-based ``index`` (zeros beyond the support)."""
        if index < 1:
            raise IndexError("blocks are 1-based")
        if index <= len(self.blocks):
            return self.blocks[index - 1]
        return np.zeros(self.base.dim, dtype=np.complex128)


def block_vector(base: Signature, blocks) -> BlockVector:
    return BlockVector(base, tuple(blocks))


def zero_vector(base: Signature) -> BlockVector:
    return BlockVector(base, ())


def embed(base: Signature, v) -> BlockVector:
    """Canonical embedding of the base space onto block 1."""
    return BlockVector(base, (np.asarray(v, dtype=np.complex128),))


def project(x: BlockVector) -> np.ndarray:
    """Canonical projection onto block 1."""
    return x.block(1)


def hilbert_norm(x: BlockVector) -> float:
    return float(np.sqrt(sum(float(np.vdot(b, b).real) for b in x.blocks)))


def dilation_hat_product(base: Signature, x: BlockVector, y: BlockVector) -> complex:
    """Sum-space product: indefinite on block 1, negated Hilbert on blocks >= 2."""
    if x.base != base or y.base != base:
        raise DimensionMismatch("block vectors must share the stated base signature")
    total = indefinite_product(base, x.block(1), y.block(1))
    for k in range(2, max(x.support, y.support) + 1):
        total -= complex(np.vdot(x.block(k), y.block(k)))
    return total


def defect_root(t: KreinOperator, tol: float = 1e-9) -> np.ndarray:
    """Principal square root of the defect ``T* J T - J``.

    Eigenvalues in ``[-tol * (1 + ||T||**2), 0)`` are roundoff and clamped to
    zero; anything below that threshold is a genuine violation.

    Raises
    ------
    NotNoncontraction
        If the defect has an eigenvalue below the clamping threshold.
    """
    if not t.square:
        raise DimensionMismatch("dilation requires a square operator")
    thr = tol * (1.0 + operator_norm(t.matrix) ** 2)
    defect = domain_defect(t)
    w, u = np.linalg.eigh(defect)
    if w.size and w[0] < -thr:
        raise NotNoncontraction(f"defect has eigenvalue {w[0]:.3e} below -{thr:.3e}")
    w = np.clip(w, 0.0, None)
    return hermitian_part((u * np.sqrt(w)) @ u.conj().T)


@dataclass(frozen=True)
class DilationOperator:
    """A square noncontraction together with its defect root."""

    operator: KreinOperator
    root: np.ndarray

    def __post_init__(self):
        if not self.operator.square:
            raise DimensionMismatch("dilation requires a square operator")
        r = np.array(self.root, dtype=np.complex128, copy=True)
        n = self.operator.domain.dim
        if r.shape != (n, n):
            raise DimensionMismatch("defect root shape does not match the operator")
        r.setflags(write=False)
        object.__setattr__(self, "root", r)

    @property
    def base(self) -> Signature:
        return self.operator.domain


def dilate(t: KreinOperator, tol: float = 1e-9) -> DilationOperator:
    """Build the dilation data of a noncontraction (checks the precondition)."""
    if not classify(t, tol).is_noncontraction:
        raise NotNoncontraction("operator is not a noncontraction within tolerance")
    return DilationOperator(t, defect_root(t, tol))


def apply_dilation(dil: DilationOperator, x: BlockVector) -> BlockVector:
    """Blocks of the image: ``[T x1, D x1, x2, x3, ...]`` (support grows by <= 1)."""
    if x.base != dil.base:
        raise DimensionMismatch("block vector base does not match the dilation")
    x1 = x.block(1)
    out = [dil.operator.matrix @ x1, dil.root @ x1]
    out.extend(x.blocks[1:])
    return BlockVector(dil.base, tuple(out))


def hat_signature(base: Signature, depth: int) -> Signature:
    """Signature of the depth-truncated sum space (plus part is block 1's)."""
    return Signature(base.n_plus, base.n_minus + (depth - 1) * base.dim)


def truncate_dilation(dil: DilationOperator, depth: int) -> KreinOperator:
    """Finite section of the dilation on ``depth`` blocks.

    Maps ``[x1 .. x_depth]`` to ``[T x1, D x1, x2, .., x_{depth-1}]``; the
    deepest block is dropped.  The section is a noncontraction for the
    truncated signature (its defect is the Hilbert square of the dropped
    block) and is exactly product-preserving on vectors whose last block is
    zero.
    """
    if depth < 2:
        raise ValueError("depth must be at least 2")
    n = dil.base.dim
    m = np.zeros((depth * n, depth * n), dtype=np.complex128)
    m[:n, :n] = dil.operator.matrix
    m[n:2 * n, :n] = dil.root
    for k in range(2, depth):
        m[k * n:(k + 1) * n, (k - 1) * n:k * n] = np.eye(n)
    sig = hat_signature(dil.base, depth)
    return KreinOperator(sig, sig, m)


def pushdown_subspace(khat: AngularOperator, base: Signature, depth: int | None = None) -> AngularOperator:
    """Project a maximal angular operator on the truncated sum space to the base.

    The plus part of the sum space coincides with the base plus part, so the
    projected angular operator is the first minus-block row of ``khat``; its
    norm is bounded by the norm of ``khat``.  If the graph of ``khat`` is
    invariant under the truncated dilation, the projected graph is invariant
    under the base operator (the intertwining relation is exact).
    """
    if not khat.maximal:
        raise ValueError("pushdown requires a maximal angular operator")
    if khat.space.n_plus != base.n_plus:
        raise DimensionMismatch("sum-space plus part must equal the base plus part")
    tail = khat.space.n_minus - base.n_minus
    if tail < 0 or tail % base.dim != 0:
        raise DimensionMismatch("angular operator does not live on a truncated sum space")
    if depth is not None and tail != (depth - 1) * base.dim:
        raise DimensionMismatch(f"angular operator does not match depth {depth}")
    return AngularOperator(base, khat.K[:base.n_minus, :])
