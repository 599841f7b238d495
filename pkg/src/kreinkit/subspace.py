"""Positive subspaces as bases and as angular-operator graphs.

A maximal positive subspace of a space with signature ``(n_plus, n_minus)``
is exactly the graph ``{x .. K x}`` of a contraction ``K`` from the plus part
into the minus part.  Non-maximal positive subspaces are graphs over a proper
subspace of the plus part, represented here by an orthonormal basis of that
subspace; ``K`` is stored in the coordinates of that basis.

Neutral vectors (``<x, x> = 0``) count as nonnegative: the defining
inequality is non-strict.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .core import KreinOperator, Signature, fundamental_symmetry, hermitian_part, metric_signs, operator_norm
from .errors import DimensionMismatch, NotGraph, NotPositive

__all__ = [
    "AngularOperator",
    "SubspaceBasis",
    "angular_to_basis",
    "basis_to_angular",
    "gram_matrix",
    "is_positive",
    "is_maximal_positive",
    "is_invariant",
    "invariance_residual",
    "angular_norm",
    "flip_signature",
    "flipped",
    "is_negative",
]

# Singular values below RANK_RTOL * sigma_max are treated as zero.
RANK_RTOL = 1e-10


def _frozen_array(a, dtype=np.complex128) -> np.ndarray:
    m = np.array(a, dtype=dtype, copy=True)
    if m.size and not np.all(np.isfinite(m)):
        raise ValueError("non-finite entries")
    m.setflags(write=False)
    return m


@dataclass(frozen=True)
class SubspaceBasis:
    """A subspace given by a full-column-rank matrix of basis columns."""

    space: Signature
    columns: np.ndarray

    def __post_init__(self):
        m = _frozen_array(self.columns)
        if m.ndim != 2 or m.shape[0] != self.space.dim:
            raise DimensionMismatch(
                f"basis shape {m.shape} does not match ambient dimension {self.space.dim}")
        if m.shape[1]:
            s = np.linalg.svd(m, compute_uv=False)
            if s[-1] <= RANK_RTOL * s[0]:
                raise ValueError("basis columns are numerically rank deficient")
        object.__setattr__(self, "columns", m)

    @property
    def dim(self) -> int:
        return self.columns.shape[1]


@dataclass(frozen=True)
class AngularOperator:
    """Graph representation of a positive subspace.

    ``K`` maps coordinates with respect to ``domain_basis`` (an orthonormal
    basis of a subspace of the plus part) into the minus part.  The subspace
    is maximal exactly when ``domain_basis`` is the full identity.  A valid
    representation of a nonnegative subspace has ``||K|| <= 1``; the bound is
    checked by :func:`is_positive` on the materialized graph rather than at
    construction, so that boundary and invalid graphs can be examined.
    """

    space: Signature
    K: np.ndarray
    domain_basis: np.ndarray | None = None

    def __post_init__(self):
        k = _frozen_array(self.K)
        if k.ndim != 2 or k.shape[0] != self.space.n_minus:
            raise DimensionMismatch(
                f"angular matrix shape {k.shape} does not match minus dimension {self.space.n_minus}")
        if k.shape[1] > self.space.n_plus:
            raise DimensionMismatch("angular domain cannot exceed the plus part")
        basis = self.domain_basis
        if basis is None:
            if k.shape[1] != self.space.n_plus:
                raise DimensionMismatch("identity injection requires k = n_plus")
            basis = np.eye(self.space.n_plus, dtype=np.complex128)
        basis = _frozen_array(basis)
        if basis.shape != (self.space.n_plus, k.shape[1]):
            raise DimensionMismatch(
                f"domain basis shape {basis.shape} incompatible with K shape {k.shape}")
        if basis.size:
            orth_res = np.abs(basis.conj().T @ basis - np.eye(k.shape[1])).max()
            if orth_res > 1e-8:
                raise ValueError("domain basis columns are not orthonormal")
        object.__setattr__(self, "K", k)
        object.__setattr__(self, "domain_basis", basis)

    @property
    def k(self) -> int:
        return self.K.shape[1]

    @property
    def maximal(self) -> bool:
        return self.k == self.space.n_plus


def angular_norm(a: AngularOperator) -> float:
    return operator_norm(a.K)


def angular_to_basis(a: AngularOperator) -> SubspaceBasis:
    """Materialize the graph: columns are ``domain_basis`` stacked over ``K``."""
    cols = np.vstack([a.domain_basis, a.K])
    return SubspaceBasis(a.space, cols)


def gram_matrix(b: SubspaceBasis) -> np.ndarray:
    """Indefinite Gram matrix ``columns* J columns`` (exactly Hermitian)."""
    signs = metric_signs(b.space)
    return hermitian_part(b.columns.conj().T @ (signs[:, None] * b.columns))


def is_positive(b: SubspaceBasis, tol: float = 1e-10) -> bool:
    """True iff the Gram matrix has minimum eigenvalue >= -tol."""
    g = gram_matrix(b)
    if g.size == 0:
        return True
    return bool(np.linalg.eigvalsh(g)[0] >= -tol)


def is_maximal_positive(b: SubspaceBasis, tol: float = 1e-10) -> bool:
    """Positive and of dimension n_plus (the angular characterization of maximality)."""
    return b.dim == b.space.n_plus and is_positive(b, tol)


def basis_to_angular(b: SubspaceBasis, tol: float = 1e-10) -> AngularOperator:
    """Recover the angular operator of a nonnegative subspace.

    Parameters
    ----------
    b : SubspaceBasis
        Basis of a nonnegative subspace.
    tol : float
        Gram eigenvalue tolerance for the positivity precondition.

    Raises
    ------
    NotPositive
        If the Gram matrix has an eigenvalue below ``-tol``.
    NotGraph
        If the plus-part projection of the basis is rank deficient, which
        cannot happen for a genuinely nonnegative subspace and signals an
        inconsistent input.
    """
    if not is_positive(b, tol):
        raise NotPositive("subspace is not nonnegative within tolerance")
    n_plus = b.space.n_plus
    d = b.dim
    plus = b.columns[:n_plus, :]
    minus = b.columns[n_plus:, :]
    if d == 0:
        return AngularOperator(b.space, np.zeros((b.space.n_minus, 0)), np.zeros((n_plus, 0)))
    if d == n_plus:
        # maximal case: unique K with identity injection
        if n_plus and np.linalg.cond(plus) > 1.0 / RANK_RTOL:
            raise NotGraph("plus-part projection is numerically singular")
        k = minus @ np.linalg.inv(plus) if n_plus else minus
        return AngularOperator(b.space, k)
    u, s, vh = np.linalg.svd(plus, full_matrices=False)
    rank = int(np.sum(s > RANK_RTOL * (s[0] if s.size else 0.0)))
    if rank < d:
        raise NotGraph("plus-part projection of the basis is rank deficient")
    # plus = u @ (diag(s) vh); coordinates w.r.t. u are diag(s) vh @ c
    k = minus @ (vh.conj().T * (1.0 / s)[None, :])
    return AngularOperator(b.space, k, u)


def _orthonormal(columns: np.ndarray) -> np.ndarray:
    if columns.shape[1] == 0:
        return columns
    return scipy.linalg.orth(columns)


def invariance_residual(t: KreinOperator, b: SubspaceBasis) -> float:
    """Projection residual ``||(I - P_L) T Q_L||`` with Q_L orthonormal in L."""
    if not t.square or t.domain != b.space:
        raise DimensionMismatch("invariance requires a square operator on the subspace's space")
    q = _orthonormal(b.columns)
    if q.shape[1] == 0:
        return 0.0
    tq = t.matrix @ q
    resid = tq - q @ (q.conj().T @ tq)
    return operator_norm(resid)


def is_invariant(t: KreinOperator, b: SubspaceBasis, tol: float = 1e-10) -> bool:
    """True iff ``T`` maps the subspace into itself within ``tol * (1 + ||T||)``."""
    return invariance_residual(t, b) <= tol * (1.0 + operator_norm(t.matrix))


def flip_signature(sig: Signature) -> Signature:
    """Signature of the same space with the metric negated."""
    return Signature(sig.n_minus, sig.n_plus)


def flipped(b: SubspaceBasis) -> SubspaceBasis:
    """The same subspace viewed in the negated metric (minus part first)."""
    n_plus = b.space.n_plus
    cols = np.vstack([b.columns[n_plus:, :], b.columns[:n_plus, :]])
    return SubspaceBasis(flip_signature(b.space), cols)


def is_negative(b: SubspaceBasis, tol: float = 1e-10) -> bool:
    """Convenience: nonpositivity via the metric flip."""
    return is_positive(flipped(b), tol)
