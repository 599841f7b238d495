"""Invariant maximal positive subspaces via the angular graph transform.

The graph of a contraction ``K`` from the plus part into the minus part is
invariant under a square operator ``T`` exactly when ``K`` is a fixed point
of ``Phi(K) = (T21 + T22 K) (T11 + T12 K)^-1`` in the block coordinates of
``T``.  The solver iterates ``Phi`` from a zero (or supplied) start with
random contractive restarts, and falls back to a brute-force eigenvector
oracle.  Every answer is validated against the defining properties (norm
bound, fixed-point residual, invariance); nothing is trusted from the
method itself.  A ``NotFound`` outcome reports search failure only, never
nonexistence.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .core import KreinOperator, Signature, classify, operator_norm
from .errors import Defective, DimensionMismatch, NotFound, NotNoncontraction, SingularPivot
from .subspace import (
    AngularOperator,
    SubspaceBasis,
    angular_to_basis,
    basis_to_angular,
    invariance_residual,
    is_positive,
)

__all__ = [
    "RiccatiBlocks",
    "SolveOptions",
    "block_decompose",
    "reassemble",
    "riccati_map",
    "fixed_point_residual",
    "find_invariant_maximal_positive",
    "eigen_oracle",
    "subspace_distance",
]

# Pivot condition numbers above this abort the graph-transform step.
PIVOT_CONDITION_LIMIT = 1e12

# Norm slack accepted on returned angular operators.
NORM_SLACK = 1e-10

# Invariance residual bound used to validate answers.
INVARIANCE_TOL = 1e-8


@dataclass(frozen=True)
class RiccatiBlocks:
    """Blocks of a square operator in plus-first coordinates."""

    space: Signature
    t11: np.ndarray
    t12: np.ndarray
    t21: np.ndarray
    t22: np.ndarray


def block_decompose(t: KreinOperator) -> RiccatiBlocks:
    """Exact partition of a square operator; lossless."""
    if not t.square:
        raise DimensionMismatch("block decomposition requires a square operator")
    n_p = t.domain.n_plus
    m = t.matrix
    return RiccatiBlocks(
        space=t.domain,
        t11=m[:n_p, :n_p],
        t12=m[:n_p, n_p:],
        t21=m[n_p:, :n_p],
        t22=m[n_p:, n_p:],
    )


def reassemble(blocks: RiccatiBlocks) -> np.ndarray:
    return np.block([[blocks.t11, blocks.t12], [blocks.t21, blocks.t22]])


def riccati_map(blocks: RiccatiBlocks, k: np.ndarray) -> np.ndarray:
    """One graph-transform step ``(T21 + T22 K)(T11 + T12 K)^-1``.

    Raises
    ------
    SingularPivot
        If the plus-block pivot has condition number above 1e12.
    """
    k = np.asarray(k, dtype=np.complex128)
    pivot = blocks.t11 + blocks.t12 @ k
    if pivot.shape[0] == 0:
        return np.zeros((blocks.space.n_minus, 0), dtype=np.complex128)
    if np.linalg.cond(pivot) > PIVOT_CONDITION_LIMIT:
        raise SingularPivot("plus-block pivot is numerically singular")
    rhs = blocks.t21 + blocks.t22 @ k
    # K' = rhs @ pivot^-1 via a transpose solve
    return np.linalg.solve(pivot.T, rhs.T).T


def fixed_point_residual(blocks: RiccatiBlocks, k: np.ndarray) -> float:
    return operator_norm(riccati_map(blocks, k) - np.asarray(k, dtype=np.complex128))


@dataclass(frozen=True)
class SolveOptions:
    """Iteration controls for the fixed-point search."""

    max_iter: int = 300
    fix_tol: float = 1e-10
    start: np.ndarray | None = None
    restarts: int = 5
    restart_seed: int = 0
    stall_window: int = 50

    def __post_init__(self):
        if self.max_iter < 1:
            raise ValueError("max_iter must be at least 1")
        if self.fix_tol <= 0:
            raise ValueError("fix_tol must be positive")


def _iterate(blocks: RiccatiBlocks, start: np.ndarray, opts: SolveOptions):
    """Run the iteration; returns (K, converged) or (None, False) on pivot failure."""
    k = np.asarray(start, dtype=np.complex128)
    best = np.inf
    since_best = 0
    for _ in range(opts.max_iter):
        try:
            nxt = riccati_map(blocks, k)
        except SingularPivot:
            return None, False
        delta = operator_norm(nxt - k)
        k = nxt
        if delta <= opts.fix_tol:
            return k, True
        if delta < best:
            best = delta
            since_best = 0
        else:
            since_best += 1
            if since_best >= opts.stall_window:
                return k, False
    return k, False


def _validated(t: KreinOperator, blocks: RiccatiBlocks, k: np.ndarray,
               residual_tol: float) -> AngularOperator | None:
    if k is None:
        return None
    if operator_norm(k) > 1.0 + NORM_SLACK:
        return None
    try:
        if fixed_point_residual(blocks, k) > residual_tol:
            return None
    except SingularPivot:
        return None
    angular = AngularOperator(t.domain, k)
    resid = invariance_residual(t, angular_to_basis(angular))
    if resid > INVARIANCE_TOL * (1.0 + operator_norm(t.matrix)):
        return None
    return angular


def find_invariant_maximal_positive(t: KreinOperator, opts: SolveOptions | None = None,
                                    tol: float = 1e-9) -> AngularOperator:
    """Search for a maximal positive invariant subspace of a noncontraction.

    Strategy: graph-transform iteration from the supplied start (zero by
    default), then from a handful of seeded random contractive starts on
    pivot failure or stagnation, then the eigenvector oracle.  The returned
    angular operator satisfies ``||K|| <= 1 + 1e-10``, has fixed-point
    residual below ``fix_tol`` (or the validation bound on the oracle path),
    and its graph passes the invariance test.

    Raises
    ------
    NotNoncontraction
        If the precondition fails.
    NotFound
        If both strategies fail; carries diagnostics and makes no
        nonexistence claim.
    """
    opts = opts or SolveOptions()
    if not classify(t, tol).is_noncontraction:
        raise NotNoncontraction("operator is not a noncontraction within tolerance")
    blocks = block_decompose(t)
    n_p, n_m = t.domain.n_plus, t.domain.n_minus

    start = opts.start
    if start is None:
        start = np.zeros((n_m, n_p), dtype=np.complex128)
    elif isinstance(start, AngularOperator):
        start = start.K
    rng = np.random.default_rng(opts.restart_seed)
    starts = [np.asarray(start, dtype=np.complex128)]
    for _ in range(opts.restarts):
        g = rng.standard_normal((n_m, n_p)) + 1j * rng.standard_normal((n_m, n_p))
        nrm = operator_norm(g)
        starts.append(g * (rng.uniform(0.0, 0.9) / nrm) if nrm > 0 else g)

    attempts = 0
    for s in starts:
        k, converged = _iterate(blocks, s, opts)
        attempts += 1
        if converged:
            answer = _validated(t, blocks, k, opts.fix_tol)
            if answer is not None:
                return answer

    oracle_error = None
    try:
        answer = eigen_oracle(t, tol)
    except (Defective, NotFound) as exc:
        oracle_error = exc
    else:
        validated = _validated(t, blocks, answer.K, INVARIANCE_TOL)
        if validated is not None:
            return validated
        oracle_error = NotFound("oracle answer failed validation")
    raise NotFound(
        f"no maximal positive invariant subspace found after {attempts} iteration starts; "
        f"oracle: {oracle_error}")


def eigen_oracle(t: KreinOperator, tol: float = 1e-9) -> AngularOperator:
    """Exhaustive eigenvector-subset search (independent of the iteration).

    Enumerates all plus-dimension-sized subsets of an eigenbasis in order of
    descending eigenvalue-modulus product (ties broken lexicographically) and
    returns the first whose span is nonnegative.  Intended for desk scale
    (dimension about ten or below).

    Raises
    ------
    Defective
        If the eigenvector matrix is numerically singular (the input is not
        diagonalizable within tolerance); an oracle limitation, not a
        mathematical claim.
    NotFound
        If no subset spans a nonnegative subspace.
    """
    if not t.square:
        raise DimensionMismatch("oracle requires a square operator")
    n = t.domain.dim
    n_p = t.domain.n_plus
    w, x = np.linalg.eig(t.matrix)
    s = np.linalg.svd(x, compute_uv=False)
    if s[-1] < 1e-8 * s[0]:
        raise Defective("eigenvector matrix is numerically singular")
    moduli = np.abs(w)
    subsets = sorted(
        itertools.combinations(range(n), n_p),
        key=lambda sub: (-float(np.prod(moduli[list(sub)])) if sub else -1.0, sub),
    )
    for sub in subsets:
        cols = x[:, list(sub)]
        basis = SubspaceBasis(t.domain, cols)
        if is_positive(basis, tol):
            return basis_to_angular(basis, tol)
    raise NotFound("no nonnegative span among eigenvector subsets")


def subspace_distance(b1: SubspaceBasis, b2: SubspaceBasis) -> float:
    """Largest principal angle between two equal-dimensional subspaces, in radians."""
    if b1.space.dim != b2.space.dim:
        raise DimensionMismatch("subspaces live in different ambient dimensions")
    if b1.dim != b2.dim:
        raise DimensionMismatch("subspaces have different dimensions")
    if b1.dim == 0:
        return 0.0
    q1 = scipy.linalg.orth(b1.columns)
    q2 = scipy.linalg.orth(b2.columns)
    cosines = np.linalg.svd(q1.conj().T @ q2, compute_uv=False)
    cosines = np.clip(cosines, 0.0, 1.0)
    return float(np.arccos(cosines[-1]))
