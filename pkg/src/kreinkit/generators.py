"""Seeded generators for test operators and vectors.

Each generator takes an explicit ``numpy.random.Generator`` so the produced
objects are reproducible from a seed.  Constructions are certified by the
defining identities before being returned; a handful of resampling attempts
is allowed when a draw fails certification, with the rejection count
available to callers that need to record it.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg

from .core import KreinOperator, Signature, domain_defect, fundamental_symmetry, metric_signs, operator_norm
from .dilation import BlockVector
from .errors import DimensionMismatch

__all__ = [
    "random_j_unitary",
    "random_noncontraction",
    "random_binoncontraction",
    "random_rect_isometry",
    "random_contraction_matrix",
    "random_hilbert_violator",
    "random_block_vector",
    "random_nonneg_block_vector",
]

# Rectangular isometry drafts must reproduce the metric to this accuracy.
ISOMETRY_CERT_TOL = 1e-12

MAX_ATTEMPTS = 50


def _complex_gauss(rng, shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def random_j_unitary(sig: Signature, rng: np.random.Generator, spread: float = 1.0) -> KreinOperator:
    """Exponential of a random matrix anti-selfadjoint for the indefinite product."""
    n = sig.dim
    w = _complex_gauss(rng, (n, n)) * (spread / max(n, 1))
    j = metric_signs(sig)
    gen = w - j[:, None] * w.conj().T * j[None, :]
    return KreinOperator(sig, sig, scipy.linalg.expm(gen))


def _metric_factor(w_matrix: np.ndarray, sig: Signature) -> np.ndarray:
    """Factor a Hermitian matrix of inertia (n_plus, n_minus) as C* J C."""
    w, u = np.linalg.eigh(w_matrix)
    order = np.argsort(-w)
    w = w[order]
    u = u[:, order]
    if np.sum(w > 0) != sig.n_plus or np.sum(w < 0) != sig.n_minus:
        raise ValueError("inertia does not match the signature")
    return (np.sqrt(np.abs(w))[:, None]) * u.conj().T


def random_noncontraction(sig: Signature, rng: np.random.Generator,
                          bump: float = 0.7) -> KreinOperator:
    """Operator with PSD domain defect (generally not binoncontractive).

    Draws a PSD bump P with spectral norm strictly below one, factors
    ``J + P = C* J C``, and mixes with a random unit of the metric on the
    right.  The norm bound keeps the inertia of ``J + P`` equal to that of
    ``J`` (Weyl), so the congruence factor always exists.
    """
    if not 0 < bump < 1:
        raise ValueError("bump must lie in (0, 1) to preserve the inertia")
    n = sig.dim
    j = fundamental_symmetry(sig)
    g = _complex_gauss(rng, (n, n))
    p = g @ g.conj().T
    p *= bump * rng.uniform(0.1, 1.0) / operator_norm(p)
    c = _metric_factor(j + p, sig)
    u = random_j_unitary(sig, rng)
    return KreinOperator(sig, sig, c @ u.matrix)


def random_binoncontraction(sig: Signature, rng: np.random.Generator,
                            max_expand: float = 1.5, min_shrink: float = 0.2) -> KreinOperator:
    """Product U1 @ diag(expanding, contracting) @ U2 with units of the metric.

    Plus-part diagonal moduli lie in [1, max_expand], minus-part moduli in
    [min_shrink, 1]; both defects of the product are PSD by construction.
    The minus moduli are bounded away from zero so the result is invertible.
    """
    u1 = random_j_unitary(sig, rng)
    u2 = random_j_unitary(sig, rng)
    a = rng.uniform(1.0, max_expand, sig.n_plus) * np.exp(2j * np.pi * rng.uniform(size=sig.n_plus))
    b = rng.uniform(min_shrink, 1.0, sig.n_minus) * np.exp(2j * np.pi * rng.uniform(size=sig.n_minus))
    core = np.diag(np.concatenate([a, b]))
    return KreinOperator(sig, sig, u1.matrix @ core @ u2.matrix)


def random_rect_isometry(domain: Signature, codomain: Signature,
                         rng: np.random.Generator, max_mix: float = 0.9):
    """Metric-preserving map into a larger space with extra positive directions.

    Requires ``codomain = (n_plus + extra, n_minus)``.  A contraction block S
    feeds the extra positive coordinates and the core block C solves the
    congruence ``C* J C = J - S* S``; random units of both metrics are mixed
    in on each side.  Returns ``(operator, rejections)`` where the draw is
    certified to reproduce the domain metric to 1e-12 (max entry) and
    rejected seeds are counted.
    """
    if codomain.n_minus != domain.n_minus or codomain.n_plus < domain.n_plus:
        raise DimensionMismatch(
            "codomain must extend the domain by positive directions only")
    extra = codomain.n_plus - domain.n_plus
    n = domain.dim
    rejections = 0
    for _ in range(MAX_ATTEMPTS):
        g = _complex_gauss(rng, (extra, n))
        if extra:
            g *= rng.uniform(0.3, max_mix) / operator_norm(g)
        w = fundamental_symmetry(domain) - g.conj().T @ g
        try:
            c = _metric_factor((w + w.conj().T) / 2.0, domain)
        except ValueError:
            rejections += 1
            continue
        rows = np.vstack([c[:domain.n_plus, :], g, c[domain.n_plus:, :]])
        uk = random_j_unitary(codomain, rng)
        uh = random_j_unitary(domain, rng)
        candidate = KreinOperator(domain, codomain, uk.matrix @ rows @ uh.matrix)
        if np.abs(domain_defect(candidate)).max() <= ISOMETRY_CERT_TOL:
            return candidate, rejections
        rejections += 1
    raise RuntimeError("failed to certify a rectangular isometry draw")


def random_contraction_matrix(shape, rng: np.random.Generator, radius: float = 1.0) -> np.ndarray:
    """Random matrix rescaled to spectral norm at most ``radius``."""
    g = _complex_gauss(rng, shape)
    nrm = operator_norm(g)
    if nrm == 0:
        return g
    return g * (radius * rng.uniform(0.1, 1.0) / nrm)


def random_hilbert_violator(sig: Signature, rng: np.random.Generator) -> KreinOperator:
    """Hilbert contraction scaled so the noncontraction inequality must fail.

    Requires a nontrivial plus part: a strict Hilbert contraction shrinks
    every positive vector in the indefinite product as well.
    """
    if sig.n_plus == 0:
        raise ValueError("violator construction needs n_plus >= 1")
    g = _complex_gauss(rng, (sig.dim, sig.dim))
    return KreinOperator(sig, sig, g * (0.9 / operator_norm(g)))


def random_block_vector(base: Signature, rng: np.random.Generator,
                        max_support: int = 5) -> BlockVector:
    support = int(rng.integers(1, max_support + 1))
    blocks = [_complex_gauss(rng, base.dim) for _ in range(support)]
    return BlockVector(base, tuple(blocks))


def random_nonneg_block_vector(base: Signature, rng: np.random.Generator,
                               max_support: int = 5, margin: float | None = None) -> BlockVector:
    """Block vector with nonnegative sum-space square, by construction.

    The plus part of block 1 is rescaled so the sum-space square equals
    ``margin`` (drawn positive when not supplied), which also guarantees a
    nonzero first block.
    """
    if base.n_plus == 0:
        raise ValueError("nonnegative vectors in a definite-negative space are trivial")
    if margin is None:
        margin = float(rng.uniform(0.1, 1.0))
    support = int(rng.integers(1, max_support + 1))
    blocks = [_complex_gauss(rng, base.dim) for _ in range(support)]
    weight = sum(float(np.vdot(b, b).real) for b in blocks[1:])
    head = blocks[0]
    minus_sq = float(np.vdot(head[base.n_plus:], head[base.n_plus:]).real)
    plus = head[:base.n_plus]
    plus_sq = float(np.vdot(plus, plus).real)
    if plus_sq == 0.0:
        plus = np.ones(base.n_plus, dtype=np.complex128)
        plus_sq = float(base.n_plus)
    target = minus_sq + weight + margin
    head = head.copy()
    head[:base.n_plus] = plus * np.sqrt(target / plus_sq)
    blocks[0] = head
    return BlockVector(base, tuple(blocks))
