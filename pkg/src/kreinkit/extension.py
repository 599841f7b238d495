"""Binoncontractive extension of an indefinite-space isometry.

Given an isometry ``V`` from ``(H, J_H)`` into ``(K, J_K)`` (rectangular
allowed, meaning ``V* J_K V = J_H``), the extension is the block operator

    ``Vhat = [[V, A], [0, B*]]``

from ``H + K`` (with metric ``J_H + I``) into ``K + M`` (with metric
``J_K + I``), where ``A`` is the square root of the positive part of the
codomain defect ``J_K - V J_H V*``, ``p_plus`` the orthoprojector onto that
positive spectral subspace, and ``B`` an isometry of ``M`` onto the kernel
of ``p_plus`` (so ``dim M = dim K - rank p_plus``).  The assembled operator
preserves the extended product exactly and its adjoint defect is PSD, i.e.
it is a binoncontractive isometry of the extended spaces.

A square isometry of a finite-dimensional space is automatically invertible,
so its codomain defect vanishes and the construction degenerates to
``[[V, 0], [0, B*]]`` with unitary ``B``.  Rectangular inputs exercise the
construction nontrivially.

Coordinate bookkeeping: direct sums are realized plus-part first, so a sum
``X + E`` with ``E`` carrying the Hilbert metric is laid out
``[X_plus | E | X_minus]``; :class:`SumSplit` records the split.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .core import (
    KreinOperator,
    Signature,
    domain_defect,
    codomain_defect,
    fundamental_symmetry,
    hermitian_part,
    metric_signs,
    operator_norm,
)
from .errors import DegenerateIntersection, DimensionMismatch, NotIsometry, NotPositive
from .subspace import RANK_RTOL, SubspaceBasis, is_positive

__all__ = [
    "SumSplit",
    "PolarDecomposition",
    "ExtensionResult",
    "ExtensionCheck",
    "positive_part_root",
    "polar",
    "defect_isometry",
    "assemble_vhat",
    "build_extension",
    "verify_extension",
    "pullback_subspace",
]


@dataclass(frozen=True)
class SumSplit:
    """Plus-first realization of a sum ``inner + extra`` with definite extra part."""

    inner: Signature
    extra: int

    def __post_init__(self):
        if self.extra < 0:
            raise ValueError("extra dimension must be nonnegative")

    @property
    def signature(self) -> Signature:
        return Signature(self.inner.n_plus + self.extra, self.inner.n_minus)

    def natural_order(self) -> list:
        """Plus-first index -> index in the natural ``inner then extra`` order."""
        n_p, n_m = self.inner.n_plus, self.inner.n_minus
        d = n_p + n_m
        return list(range(n_p)) + [d + i for i in range(self.extra)] + list(range(n_p, d))

    def extra_coords(self) -> list:
        """Positions of the extra block in the plus-first layout."""
        return list(range(self.inner.n_plus, self.inner.n_plus + self.extra))

    def inner_coords(self) -> list:
        """Positions of the inner space in the plus-first layout."""
        return list(range(self.inner.n_plus)) + list(
            range(self.inner.n_plus + self.extra, self.signature.dim))

    def embed_inner(self, columns: np.ndarray) -> np.ndarray:
        """Pad inner-space columns with zeros on the extra block."""
        cols = np.asarray(columns, dtype=np.complex128)
        out = np.zeros((self.signature.dim, cols.shape[1]), dtype=np.complex128)
        out[self.inner_coords(), :] = cols
        return out


@dataclass(frozen=True)
class PolarDecomposition:
    """Factors ``M = u @ modulus`` with ``modulus = (M* M)**(1/2)``."""

    u: np.ndarray
    modulus: np.ndarray


def polar(m) -> PolarDecomposition:
    """Polar decomposition via the Hermitian root of ``M* M``.

    ``u`` is ``M`` times the pseudo-inverse of the modulus, a partial
    isometry on the range of the modulus; when ``M`` is injective ``u`` is an
    isometry onto the range of ``M``.
    """
    mat = np.asarray(m, dtype=np.complex128)
    h = hermitian_part(mat.conj().T @ mat)
    w, u = np.linalg.eigh(h)
    w = np.clip(w, 0.0, None)
    roots = np.sqrt(w)
    modulus = hermitian_part((u * roots) @ u.conj().T)
    smax = roots[-1] if roots.size else 0.0
    mask = roots > RANK_RTOL * smax
    if np.any(mask):
        inv_root = (u[:, mask] * (1.0 / roots[mask])) @ u[:, mask].conj().T
    else:
        inv_root = np.zeros_like(h)
    return PolarDecomposition(mat @ inv_root, modulus)


def positive_part_root(s, abs_cut: float = 1e-10, rel_cut: float = 1e-12):
    """Square root of the positive part of a Hermitian matrix.

    Returns ``(A, p_plus)`` where ``p_plus`` projects onto the eigenvectors
    with eigenvalue above ``max(abs_cut, rel_cut * max|lambda|)`` and
    ``A = sum sqrt(lambda) * eigenprojector`` over those eigenvalues, so that
    ``A @ A = S @ p_plus`` up to roundoff and ``Ran A = Ran p_plus``.

    The matrix is computed by subtraction in the main use and carries
    cancellation error; the relative-plus-absolute cutoff separates genuine
    positive spectrum from that noise.
    """
    mat = hermitian_part(np.asarray(s, dtype=np.complex128))
    if mat.shape[0] != mat.shape[1]:
        raise DimensionMismatch("positive part requires a square Hermitian matrix")
    w, u = np.linalg.eigh(mat)
    cut = max(abs_cut, rel_cut * (np.abs(w).max() if w.size else 0.0))
    mask = w > cut
    up = u[:, mask]
    a = hermitian_part((up * np.sqrt(w[mask])) @ up.conj().T)
    p_plus = hermitian_part(up @ up.conj().T)
    return a, p_plus


def defect_isometry(p_plus, dim_total: int | None = None) -> np.ndarray:
    """Orthonormal columns spanning the kernel of an orthoprojector.

    The returned ``B`` satisfies ``B* B = I`` and ``B B* = I - p_plus``.
    Columns come from the Hermitian eigendecomposition ordered by eigenvalue,
    with each column's phase fixed so its first significant component is real
    positive; any unitary change of the initial space is equivalent.
    """
    p = hermitian_part(np.asarray(p_plus, dtype=np.complex128))
    n = p.shape[0]
    if p.shape != (n, n):
        raise DimensionMismatch("projector must be square")
    if dim_total is not None and dim_total != n:
        raise DimensionMismatch(f"projector acts on dimension {n}, not {dim_total}")
    if np.abs(p @ p - p).max() > 1e-8:
        raise ValueError("input is not an orthoprojector")
    w, u = np.linalg.eigh(p)
    cols = u[:, w < 0.5]
    fixed = []
    for j in range(cols.shape[1]):
        c = cols[:, j].copy()
        nz = np.nonzero(np.abs(c) > 1e-8 * np.abs(c).max())[0]
        lead = c[nz[0]]
        c *= lead.conjugate() / abs(lead)
        fixed.append(c)
    return np.array(fixed, dtype=np.complex128).T.reshape(n, len(fixed))


def assemble_vhat(v: KreinOperator, a: np.ndarray, b: np.ndarray):
    """Assemble ``[[V, A], [0, B*]]`` in plus-first coordinates.

    Returns the operator together with the domain and codomain splits.
    """
    dim_h, dim_k = v.domain.dim, v.codomain.dim
    dim_m = b.shape[1]
    nat = np.zeros((dim_k + dim_m, dim_h + dim_k), dtype=np.complex128)
    nat[:dim_k, :dim_h] = v.matrix
    nat[:dim_k, dim_h:] = a
    nat[dim_k:, dim_h:] = b.conj().T
    dom = SumSplit(v.domain, dim_k)
    cod = SumSplit(v.codomain, dim_m)
    pf = nat[np.ix_(cod.natural_order(), dom.natural_order())]
    return KreinOperator(dom.signature, cod.signature, pf), dom, cod


@dataclass(frozen=True)
class ExtensionResult:
    """All data of the assembled extension plus its verification residuals.

    Invariants of a correctly built result (reported, not enforced, so that
    corrupted variants can be fed to :func:`verify_extension` as negative
    controls): ``A p_plus = p_plus A = A``, ``B* B = I``,
    ``B B* = I - p_plus``, and ``vhat`` assembled exactly from the blocks.
    """

    operator: KreinOperator
    delta: np.ndarray
    p_plus: np.ndarray
    a: np.ndarray
    b: np.ndarray
    vhat: KreinOperator
    domain_split: SumSplit
    codomain_split: SumSplit
    residuals: dict


@dataclass(frozen=True)
class ExtensionCheck:
    """Named residuals of the block identities and the overall verdict."""

    residuals: dict
    min_adjoint_defect_eig: float
    scale: float
    passed: bool


def isometry_residual(v: KreinOperator) -> float:
    """Max-entry residual of ``V* J_K V - J_H``."""
    dd = domain_defect(v)
    return float(np.abs(dd).max()) if dd.size else 0.0


def build_extension(v: KreinOperator, tol: float = 1e-9) -> ExtensionResult:
    """Construct the binoncontractive extension of an isometry.

    Raises
    ------
    NotIsometry
        If ``V* J_K V`` differs from ``J_H`` by more than
        ``tol * (1 + ||V||**2)`` in any entry.
    """
    scale = 1.0 + operator_norm(v.matrix) ** 2
    if isometry_residual(v) > tol * scale:
        raise NotIsometry("operator does not preserve the indefinite product within tolerance")
    delta = codomain_defect(v)
    a, p_plus = positive_part_root(delta)
    b = defect_isometry(p_plus, v.codomain.dim)
    vhat, dom, cod = assemble_vhat(v, a, b)
    result = ExtensionResult(
        operator=v, delta=delta, p_plus=p_plus, a=a, b=b,
        vhat=vhat, domain_split=dom, codomain_split=cod, residuals={},
    )
    check = verify_extension(result, tol)
    object.__setattr__(result, "residuals", dict(check.residuals))
    return result


def verify_extension(res: ExtensionResult, tol: float = 1e-9) -> ExtensionCheck:
    """Recompute the block identities of an extension from its stored parts.

    Residuals: ``v_adj_a`` for ``V* J_K A``, ``a_b`` for ``A B``, ``a_j_a``
    for ``A J_K A - p_plus``, ``hat_isometry`` for
    ``Vhat* Jhat_cod Vhat - Jhat_dom``, and the minimum eigenvalue of
    ``Vhat Jhat_dom Vhat* - Jhat_cod`` (nonnegative for a binoncontraction).
    """
    v = res.operator
    jk = metric_signs(v.codomain)
    r_vja = operator_norm(v.matrix.conj().T @ (jk[:, None] * res.a))
    r_ab = operator_norm(res.a @ res.b)
    r_aja = operator_norm(res.a @ (jk[:, None] * res.a) - res.p_plus)
    j_dom = fundamental_symmetry(res.vhat.domain)
    j_cod = fundamental_symmetry(res.vhat.codomain)
    m = res.vhat.matrix
    r_iso = float(np.abs(m.conj().T @ j_cod @ m - j_dom).max())
    adj_defect = hermitian_part(m @ j_dom @ m.conj().T - j_cod)
    min_eig = float(np.linalg.eigvalsh(adj_defect)[0]) if adj_defect.size else 0.0
    scale = 1.0 + operator_norm(v.matrix) ** 2
    residuals = {
        "v_adj_a": float(r_vja),
        "a_b": float(r_ab),
        "a_j_a": float(r_aja),
        "hat_isometry": r_iso,
    }
    passed = all(r <= tol * scale for r in residuals.values()) and min_eig >= -tol * scale
    return ExtensionCheck(residuals=residuals, min_adjoint_defect_eig=min_eig,
                          scale=scale, passed=passed)


def pullback_subspace(basis: SubspaceBasis, split: SumSplit, tol: float = 1e-10) -> SubspaceBasis:
    """Intersect a subspace of a sum with the inner space and drop the extra block.

    For a maximal positive subspace of the sum, the intersection with
    ``inner + {0}`` has dimension exactly ``n_plus(inner)`` and the result is
    maximal positive in the inner space.

    Raises
    ------
    NotPositive
        If the input subspace is not nonnegative within ``tol``.
    DegenerateIntersection
        If the intersection dimension differs from ``n_plus(inner)``, which
        signals a non-maximal input or a numerical rank failure.
    """
    if basis.space != split.signature:
        raise DimensionMismatch("subspace does not live on the stated sum space")
    if not is_positive(basis, tol):
        raise NotPositive("pullback input is not a nonnegative subspace")
    q = scipy.linalg.orth(basis.columns) if basis.dim else basis.columns
    constraint = q[split.extra_coords(), :]
    if constraint.size:
        _, s, vh = np.linalg.svd(constraint)
        rank = int(np.sum(s > RANK_RTOL * s[0])) if s.size and s[0] > 0 else 0
        null = vh[rank:, :].conj().T
    else:
        null = np.eye(q.shape[1], dtype=np.complex128)
    if null.shape[1] != split.inner.n_plus:
        raise DegenerateIntersection(
            f"intersection dimension {null.shape[1]} != plus dimension {split.inner.n_plus}")
    inter = q @ null
    inner_rows = inter[split.inner_coords(), :]
    try:
        return SubspaceBasis(split.inner, inner_rows)
    except ValueError as exc:
        raise DegenerateIntersection(f"intersection collapses on the inner space: {exc}") from exc
