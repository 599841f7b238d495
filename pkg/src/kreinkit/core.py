"""Signatures, indefinite inner products, adjoints, and operator classification.

Conventions used throughout the package:

* Coordinates are ordered plus-part first: a space with signature
  ``(n_plus, n_minus)`` has the fundamental symmetry
  ``J = diag(+1 x n_plus, -1 x n_minus)``, so ``J**2 = I`` and ``J = J*``
  hold exactly for the materialized matrix.
* The indefinite product is ``<x, y> = (x, J y)`` with the Hilbert product
  ``(x, y) = sum(conj(x_i) * y_i)`` (conjugate-linear in the first slot).
* The indefinite adjoint of ``T: dom -> cod`` is ``J_dom @ T* @ J_cod``,
  which reduces to ``J T* J`` for a square operator and satisfies
  ``<T x, y>_cod = <x, adj(T) y>_dom`` for all vectors.

All values are immutable; every operation is a pure function.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch

__all__ = [
    "Signature",
    "KreinOperator",
    "Classification",
    "fundamental_symmetry",
    "metric_signs",
    "indefinite_product",
    "j_adjoint",
    "domain_defect",
    "codomain_defect",
    "classify",
    "hermitian_part",
    "operator_norm",
]


@dataclass(frozen=True)
class Signature:
    """Decomposition data (dim of the positive part, dim of the negative part)."""

    n_plus: int
    n_minus: int

    def __post_init__(self):
        if self.n_plus < 0 or self.n_minus < 0:
            raise ValueError("signature dimensions must be nonnegative")
        if self.n_plus + self.n_minus < 1:
            raise ValueError("a space an operator acts on must have dimension >= 1")

    @property
    def dim(self) -> int:
        return self.n_plus + self.n_minus

    def __str__(self):
        return f"({self.n_plus},{self.n_minus})"


def metric_signs(sig: Signature) -> np.ndarray:
    """Diagonal of the fundamental symmetry as a real vector."""
    return np.concatenate([np.ones(sig.n_plus), -np.ones(sig.n_minus)])


def fundamental_symmetry(sig: Signature) -> np.ndarray:
    """Dense diagonal matrix ``J = diag(+1 x n_plus, -1 x n_minus)``."""
    return np.diag(metric_signs(sig))


def _as_operator_matrix(matrix, shape) -> np.ndarray:
    m = np.array(matrix, dtype=np.complex128, copy=True)
    if m.shape != shape:
        raise DimensionMismatch(f"matrix shape {m.shape} does not match signatures {shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("operator matrix has non-finite entries")
    m.setflags(write=False)
    return m


@dataclass(frozen=True)
class KreinOperator:
    """A dense complex matrix together with domain and codomain signatures.

    Rectangular operators (different domain and codomain) are admitted
    everywhere the formulas make sense.
    """

    domain: Signature
    codomain: Signature
    matrix: np.ndarray

    def __post_init__(self):
        m = _as_operator_matrix(self.matrix, (self.codomain.dim, self.domain.dim))
        object.__setattr__(self, "matrix", m)

    @property
    def square(self) -> bool:
        return self.domain == self.codomain


def operator_norm(matrix: np.ndarray) -> float:
    """Spectral (2-) norm; zero for empty matrices."""
    m = np.asarray(matrix)
    if m.size == 0:
        return 0.0
    return float(np.linalg.norm(m, 2))


def hermitian_part(matrix: np.ndarray) -> np.ndarray:
    """(M + M*)/2; the result equals its own conjugate transpose bit-exactly."""
    m = np.asarray(matrix, dtype=np.complex128)
    return (m + m.conj().T) / 2.0


def _check_vector(sig: Signature, v) -> np.ndarray:
    x = np.asarray(v, dtype=np.complex128)
    if x.shape != (sig.dim,):
        raise DimensionMismatch(f"vector shape {x.shape} does not match signature {sig}")
    return x


def indefinite_product(sig: Signature, x, y) -> complex:
    """Indefinite product ``(x, J y)``, conjugate-linear in ``x``."""
    xv = _check_vector(sig, x)
    yv = _check_vector(sig, y)
    return complex(np.vdot(xv, metric_signs(sig) * yv))


def j_adjoint(t: KreinOperator) -> KreinOperator:
    """Indefinite adjoint ``J_dom @ T* @ J_cod``, with domain and codomain swapped."""
    jd = metric_signs(t.domain)
    jc = metric_signs(t.codomain)
    m = jd[:, None] * t.matrix.conj().T * jc[None, :]
    return KreinOperator(domain=t.codomain, codomain=t.domain, matrix=m)


def domain_defect(t: KreinOperator) -> np.ndarray:
    """Hermitian matrix ``T* J_cod T - J_dom`` (PSD iff T expands the product)."""
    jc = metric_signs(t.codomain)
    m = t.matrix.conj().T @ (jc[:, None] * t.matrix) - fundamental_symmetry(t.domain)
    return hermitian_part(m)


def codomain_defect(t: KreinOperator) -> np.ndarray:
    """Hermitian matrix ``J_cod - T J_dom T*``."""
    jd = metric_signs(t.domain)
    m = fundamental_symmetry(t.codomain) - t.matrix @ (jd[:, None] * t.matrix.conj().T)
    return hermitian_part(m)


@dataclass(frozen=True)
class Classification:
    """Flags and residuals produced by :func:`classify`.

    ``is_isometry``, ``is_binoncontraction`` and ``is_unitary`` require a
    square operator; for rectangular input they are reported false with the
    reason recorded in ``notes`` (a rectangular product-preserving map can
    still be recognized through ``max_isometry_residual``).
    """

    is_noncontraction: bool
    is_isometry: bool
    is_binoncontraction: bool
    is_unitary: bool
    min_domain_defect_eig: float
    max_isometry_residual: float
    tolerance_used: float
    square: bool
    notes: str = ""


def classify(t: KreinOperator, tol: float = 1e-9) -> Classification:
    """Classify an operator against the indefinite-product inequalities.

    The effective eigenvalue threshold is ``tol * (1 + ||T||**2)`` because
    the defects are quadratic in the operator.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    thr = tol * (1.0 + operator_norm(t.matrix) ** 2)

    dd = domain_defect(t)
    min_dd = float(np.linalg.eigvalsh(dd)[0]) if dd.size else 0.0
    iso_res = float(np.abs(dd).max()) if dd.size else 0.0

    is_noncontraction = min_dd >= -thr
    notes = ""
    if t.square:
        cd = codomain_defect(t)
        # T J T* - J = -codomain_defect; PSD iff the adjoint is a noncontraction
        min_ad = float(np.linalg.eigvalsh(-cd)[0]) if cd.size else 0.0
        cd_res = float(np.abs(cd).max()) if cd.size else 0.0
        is_isometry = iso_res <= thr
        is_binoncontraction = is_noncontraction and min_ad >= -thr
        is_unitary = is_isometry and cd_res <= thr
    else:
        is_isometry = is_binoncontraction = is_unitary = False
        if iso_res <= thr:
            notes = ("rectangular operator preserves the indefinite product; "
                     "isometry/unitary/binoncontraction flags require equal signatures")
        else:
            notes = "rectangular operator: square-only flags reported false"

    return Classification(
        is_noncontraction=is_noncontraction,
        is_isometry=is_isometry,
        is_binoncontraction=is_binoncontraction,
        is_unitary=is_unitary,
        min_domain_defect_eig=min_dd,
        max_isometry_residual=iso_res,
        tolerance_used=thr,
        square=t.square,
        notes=notes,
    )
