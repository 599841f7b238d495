import numpy as np
import pytest

from kreinkit import (
    KreinOperator,
    Signature,
    classify,
    codomain_defect,
    domain_defect,
    fundamental_symmetry,
    indefinite_product,
    j_adjoint,
)
from kreinkit.errors import DimensionMismatch
from kreinkit.generators import (
    random_binoncontraction,
    random_hilbert_violator,
    random_j_unitary,
    random_noncontraction,
)

from conftest import DIMS_GRID, rng_for

# Rectangular metric-preserving fixture in plus-first coordinates:
# rows feed (plus, plus, minus) of the (2,1) codomain.
RECT_V = KreinOperator(Signature(1, 1), Signature(2, 1), [[0.8, 0], [0.6, 0], [0, 1]])


def op(nplus, nminus, matrix):
    s = Signature(nplus, nminus)
    return KreinOperator(s, s, matrix)


def test_fundamental_symmetry_examples():
    assert np.array_equal(fundamental_symmetry(Signature(1, 1)), np.diag([1.0, -1.0]))
    assert np.array_equal(fundamental_symmetry(Signature(2, 0)), np.eye(2))
    assert np.array_equal(fundamental_symmetry(Signature(0, 3)), -np.eye(3))


def test_fundamental_symmetry_is_exact_involution():
    for np_, nm in DIMS_GRID:
        j = fundamental_symmetry(Signature(np_, nm))
        assert np.array_equal(j @ j, np.eye(np_ + nm))
        assert np.array_equal(j, j.conj().T)


def test_signature_validation():
    with pytest.raises(ValueError):
        Signature(0, 0)
    with pytest.raises(ValueError):
        Signature(-1, 2)


def test_indefinite_product_axes():
    s = Signature(1, 1)
    assert indefinite_product(s, [1, 0], [1, 0]) == 1
    assert indefinite_product(s, [0, 1], [0, 1]) == -1
    # neutral vector: 1 - 1 by direct expansion
    assert indefinite_product(s, [1, 1], [1, 1]) == 0


def test_indefinite_product_sesquilinear():
    s = Signature(2, 1)
    rng = rng_for(7)
    for _ in range(50):
        x = rng.standard_normal(3) + 1j * rng.standard_normal(3)
        y = rng.standard_normal(3) + 1j * rng.standard_normal(3)
        z = rng.standard_normal(3) + 1j * rng.standard_normal(3)
        a = complex(rng.standard_normal(), rng.standard_normal())
        assert indefinite_product(s, x, y) == pytest.approx(
            np.conj(indefinite_product(s, y, x)))
        assert indefinite_product(s, x, a * y + z) == pytest.approx(
            a * indefinite_product(s, x, y) + indefinite_product(s, x, z))


def test_indefinite_product_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        indefinite_product(Signature(1, 1), [1, 0, 0], [1, 0])


def test_j_adjoint_fixed_points():
    s = Signature(1, 1)
    ident = op(1, 1, np.eye(2))
    assert np.allclose(j_adjoint(ident).matrix, np.eye(2))
    j = op(1, 1, fundamental_symmetry(s))
    assert np.allclose(j_adjoint(j).matrix, j.matrix)


def test_j_adjoint_duality_random_vectors():
    # adjoint identity <Tx, y>_cod = <x, adj(T) y>_dom on random pairs
    dom, cod = Signature(2, 1), Signature(2, 1)
    rng = rng_for(11)
    t = KreinOperator(dom, cod, rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3)))
    td = j_adjoint(t)
    for _ in range(100):
        x = rng.standard_normal(3) + 1j * rng.standard_normal(3)
        y = rng.standard_normal(3) + 1j * rng.standard_normal(3)
        lhs = indefinite_product(cod, t.matrix @ x, y)
        rhs = indefinite_product(dom, x, td.matrix @ y)
        assert abs(lhs - rhs) <= 1e-12 * (
            1 + np.linalg.norm(t.matrix, 2) * np.linalg.norm(x) * np.linalg.norm(y))


def test_j_adjoint_duality_rectangular_seeds():
    rng = rng_for(13)
    for trial in range(200):
        dp, dm = DIMS_GRID[trial % len(DIMS_GRID)]
        cp, cm = DIMS_GRID[(trial * 5 + 3) % len(DIMS_GRID)]
        dom, cod = Signature(dp, dm), Signature(cp, cm)
        m = rng.standard_normal((cod.dim, dom.dim)) + 1j * rng.standard_normal((cod.dim, dom.dim))
        t = KreinOperator(dom, cod, m)
        td = j_adjoint(t)
        assert td.domain == cod and td.codomain == dom
        assert np.allclose(j_adjoint(td).matrix, t.matrix, atol=1e-14)
        x = rng.standard_normal(dom.dim) + 1j * rng.standard_normal(dom.dim)
        y = rng.standard_normal(cod.dim) + 1j * rng.standard_normal(cod.dim)
        lhs = indefinite_product(cod, t.matrix @ x, y)
        rhs = indefinite_product(dom, x, td.matrix @ y)
        scale = 1 + np.linalg.norm(m, 2) * np.linalg.norm(x) * np.linalg.norm(y)
        assert abs(lhs - rhs) <= 1e-12 * scale


def test_domain_defect_examples():
    assert np.allclose(domain_defect(op(1, 1, np.eye(2))), 0)
    # diag(2,1): 4*1-1 = 3 on the plus axis, (-1)*1+1 = 0 on the minus axis
    assert np.allclose(domain_defect(op(1, 1, np.diag([2.0, 1.0]))), np.diag([3.0, 0.0]))
    # diag(0.5,1): 0.25-1 = -0.75; a witness that fails the expansion inequality
    assert np.allclose(domain_defect(op(1, 1, np.diag([0.5, 1.0]))), np.diag([-0.75, 0.0]))


def test_codomain_defect_examples():
    assert np.allclose(codomain_defect(op(1, 1, np.eye(2))), 0)
    assert np.allclose(codomain_defect(op(1, 1, np.diag([2.0, 1.0]))), np.diag([-3.0, 0.0]))
    # rank-one defect of the rectangular fixture: trace 1, det 0 block on the
    # plus part, projector onto (0.6, -0.8, 0)
    expected = np.array([[0.36, -0.48, 0], [-0.48, 0.64, 0], [0, 0, 0]])
    assert np.allclose(codomain_defect(RECT_V), expected, atol=1e-15)


def test_defects_hermitian_bit_exact():
    rng = rng_for(17)
    for _ in range(20):
        m = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        t = op(2, 1, m)
        dd = domain_defect(t)
        cd = codomain_defect(t)
        assert np.array_equal(dd, dd.conj().T)
        assert np.array_equal(cd, cd.conj().T)


def test_classify_j_is_unitary():
    c = classify(op(1, 1, np.diag([1.0, -1.0])), 1e-10)
    assert c.is_unitary and c.is_isometry and c.is_binoncontraction and c.is_noncontraction


def test_classify_expanding_diagonal():
    c = classify(op(1, 1, np.diag([2.0, 1.0])))
    assert c.is_noncontraction and not c.is_isometry
    assert c.min_domain_defect_eig == pytest.approx(0.0, abs=1e-14)


def test_classify_binoncontraction_diagonal():
    # both defects equal diag(3, 0.75) by direct arithmetic
    t = op(1, 1, np.diag([2.0, 0.5]))
    assert np.allclose(domain_defect(t), np.diag([3.0, 0.75]))
    assert np.allclose(-codomain_defect(t), np.diag([3.0, 0.75]))
    c = classify(t)
    assert c.is_noncontraction and c.is_binoncontraction and not c.is_isometry


def test_classify_flag_implications():
    rng = rng_for(23)
    for trial in range(60):
        np_, nm = DIMS_GRID[trial % len(DIMS_GRID)]
        s = Signature(np_, nm)
        kind = trial % 3
        if kind == 0:
            t = random_noncontraction(s, rng)
        elif kind == 1:
            t = random_binoncontraction(s, rng)
        else:
            t = random_j_unitary(s, rng)
        c = classify(t)
        if c.is_unitary:
            assert c.is_isometry
        if c.is_isometry:
            assert c.is_noncontraction
        if c.is_binoncontraction:
            assert c.is_noncontraction


def test_classify_violator_with_sampled_witness():
    # eigenvalue test is authoritative; sampling is a one-sided witness check
    rng = rng_for(29)
    s = Signature(2, 1)
    t = random_hilbert_violator(s, rng)
    c = classify(t)
    assert not c.is_noncontraction
    witness = False
    for _ in range(1000):
        x = rng.standard_normal(3) + 1j * rng.standard_normal(3)
        lhs = indefinite_product(s, t.matrix @ x, t.matrix @ x).real
        rhs = indefinite_product(s, x, x).real
        if lhs < rhs - c.tolerance_used:
            witness = True
            break
    assert witness


def test_classify_rectangular_reports_reason():
    c = classify(RECT_V)
    assert not c.square
    assert not c.is_isometry and not c.is_unitary and not c.is_binoncontraction
    assert c.max_isometry_residual <= 1e-15
    assert "rectangular" in c.notes


def test_classify_rejects_bad_tolerance():
    with pytest.raises(ValueError):
        classify(op(1, 1, np.eye(2)), tol=0.0)


def test_operator_validation():
    with pytest.raises(DimensionMismatch):
        KreinOperator(Signature(1, 1), Signature(1, 1), np.eye(3))
    with pytest.raises(ValueError):
        KreinOperator(Signature(1, 1), Signature(1, 1), [[np.nan, 0], [0, 1]])
