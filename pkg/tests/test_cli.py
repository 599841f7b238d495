import json

import numpy as np
import pytest

from kreinkit import KreinOperator, Signature, fileio
from kreinkit.cli import main
from kreinkit.errors import NotFound

from conftest import rng_for

S11 = Signature(1, 1)


def write_op(path, nplus, nminus, matrix, cod=None):
    dom = Signature(nplus, nminus)
    cod = dom if cod is None else Signature(*cod)
    fileio.write_operator(path, KreinOperator(dom, cod, matrix))
    return str(path)


def run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr().out
    return code, (json.loads(out) if out else None)


@pytest.fixture()
def j_file(tmp_path):
    return write_op(tmp_path / "j.json", 1, 1, np.diag([1.0, -1.0]))


@pytest.fixture()
def expand_file(tmp_path):
    return write_op(tmp_path / "t.json", 1, 1, np.diag([2.0, 1.0]))


@pytest.fixture()
def rect_file(tmp_path):
    return write_op(tmp_path / "v.json", 1, 1, [[0.8, 0], [0.6, 0], [0, 1]], cod=(2, 1))


def test_check_j(capsys, j_file):
    code, rep = run(capsys, ["check", j_file])
    assert code == 0
    assert rep["classification"]["is_unitary"] is True


def test_check_expanding(capsys, expand_file):
    code, rep = run(capsys, ["check", expand_file])
    assert code == 0
    cls = rep["classification"]
    assert cls["is_noncontraction"] is True and cls["is_isometry"] is False


def test_check_rectangular_isometry(capsys, rect_file):
    code, rep = run(capsys, ["check", rect_file])
    assert code == 0
    cls = rep["classification"]
    assert cls["is_isometry"] is False
    assert cls["rectangular_isometry"] is True


def test_check_malformed_exits_2(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{broken")
    assert main(["check", str(bad)]) == 2


def test_dilate_expanding(capsys, expand_file, tmp_path):
    out = tmp_path / "trunc.json"
    code, rep = run(capsys, ["dilate", expand_file, "--depth", "2", "--out", str(out)])
    assert code == 0
    eigs = rep["finite_section_defect_eigenvalues"]
    assert np.allclose(sorted(eigs), [0, 0, 1, 1], atol=1e-12)
    trunc = fileio.read_operator(out)
    assert trunc.domain == Signature(1, 3)
    assert trunc.matrix.shape == (4, 4)


def test_dilate_j_block_structure(capsys, j_file):
    code, rep = run(capsys, ["dilate", j_file])
    assert code == 0
    m = fileio.wire_to_matrix(rep["artifact"]["matrix"])
    expected = np.zeros((4, 4))
    expected[:2, :2] = np.diag([1.0, -1.0])
    assert np.allclose(m, expected)


def test_dilate_rejects_contraction(tmp_path):
    f = write_op(tmp_path / "c.json", 1, 1, np.diag([0.5, 1.0]))
    assert main(["dilate", f]) == 3


def test_extend_j_trivial(capsys, j_file):
    code, rep = run(capsys, ["extend", j_file])
    assert code == 0
    assert rep["passed"] is True
    assert all(v <= 1e-12 for v in rep["residuals"].values())


def test_extend_fixture(capsys, rect_file, tmp_path):
    out = tmp_path / "ext.json"
    code, rep = run(capsys, ["extend", rect_file, "--out", str(out)])
    assert code == 0
    assert rep["passed"] is True
    doc = fileio.read_document(out)
    vhat = fileio.doc_to_operator(doc["vhat"])
    assert vhat.domain == Signature(4, 1) and vhat.codomain == Signature(4, 1)


def test_extend_rejects_non_isometry(expand_file):
    assert main(["extend", expand_file]) == 3


def test_find_subspace_examples(capsys, tmp_path):
    f = write_op(tmp_path / "d.json", 1, 1, np.diag([2.0, 0.5]))
    code, rep = run(capsys, ["find-subspace", f])
    assert code == 0
    k = fileio.wire_to_matrix(rep["artifact"]["k_matrix"])
    assert np.allclose(k, 0)
    assert rep["validation"]["maximal_positive"] is True

    f = write_op(tmp_path / "i.json", 1, 1, np.eye(2))
    code, rep = run(capsys, ["find-subspace", f])
    assert code == 0
    assert np.allclose(fileio.wire_to_matrix(rep["artifact"]["k_matrix"]), 0)


def test_find_subspace_seeded(capsys, tmp_path):
    rng = rng_for(707)
    from kreinkit.generators import random_binoncontraction
    t = random_binoncontraction(Signature(2, 2), rng)
    f = tmp_path / "b.json"
    fileio.write_operator(f, t)
    code, rep = run(capsys, ["find-subspace", str(f)])
    assert code == 0
    v = rep["validation"]
    assert v["angular_norm"] <= 1 + 1e-10
    assert v["invariance_residual"] <= 1e-8 * (1 + np.linalg.norm(t.matrix, 2))


def test_find_subspace_not_found_maps_to_4(tmp_path, monkeypatch, j_file):
    import kreinkit.cli as cli_mod

    def boom(*args, **kwargs):
        raise NotFound("forced")

    monkeypatch.setattr(cli_mod, "find_invariant_maximal_positive", boom)
    assert main(["find-subspace", j_file]) == 4


def test_pipeline_theorem1(capsys, expand_file):
    code, rep = run(capsys, ["pipeline", expand_file, "--theorem", "1"])
    assert code == 0
    assert rep["passed"] is True
    assert rep["stages"]["pushdown"]["invariance_residual"] <= 1e-8


def test_pipeline_theorem1_rejects_contraction(tmp_path):
    f = write_op(tmp_path / "c.json", 1, 1, np.diag([0.5, 1.0]))
    assert main(["pipeline", f, "--theorem", "1"]) == 3


def test_pipeline_theorem2_fixture(capsys, rect_file):
    code, rep = run(capsys, ["pipeline", rect_file, "--theorem", "2"])
    assert code == 0
    assert rep["passed"] is True
    assert rep["stages"]["pullback"]["maximal_positive"] is True


def test_pipeline_theorem2_degenerate_square(capsys, j_file):
    code, rep = run(capsys, ["pipeline", j_file, "--theorem", "2"])
    assert code == 0
    assert rep["passed"] is True


def test_pipeline_intermediates_rederivable(capsys, expand_file, tmp_path):
    prefix = str(tmp_path / "run")
    code, rep = run(capsys, ["pipeline", expand_file, "--theorem", "1", "--out", prefix])
    assert code == 0
    # the emitted truncated operator must re-check and re-solve on its own
    code, rep2 = run(capsys, ["check", f"{prefix}.dilated.json"])
    assert code == 0 and rep2["classification"]["is_noncontraction"] is True
    code, rep3 = run(capsys, ["find-subspace", f"{prefix}.dilated.json"])
    assert code == 0
    khat = fileio.read_angular(f"{prefix}.hat_angular.json")
    assert khat.space == Signature(1, 3)


def test_gen_kinds_pass_self_check(capsys, tmp_path):
    for kind, extra in [
        ("noncontraction", []),
        ("isometry", []),
        ("binoncontraction", []),
        ("rect-isometry", ["--codims", "2,1"]),
    ]:
        out = tmp_path / f"{kind}.json"
        code, rep = run(capsys, ["gen", "--kind", kind, "--dims", "1,1",
                                 "--seed", "1", "--out", str(out)] + extra)
        assert code == 0, kind
        assert rep["rejections"] >= 0
        code, rep = run(capsys, ["check", str(out)])
        assert code == 0
        if kind == "rect-isometry":
            assert rep["classification"]["rectangular_isometry"] is True
        elif kind == "isometry":
            assert rep["classification"]["is_unitary"] is True
        elif kind == "binoncontraction":
            assert rep["classification"]["is_binoncontraction"] is True
        else:
            assert rep["classification"]["is_noncontraction"] is True


def test_gen_definite_isometry_is_unitary(capsys):
    code, rep = run(capsys, ["gen", "--kind", "isometry", "--dims", "2,0", "--seed", "3"])
    assert code == 0
    assert rep["classification"]["is_unitary"] is True


def test_gen_impossible_dims_exit_2(capsys):
    assert main(["gen", "--kind", "rect-isometry", "--dims", "2,1", "--codims", "1,1"]) == 2
    assert main(["gen", "--kind", "rect-isometry", "--dims", "2,1"]) == 2
    assert main(["gen", "--kind", "noncontraction", "--dims", "nope"]) == 2


def test_reports_are_byte_identical(capsys, tmp_path, expand_file, rect_file):
    commands = [
        ["gen", "--kind", "binoncontraction", "--dims", "2,1", "--seed", "9"],
        ["check", expand_file],
        ["dilate", expand_file, "--depth", "3"],
        ["extend", rect_file],
        ["find-subspace", expand_file],
        ["pipeline", rect_file, "--theorem", "2"],
    ]
    for argv in commands:
        assert main(argv) == 0
        first = capsys.readouterr().out
        assert main(argv) == 0
        second = capsys.readouterr().out
        assert first == second and first
