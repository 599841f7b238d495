"""Command-line front end: classification, pipelines, generators, reports.

Reports are canonical JSON on standard output (sorted keys, 17 significant
digits), so identical commands on identical inputs produce byte-identical
bytes.  Exit codes: 0 ok, 2 input error, 3 precondition violated, 4 not
found, 5 internal verification failure.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np
import scipy.linalg

from . import fileio
from .core import KreinOperator, Signature, classify, domain_defect, operator_norm
from .dilation import defect_root, dilate, pushdown_subspace, truncate_dilation
from .errors import (
    DegenerateIntersection,
    DimensionMismatch,
    FileFormatError,
    KreinError,
    NotFound,
    NotIsometry,
    NotNoncontraction,
    NotPositive,
)
from .extension import build_extension, isometry_residual, pullback_subspace, verify_extension
from .generators import (
    random_binoncontraction,
    random_j_unitary,
    random_noncontraction,
    random_rect_isometry,
)
from .riccati import (
    SolveOptions,
    block_decompose,
    find_invariant_maximal_positive,
    fixed_point_residual,
)
from .subspace import (
    angular_norm,
    angular_to_basis,
    basis_to_angular,
    invariance_residual,
    is_maximal_positive,
)

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_PRECONDITION = 3
EXIT_NOT_FOUND = 4
EXIT_VERIFICATION = 5

# Residual bound for end-to-end invariance checks in pipelines.
PIPELINE_INVARIANCE_TOL = 1e-8


def _fail(stage: str, message, code: int) -> int:
    print(f"error[{stage}]: {message}", file=sys.stderr)
    return code


def _emit(report: dict) -> None:
    print(fileio.dumps_canonical(report))


def _input_section(paths: dict) -> dict:
    return {
        label: {"path": str(path), "sha256": fileio.file_digest(path)}
        for label, path in paths.items()
    }


def _classification_section(cls) -> dict:
    return {
        "is_noncontraction": cls.is_noncontraction,
        "is_isometry": cls.is_isometry,
        "is_binoncontraction": cls.is_binoncontraction,
        "is_unitary": cls.is_unitary,
        "rectangular_isometry": (not cls.square)
        and cls.max_isometry_residual <= cls.tolerance_used,
        "square": cls.square,
        "min_domain_defect_eig": cls.min_domain_defect_eig,
        "max_isometry_residual": cls.max_isometry_residual,
        "tolerance_used": cls.tolerance_used,
        "notes": cls.notes,
    }


def cmd_check(args) -> int:
    op = fileio.read_operator(args.file)
    cls = classify(op, args.tol)
    _emit({
        "kind": "report",
        "command": ["check", str(args.file)],
        "inputs": _input_section({"operator": args.file}),
        "tolerances": {"tol": args.tol},
        "classification": _classification_section(cls),
    })
    return EXIT_OK


def cmd_dilate(args) -> int:
    op = fileio.read_operator(args.file)
    try:
        dil = dilate(op, args.tol)
    except NotNoncontraction as exc:
        return _fail("dilate", exc, EXIT_PRECONDITION)
    trunc = truncate_dilation(dil, args.depth)
    root_residual = float(np.abs(dil.root @ dil.root - domain_defect(op)).max())
    section_eigs = [float(x) for x in np.linalg.eigvalsh(domain_defect(trunc))]
    report = {
        "kind": "report",
        "command": ["dilate", str(args.file)],
        "inputs": _input_section({"operator": args.file}),
        "tolerances": {"tol": args.tol},
        "depth": args.depth,
        "residuals": {"defect_root": root_residual},
        "finite_section_defect_eigenvalues": section_eigs,
        "signature_truncated": [trunc.domain.n_plus, trunc.domain.n_minus],
    }
    if args.out:
        fileio.write_operator(args.out, trunc)
        report["out"] = str(args.out)
    else:
        report["artifact"] = fileio.operator_to_doc(trunc)
    _emit(report)
    return EXIT_OK


def _extension_doc(res) -> dict:
    return {
        "kind": "extension",
        "vhat": fileio.operator_to_doc(res.vhat),
        "a_root": fileio.matrix_to_wire(res.a),
        "b_isometry": fileio.matrix_to_wire(res.b),
        "p_plus": fileio.matrix_to_wire(res.p_plus),
        "delta": fileio.matrix_to_wire(res.delta),
        "signature_domain_inner": [res.operator.domain.n_plus, res.operator.domain.n_minus],
        "signature_codomain_inner": [res.operator.codomain.n_plus, res.operator.codomain.n_minus],
        "extra_domain": res.domain_split.extra,
        "extra_codomain": res.codomain_split.extra,
    }


def cmd_extend(args) -> int:
    op = fileio.read_operator(args.file)
    try:
        res = build_extension(op, args.tol)
    except NotIsometry as exc:
        return _fail("extend", exc, EXIT_PRECONDITION)
    check = verify_extension(res, args.tol)
    report = {
        "kind": "report",
        "command": ["extend", str(args.file)],
        "inputs": _input_section({"operator": args.file}),
        "tolerances": {"tol": args.tol},
        "residuals": dict(check.residuals),
        "min_adjoint_defect_eig": check.min_adjoint_defect_eig,
        "scale": check.scale,
        "passed": check.passed,
        "signature_hat_domain": [res.vhat.domain.n_plus, res.vhat.domain.n_minus],
        "signature_hat_codomain": [res.vhat.codomain.n_plus, res.vhat.codomain.n_minus],
    }
    if args.out:
        fileio.write_document(args.out, _extension_doc(res))
        report["out"] = str(args.out)
    else:
        report["artifact"] = _extension_doc(res)
    _emit(report)
    return EXIT_OK if check.passed else EXIT_VERIFICATION


def _subspace_validation(op, angular) -> dict:
    basis = angular_to_basis(angular)
    return {
        "angular_norm": angular_norm(angular),
        "fixed_point_residual": fixed_point_residual(block_decompose(op), angular.K),
        "invariance_residual": invariance_residual(op, basis),
        "maximal_positive": is_maximal_positive(basis),
    }


def cmd_find_subspace(args) -> int:
    op = fileio.read_operator(args.file)
    opts = SolveOptions(max_iter=args.max_iter, fix_tol=args.fix_tol)
    try:
        angular = find_invariant_maximal_positive(op, opts, args.tol)
    except NotNoncontraction as exc:
        return _fail("find-subspace", exc, EXIT_PRECONDITION)
    except NotFound as exc:
        return _fail("find-subspace", exc, EXIT_NOT_FOUND)
    report = {
        "kind": "report",
        "command": ["find-subspace", str(args.file)],
        "inputs": _input_section({"operator": args.file}),
        "tolerances": {"tol": args.tol, "fix_tol": args.fix_tol},
        "max_iter": args.max_iter,
        "validation": _subspace_validation(op, angular),
    }
    if args.out:
        fileio.write_angular(args.out, angular)
        report["out"] = str(args.out)
    else:
        report["artifact"] = fileio.angular_to_doc(angular)
    _emit(report)
    return EXIT_OK


def _pipeline_theorem1(args, op) -> int:
    cls = classify(op, args.tol)
    if not cls.is_noncontraction:
        return _fail("classify", "input is not a noncontraction", EXIT_PRECONDITION)
    dil = dilate(op, args.tol)
    trunc = truncate_dilation(dil, args.depth)
    try:
        khat = find_invariant_maximal_positive(trunc, SolveOptions(), args.tol)
    except NotFound as exc:
        return _fail("find-subspace", exc, EXIT_NOT_FOUND)
    k = pushdown_subspace(khat, op.domain, args.depth)
    basis = angular_to_basis(k)
    inv_res = invariance_residual(op, basis)
    norm = angular_norm(k)
    maximal = is_maximal_positive(basis)
    passed = (
        inv_res <= PIPELINE_INVARIANCE_TOL * (1.0 + operator_norm(op.matrix))
        and norm <= 1.0 + 1e-10
        and maximal
        and k.k == op.domain.n_plus
    )
    report = {
        "kind": "report",
        "command": ["pipeline", str(args.file)],
        "theorem": 1,
        "inputs": _input_section({"operator": args.file}),
        "tolerances": {"tol": args.tol, "invariance": PIPELINE_INVARIANCE_TOL},
        "depth": args.depth,
        "stages": {
            "dilate": {"defect_root_residual": float(np.abs(dil.root @ dil.root - domain_defect(op)).max())},
            "find_subspace": _subspace_validation(trunc, khat),
            "pushdown": {
                "angular_norm": norm,
                "invariance_residual": inv_res,
                "maximal_positive": maximal,
                "dimension": k.k,
            },
        },
        "passed": passed,
    }
    if args.out:
        fileio.write_operator(f"{args.out}.dilated.json", trunc)
        fileio.write_angular(f"{args.out}.hat_angular.json", khat)
        fileio.write_angular(f"{args.out}.angular.json", k)
        report["out"] = [
            f"{args.out}.dilated.json",
            f"{args.out}.hat_angular.json",
            f"{args.out}.angular.json",
        ]
    _emit(report)
    return EXIT_OK if passed else EXIT_VERIFICATION


def _pipeline_theorem2(args, op) -> int:
    try:
        res = build_extension(op, args.tol)
    except NotIsometry as exc:
        return _fail("extend", exc, EXIT_PRECONDITION)
    check = verify_extension(res, args.tol)
    if not check.passed:
        return _fail("extend", "extension identities failed verification", EXIT_VERIFICATION)
    if res.vhat.domain != res.vhat.codomain:
        return _fail(
            "extend",
            "extension is rectangular (codomain defect has negative spectrum); "
            "the invariant-subspace stage needs matching extended signatures",
            EXIT_PRECONDITION,
        )
    try:
        khat = find_invariant_maximal_positive(res.vhat, SolveOptions(), args.tol)
    except NotFound as exc:
        return _fail("find-subspace", exc, EXIT_NOT_FOUND)
    big = angular_to_basis(khat)
    try:
        pulled = pullback_subspace(big, res.domain_split)
        image_side = pullback_subspace(big, res.codomain_split)
    except (NotPositive, DegenerateIntersection) as exc:
        return _fail("pullback", exc, EXIT_VERIFICATION)
    # invariance of the pulled-back subspace: V maps it into the codomain-side
    # pullback, which coincides with it when domain and codomain agree
    q = scipy.linalg.orth(pulled.columns)
    qk = scipy.linalg.orth(image_side.columns)
    image = op.matrix @ q
    inv_res = operator_norm(image - qk @ (qk.conj().T @ image))
    maximal = is_maximal_positive(pulled)
    passed = (
        inv_res <= PIPELINE_INVARIANCE_TOL * (1.0 + operator_norm(op.matrix))
        and maximal
        and pulled.dim == op.domain.n_plus
    )
    report = {
        "kind": "report",
        "command": ["pipeline", str(args.file)],
        "theorem": 2,
        "inputs": _input_section({"operator": args.file}),
        "tolerances": {"tol": args.tol, "invariance": PIPELINE_INVARIANCE_TOL},
        "stages": {
            "extend": {
                "residuals": dict(check.residuals),
                "min_adjoint_defect_eig": check.min_adjoint_defect_eig,
            },
            "find_subspace": _subspace_validation(res.vhat, khat),
            "pullback": {
                "invariance_residual": inv_res,
                "maximal_positive": maximal,
                "dimension": pulled.dim,
            },
        },
        "passed": passed,
    }
    if args.out:
        fileio.write_document(f"{args.out}.extension.json", _extension_doc(res))
        fileio.write_angular(f"{args.out}.hat_angular.json", khat)
        fileio.write_angular(f"{args.out}.angular.json", basis_to_angular(pulled))
        report["out"] = [
            f"{args.out}.extension.json",
            f"{args.out}.hat_angular.json",
            f"{args.out}.angular.json",
        ]
    _emit(report)
    return EXIT_OK if passed else EXIT_VERIFICATION


def cmd_pipeline(args) -> int:
    op = fileio.read_operator(args.file)
    if args.theorem == 1:
        return _pipeline_theorem1(args, op)
    return _pipeline_theorem2(args, op)


def _parse_dims(text: str) -> Signature:
    parts = text.split(",")
    if len(parts) != 2:
        raise FileFormatError(f"dims must be 'n_plus,n_minus', got {text!r}")
    try:
        return Signature(int(parts[0]), int(parts[1]))
    except ValueError as exc:
        raise FileFormatError(f"bad dims {text!r}: {exc}") from exc


def cmd_gen(args) -> int:
    dims = _parse_dims(args.dims)
    rng = np.random.default_rng(args.seed)
    kind = args.kind
    check_tol = 1e-10
    rejections = 0

    if kind == "rect-isometry":
        if args.codims is None:
            raise FileFormatError("rect-isometry requires --codims")
        codims = _parse_dims(args.codims)
        if codims.n_minus != dims.n_minus or codims.n_plus < dims.n_plus:
            raise FileFormatError(
                "rect-isometry codomain must extend the domain by positive directions")
        op, rejections = random_rect_isometry(dims, codims, rng)
    else:
        if args.codims is not None and _parse_dims(args.codims) != dims:
            raise FileFormatError(f"{kind} is square; --codims must match --dims")
        for _ in range(50):
            if kind == "noncontraction":
                op = random_noncontraction(dims, rng)
                ok = classify(op, check_tol).is_noncontraction
            elif kind == "isometry":
                op = random_j_unitary(dims, rng)
                ok = classify(op, check_tol).is_unitary
            elif kind == "binoncontraction":
                op = random_binoncontraction(dims, rng)
                ok = classify(op, check_tol).is_binoncontraction
            else:  # pragma: no cover - argparse restricts choices
                raise FileFormatError(f"unknown kind {kind!r}")
            if ok:
                break
            rejections += 1
        else:
            return _fail("gen", f"could not certify a {kind} draw", EXIT_VERIFICATION)

    cls = classify(op, check_tol)
    report = {
        "kind": "report",
        "command": ["gen", kind],
        "dims": [dims.n_plus, dims.n_minus],
        "seed": args.seed,
        "rejections": rejections,
        "tolerances": {"tol": check_tol},
        "classification": _classification_section(cls),
    }
    if kind == "rect-isometry":
        report["codims"] = [op.codomain.n_plus, op.codomain.n_minus]
    if args.out:
        fileio.write_operator(args.out, op)
        report["out"] = str(args.out)
    else:
        report["artifact"] = fileio.operator_to_doc(op)
    _emit(report)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kreinkit",
        description="Operators on finite-dimensional indefinite inner product spaces: "
                    "classification, isometric dilation, binoncontractive extension, "
                    "and invariant maximal positive subspaces.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="classify an operator file")
    p.add_argument("file")
    p.add_argument("--tol", type=float, default=1e-9)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("dilate", help="truncated isometric dilation of a noncontraction")
    p.add_argument("file")
    p.add_argument("--depth", type=int, default=2)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--out")
    p.set_defaults(func=cmd_dilate)

    p = sub.add_parser("extend", help="binoncontractive extension of an isometry")
    p.add_argument("file")
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--out")
    p.set_defaults(func=cmd_extend)

    p = sub.add_parser("find-subspace", help="invariant maximal positive subspace")
    p.add_argument("file")
    p.add_argument("--max-iter", type=int, default=300)
    p.add_argument("--fix-tol", type=float, default=1e-10)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--out")
    p.set_defaults(func=cmd_find_subspace)

    p = sub.add_parser("pipeline", help="end-to-end subspace transfer demonstration")
    p.add_argument("file")
    p.add_argument("--theorem", type=int, choices=[1, 2], required=True)
    p.add_argument("--depth", type=int, default=2)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--out", help="prefix for intermediate artifact files")
    p.set_defaults(func=cmd_pipeline)

    p = sub.add_parser("gen", help="seeded generator with self-check")
    p.add_argument("--kind", required=True,
                   choices=["noncontraction", "isometry", "rect-isometry", "binoncontraction"])
    p.add_argument("--dims", required=True, help="domain signature 'n_plus,n_minus'")
    p.add_argument("--codims", help="codomain signature for rect-isometry")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (FileFormatError, DimensionMismatch) as exc:
        return _fail(args.command, exc, EXIT_INPUT)
    except (NotNoncontraction, NotIsometry) as exc:
        return _fail(args.command, exc, EXIT_PRECONDITION)
    except NotFound as exc:
        return _fail(args.command, exc, EXIT_NOT_FOUND)
    except KreinError as exc:
        return _fail(args.command, exc, EXIT_VERIFICATION)


if __name__ == "__main__":
    sys.exit(main())
