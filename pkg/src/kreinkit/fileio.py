"""Operator documents: JSON with explicit [re, im] entries and fixed formatting.

All numbers are written with 17 significant digits, which round-trips IEEE
doubles exactly, keeps repeated runs byte-identical, and keeps fixtures
diffable.  Keys are emitted sorted.
"""

from __future__ import annotations

import hashlib
import json

import numpy as np

from .core import KreinOperator, Signature
from .errors import FileFormatError
from .subspace import AngularOperator

__all__ = [
    "dumps_canonical",
    "matrix_to_wire",
    "wire_to_matrix",
    "operator_to_doc",
    "doc_to_operator",
    "angular_to_doc",
    "doc_to_angular",
    "write_document",
    "read_document",
    "read_operator",
    "write_operator",
    "read_angular",
    "write_angular",
    "file_digest",
]


def _format_float(x: float) -> str:
    if not np.isfinite(x):
        raise FileFormatError("non-finite number cannot be serialized")
    return format(float(x), ".17g")


def dumps_canonical(obj, indent: int = 0) -> str:
    """Serialize to JSON text with sorted keys and fixed float formatting."""
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        parts = []
        for key in sorted(obj):
            if not isinstance(key, str):
                raise FileFormatError("document keys must be strings")
            parts.append(f"{inner}{json.dumps(key)}: {dumps_canonical(obj[key], indent + 1)}")
        return "{\n" + ",\n".join(parts) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        items = [dumps_canonical(v, indent + 1) for v in obj]
        flat = "[" + ", ".join(items) + "]"
        if len(flat) <= 100 and "\n" not in flat:
            return flat
        return "[\n" + ",\n".join(inner + it for it in items) + "\n" + pad + "]"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _format_float(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    if obj is None:
        return "null"
    raise FileFormatError(f"cannot serialize object of type {type(obj).__name__}")


def matrix_to_wire(matrix: np.ndarray) -> list:
    """Rows of [re, im] pairs."""
    m = np.asarray(matrix, dtype=np.complex128)
    return [[[float(v.real), float(v.imag)] for v in row] for row in m]


def wire_to_matrix(rows, shape=None) -> np.ndarray:
    try:
        m = np.asarray(
            [[complex(entry[0], entry[1]) for entry in row] for row in rows],
            dtype=np.complex128,
        )
    except (TypeError, IndexError, ValueError) as exc:
        raise FileFormatError(f"malformed matrix entries: {exc}") from exc
    if m.ndim == 1:
        m = m.reshape(0, 0) if m.size == 0 else m.reshape(1, -1)
    if shape is not None and m.shape != tuple(shape):
        raise FileFormatError(f"matrix shape {m.shape} does not match declared {shape}")
    if m.size and not np.all(np.isfinite(m)):
        raise FileFormatError("matrix has non-finite entries")
    return m


def _wire_signature(entry) -> Signature:
    try:
        n_plus, n_minus = int(entry[0]), int(entry[1])
    except (TypeError, IndexError, ValueError) as exc:
        raise FileFormatError(f"malformed signature: {exc}") from exc
    try:
        return Signature(n_plus, n_minus)
    except ValueError as exc:
        raise FileFormatError(str(exc)) from exc


def operator_to_doc(t: KreinOperator) -> dict:
    return {
        "kind": "operator",
        "signature_domain": [t.domain.n_plus, t.domain.n_minus],
        "signature_codomain": [t.codomain.n_plus, t.codomain.n_minus],
        "matrix": matrix_to_wire(t.matrix),
    }


def doc_to_operator(doc: dict) -> KreinOperator:
    if doc.get("kind") != "operator":
        raise FileFormatError("document is not an operator file")
    dom = _wire_signature(doc.get("signature_domain"))
    cod = _wire_signature(doc.get("signature_codomain"))
    matrix = wire_to_matrix(doc.get("matrix"), shape=(cod.dim, dom.dim))
    try:
        return KreinOperator(dom, cod, matrix)
    except Exception as exc:
        raise FileFormatError(f"invalid operator data: {exc}") from exc


def angular_to_doc(a: AngularOperator) -> dict:
    doc = {
        "kind": "angular",
        "space": [a.space.n_plus, a.space.n_minus],
        "k_matrix": matrix_to_wire(a.K),
    }
    if not a.maximal:
        doc["domain_basis"] = matrix_to_wire(a.domain_basis)
    return doc


def doc_to_angular(doc: dict) -> AngularOperator:
    if doc.get("kind") != "angular":
        raise FileFormatError("document is not an angular operator file")
    space = _wire_signature(doc.get("space"))
    k = wire_to_matrix(doc.get("k_matrix"))
    basis = None
    if "domain_basis" in doc:
        basis = wire_to_matrix(doc["domain_basis"])
    try:
        return AngularOperator(space, k, basis)
    except Exception as exc:
        raise FileFormatError(f"invalid angular data: {exc}") from exc


def write_document(path, doc: dict) -> None:
    text = dumps_canonical(doc) + "\n"
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def read_document(path) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise FileFormatError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise FileFormatError(f"{path} is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise FileFormatError(f"{path} does not contain a document object")
    return doc


def write_operator(path, t: KreinOperator) -> None:
    write_document(path, operator_to_doc(t))


def read_operator(path) -> KreinOperator:
    return doc_to_operator(read_document(path))


def write_angular(path, a: AngularOperator) -> None:
    write_document(path, angular_to_doc(a))


def read_angular(path) -> AngularOperator:
    return doc_to_angular(read_document(path))


def file_digest(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        h.update(fh.read())
    return h.hexdigest()
