"""Versioned, deterministic text formats for codes, streams and patterns."""

from __future__ import annotations

import json
from typing import Any

from .convcode import ConvCode, code_from_generator
from .field import ExtField
from .lrcc import LocalStructure, LrccCode
from .polymat import PolyMatrix

SCHEMA_VERSION = 1


class SchemaError(ValueError):
    pass


def dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def field_to_json(F: ExtField) -> dict:
    sub = F.subfield
    digits = (lambda c: sub.digits(c)) if F.a > 1 else (lambda c: [c])
    out = {"p": F.p, "a": F.a, "m": F.m, "f_sub": list(F.f_sub),
           "f_ext": [digits(c) for c in F.f_ext]}
    if not F.power_basis:
        out["basis"] = list(F.basis)
    return out


def field_from_json(d: dict) -> ExtField:
    try:
        p, a, m = int(d["p"]), int(d["a"]), int(d["m"])
        f_sub = [int(x) for x in d["f_sub"]]
        f_ext = [sum(int(x) * p**i for i, x in enumerate(c)) for c in d["f_ext"]]
    except (KeyError, TypeError) as exc:
        raise SchemaError(f"bad field descriptor: {exc}") from exc
    return ExtField(p, a, m, f_sub, f_ext, d.get("basis"))


def polymatrix_to_json(M: PolyMatrix) -> dict:
    return {"rows": M.rows, "cols": M.cols,
            "entries": [[list(e) for e in row] for row in M.entries]}


def polymatrix_from_json(F, d: dict) -> PolyMatrix:
    try:
        M = PolyMatrix(F, tuple(tuple(tuple(int(x) for x in e) for e in row) for row in d["entries"]))
    except (KeyError, TypeError) as exc:
        raise SchemaError(f"bad polynomial matrix: {exc}") from exc
    if M.rows != d["rows"] or (M.rows and M.cols != d["cols"]):
        raise SchemaError("polynomial matrix dimensions disagree with entries")
    if any(x < 0 or x >= F.order for row in M.entries for e in row for x in e):
        raise SchemaError("element out of field range")
    return M


def structure_to_json(S: LocalStructure) -> dict:
    return {"groups": [list(g) for g in S.groups], "r": S.r, "partial_distance": S.pd}


def structure_from_json(d: dict) -> LocalStructure:
    return LocalStructure(tuple(tuple(g) for g in d["groups"]), int(d["r"]), int(d["partial_distance"]))


def _manifest_to_json(man: dict) -> dict:
    out = {}
    for key, val in man.items():
        out[key] = polymatrix_to_json(val) if isinstance(val, PolyMatrix) else val
    return out


def code_to_json(C: ConvCode | LrccCode, manifest: dict | None = None) -> dict:
    code = C.code if isinstance(C, LrccCode) else C
    out = {
        "v": SCHEMA_VERSION,
        "field": field_to_json(code.field),
        "n": code.n,
        "k": code.k,
        "G": polymatrix_to_json(code.G),
        "localStructure": None,
    }
    if isinstance(C, LrccCode):
        out["localStructure"] = structure_to_json(C.structure)
        if C.local_gen is not None:
            out["localGen"] = [list(r) for r in C.local_gen]
    if manifest is not None:
        out["manifest"] = _manifest_to_json(manifest)
    return out


def code_from_json(d: dict) -> ConvCode | LrccCode:
    if d.get("v") != SCHEMA_VERSION:
        raise SchemaError(f"unsupported schema version {d.get('v')!r}")
    F = field_from_json(d["field"])
    G = polymatrix_from_json(F, d["G"])
    if (G.rows, G.cols) != (d["k"], d["n"]):
        raise SchemaError("generator shape disagrees with (k, n)")
    code = code_from_generator(F, G)
    ls = d.get("localStructure")
    if ls is None:
        return code
    lg = d.get("localGen")
    return LrccCode(code, structure_from_json(ls),
                    tuple(tuple(r) for r in lg) if lg is not None else None)


def save_code(path: str, C, manifest: dict | None = None) -> None:
    with open(path, "w") as fh:
        fh.write(dumps(code_to_json(C, manifest)))


def load_code(path: str):
    with open(path) as fh:
        try:
            d = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"{path}: {exc}") from exc
    return code_from_json(d), d


def stream_to_text(blocks) -> str:
    """One block per line; erasures as '*'."""
    return "".join(" ".join("*" if x is None else str(x) for x in b) + "\n" for b in blocks)


def stream_from_text(text: str, n: int | None = None, order: int | None = None) -> list:
    blocks = []
    for ln, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        row = []
        for tok in line.split():
            if tok == "*":
                row.append(None)
                continue
            try:
                x = int(tok)
            except ValueError as exc:
                raise SchemaError(f"line {ln}: bad symbol {tok!r}") from exc
            if x < 0 or (order is not None and x >= order):
                raise SchemaError(f"line {ln}: symbol {x} outside the field")
            row.append(x)
        if n is not None and len(row) != n:
            raise SchemaError(f"line {ln}: expected {n} symbols, got {len(row)}")
        blocks.append(row)
    return blocks


def pattern_to_json(pattern) -> str:
    return json.dumps(sorted([int(t), int(c)] for t, c in pattern)) + "\n"


def pattern_from_json(text: str) -> list:
    try:
        data = json.loads(text)
        return [(int(t), int(c)) for t, c in data]
    except (ValueError, TypeError) as exc:
        raise SchemaError(f"bad erasure pattern: {exc}") from exc
