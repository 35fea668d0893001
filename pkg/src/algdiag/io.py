"""JSON readers and writers with strict schemas.

Unknown keys are rejected everywhere.  Integer coefficients in input files
are reduced mod p; field elements are written as length-e integer arrays.
Output is byte-stable: sorted keys, canonical term order.
"""
from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from .errors import AlgDiagError, MalformedInput
from .ff import Field
from .poly import MultiPoly, term_order_key
from .series import Branch, TruncatedSeries


def check_keys(doc: Any, allowed: set[str], where: str, required: set[str] | None = None) -> None:
    if not isinstance(doc, dict):
        raise MalformedInput(f"{where}: expected an object")
    extra = set(doc) - allowed
    if extra:
        raise MalformedInput(f"{where}: unknown keys {sorted(extra)}")
    missing = (allowed if required is None else required) - set(doc)
    if missing:
        raise MalformedInput(f"{where}: missing keys {sorted(missing)}")


def _int(x: Any, where: str) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise MalformedInput(f"{where}: expected an integer, got {x!r}")
    return x


def dumps(doc: Any) -> str:
    return json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"


def load_json(path: str | Path) -> Any:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise MalformedInput(f"cannot read {path}: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedInput(f"{path}: line {exc.lineno}: {exc.msg}") from exc


# -- field ------------------------------------------------------------------


def field_to_dict(F: Field) -> dict:
    doc = {"p": F.p, "e": F.e}
    if F.e > 1:
        doc["modulus"] = list(F.modulus)
    return doc


def field_from_dict(doc: Any) -> Field:
    check_keys(doc, {"p", "e", "modulus"}, "field", required={"p", "e"})
    p, e = _int(doc["p"], "field.p"), _int(doc["e"], "field.e")
    modulus = doc.get("modulus")
    if modulus is not None:
        if not isinstance(modulus, list):
            raise MalformedInput("field.modulus: expected a list")
        modulus = [_int(c, "field.modulus") for c in modulus]
    return Field(p, e, modulus)


def _coeff(F: Field, c: Any, where: str) -> int:
    """Field code of a JSON coefficient: a length-e integer array, or a bare
    integer read in the prime subfield.  Entries are reduced mod p."""
    if isinstance(c, list):
        return F.encode([_int(x, where) for x in c])
    return F.from_int(_int(c, where))


# -- polynomials --------------------------------------------------------------


def poly_to_dict(A: MultiPoly) -> dict:
    return {
        "n": A.n,
        "terms": [{"e": list(e), "c": A.field.digits(c)} for e, c in A.items()],
    }


def poly_from_dict(doc: Any, F: Field, where: str = "poly") -> MultiPoly:
    check_keys(doc, {"n", "terms"}, where)
    n = _int(doc["n"], f"{where}.n")
    if n < 1:
        raise MalformedInput(f"{where}.n must be >= 1")
    if not isinstance(doc["terms"], list):
        raise MalformedInput(f"{where}.terms: expected a list")
    acc: dict[tuple[int, ...], int] = {}
    for k, t in enumerate(doc["terms"]):
        tw = f"{where}.terms[{k}]"
        check_keys(t, {"e", "c"}, tw)
        if not isinstance(t["e"], list):
            raise MalformedInput(f"{tw}.e: expected a list")
        e = tuple(_int(x, f"{tw}.e") for x in t["e"])
        if len(e) != n + 1 or min(e) < 0:
            raise MalformedInput(f"{tw}.e must have {n + 1} nonnegative entries")
        if e in acc:
            raise MalformedInput(f"{tw}: repeated exponent {list(e)}")
        acc[e] = _coeff(F, t["c"], f"{tw}.c")
    return MultiPoly(F, n, acc)


def poly_file_to_dict(A: MultiPoly) -> dict:
    return {"field": field_to_dict(A.field), **poly_to_dict(A)}


def load_poly(path: str | Path) -> MultiPoly:
    doc = load_json(path)
    check_keys(doc, {"field", "n", "terms"}, "poly file")
    F = field_from_dict(doc["field"])
    return poly_from_dict({"n": doc["n"], "terms": doc["terms"]}, F)


# -- series -------------------------------------------------------------------


def series_to_dict(f: TruncatedSeries) -> dict:
    terms = sorted(f.code_terms().items(), key=lambda kv: term_order_key(kv[0]))
    return {
        "field": field_to_dict(f.field),
        "n": f.n,
        "prec": f.prec,
        "terms": [{"e": list(e), "c": f.field.digits(c)} for e, c in terms],
    }


def series_from_dict(doc: Any) -> TruncatedSeries:
    check_keys(doc, {"field", "n", "prec", "terms"}, "series file")
    F = field_from_dict(doc["field"])
    n, prec = _int(doc["n"], "series.n"), _int(doc["prec"], "series.prec")
    if n < 1 or prec < 0:
        raise MalformedInput(f"series header n={n}, prec={prec} out of range")
    if not isinstance(doc["terms"], list):
        raise MalformedInput("series.terms: expected a list")
    acc: dict[tuple[int, ...], int] = {}
    for k, t in enumerate(doc["terms"]):
        tw = f"series.terms[{k}]"
        check_keys(t, {"e", "c"}, tw)
        if not isinstance(t["e"], list):
            raise MalformedInput(f"{tw}.e: expected a list")
        e = tuple(_int(x, f"{tw}.e") for x in t["e"])
        if e in acc:
            raise MalformedInput(f"{tw}: repeated exponent {list(e)}")
        acc[e] = _coeff(F, t["c"], f"{tw}.c")
    return TruncatedSeries.from_terms(F, n, prec, acc)


def load_series(path: str | Path) -> TruncatedSeries:
    return series_from_dict(load_json(path))


# -- branches ----------------------------------------------------------------------


def branch_to_dict(b: Branch) -> dict:
    return {"field": field_to_dict(b.field), "E": poly_to_dict(b.E), "y0": b.y0.field.digits(b.y0.value)}


def branch_from_dict(doc: Any) -> Branch:
    check_keys(doc, {"field", "E", "y0"}, "branch file")
    F = field_from_dict(doc["field"])
    E = poly_from_dict(doc["E"], F, "E")
    y0 = F.elem(_coeff(F, doc["y0"], "y0"))
    return Branch(E, y0)


def load_branch(path: str | Path) -> Branch:
    return branch_from_dict(load_json(path))


def parse_inputs(**paths: str | Path | None) -> dict[str, Any]:
    """Load each named input (``poly``, ``series``, ``branch``, ``cert``,
    ``automaton``) with all invariants enforced at the boundary."""
    from .annihilator import certificate_from_dict
    from .automaton import dfao_from_dict

    loaders = {
        "poly": load_poly,
        "series": load_series,
        "branch": load_branch,
        "cert": lambda p: certificate_from_dict(load_json(p)),
        "automaton": lambda p: dfao_from_dict(load_json(p)),
    }
    out = {}
    for name, path in paths.items():
        if path is None:
            continue
        try:
            out[name] = loaders[name](path)
        except AlgDiagError as exc:
            if isinstance(exc, MalformedInput) and str(path) not in str(exc):
                raise type(exc)(f"{path}: {exc}") from exc
            raise
    return out
