"""JSON documents for bracket tables.

Rationals are written as "num/den" strings and entries are sorted on
their serialized symbols, so equal tables give byte-identical files.
"""

from __future__ import annotations

import json
import os
import tempfile
from fractions import Fraction

from .superpoly import BracketTable, Poly, Symbol, symbol_from_record

VERSION = "0.1.0"


class DocumentError(ValueError):
    pass


def coeff_str(c: Fraction) -> str:
    c = Fraction(c)
    return f"{c.numerator}/{c.denominator}"


def parse_coeff(s: str) -> Fraction:
    if not isinstance(s, str) or s.count("/") != 1:
        raise DocumentError(f"bad coefficient {s!r}")
    num, den = s.split("/")
    try:
        return Fraction(int(num), int(den))
    except (ValueError, ZeroDivisionError) as exc:
        raise DocumentError(f"bad coefficient {s!r}") from exc


def _key(rec) -> str:
    return json.dumps(rec, sort_keys=True, separators=(",", ":"))


def poly_records(p: Poly) -> list:
    out = [{"coeff": coeff_str(c), "monomial": [s.record() for s in mono]}
           for mono, c in p.terms.items()]
    return sorted(out, key=lambda t: _key(t["monomial"]))


def poly_from_records(recs: list, M: int) -> Poly:
    terms = Poly()
    for t in recs:
        syms = [symbol_from_record(r, M) for r in t["monomial"]]
        terms = terms + Poly.word(syms, parse_coeff(t["coeff"]))
    return terms


def table_document(table: BracketTable, suite: str, M: int, N: int, p: int, extra: dict | None = None) -> dict:
    entries = []
    for (x, y), v in table.entries.items():
        entries.append({"lhs": x.record(), "rhs": y.record(), "bracket": poly_records(v)})
    entries.sort(key=lambda e: (_key(e["lhs"]), _key(e["rhs"])))
    meta = {"suite": suite, "M": M, "N": N, "p": p, "version": VERSION}
    doc = {"metadata": meta, "entries": entries}
    if extra:
        doc.update(extra)
    return doc


def table_from_document(doc: dict) -> BracketTable:
    try:
        M = doc["metadata"]["M"]
        table = BracketTable(doc["metadata"].get("suite", ""))
        for e in doc["entries"]:
            x = symbol_from_record(e["lhs"], M)
            y = symbol_from_record(e["rhs"], M)
            table.set(x, y, poly_from_records(e["bracket"], M))
    except (KeyError, TypeError, IndexError) as exc:
        raise DocumentError(f"malformed table document: {exc}") from exc
    return table


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=1, sort_keys=True) + "\n"


def write_atomic(path: str, text: str) -> None:
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-", suffix=".json")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def load(path: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"{path}: not JSON ({exc})") from exc


def residual_record(key, value) -> dict:
    """Readable residual entry for reports."""
    def conv(k):
        if isinstance(k, Symbol):
            return k.record()
        if isinstance(k, tuple):
            return [conv(x) for x in k]
        return k
    if isinstance(value, Poly):
        value = poly_records(value)
    elif isinstance(value, dict):
        value = {str(k): (poly_records(v) if isinstance(v, Poly) else str(v)) for k, v in value.items()}
    else:
        value = str(value)
    return {"where": conv(key), "residual": value}
