"""Invariant tables recomputed from scratch and diffed against stored copies.

Golden copies live in ``isoclass/data`` as tab-separated files; a ``-`` cell
means the row has no entry for that field.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources

from .algebra import Algebra, alternating_from_products
from .colorgraph import signature
from .functor import build_g1, build_g2, vertex_tuple
from .latin import LatinError, class_index, format_pls, parse_pls, ring_of

TABLES = {
    "p2-invariants": "p2_invariants.txt",
    "p3-invariants": "p3_g1_f2.txt",
    "l3-g1": "l3_g1.txt",
    "l3-g2": "l3_g2.txt",
}

# column layout of each golden file after the key: (field, quantity)
_LAYOUT = {
    "p2-invariants": [(2, "vertices"), (2, "g1_edges"), (2, "g2_edges"), (2, "g2_triangles"),
                      (3, "vertices"), (3, "g1_edges"), (3, "g2_edges"), (3, "g2_triangles")],
    "p3-invariants": [(2, "vertices"), (2, "g1_edges")],
    "l3-g1": [(2, "vertices"), (2, "g1_edges"), (3, "vertices"), (3, "g1_edges")],
    "l3-g2": [(2, "vertices"), (2, "g2_edges"), (2, "g2_triangles"),
              (3, "vertices"), (3, "g2_edges"), (3, "g2_triangles")],
}


def _parse_value(text: str):
    text = text.strip()
    if text == "-":
        return None
    if text.startswith("("):
        return tuple(int(x) for x in text.strip("()").split(","))
    return int(text)


@lru_cache(maxsize=None)
def golden_rows(name: str) -> tuple[tuple[str, dict], ...]:
    """``(key, {(p, quantity): value})`` rows of a stored table, in file order."""
    if name not in TABLES:
        raise KeyError(f"unknown table {name!r}; expected one of {sorted(TABLES)}")
    text = resources.files("isoclass.data").joinpath(TABLES[name]).read_text()
    rows = []
    for line in text.splitlines():
        if not line.strip() or line.startswith("#"):
            continue
        key, *cells = line.split("\t")
        values = {col: _parse_value(v) for col, v in zip(_LAYOUT[name], cells)}
        rows.append((key.strip(), values))
    return tuple(rows)


def algebra_for_row(name: str, key: str, p: int) -> Algebra:
    if name.startswith("l3"):
        if key == "abelian":
            return Algebra.zero(3, p)
        return alternating_from_products(p, 3, key)
    return ring_of(parse_pls(key), p)


def measure(A: Algebra) -> dict[str, object]:
    g1, g2 = build_g1(A), build_g2(A)
    s1, s2 = signature(g1, triangles=False), signature(g2)
    return {
        "vertices": vertex_tuple(s1),
        "g1_edges": s1.edges,
        "g2_edges": s2.edges,
        "g2_triangles": s2.triangles,
    }


@dataclass
class TableRow:
    key: str
    computed: dict = field(default_factory=dict)
    golden: dict = field(default_factory=dict)
    error: str | None = None

    @property
    def mismatches(self) -> list[tuple]:
        if self.error:
            return [("error", self.error)]
        return [(col, self.golden[col], self.computed.get(col))
                for col in self.golden if self.golden[col] is not None and self.computed.get(col) != self.golden[col]]

    @property
    def ok(self) -> bool:
        return not self.mismatches


@dataclass
class Table:
    name: str
    rows: list[TableRow]

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.rows)

    def diff(self) -> list[str]:
        out = []
        for r in self.rows:
            for m in r.mismatches:
                if m[0] == "error":
                    out.append(f"{r.key}: {m[1]}")
                else:
                    (p, qty), want, got = m
                    out.append(f"{r.key} [F{p} {qty}]: stored {want}, computed {got}")
        return out

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["table", "row", "field", "quantity", "computed", "stored", "match"])
        for r in self.rows:
            for (p, qty), want in r.golden.items():
                got = r.computed.get((p, qty))
                w.writerow([self.name, r.key, f"F{p}", qty, format_cell(got), format_cell(want),
                            "" if want is None else int(got == want)])
        return buf.getvalue()

    def to_text(self) -> str:
        cols = _LAYOUT[self.name]
        header = ["row"] + [f"F{p} {q}" for p, q in cols]
        lines = ["\t".join(header)]
        for r in self.rows:
            cells = [r.key] + [format_cell(r.computed.get(c)) for c in cols]
            lines.append("\t".join(cells) + ("" if r.ok else "\t<- differs"))
        return "\n".join(lines)


def format_cell(v) -> str:
    if v is None:
        return "-"
    if isinstance(v, tuple):
        return "(" + ",".join(map(str, v)) + ")"
    return str(v)


def emit_table(name: str) -> Table:
    """Recompute every stored row of ``name`` (entries marked ``-`` are skipped)."""
    rows = []
    for key, golden in golden_rows(name):
        row = TableRow(key, golden=golden)
        try:
            for p in sorted({p for p, _ in golden}):
                if all(golden[(q, qty)] is None for q, qty in golden if q == p):
                    continue
                values = measure(algebra_for_row(name, key, p))
                for q, qty in golden:
                    if q == p:
                        row.computed[(q, qty)] = values[qty]
        except (LatinError, ValueError) as exc:
            row.error = str(exc)
        rows.append(row)
    return Table(name, rows)


@lru_cache(maxsize=None)
def p3_table_labels() -> dict[str, str]:
    """Canonical PLS representative -> label used for that class in the P3 table."""
    index = class_index(3)
    out = {}
    for key, _ in golden_rows("p3-invariants"):
        try:
            L = parse_pls(key)
        except LatinError:
            continue
        out.setdefault(format_pls(index[L]), key)
    return out


@lru_cache(maxsize=None)
def stored_merged_pairs() -> frozenset[frozenset[str]]:
    """Order-3 PLS class pairs whose rings over F2 are stored as isotopic."""
    text = resources.files("isoclass.data").joinpath("p3_merged_pairs.txt").read_text()
    return frozenset(frozenset(x.strip() for x in line.split("\t"))
                     for line in text.splitlines() if line.strip() and not line.startswith("#"))
