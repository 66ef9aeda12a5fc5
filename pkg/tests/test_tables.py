import csv
import io

import pytest

from isoclass.algebra import Algebra, alternating_from_products
from isoclass.latin import parse_pls, ring_of
from isoclass.tables import (TABLES, algebra_for_row, emit_table, golden_rows, measure, p3_table_labels,
                             stored_merged_pairs)


@pytest.mark.parametrize("square, p, vertices, g1, g2, triangles", [
    ("12 00", 2, (2, 3, 3, 6), 18, 25, 12),
    ("12 00", 3, (6, 8, 8, 48), 144, 164, 42),
    ("00 00", 2, (0, 0, 0, 0), 0, 0, 0),
    ("10 00", 2, (2, 2, 1, 4), 12, 16, 7),
])
def test_order_two_rows(square, p, vertices, g1, g2, triangles):
    got = measure(ring_of(parse_pls(square), p))
    assert (got["vertices"], got["g1_edges"], got["g2_edges"], got["g2_triangles"]) == (vertices, g1, g2, triangles)


def test_lie_row_over_f3():
    got = measure(alternating_from_products(3, 3, "e1e2=e2, e1e3=-e3, e2e3=2e1"))
    assert (got["vertices"], got["g1_edges"]) == ((26, 26, 26, 624), 1872)
    assert (got["g2_edges"], got["g2_triangles"]) == (1950, 74)


def test_order_three_row():
    got = measure(ring_of(parse_pls("123 201 312"), 2))
    assert (got["vertices"], got["g1_edges"]) == ((7, 7, 7, 46), 138)


def test_g1_edges_are_three_per_cell():
    # every cell vertex has degree 3 in G1 and G1 has no other edges
    for name in ("p2-invariants", "l3-g1"):
        for key, golden in golden_rows(name):
            for (p, qty), v in golden.items():
                if qty == "g1_edges" and v is not None:
                    assert v == 3 * golden[(p, "vertices")][3]


@pytest.mark.parametrize("name", ["p2-invariants", "l3-g1", "l3-g2"])
def test_stored_tables_are_reproduced(name):
    table = emit_table(name)
    assert table.ok, table.diff()
    assert len(table.rows) == len(golden_rows(name))


def test_order_three_table_differs_in_exactly_two_rows():
    table = emit_table("p3-invariants")
    bad = sorted(r.key for r in table.rows if not r.ok)
    assert bad == sorted(["100 010 002", "031 302"])
    malformed = next(r for r in table.rows if r.key == "031 302")
    assert malformed.error
    wrong = next(r for r in table.rows if r.key == "100 010 002")
    assert wrong.mismatches == [((2, "g1_edges"), 120, 102)]
    assert len(table.rows) == 80


def test_dash_cells_are_not_computed():
    table = emit_table("l3-g1")
    row = next(r for r in table.rows if r.key == "e1e2=e2, e1e3=-e3, e2e3=2e1")
    assert (2, "vertices") not in row.computed and (3, "vertices") in row.computed


def test_csv_output_has_one_line_per_cell():
    table = emit_table("p2-invariants")
    rows = list(csv.reader(io.StringIO(table.to_csv())))
    assert rows[0] == ["table", "row", "field", "quantity", "computed", "stored", "match"]
    assert len(rows) == 1 + 8 * len(table.rows)
    assert all(r[6] == "1" for r in rows[1:])
    first = next(r for r in rows[1:] if r[1] == "12 00" and r[2] == "F2" and r[3] == "vertices")
    assert first[4] == first[5] == "(2,3,3,6)"


def test_text_output_marks_differing_rows():
    text = emit_table("p3-invariants").to_text()
    flagged = [line.split("\t")[0] for line in text.splitlines() if line.endswith("<- differs")]
    assert sorted(flagged) == sorted(["100 010 002", "031 302"])


def test_unknown_table():
    with pytest.raises(KeyError):
        golden_rows("nope")
    assert set(TABLES) == {"p2-invariants", "p3-invariants", "l3-g1", "l3-g2"}


def test_p3_labels_name_distinct_classes():
    labels = p3_table_labels()
    # 80 rows, one malformed; the rest name 79 distinct classes, so two of the 81 go unlabelled
    assert len(labels) == 79
    assert len(set(labels.values())) == 79


def test_stored_merged_pairs():
    pairs = stored_merged_pairs()
    assert len(pairs) == 9 and all(len(p) == 2 for p in pairs)
    assert frozenset({"120 200 000", "120 210 000"}) in pairs


def test_algebra_for_row_dispatch():
    assert algebra_for_row("l3-g1", "abelian", 3) == Algebra.zero(3, 3)
    assert algebra_for_row("p2-invariants", "10 00", 2) == ring_of(parse_pls("10 00"), 2)
