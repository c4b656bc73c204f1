import csv
from fractions import Fraction

import pytest

from cftpoly.polycore import Poly
from cftpoly.verify import CSV_HEADER, TABLE_IDS, figure_dataset, parse_poly, reproduce, round_to

FAST = ["T1_delta_a0", "T2_qn", "T3_T2data", "T4_Nb", "T5_quotients", "T6_smallest_x0", "T7_B0"]


@pytest.mark.parametrize("tid", FAST)
def test_tables_reproduce(tid):
    rep = reproduce(tid)
    assert rep.passed, rep.summary()


def test_short_ids_resolve():
    assert reproduce("T7").table_id == "T7_B0"
    with pytest.raises(ValueError):
        reproduce("T9")
    assert len(TABLE_IDS) == 9


def test_table1_flags_the_two_text_mismatches():
    rep = reproduce("T1_delta_a0")
    flagged = [c.key for c in rep.cells if c.note.startswith("expected mismatch")]
    assert flagged == ["a=3 polynomial", "a=4 polynomial"]


def test_reproduce_is_deterministic():
    assert reproduce("T6").to_json() == reproduce("T6").to_json()


def test_round_half_even():
    assert round_to(Fraction(5, 2), 0) == "2"
    assert round_to(Fraction(7, 2), 0) == "4"
    assert round_to(Fraction(1, 3), 4) == "0.3333"


def test_parse_poly():
    x = Poly.x()
    assert parse_poly("1/48*(x^2+4*x+16)*(x+3)^2*x^2") == (x * x + 4 * x + 16) * (x + 3) ** 2 * x * x / 48
    assert parse_poly("-x+2") == 2 - x
    with pytest.raises(ValueError):
        parse_poly("sin(x)")


def test_small_figure_dataset(tmp_path):
    path = figure_dataset("FIG1", 8, str(tmp_path))
    with open(path) as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == CSV_HEADER
    body = rows[1:]
    assert body and all(float(r[4]) > 0 for r in body)
    # one real row per a (its largest real root) whenever that root is positive
    reals = [r for r in body if r[3] == "real"]
    assert {int(r[1]) for r in reals} <= set(range(4, 9))
    again = figure_dataset("FIG1", 8, str(tmp_path / "b"))
    assert open(again).read() == open(path).read()


def test_figure_guards():
    with pytest.raises(ValueError):
        figure_dataset("FIG2", 20)
    with pytest.raises(ValueError):
        figure_dataset("FIG3", 20)
