from fractions import Fraction

import mpmath
import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from cftpoly.inequality import delta
from cftpoly.polycore import Poly
from cftpoly.roots import (
    Interval,
    aberth,
    complex_roots,
    isolate_real_roots,
    largest_real_root,
    real_roots,
    refine,
    root_bound,
    sturm_count,
    sturm_sequence,
)

X = sympy.Symbol("x")
small_ints = st.integers(-20, 20)


def to_sympy(p: Poly):
    return sympy.Poly(sum(sympy.Rational(c.numerator, c.denominator) * X**i for i, c in enumerate(p.coeffs)), X)


def test_sturm_count_examples():
    x = Poly.x()
    assert sturm_count(x * (x - 3) / 2, 0, 10) == 1
    assert sturm_count(x * x + 1, -10, 10) == 0
    d5 = delta(5, 0).poly
    assert sturm_count(d5, 1, 2) == 1


def test_counts_half_open():
    p = Poly.from_roots([1, 2])
    assert sturm_count(p, 1, 2) == 1
    assert sturm_count(p, 0, 1) == 1
    assert sturm_count(p) == 2


def test_multiple_roots_counted_once():
    p = Poly.from_roots([1, 1, 1, -2, -2])
    assert sturm_count(p) == 2


@given(st.lists(small_ints, min_size=2, max_size=9).filter(lambda c: c[-1] != 0))
def test_sturm_matches_sympy(coeffs):
    p = Poly(coeffs)
    assert sturm_count(p) == len(set(sympy.real_roots(to_sympy(p))))


@given(st.lists(small_ints, min_size=2, max_size=9).filter(lambda c: c[-1] != 0))
def test_isolation_brackets_every_root(coeffs):
    p = Poly(coeffs)
    ivs = isolate_real_roots(p)
    roots = sorted(set(sympy.real_roots(to_sympy(p))))
    assert len(ivs) == len(roots)
    # cells are half-open (lo, hi], so neighbours may share an endpoint
    for iv, r in zip(sorted(ivs, key=lambda i: i.lo), roots):
        assert iv.lo < r <= iv.hi or iv.lo == r == iv.hi
    for a, b in zip(ivs, ivs[1:]):
        assert a.hi <= b.lo


def test_isolate_examples():
    x = Poly.x()
    p3 = x * (x * x - 4) / 3
    assert len(isolate_real_roots(p3)) == 3
    assert [iv.lo for iv in real_roots(p3, 30)] == [-2, 0, 2]
    assert isolate_real_roots(Poly.const(5)) == []
    d4 = delta(4, 0).poly * 8
    got = [refine(d4, iv, 40) for iv in isolate_real_roots(d4)]
    for iv, r in zip(got, [-7, -1, 0, 2]):
        assert r in iv


def test_root_bound_contains_roots():
    p = Poly.from_roots([-1000, 3, Fraction(1, 7)])
    den, ints = p.int_form()
    assert root_bound(ints) > 1000


def test_refine_sqrt2():
    p = Poly([-2, 0, 1])
    iv = [iv for iv in isolate_real_roots(p) if iv.hi > 0][0]
    r = refine(p, iv, 60)
    assert r.width <= Fraction(1, 2**60)
    assert abs(float(r.mid) - 2**0.5) < 1e-15


def test_refine_needs_sign_change():
    with pytest.raises(ValueError):
        refine(Poly([1, 0, 1]), Interval(Fraction(0), Fraction(1)), 10)


def test_largest_real_root_examples():
    iv = largest_real_root(delta(2, 0).poly, 30)
    assert iv.is_exact and iv.lo == 3
    iv = largest_real_root(delta(4, 0).poly, 30)
    assert iv.is_exact and iv.lo == 2
    assert largest_real_root(Poly([1, 0, 1]), 30) is None
    iv = largest_real_root(delta(5, 0).poly, 20)
    assert abs(float(iv.mid) - 1.69) < 0.005


def test_largest_root_of_delta_a0_between_1_and_2():
    for a in range(5, 31):
        iv = largest_real_root(delta(a, 0).poly, 20)
        assert 1 < iv.lo and iv.hi < 2


def test_largest_root_of_delta_6_4_is_beyond_2():
    # Delta_{6,4}(2) = -4 with a positive leading coefficient
    iv = largest_real_root(delta(6, 4).poly, 30)
    assert iv.lo > 2


def test_interval_invariant():
    with pytest.raises(ValueError):
        Interval(Fraction(2), Fraction(1))


def test_aberth_unit_circle():
    with mpmath.workprec(113):
        zs, ok = aberth([mpmath.mpf(1), 0, mpmath.mpf(1)])
        assert all(ok)
        assert sorted(round(float(z.imag)) for z in zs) == [-1, 1]


def test_complex_roots_x2_plus_1():
    rs = complex_roots(Poly([1, 0, 1]))
    assert len(rs.complex_roots) == 2 and not rs.real_roots
    assert all(r.residual < mpmath.mpf(2) ** -100 for r in rs.complex_roots)


def test_complex_roots_counts_and_labels():
    for a, b in [(5, 0), (12, 2), (20, 2), (9, 3)]:
        p = delta(a, b).poly
        rs = complex_roots(p)
        assert len(rs.complex_roots) == p.degree
        labelled = {(r.re, r.im) for r in rs.complex_roots if r.real}
        assert len(labelled) == sturm_count(p)
        assert all(r.converged for r in rs.complex_roots)


def test_complex_roots_repeat_multiplicity():
    p = Poly.from_roots([1, 1, 2, 2, 2]) * (Poly([1, 0, 1]))
    rs = complex_roots(p)
    assert len(rs.complex_roots) == 7
    assert sorted(iv.mid for iv, _ in rs.real_roots) == [1, 2]
    assert {flag for _, flag in rs.real_roots} == {"unknown"}


def test_sturm_sequence_starts_with_squarefree_part():
    p = Poly.from_roots([1, 1, 3])
    seq = sturm_sequence(p)
    assert len(seq[0]) == 3  # (x-1)(x-3)
