"""Inequality objects built from ``P_n`` and the scans and certificates over them.

Notation follows the usual one for this problem::

    Delta_{a,b}(x) = P_{a-1}(x) P_{b+1}(x) - P_a(x) P_b(x)
    P_{a,b}(x)     = P_a(x) P_b(x) - P_{a+b}(x)
    H_b(x)         = P_{b+1}(x)/P_b(x) - x/(b+1)
    G_b(x)         = (x - x0)/(b+1) + P_{b+1}(x0)/P_b(x0)
    F_{a,b}(x)     = G_b(x) P_{a-1}(x) - P_a(x)
    N_b(x)         = P_{b+1}'(x) P_b(x) - P_{b+1}(x) P_b'(x)
"""

from __future__ import annotations

import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from math import factorial

import mpmath

from .etapoly import EtaTable, eval_sequence, gen_table
from .polycore import Poly, as_rational
from .report import ScanReport
from .roots import Interval, _int_poly, _yun, largest_real_root, sturm_count

X0_UNIFORM = Fraction(10277, 5000)  # the decimal 2.0554, exactly
CFT_EXPECTED = [(2, 6, 4)]
# x0 of the b in {1, 2, 3} arguments: 1 for odd b, 2 for even b
SECTION_X0 = {0: Fraction(2), 1: Fraction(1), 2: Fraction(2), 3: Fraction(1)}

# ordering of q(n) = p(n)/p(n-1) for n <= 27; "=" marks equal links
Q_CHAIN = [
    2, ">", 4, ">", 6, ">", 3, ">", 8, ">", 5, "=", 10, ">", 12, ">", 7, "=", 9,
    ">", 14, ">", 11, ">", 16, ">", 13, ">", 15, ">", 18, ">", 17, ">", 20,
    ">", 19, ">", 22, ">", 21, ">", 24, ">", 23, ">", 26, ">", 25, ">", 27,
]


def _table(table, n):
    if table is None or table.n_max < n:
        return gen_table(n)
    return table


@dataclass(frozen=True)
class DeltaPoly:
    a: int
    b: int
    poly: Poly


@dataclass(frozen=True)
class AuxPolys:
    b: int
    x0: Fraction
    Hb_num: Poly
    Hb_den: Poly
    Gb: Poly | None
    Nb: Poly

    def nb_criterion(self, divisor=None) -> Poly:
        """``N_b - P_b^2 / divisor``; divisor defaults to ``b + 1``."""
        d = self.b + 1 if divisor is None else divisor
        return self.Nb - self.Hb_den * self.Hb_den / d


@dataclass(frozen=True)
class FabPoly:
    a: int
    b: int
    x0: Fraction
    poly: Poly


@dataclass(frozen=True)
class MainTermParams:
    a: int
    b: int
    x: Fraction
    A: Fraction
    B: Fraction
    valid: bool


@dataclass
class MainTermResult:
    params: MainTermParams
    main: object  # mpf
    delta: Fraction
    ratio: object  # mpf, delta / main
    precision_bits: int
    precision_agrees: bool
    in_window: bool
    warning: str = ""

    @property
    def passed(self) -> bool:
        return self.precision_agrees and self.in_window


# ---------------------------------------------------------------------------
# polynomial objects


def delta(a: int, b: int, table: EtaTable | None = None) -> DeltaPoly:
    """``Delta_{a,b} = P_{a-1} P_{b+1} - P_a P_b`` for ``0 <= b < a``."""
    if not 0 <= b < a:
        raise ValueError(f"delta needs 0 <= b < a, got a={a}, b={b}")
    t = _table(table, max(a, b + 1))
    return DeltaPoly(a, b, t[a - 1] * t[b + 1] - t[a] * t[b])


def delta_value(a: int, b: int, x) -> Fraction:
    """Exact ``Delta_{a,b}(x)`` from value sequences, no polynomials built."""
    if not 0 <= b < a:
        raise ValueError(f"delta needs 0 <= b < a, got a={a}, b={b}")
    v = eval_sequence(x, max(a, b + 1))
    return v[a - 1] * v[b + 1] - v[a] * v[b]


def bo_poly(a: int, b: int, table: EtaTable | None = None) -> Poly:
    """``P_{a,b} = P_a P_b - P_{a+b}``."""
    if a < 0 or b < 0:
        raise ValueError("indices must be nonnegative")
    t = _table(table, a + b)
    return t[a] * t[b] - t[a + b]


def aux_polys(b: int, x0, table: EtaTable | None = None) -> AuxPolys:
    x0 = as_rational(x0)
    t = _table(table, b + 1)
    pb, pb1 = t[b], t[b + 1]
    x = Poly.x()
    # G_b needs P_b(x0) != 0, which fails at x0 = 0 for b >= 1
    gb = None
    if pb(x0) != 0:
        q0 = quotient_at(b, x0, t)
        gb = Poly([q0 - x0 / (b + 1), Fraction(1, b + 1)])
    nb = pb1.derivative() * pb - pb1 * pb.derivative()
    return AuxPolys(b, x0, pb1 - x * pb / (b + 1), pb, gb, nb)


def quotient_at(b: int, x0, table: EtaTable | None = None) -> Fraction:
    """``P_{b+1}(x0) / P_b(x0)``, exactly."""
    x0 = as_rational(x0)
    t = _table(table, b + 1)
    den = t[b](x0)
    if den == 0:
        raise ZeroDivisionError(f"P_{b}({x0}) = 0")
    return t[b + 1](x0) / den


def fab(a: int, b: int, x0=None, table: EtaTable | None = None) -> FabPoly:
    """``F_{a,b} = G_b P_{a-1} - P_a``.

    With ``x0`` omitted and ``b`` in {1, 2, 3} the per-case base point
    (1 for odd b, 2 for even b) is used, giving G = (x+3)/2, (x+4)/3 and
    (3x+17)/12 respectively.
    """
    if a <= b + 1:
        raise ValueError(f"fab needs a > b + 1, got a={a}, b={b}")
    if x0 is None:
        if b not in SECTION_X0:
            raise ValueError("x0 is required for b > 3")
        x0 = SECTION_X0[b]
    x0 = as_rational(x0)
    t = _table(table, a)
    gb = aux_polys(b, x0, t).Gb
    return FabPoly(a, b, x0, gb * t[a - 1] - t[a])


# ---------------------------------------------------------------------------
# certificates


def nonneg_certificate(p: Poly, x0) -> tuple[bool, str]:
    """Certify ``p >= 0`` on ``[x0, oo)``.

    Tries cheap routes first: the zero polynomial, then nonnegative
    coefficients of ``p(t + x0)``, then a Sturm count showing no root beyond
    x0 together with ``p(x0) >= 0`` and a positive leading coefficient.
    Returns ``(certified, kind)``; a failed certificate says nothing about
    the truth of the claim when roots of even multiplicity are present.
    """
    x0 = as_rational(x0)
    if not p:
        return True, "zero"
    if p.shift(x0).nonnegative_coefficients():
        return True, "shifted-coefficients"
    if p.lead > 0 and p(x0) >= 0 and sturm_count(p, x0, None) == 0:
        return True, "sturm"
    return False, "none"


def assumption1_certificate(b: int, x0, table: EtaTable | None = None) -> ScanReport:
    """``N_b - P_b^2/(b+1) >= 0`` on ``[x0, oo)``, so ``H_b`` is increasing there."""
    x0 = as_rational(x0)
    aux = aux_polys(b, x0, table)
    crit = aux.nb_criterion()
    ok, kind = nonneg_certificate(crit, x0)
    report = ScanReport("assumption1", {"b": b, "x0": x0})
    report.certificates.append({"b": b, "kind": kind, "poly": crit})
    if not ok:
        report.exceptions.append((b, x0))
    return report


def assumption2_certificate(b: int, x0, table: EtaTable | None = None) -> ScanReport:
    """Monotonicity of every ``P_{k+1}/P_k - x/(b+1)`` and the comparison at x0.

    (i) ``N_k - P_k^2/(b+1) >= 0`` on ``[x0, oo)`` for ``0 <= k <= b``;
    (ii) ``P_{b+1}(x0) P_k(x0) <= P_{k+1}(x0) P_b(x0)`` for ``0 <= k < b``.
    Exceptions are tagged ``("monotone", k)`` or ``("initial", k)``.
    """
    if b < 1:
        raise ValueError("assumption 2 needs b >= 1")
    x0 = as_rational(x0)
    t = _table(table, b + 1)
    report = ScanReport("assumption2", {"b": b, "x0": x0})
    for k in range(b + 1):
        crit = aux_polys(k, x0, t).nb_criterion(divisor=b + 1)
        ok, kind = nonneg_certificate(crit, x0)
        report.certificates.append({"k": k, "kind": kind})
        if not ok:
            report.exceptions.append(("monotone", k))
    vals = [t[n](x0) for n in range(b + 2)]
    for k in range(b):
        if vals[b + 1] * vals[k] > vals[k + 1] * vals[b]:
            report.exceptions.append(("initial", k))
    return report


def assumption3_certificate(a: int, b: int, x0, table: EtaTable | None = None) -> ScanReport:
    """``G_b P_{a-1-k} - P_{a-k} <= 0`` on ``[x0, oo)`` for ``a-1-b <= k <= a-1``.

    The quantifier couples a and b, so this is certified one pair at a time.
    """
    if a <= b + 1:
        raise ValueError(f"need a > b + 1, got a={a}, b={b}")
    x0 = as_rational(x0)
    t = _table(table, a)
    gb = aux_polys(b, x0, t).Gb
    report = ScanReport("assumption3", {"a": a, "b": b, "x0": x0})
    for k in range(a - 1 - b, a):
        neg = t[a - k] - gb * t[a - 1 - k]
        ok, kind = nonneg_certificate(neg, x0)
        report.certificates.append({"k": k, "kind": kind})
        if not ok:
            report.exceptions.append((k,))
    return report


def derivative_positive_check(a: int, b: int, x0, table: EtaTable | None = None) -> bool:
    """``Delta_{a,b}'`` has no real root in ``(x0, oo)`` and is positive at ``x0 + 1``."""
    if a <= b + 1:
        raise ValueError(f"need a > b + 1, got a={a}, b={b}")
    x0 = as_rational(x0)
    d = delta(a, b, table).poly.derivative()
    return sturm_count(d, x0, None) == 0 and d(x0 + 1) > 0


# ---------------------------------------------------------------------------
# scans


def _cft_for_k(args):
    k, n_max = args
    v = eval_sequence(k, n_max)
    bad = []
    for n in range(2, n_max + 1):
        for m in range(1, n):
            if v[n - 1] * v[m + 1] < v[n] * v[m]:
                bad.append((k, n, m))
    return bad


def _pool_map(fn, jobs, workers):
    if workers and workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(fn, jobs))
    return [fn(j) for j in jobs]


def scan_cft(n_max: int, k_max: int, workers: int = 1) -> ScanReport:
    """``p_{-k}(n-1) p_{-k}(m+1) >= p_{-k}(n) p_{-k}(m)`` for ``n > m >= 1``, ``2 <= k <= k_max``."""
    if n_max < 2 or k_max < 2:
        raise ValueError("need n_max >= 2 and k_max >= 2")
    report = ScanReport(
        "cft", {"n_max": n_max, "k_max": k_max}, expected=[e for e in CFT_EXPECTED if e[0] <= k_max and e[1] <= n_max]
    )
    for bad in _pool_map(_cft_for_k, [(k, n_max) for k in range(2, k_max + 1)], workers):
        report.exceptions.extend(bad)
    return report


def log_concavity_failures(x, n_lo: int, n_hi: int) -> list[int]:
    """All ``n_lo <= n <= n_hi`` with ``P_n(x)^2 < P_{n-1}(x) P_{n+1}(x)``."""
    v = eval_sequence(x, n_hi + 1)
    return [n for n in range(max(n_lo, 1), n_hi + 1) if v[n] * v[n] < v[n - 1] * v[n + 1]]


def _delta_for_x(args):
    b, a_list, x = args
    v = eval_sequence(x, max(max(a_list), b + 1))
    return [(a, x) for a in a_list if v[a - 1] * v[b + 1] - v[a] * v[b] < 0]


def scan_delta_sign(b: int, a_range, x_grid, table: EtaTable | None = None, expected=(), workers: int = 1) -> ScanReport:
    """Exact sign of ``Delta_{a,b}(x)`` on an explicit rational grid.

    Exceptions are the ``(a, x)`` cells with a negative value. ``table`` is
    accepted for interface symmetry; values come from the value recurrence,
    which agrees exactly with evaluating the table polynomials.
    """
    a_list = [a for a in a_range]
    if any(a <= b for a in a_list):
        raise ValueError("every a must exceed b")
    xs = [as_rational(x) for x in x_grid]
    report = ScanReport(
        "delta_sign",
        {"b": b, "a_min": min(a_list), "a_max": max(a_list), "x_grid": xs},
        expected=list(expected),
    )
    for bad in _pool_map(_delta_for_x, [(b, a_list, x) for x in xs], workers):
        report.exceptions.extend(bad)
    report.exceptions.sort()
    return report


def q_values(n_max: int) -> list:
    """``q(n) = p(n)/p(n-1)`` for ``1 <= n <= n_max`` (index 0 unused)."""
    p = eval_sequence(1, n_max)
    return [None] + [p[n] / p[n - 1] for n in range(1, n_max + 1)]


def q_chain_check(n_max: int = 60) -> ScanReport:
    """Ratio chain for ``q(n) = p(n)/p(n-1)``: ``q(n+2) <= q(n)`` for n >= 2, ``q(27) >= q(n)`` for n >= 27, and the chain."""
    if n_max < 30:
        raise ValueError("n_max must be >= 30")
    q = q_values(n_max)
    report = ScanReport("q_chain", {"n_max": n_max})
    # q(3) = 3/2 > q(1) = 1, so the decreasing step starts at n = 2
    for n in range(2, n_max - 1):
        if q[n + 2] > q[n]:
            report.exceptions.append(("step2", n))
    for n in range(27, n_max + 1):
        if q[27] < q[n]:
            report.exceptions.append(("q27", n))
    for i in range(0, len(Q_CHAIN) - 2, 2):
        left, rel, right = Q_CHAIN[i], Q_CHAIN[i + 1], Q_CHAIN[i + 2]
        ok = q[left] > q[right] if rel == ">" else q[left] == q[right]
        if not ok:
            report.exceptions.append(("chain", left, rel, right))
    return report


def corollary_T2(b: int, a_scan_max: int = 200) -> tuple[frozenset, int]:
    """``(A_0(b), a_1(b))`` for even b: where ``Delta_{a,b}(1) >= 0`` holds.

    ``a_1`` is the least value from which every ``a <= a_scan_max`` satisfies
    the inequality; ``A_0`` holds the satisfying ``a < a_1``. Both are only as
    good as the scanned range.
    """
    if b % 2:
        raise ValueError("odd b always satisfies Delta_{a,b}(1) >= 0; the table covers even b")
    if not 2 <= b <= 26:
        raise ValueError("b must lie in 2..26")
    v = eval_sequence(1, a_scan_max)
    ok = {a: v[a - 1] * v[b + 1] >= v[a] * v[b] for a in range(b + 2, a_scan_max + 1)}
    a1 = a_scan_max + 1
    for a in range(a_scan_max, b + 1, -1):
        if not ok[a]:
            break
        a1 = a
    return frozenset(a for a in range(b + 2, a1) if ok[a]), a1


# ---------------------------------------------------------------------------
# smallest admissible x0


def smallest_x0(b: int, precision_bits: int = 140, table: EtaTable | None = None) -> Interval:
    """Least ``x0 > 0`` beyond which ``P_{b+1}P_k <= P_{k+1}P_b`` for all ``k < b``.

    ``P_{k+1}P_b - P_{b+1}P_k = Delta_{b+1,k}``, which has a positive leading
    coefficient; the answer is the largest positive root of odd multiplicity
    among these, returned as an interval of width ``<= 2^-precision_bits``.
    """
    if b < 2:
        raise ValueError("smallest_x0 is defined for b >= 2")
    t = _table(table, b + 1)
    best = None
    for k in range(b):
        iv = _largest_sign_change(delta(b + 1, k, t).poly, precision_bits)
        if iv is not None and iv.hi > 0 and (best is None or iv.mid > best.mid):
            best = iv
    if best is None:
        return Interval(Fraction(0), Fraction(0))
    return best


def _largest_sign_change(p: Poly, bits: int):
    """Largest real root at which ``p`` changes sign (odd multiplicity), or ``None``."""
    odd = Poly.const(1)
    for factor, mult in _yun(_int_poly(p)):
        if mult % 2:
            odd = odd * Poly.from_ints(factor)
    if odd.degree < 1:
        return None
    return largest_real_root(odd, bits)


# ---------------------------------------------------------------------------
# asymptotic main-term comparator


def b0_bound(x) -> Fraction:
    """``max(2 x^11 + x/24, 100/(x - 24) + x/24)``."""
    x = as_rational(x)
    if x <= 0:
        raise ValueError("x must be positive")
    if x == 24:
        raise ValueError("B0 has a pole at x = 24")
    return max(2 * x**11 + x / 24, Fraction(100) / (x - 24) + x / 24)


def main_term_params(a: int, b: int, x) -> MainTermParams:
    x = as_rational(x)
    A = a - 1 - x / 24
    B = b - x / 24
    valid = x != 24 and B >= max(2 * x**11, Fraction(100) / (x - 24))
    return MainTermParams(a, b, x, A, B, valid)


def main_term_value(a: int, b: int, x, precision_bits: int = 128):
    """``pi (x/24)^(x/2+1) (AB)^(-x/4-5/4) exp(pi sqrt(2x/3)(sqrt A + sqrt B)) (sqrt A - sqrt B)``."""
    prm = main_term_params(a, b, x)
    with mpmath.workprec(precision_bits):
        xr = mpmath.mpf(prm.x.numerator) / prm.x.denominator
        A = mpmath.mpf(prm.A.numerator) / prm.A.denominator
        B = mpmath.mpf(prm.B.numerator) / prm.B.denominator
        sa, sb = mpmath.sqrt(A), mpmath.sqrt(B)
        val = (
            mpmath.pi
            * (xr / 24) ** (xr / 2 + 1)
            * (A * B) ** (-xr / 4 - mpmath.mpf(5) / 4)
            * mpmath.exp(mpmath.pi * mpmath.sqrt(2 * xr / 3) * (sa + sb))
            * (sa - sb)
        )
        return +val


def main_term(a: int, b: int, x, precision_bits: int = 128) -> MainTermResult:
    """Main term against the exact ``Delta_{a,b}(x)``; window ``[1/3, 5/3]`` on the ratio.

    The term is evaluated at ``precision_bits`` and again at twice that; the
    ratio is trusted only if the two agree to ``precision_bits/2`` bits.
    Outside the validity condition B >= B0(x) the numbers are still produced but a
    warning is attached.
    """
    if a < b + 1:
        raise ValueError(f"need a >= b + 1, got a={a}, b={b}")
    prm = main_term_params(a, b, x)
    warn = ""
    if not prm.valid:
        warn = f"hypothesis B >= max(2x^11, 100/(x-24)) fails for b={b}, x={prm.x}"
        warnings.warn(warn, RuntimeWarning, stacklevel=2)
    lo = main_term_value(a, b, prm.x, precision_bits)
    hi = main_term_value(a, b, prm.x, 2 * precision_bits)
    exact = delta_value(a, b, prm.x)
    with mpmath.workprec(2 * precision_bits):
        if hi == 0:
            agree = lo == 0
        else:
            agree = abs(lo - hi) <= abs(hi) * mpmath.mpf(2) ** (-(precision_bits // 2))
        if hi == 0:
            ratio = mpmath.mpf(1) if exact == 0 else mpmath.inf
        else:
            ratio = (mpmath.mpf(exact.numerator) / exact.denominator) / hi
        in_window = mpmath.mpf(1) / 3 <= ratio <= mpmath.mpf(5) / 3
    return MainTermResult(prm, hi, exact, ratio, precision_bits, bool(agree), bool(in_window), warn)


def hoggar_closure_check(x1, x2, n_max: int) -> bool | None:
    """Consistency of log-concavity under convolution.

    Returns ``None`` when either input sequence ``P_n(x_i)``, ``n <= n_max``,
    fails log-concavity (nothing to check); otherwise whether
    ``P_n(x1 + x2)``, ``n <= n_max - 1``, is log-concave as well.
    """
    x1, x2 = as_rational(x1), as_rational(x2)
    if log_concavity_failures(x1, 1, n_max - 1) or log_concavity_failures(x2, 1, n_max - 1):
        return None
    return not log_concavity_failures(x1 + x2, 1, n_max - 2)


def leading_coefficient_expected(a: int, b: int) -> Fraction:
    return Fraction(a - b - 1, factorial(a) * factorial(b + 1))
