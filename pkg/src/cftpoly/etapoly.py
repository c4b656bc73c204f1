"""The eta-power polynomials ``P_n(x)``.

``sum_n P_n(x) q^n = prod_{k>=1} (1 - q^k)^(-x)``, so ``P_n(k)`` counts
k-coloured partitions of n and ``P_n(1)`` is the partition number.
Logarithmic differentiation in q gives the recurrence used throughout::

    n P_n(x) = x * sum_{k=1}^{n} sigma(k) P_{n-k}(x)
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb, factorial

from . import kernels
from .polycore import Poly, as_rational, sigma, sigma_table
from .report import ScanReport

KOSTANT_CAP = 14


@dataclass(frozen=True)
class EtaTable:
    n_max: int
    polys: tuple

    def __getitem__(self, n) -> Poly:
        return self.polys[n]

    def __len__(self):
        return len(self.polys)

    def to_list(self) -> list:
        return [p.to_dict() for p in self.polys]


@dataclass(frozen=True)
class ValueSequence:
    x: Fraction
    values: tuple
    n_max: int

    def __getitem__(self, n) -> Fraction:
        return self.values[n]

    def __len__(self):
        return len(self.values)

    def csv_rows(self):
        for n, v in enumerate(self.values):
            yield f"{n},{v.numerator},{v.denominator}"


_table_lock = threading.Lock()
_table_cache: EtaTable | None = None


def gen_table(n_max: int) -> EtaTable:
    """``P_0 .. P_{n_max}`` as exact polynomials.

    Tables are cached per process; asking for a shorter table slices the
    largest one built so far.
    """
    global _table_cache
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    cached = _table_cache
    if cached is None or cached.n_max < n_max:
        with _table_lock:
            cached = _table_cache
            if cached is None or cached.n_max < n_max:
                sig = sigma_table(n_max)
                nums = kernels.eta_numerators(n_max, sig)
                polys = tuple(Poly.from_ints(q, factorial(n)) for n, q in enumerate(nums))
                cached = EtaTable(n_max, polys)
                _table_cache = cached
    if cached.n_max == n_max:
        return cached
    return EtaTable(n_max, cached.polys[: n_max + 1])


def kostant_coeff(n: int, m: int, allow_large: bool = False) -> Fraction:
    """Coefficient of ``x^m`` in ``P_n`` by direct summation over compositions.

    ``A_{n,m} = 1/m! * sum over k_1+...+k_m = n of prod sigma(k_i)/k_i``.
    There are C(n-1, m-1) compositions, so this is an oracle for small n only.
    """
    if not 1 <= m <= n:
        raise ValueError(f"need 1 <= m <= n, got n={n}, m={m}")
    if n > KOSTANT_CAP and not allow_large:
        raise ValueError(f"n={n} exceeds the oracle cap {KOSTANT_CAP}; pass allow_large=True")
    weight = [Fraction(0)] + [Fraction(sigma(k), k) for k in range(1, n + 1)]
    total = Fraction(0)
    # a composition is fixed by its m-1 cut points among 1..n-1
    for cuts in combinations(range(1, n), m - 1):
        prev = 0
        term = Fraction(1)
        for c in cuts:
            term *= weight[c - prev]
            prev = c
        term *= weight[n - prev]
        total += term
    return total / factorial(m)


def laguerre_lower(n: int) -> Poly:
    """``(x/n) L_{n-1}^{(1)}(-x) = sum_{k=1}^n C(n-1, k-1) x^k / k!``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return Poly([0] + [Fraction(comb(n - 1, k - 1), factorial(k)) for k in range(1, n + 1)])


def check_laguerre_bound(table: EtaTable) -> ScanReport:
    """Coefficientwise ``P_n >= laguerre_lower(n)`` for ``1 <= n <= n_max``."""
    report = ScanReport("laguerre_bound", {"n_max": table.n_max})
    for n in range(1, table.n_max + 1):
        slack = table[n] - laguerre_lower(n)
        bad = [m for m in range(n + 1) if slack[m] < 0]
        if bad:
            report.exceptions.append((n, bad[0]))
            report.notes = f"first violation at n={n}, x^{bad[0]}"
            break
    return report


def partition_numbers(n_max: int) -> list[int]:
    """p(0..n_max) by the classical dynamic program over part sizes."""
    p = [1] + [0] * n_max
    for part in range(1, n_max + 1):
        for n in range(part, n_max + 1):
            p[n] += p[n - part]
    return p


_seq_lock = threading.Lock()
_seq_cache: dict = {}


def eval_sequence(x, n_max: int) -> ValueSequence:
    """Exact ``P_0(x) .. P_{n_max}(x)`` straight from the value recurrence.

    Integer x stays in integers throughout. For ``x = p/q`` the kernel works
    with ``n! q^n P_n(x)``, which is integral, and divides once at the end.
    """
    x = as_rational(x)
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    cached = _seq_cache.get(x)
    if cached is not None and cached.n_max >= n_max:
        if cached.n_max == n_max:
            return cached
        return ValueSequence(x, cached.values[: n_max + 1], n_max)
    sig = sigma_table(n_max)
    if x.denominator == 1:
        vals = tuple(Fraction(v) for v in kernels.int_values(x.numerator, n_max, sig))
    else:
        p, q = x.numerator, x.denominator
        raw = kernels.scaled_values(p, q, n_max, sig)
        vals = []
        scale = 1
        for n, r in enumerate(raw):
            if n:
                scale *= n * q
            vals.append(Fraction(r, scale))
        vals = tuple(vals)
    seq = ValueSequence(x, vals, n_max)
    with _seq_lock:
        old = _seq_cache.get(x)
        if old is None or old.n_max < n_max:
            _seq_cache[x] = seq
    return seq


def convolution_check(n: int, x1, x2, table: EtaTable) -> bool:
    """``sum_{i+j=n} P_i(x1) P_j(x2) == P_n(x1 + x2)``, exactly."""
    x1, x2 = as_rational(x1), as_rational(x2)
    lhs = sum((table[i](x1) * table[n - i](x2) for i in range(n + 1)), Fraction(0))
    return lhs == table[n](x1 + x2)


def derivative_identity_check(table: EtaTable) -> ScanReport:
    """``P_n' == sum_{k=1}^n sigma(k)/k P_{n-k}`` as polynomials, all n <= n_max."""
    report = ScanReport("derivative_identity", {"n_max": table.n_max})
    for n in range(1, table.n_max + 1):
        rhs = Poly()
        for k in range(1, n + 1):
            rhs = rhs + table[n - k] * Fraction(sigma(k), k)
        if table[n].derivative() != rhs:
            report.exceptions.append((n,))
    return report
