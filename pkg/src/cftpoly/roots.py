"""Real-root isolation and refinement by Sturm sequences, plus complex roots.

Exact work happens on primitive integer polynomials (lists of ints, lowest
degree first); the :class:`~cftpoly.polycore.Poly` front end converts on entry.
Complex roots are floating approximations from an Aberth-Ehrlich iteration in
mpmath at a configurable mantissa width.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

import mpmath
import numpy as np

from . import kernels
from .polycore import Poly, as_rational

# ---------------------------------------------------------------------------
# integer polynomial helpers


def _strip(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _primitive(a):
    """Divide out the content; the result has a positive leading coefficient."""
    g = 0
    for v in a:
        g = gcd(g, v)
    if g == 0:
        return []
    if a[-1] < 0:
        g = -g
    return [v // g for v in a]


def _int_poly(p: Poly):
    return _primitive(list(p.content_primitive()[1].int_form()[1])) if p else []


def _deriv(a):
    return [i * a[i] for i in range(1, len(a))]


def _prem(a, b):
    """Pseudo-remainder ``lc(b)^(deg a - deg b + 1) * a mod b`` over the integers."""
    r = list(a)
    db = len(b) - 1
    lb = b[-1]
    steps = len(r) - db
    if steps <= 0:
        return r
    for i in range(len(r) - 1, db - 1, -1):
        c = r[i]
        r = [v * lb for v in r]
        if c:
            off = i - db
            for j, bj in enumerate(b):
                r[off + j] -= c * bj
        r.pop()
    return _strip(r)


def _exact_div(a, b):
    """Quotient of integer polynomials known to divide exactly over Q."""
    qa = Poly.from_ints(a)
    qb = Poly.from_ints(b)
    q, r = divmod(qa, qb)
    if r:
        raise ArithmeticError("inexact polynomial division")
    return _int_poly(q)


def _gcd(a, b):
    a, b = _primitive(list(a)), _primitive(list(b))
    if len(a) < len(b):
        a, b = b, a
    while b:
        r = _prem(a, b)
        a, b = b, _primitive(r)
    return a


def _squarefree(a):
    a = _primitive(list(a))
    if len(a) <= 2:
        return a
    g = _gcd(a, _deriv(a))
    if len(g) <= 1:
        return a
    return _exact_div(a, g)


def _yun(a):
    """Square-free decomposition: list of ``(factor, multiplicity)``.

    Runs over Q: ``b`` and ``c`` must be divided by the same gcd for the
    ``d = c - b'`` step to stay valid, so no renormalisation in between.
    """
    a = _primitive(list(a))
    if len(a) <= 1:
        return []
    pa = Poly.from_ints(a)
    da = pa.derivative()
    g = Poly.from_ints(_gcd(a, _deriv(a)))
    if g.degree == 0:
        return [(a, 1)]
    b = pa // g
    c = da // g
    d = c - b.derivative()
    out = []
    i = 1
    while b.degree > 0:
        if not d:
            out.append((_int_poly(b), i))
            break
        h = Poly.from_ints(_gcd(_int_poly(b), _int_poly(d)))
        if h.degree > 0:
            out.append((_int_poly(h), i))
        b = b // h
        c = d // h
        d = c - b.derivative()
        i += 1
    return out


def _sub(a, b):
    n = max(len(a), len(b))
    out = [(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)]
    return _strip(out)


def _sign_at(a, x: Fraction) -> int:
    return kernels.sign_at(a, x.numerator, x.denominator)


def _sign_inf(a, positive: bool) -> int:
    if not a:
        return 0
    s = 1 if a[-1] > 0 else -1
    if not positive and (len(a) - 1) % 2:
        s = -s
    return s


def sturm_sequence(p) -> list:
    """Sturm chain of the square-free part of ``p`` as primitive integer lists.

    Each remainder is rescaled by a positive constant only, so sign-variation
    counts are those of the textbook chain ``f, f', -rem(f, f'), ...``.
    """
    a = p if isinstance(p, list) else _int_poly(p)
    f = _squarefree(a)
    if len(f) <= 1:
        return [f]
    seq = [f, _primitive(_deriv(f))]
    while len(seq[-1]) > 1:
        a, b = seq[-2], seq[-1]
        r = _prem(a, b)
        if not r:
            break
        k = len(a) - len(b) + 1
        # -rem(a, b) = -prem / lc(b)^k; strip only a positive content
        g = 0
        for v in r:
            g = gcd(g, v)
        if b[-1] > 0 or k % 2 == 0:
            g = -g
        seq.append([v // g for v in r])
    return seq


def _variations(signs) -> int:
    last = 0
    count = 0
    for s in signs:
        if s == 0:
            continue
        if last and s != last:
            count += 1
        last = s
    return count


def _var_at(seq, x) -> int:
    return kernels.sign_variations(seq, x.numerator, x.denominator)


def _var_inf(seq, positive: bool) -> int:
    return _variations(_sign_inf(s, positive) for s in seq)


def _count(seq, lo, hi) -> int:
    vlo = _var_inf(seq, False) if lo is None else _var_at(seq, lo)
    vhi = _var_inf(seq, True) if hi is None else _var_at(seq, hi)
    return vlo - vhi


# ---------------------------------------------------------------------------
# public real-root API


@dataclass(frozen=True)
class Interval:
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError("interval with lo > hi")

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def is_exact(self) -> bool:
        return self.lo == self.hi

    def __contains__(self, x):
        return self.lo <= as_rational(x) <= self.hi

    def to_decimal(self, digits: int = 40) -> str:
        """Midpoint as a decimal string with ``digits`` significant digits."""
        with mpmath.workprec(int(digits * 3.33) + 20):
            m = mpmath.mpf(self.mid.numerator) / self.mid.denominator
            return mpmath.nstr(m, digits, strip_zeros=False)

    def __float__(self):
        return float(self.mid)

    def to_dict(self) -> dict:
        return {"lo": str(self.lo), "hi": str(self.hi)}


def sturm_count(p: Poly, lo=None, hi=None) -> int:
    """Number of distinct real roots of ``p`` in ``(lo, hi]``.

    ``None`` stands for -inf (``lo``) or +inf (``hi``).
    """
    if not p:
        raise ValueError("the zero polynomial has no finite root count")
    lo = None if lo is None else as_rational(lo)
    hi = None if hi is None else as_rational(hi)
    if lo is not None and hi is not None and lo >= hi:
        return 0
    return _count(sturm_sequence(p), lo, hi)


def root_bound(a) -> Fraction:
    """Power of two ``B`` with every root strictly inside ``(-B, B)``.

    Fujiwara's bound ``2 max_k |c_{n-k}/c_n|^(1/k)``, rounded up to a power of
    two and checked exactly in integers. It is far tighter than Cauchy's
    ``1 + max|c_i/c_n|`` when coefficients are large.
    """
    n = len(a) - 1
    lead = abs(a[-1])
    if n < 1:
        return Fraction(1)
    e = 0
    # smallest e with (2^e)^k * |c_n| >= |c_{n-k}| for all k, then B = 2^(e+1)
    for k in range(1, n + 1):
        c = abs(a[n - k])
        if c == 0:
            continue
        while (lead << (e * k)) < c:
            e += 1
    return Fraction(1 << (e + 1)) if e >= 0 else Fraction(1)


def _isolate(seq):
    f = seq[0]
    if len(f) <= 1:
        return []
    m = root_bound(f)
    out = []
    stack = [(-m, m, _count(seq, -m, m))]
    while stack:
        lo, hi, c = stack.pop()
        if c == 0:
            continue
        if c == 1 and _sign_at(f, hi) == 0:
            out.append(Interval(hi, hi))
            continue
        if c == 1 and _sign_at(f, lo) != 0:
            out.append(Interval(lo, hi))
            continue
        mid = (lo + hi) / 2
        cl = _count(seq, lo, mid)
        stack.append((mid, hi, c - cl))
        stack.append((lo, mid, cl))
    out.sort(key=lambda iv: iv.lo)
    return out


def _dyadic_between(lo, hi) -> Fraction:
    """A short dyadic rational strictly inside ``(lo, hi)`` (floats or mpf)."""
    gap = mpmath.mpf(hi - lo)
    k = max(0, int(-mpmath.floor(mpmath.log(gap, 2))) + 3)
    mid = mpmath.mpf(lo + hi) / 2
    return Fraction(int(mpmath.floor(mid * 2**k)), 2**k)


def _isolate_hinted(seq, hints):
    """Isolate using approximate real roots as separators, verified by Sturm.

    Every cell between consecutive separators must hold exactly one root and
    no separator may be a root; otherwise fall back to plain bisection.
    """
    f = seq[0]
    if len(f) <= 1:
        return []
    total = _count(seq, None, None)
    hints = sorted(hints)
    if len(hints) != total:
        return _isolate(seq)
    m = root_bound(f)
    cuts = [-m]
    for u, v in zip(hints, hints[1:]):
        if not u < v:
            return _isolate(seq)
        cuts.append(_dyadic_between(u, v))
    cuts.append(m)
    if any(not a < b for a, b in zip(cuts, cuts[1:])) or any(_sign_at(f, c) == 0 for c in cuts[1:-1]):
        return _isolate(seq)
    var = [_var_at(seq, c) for c in cuts]
    if any(var[i] - var[i + 1] != 1 for i in range(total)):
        return _isolate(seq)
    return [Interval(cuts[i], cuts[i + 1]) for i in range(total)]


def isolate_real_roots(p: Poly) -> list[Interval]:
    """Disjoint rational intervals, each holding exactly one distinct real root.

    Roots that land on a bisection point come back as degenerate intervals.
    """
    if not p:
        raise ValueError("cannot isolate roots of the zero polynomial")
    return _isolate(sturm_sequence(p))


def _refine(f, iv: Interval, bits: int) -> Interval:
    if iv.is_exact():
        return iv
    lo, hi = iv.lo, iv.hi
    slo, shi = _sign_at(f, lo), _sign_at(f, hi)
    if shi == 0:
        return Interval(hi, hi)
    if slo == 0:
        return Interval(lo, lo)
    if slo == shi:
        raise ValueError(f"no sign change across [{lo}, {hi}]")
    eps = Fraction(1, 1 << bits) if bits >= 0 else Fraction(1 << -bits)
    while hi - lo > eps:
        mid = (lo + hi) / 2
        s = _sign_at(f, mid)
        if s == 0:
            return Interval(mid, mid)
        if s == slo:
            lo = mid
        else:
            hi = mid
    return Interval(lo, hi)


def refine(p: Poly, iv: Interval, precision_bits: int) -> Interval:
    """Bisect an isolating interval down to width ``<= 2**-precision_bits``."""
    return _refine(_squarefree(_int_poly(p)), iv, precision_bits)


def real_roots(p: Poly, precision_bits: int = 53) -> list[Interval]:
    seq = sturm_sequence(p)
    return [_refine(seq[0], iv, precision_bits) for iv in _isolate(seq)]


def largest_real_root(p: Poly, precision_bits: int = 53):
    """Refined interval around the largest real root, or ``None``."""
    if not p:
        raise ValueError("the zero polynomial has no largest root")
    seq = sturm_sequence(p)
    f = seq[0]
    if len(f) <= 1 or _count(seq, None, None) == 0:
        return None
    m = root_bound(f)
    lo, hi = -m, m
    # shrink to an interval holding only the top root
    while True:
        if _sign_at(f, hi) == 0:
            return Interval(hi, hi)
        if _count(seq, lo, hi) == 1 and _sign_at(f, lo) != 0:
            break
        mid = (lo + hi) / 2
        if _count(seq, mid, hi) >= 1:
            lo = mid
        else:
            hi = mid
    return _refine(f, Interval(lo, hi), precision_bits)


# ---------------------------------------------------------------------------
# complex roots


@dataclass
class ComplexRoot:
    re: object
    im: object
    residual: object
    real: bool = False
    multiplicity: int = 1
    converged: bool = True
    interval: Interval | None = None


@dataclass
class RootSet:
    real_roots: list = field(default_factory=list)  # (Interval, "simple" | "unknown")
    complex_roots: list = field(default_factory=list)  # ComplexRoot
    source: str = ""
    float_bits: int = 113

    def labelled_real(self) -> list:
        return [r for r in self.complex_roots if r.real]

    def max_nonreal_re(self):
        vals = [r.re for r in self.complex_roots if not r.real]
        return max(vals) if vals else None


def _circle_guesses(coeffs_hi_first, n):
    """Points on a circle whose radius is the Fujiwara-type root bound."""
    lead = abs(coeffs_hi_first[0])
    rad = mpmath.mpf(0)
    for k in range(1, n + 1):
        c = abs(coeffs_hi_first[k])
        if c:
            rad = max(rad, (c / lead) ** (mpmath.mpf(1) / k))
    rad = 2 * rad if rad else mpmath.mpf(1)
    return [rad * mpmath.expj(2 * mpmath.pi * (k + mpmath.mpf(1) / 4) / n) for k in range(n)]


def _initial_guesses(coeffs_hi_first, n):
    """Double-precision companion-matrix roots, or a circle if those misbehave."""
    big = max(abs(c) for c in coeffs_hi_first)
    scaled = np.array([float(c / big) for c in coeffs_hi_first])
    try:
        z = np.roots(scaled)
    except np.linalg.LinAlgError:
        z = np.array([])
    if len(z) != n or not np.all(np.isfinite(z)):
        return _circle_guesses(coeffs_hi_first, n)
    # distinct starting points keep the Aberth correction finite
    z = z + 1e-12 * np.exp(2j * np.pi * np.arange(n) / n) * (1 + np.abs(z))
    return [mpmath.mpc(complex(v)) for v in z]


def aberth(coeffs_hi_first, max_iter: int = 200):
    """Aberth-Ehrlich simultaneous iteration in the current mpmath precision.

    Returns ``(roots, converged_flags)``. Meant for square-free input, where
    convergence is cubic. A root is frozen once its backward error reaches
    the noise level of the working precision or its step stops shrinking.
    """
    n = len(coeffs_hi_first) - 1
    if n < 1:
        return [], []
    if n == 1:
        return [-coeffs_hi_first[1] / coeffs_hi_first[0]], [True]
    eps = mpmath.mpf(2) ** (-mpmath.mp.prec)
    floor = eps * 16 * n
    abs_c = [abs(c) for c in coeffs_hi_first]
    z = _initial_guesses(coeffs_hi_first, n)
    done = [False] * n
    last_step = [mpmath.inf] * n
    for _ in range(max_iter):
        active = False
        for i in range(n):
            if done[i]:
                continue
            zi = z[i]
            pv, dv = mpmath.polyval(coeffs_hi_first, zi, derivative=True)
            scale = mpmath.polyval(abs_c, abs(zi))
            if pv == 0 or abs(pv) <= floor * scale:
                done[i] = True
                continue
            ratio = pv / dv if dv != 0 else mpmath.mpf(1)
            s = mpmath.mpc(0)
            for j in range(n):
                if j != i:
                    s += 1 / (zi - z[j])
            w = ratio / (1 - ratio * s)
            z[i] = zi - w
            step = abs(w)
            if step <= 4 * eps * max(1, abs(z[i])) or step >= last_step[i] * 0.9 and step < mpmath.sqrt(eps):
                done[i] = True
            else:
                active = True
            last_step[i] = step
        if not active:
            break
    return z, done


def _residual(coeffs_hi_first, z):
    """Backward-error residual ``|p(z)| / sum |c_i| |z|^i``."""
    val = mpmath.polyval(coeffs_hi_first, z)
    scale = mpmath.polyval([abs(c) for c in coeffs_hi_first], abs(z))
    if scale == 0:
        return mpmath.mpf(0)
    return abs(val) / scale


def complex_roots(p: Poly, float_bits: int = 113, source: str = "") -> RootSet:
    """All ``deg p`` roots with multiplicity, real ones cross-labelled by Sturm.

    Each square-free factor from Yun's decomposition is solved separately
    and its roots repeated by multiplicity. Residuals are the backward error
    of the original polynomial at each approximation.
    """
    if not p:
        raise ValueError("the zero polynomial has no roots")
    full = _int_poly(p)
    out = RootSet(source=source, float_bits=float_bits)
    with mpmath.workprec(float_bits):
        pc = [mpmath.mpf(v) for v in reversed(full)]
        for factor, mult in _yun(full):
            if len(factor) <= 1:
                continue
            # a root at 0 is known exactly; the backward error is degenerate there
            at_zero = factor[0] == 0
            rest = factor[1:] if at_zero else factor
            fc = [mpmath.mpf(v) for v in reversed(rest)]
            zs, ok = aberth(fc)
            if at_zero:
                zs.append(mpmath.mpc(0))
                ok.append(True)
            seq = sturm_sequence(factor)
            # hints: the approximations closest to the real axis
            total = _count(seq, None, None)
            near = sorted(range(len(zs)), key=lambda k: abs(zs[k].imag))[:total]
            ivs = _isolate_hinted(seq, [zs[k].real for k in near])
            ivs = [_refine(seq[0], iv, max(64, float_bits // 2 + 8)) for iv in ivs]
            tol = mpmath.mpf(2) ** (-(float_bits // 2))
            roots = []
            for z, c in zip(zs, ok):
                res = mpmath.mpf(0) if z == 0 else _residual(pc, z)
                roots.append(ComplexRoot(z.real, z.imag, res, multiplicity=mult, converged=bool(c) and res < tol))
            # pair each Sturm root with the nearest unclaimed approximation
            free = set(range(len(roots)))
            for iv in ivs:
                x = mpmath.mpf(iv.mid.numerator) / iv.mid.denominator
                best = min(free, key=lambda k: abs(mpmath.mpc(roots[k].re, roots[k].im) - x))
                free.discard(best)
                roots[best].real = True
                roots[best].interval = iv
                out.real_roots.append((iv, "simple" if mult == 1 else "unknown"))
            for r in roots:
                out.complex_roots.extend([r] * mult)
    out.real_roots.sort(key=lambda t: t[0].lo)
    out.complex_roots.sort(key=lambda r: (float(r.re), float(r.im)))
    return out
