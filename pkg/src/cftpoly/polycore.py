"""Exact rationals, dense univariate polynomials over Q, and the divisor sum."""

from __future__ import annotations

import json
import threading
from fractions import Fraction
from math import comb, gcd, lcm

from . import kernels

# Python's Fraction already keeps den > 0 and gcd(num, den) == 1.
Rational = Fraction


def as_rational(value) -> Fraction:
    """Coerce int, Fraction, or a "p/q" / decimal string to an exact Fraction.

    Decimal strings convert exactly: ``"2.0554"`` gives ``10277/5000``.
    Binary floats are refused so nothing inexact leaks into a scan.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("bool is not a rational")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if "/" in text:
            num, den = text.split("/", 1)
            return Fraction(int(num), int(den))
        return Fraction(text)
    raise TypeError(f"cannot convert {type(value).__name__} to an exact rational")


class Poly:
    """Immutable dense polynomial; ``coeffs[i]`` is the coefficient of x**i.

    The zero polynomial has no stored coefficients and degree -1.
    """

    __slots__ = ("coeffs", "_intform")

    def __init__(self, coeffs=()):
        cs = [as_rational(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)
        self._intform = None

    @classmethod
    def _raw(cls, coeffs):
        # coeffs already a stripped tuple of Fractions
        p = cls.__new__(cls)
        p.coeffs = coeffs
        p._intform = None
        return p

    @classmethod
    def from_ints(cls, ints, den=1):
        """Build ``sum(ints[i] x^i) / den`` without per-coefficient coercion."""
        cs = [Fraction(v, den) for v in ints]
        while cs and cs[-1] == 0:
            cs.pop()
        return cls._raw(tuple(cs))

    @classmethod
    def x(cls) -> Poly:
        return cls._raw((Fraction(0), Fraction(1)))

    @classmethod
    def const(cls, c) -> Poly:
        return cls((c,))

    @classmethod
    def from_roots(cls, roots, lead=1) -> Poly:
        p = cls.const(lead)
        for r in roots:
            p = p * cls((-as_rational(r), 1))
        return p

    # -- basic queries -------------------------------------------------
    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lead(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, i):
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return Fraction(0)

    def int_form(self):
        """Return ``(D, ints)`` with ``self == sum(ints[i] x^i) / D`` and D > 0 minimal."""
        if self._intform is None:
            d = 1
            for c in self.coeffs:
                d = lcm(d, c.denominator)
            self._intform = (d, [c.numerator * (d // c.denominator) for c in self.coeffs])
        return self._intform

    def content_primitive(self):
        """Split into ``(content, primitive)`` with an integer primitive part.

        The primitive part has coprime integer coefficients and a positive
        leading coefficient; ``self == content * primitive``.
        """
        if not self.coeffs:
            return Fraction(0), Poly()
        d, ints = self.int_form()
        g = 0
        for v in ints:
            g = gcd(g, v)
        if ints[-1] < 0:
            g = -g
        return Fraction(g, d), Poly.from_ints([v // g for v in ints])

    # -- arithmetic ----------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, Poly):
            other = Poly.const(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        while out and out[-1] == 0:
            out.pop()
        return Poly._raw(tuple(out))

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw(tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        if not isinstance(other, Poly):
            other = Poly.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Poly):
            c = as_rational(other)
            if c == 0:
                return Poly()
            return Poly._raw(tuple(v * c for v in self.coeffs))
        if not self.coeffs or not other.coeffs:
            return Poly()
        da, ia = self.int_form()
        db, ib = other.int_form()
        return Poly.from_ints(kernels.int_convolve(ia, ib), da * db)

    __rmul__ = __mul__

    def __truediv__(self, c):
        c = as_rational(c)
        return Poly._raw(tuple(v / c for v in self.coeffs))

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        out, base = Poly.const(1), self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __divmod__(self, other: Poly):
        if not other.coeffs:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        lead = other.coeffs[-1]
        if len(rem) <= dq:
            return Poly(), self
        quot = [Fraction(0)] * (len(rem) - dq)
        for i in range(len(rem) - 1, dq - 1, -1):
            c = rem[i] / lead
            quot[i - dq] = c
            if c:
                for j, oc in enumerate(other.coeffs):
                    rem[i - dq + j] -= c * oc
        return Poly(quot), Poly(rem[:dq])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == Poly.const(other).coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    # -- calculus and evaluation ---------------------------------------
    def derivative(self) -> Poly:
        return Poly._raw(tuple(i * c for i, c in enumerate(self.coeffs))[1:])

    def __call__(self, x) -> Fraction:
        return self.eval(x)

    def eval(self, x) -> Fraction:
        """Exact value at a rational point."""
        if not self.coeffs:
            return Fraction(0)
        x = as_rational(x)
        d, ints = self.int_form()
        p, q = x.numerator, x.denominator
        # homogenised Horner: sum ints[i] p^i q^(deg-i)
        acc = 0
        qpow = 1
        for v in reversed(ints):
            acc = acc * p + v * qpow
            qpow *= q
        return Fraction(acc, d * (qpow // q))

    def sign_at(self, x) -> int:
        """Sign of the value at ``x``; cheaper than ``eval`` (no gcd)."""
        if not self.coeffs:
            return 0
        x = as_rational(x)
        _, ints = self.int_form()
        p, q = x.numerator, x.denominator
        acc = 0
        qpow = 1
        for v in reversed(ints):
            acc = acc * p + v * qpow
            qpow *= q
        return (acc > 0) - (acc < 0)

    def shift(self, c) -> Poly:
        """Return q with ``q(t) = self(t + c)``."""
        c = as_rational(c)
        n = len(self.coeffs)
        if c == 0 or n <= 1:
            return self
        # q_j = sum_{i>=j} a_i C(i, j) c^(i-j)
        cpow = [Fraction(1)]
        for _ in range(n):
            cpow.append(cpow[-1] * c)
        out = []
        for j in range(n):
            s = Fraction(0)
            for i in range(j, n):
                a = self.coeffs[i]
                if a:
                    s += a * comb(i, j) * cpow[i - j]
            out.append(s)
        return Poly(out)

    def compose_linear(self, scale, offset=0) -> Poly:
        """Return ``self(scale*t + offset)``."""
        scale = as_rational(scale)
        q = self.shift(offset)
        return Poly([c * scale**i for i, c in enumerate(q.coeffs)])

    def nonnegative_coefficients(self) -> bool:
        return all(c >= 0 for c in self.coeffs)

    # -- serialisation -------------------------------------------------
    def to_dict(self) -> dict:
        return {
            "degree": self.degree,
            "coeffs": [{"num": str(c.numerator), "den": str(c.denominator)} for c in self.coeffs],
        }

    @classmethod
    def from_dict(cls, data: dict) -> Poly:
        coeffs = [Fraction(int(c["num"]), int(c["den"])) for c in data["coeffs"]]
        p = cls(coeffs)
        if p.degree != int(data.get("degree", p.degree)):
            raise ValueError("degree field disagrees with coefficients")
        return p

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> Poly:
        return cls.from_dict(json.loads(text))

    # -- display -------------------------------------------------------
    def __repr__(self):
        return f"Poly({[str(c) for c in self.coeffs]})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if i == 0:
                body = str(a)
            else:
                mono = "x" if i == 1 else f"x^{i}"
                body = mono if a == 1 else f"{a}*{mono}"
            parts.append((sign, body))
        first_sign, first = parts[0]
        text = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text


def poly_add(p: Poly, q: Poly) -> Poly:
    return p + q


def poly_mul(p: Poly, q: Poly) -> Poly:
    return p * q


def poly_derivative(p: Poly) -> Poly:
    return p.derivative()


def poly_eval(p: Poly, x) -> Fraction:
    return p.eval(x)


def poly_shift(p: Poly, c) -> Poly:
    return p.shift(c)


# ---------------------------------------------------------------------------
# divisor sums

_sigma_lock = threading.Lock()
_sigma_cache: list[int] = [0, 1]


def sigma_table(n: int) -> list[int]:
    """Return a list ``s`` with ``s[k] = sigma(k)`` for ``0 < k <= n`` (``s[0] = 0``).

    The shared table only ever grows; a grown copy replaces the old list in a
    single assignment, so concurrent readers never see a partial table.
    """
    global _sigma_cache
    table = _sigma_cache
    if len(table) > n:
        return table
    with _sigma_lock:
        table = _sigma_cache
        if len(table) > n:
            return table
        size = max(n + 1, 2 * len(table))
        new = [0] * size
        for d in range(1, size):
            for m in range(d, size, d):
                new[m] += d
        _sigma_cache = new
        return new


def _sigma_trial(k: int) -> int:
    total = 0
    d = 1
    while d * d <= k:
        if k % d == 0:
            total += d
            if d * d != k:
                total += k // d
        d += 1
    return total


def sigma(k: int) -> int:
    """Sum of the positive divisors of ``k``."""
    if k < 1:
        raise ValueError(f"sigma is defined for k >= 1, got {k}")
    table = _sigma_cache
    if k < len(table):
        return table[k]
    if k <= 1 << 16:
        return sigma_table(k)[k]
    return _sigma_trial(k)
