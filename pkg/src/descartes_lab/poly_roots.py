"""Exact real-root counting for polynomials with rational coefficients.

Two independent counting routes are provided:

* a pure-Python reference built on Yun square-free decomposition and
  content-normalised Sturm chains over the integers (``method="sturm"``);
* a fast route (``method="fast"``, the default for :func:`root_tally`) that
  uses FLINT for square-free factorisation and a certified Bernstein/Descartes
  bisection for the region counts.

Both return exact counts.  Floats are accepted as coefficients and captured
exactly as dyadic rationals.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Integral, Rational
from typing import Iterable, Sequence, Union

import flint
import numpy as np

from . import _bernstein

__all__ = [
    "ZeroPolynomial",
    "Polynomial",
    "Interval",
    "RootTally",
    "to_fraction",
    "dyadic_integers",
    "squarefree_decompose",
    "sturm_count_distinct",
    "count_with_multiplicity",
    "root_tally",
    "tally_integer_coeffs",
    "descartes_bound",
]


class ZeroPolynomial(ValueError):
    """Raised when a root-counting operation receives the zero polynomial."""


def to_fraction(x) -> Fraction:
    """Exact rational value of an int, Fraction, float, numpy scalar or "p/q" string."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (bool, np.bool_)):
        return Fraction(int(x))
    if isinstance(x, (Integral, np.integer)):
        return Fraction(int(x))
    if isinstance(x, Rational):
        return Fraction(x.numerator, x.denominator)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if not math.isfinite(x):
            raise ValueError(f"non-finite coefficient {x!r}")
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


def dyadic_integers(values) -> list[int]:
    """Integers proportional (by a positive power of two) to a float vector.

    Every finite double is m * 2^e with an integer mantissa, so the vector is
    captured exactly; the common scale is irrelevant for root counting.
    """
    arr = np.asarray(values, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise ValueError("non-finite coefficient")
    mant, expo = np.frexp(arr)
    mant = np.ldexp(mant, 53).astype(np.int64)  # exact: |mant| < 2^53
    expo = expo.astype(np.int64) - 53
    nz = mant != 0
    if not nz.any():
        return [0] * len(arr)
    base = int(expo[nz].min())
    shifts = (expo - base).tolist()
    return [int(m) << s if m else 0 for m, s in zip(mant.tolist(), shifts)]


# ---------------------------------------------------------------------------
# types


@dataclass(frozen=True)
class Polynomial:
    """Coefficients lambda_0..lambda_n as exact rationals, lowest degree first.

    The stored length n+1 is kept even when high coefficients vanish.
    """

    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        cs = tuple(to_fraction(c) for c in self.coeffs)
        if not cs:
            raise ValueError("a polynomial needs at least one coefficient slot")
        object.__setattr__(self, "coeffs", cs)

    @classmethod
    def from_coeffs(cls, coeffs: Iterable) -> "Polynomial":
        return cls(tuple(coeffs))

    @classmethod
    def from_text(cls, line: str) -> "Polynomial":
        """Parse one line of space-separated rationals ("p/q" or integers)."""
        line = line.strip("\n")
        if not line.strip():
            raise ValueError("empty polynomial line")
        parts = line.strip().split(" ")
        if any(p == "" for p in parts):
            raise ValueError("coefficients must be separated by single spaces")
        return cls(tuple(Fraction(p) for p in parts))

    def to_text(self) -> str:
        return " ".join(f"{c.numerator}/{c.denominator}" for c in self.coeffs)

    @property
    def n(self) -> int:
        return len(self.coeffs) - 1

    @property
    def degree(self) -> int:
        """Largest index with a nonzero coefficient (-1 for the zero polynomial)."""
        for i in range(len(self.coeffs) - 1, -1, -1):
            if self.coeffs[i]:
                return i
        return -1

    @property
    def is_zero(self) -> bool:
        return self.degree < 0

    def integer_coeffs(self) -> list[int]:
        """Primitive integer multiple (positive factor) of the coefficients, all n+1 slots."""
        den = 1
        for c in self.coeffs:
            den = den * c.denominator // math.gcd(den, c.denominator)
        ints = [int(c * den) for c in self.coeffs]
        g = 0
        for v in ints:
            g = math.gcd(g, v)
        if g > 1:
            ints = [v // g for v in ints]
        return ints

    def reflect(self) -> "Polynomial":
        """p(-x)."""
        return Polynomial(tuple(c if i % 2 == 0 else -c for i, c in enumerate(self.coeffs)))

    def reverse(self) -> "Polynomial":
        """x^n p(1/x) over the stored n+1 slots."""
        return Polynomial(self.coeffs[::-1])

    def __call__(self, x) -> Fraction:
        x = to_fraction(x)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __str__(self) -> str:
        return self.to_text()


_Endpoint = Union[Fraction, float]


@dataclass(frozen=True)
class Interval:
    """Half-open interval (lo, hi]; either end may be infinite."""

    lo: _Endpoint
    hi: _Endpoint

    def __post_init__(self):
        lo = self._coerce(self.lo)
        hi = self._coerce(self.hi)
        if not lo < hi:
            raise ValueError(f"empty interval ({lo}, {hi}]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @staticmethod
    def _coerce(v):
        if isinstance(v, (float, np.floating)) and math.isinf(v):
            return float(v)
        return to_fraction(v)

    def __contains__(self, x) -> bool:
        x = to_fraction(x)
        return self.lo < x <= self.hi


REAL_LINE = Interval(-math.inf, math.inf)


@dataclass(frozen=True)
class RootTally:
    """Real zeros by region, all counted with multiplicity."""

    at_zero: int
    at_one: int
    at_minus_one: int
    in_pos_unit: int
    in_neg_unit: int
    pos_outside: int
    neg_outside: int

    @property
    def n_star(self) -> int:
        return (self.at_one + self.at_minus_one + self.in_pos_unit + self.in_neg_unit
                + self.pos_outside + self.neg_outside)

    @property
    def total(self) -> int:
        return self.n_star + self.at_zero

    def as_dict(self) -> dict:
        d = {k: getattr(self, k) for k in self.__dataclass_fields__}
        d["n_star"] = self.n_star
        return d


# ---------------------------------------------------------------------------
# dense integer polynomial helpers (lowest degree first, no trailing zeros)


def _trim(a: list) -> list:
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def _deriv(a: list) -> list:
    return _trim([i * a[i] for i in range(1, len(a))])


def _primitive(a: list[int]) -> list[int]:
    """Divide by content and make the leading coefficient positive."""
    a = _trim(a)
    if not a:
        return a
    g = 0
    for v in a:
        g = math.gcd(g, v)
    if a[-1] < 0:
        g = -g
    return [v // g for v in a]


def _as_integer(a: Sequence[Fraction]) -> list[int]:
    den = 1
    for c in a:
        den = den * c.denominator // math.gcd(den, c.denominator)
    return [int(c * den) for c in a]


def _prem(a: list[int], b: list[int]) -> list[int]:
    """Pseudo-remainder of a by b using the positive multiplier |lc(b)|."""
    r = list(a)
    db = len(b) - 1
    lc = b[-1]
    mult = abs(lc)
    sgn = 1 if lc > 0 else -1
    while len(r) - 1 >= db and r:
        shift = len(r) - 1 - db
        lead = r[-1] * sgn
        r = [v * mult for v in r]
        for i, bv in enumerate(b):
            r[i + shift] -= lead * bv
        r = _trim(r)
    return r


def _gcd(a: list[int], b: list[int]) -> list[int]:
    a = _primitive(a)
    b = _primitive(b)
    while b:
        r = _prem(a, b)
        a, b = b, _primitive(r)
    return a


def _divexact(a: list[int], b: list[int]) -> list[int]:
    """Quotient a / b over Q; exact division by a primitive b stays integral."""
    r = [Fraction(v) for v in a]
    db = len(b) - 1
    q = [Fraction(0)] * (len(a) - db)
    for k in range(len(a) - 1 - db, -1, -1):
        c = r[k + db] / b[-1]
        q[k] = c
        for i, bv in enumerate(b):
            r[k + i] -= c * bv
    if any(r[:db]):
        raise ArithmeticError("inexact polynomial division")
    return _as_integer(q) if q else []


def _sub(a: list, b: list) -> list:
    out = [0] * max(len(a), len(b))
    for i, v in enumerate(a):
        out[i] += v
    for i, v in enumerate(b):
        out[i] -= v
    return _trim(out)


def _require_nonzero(p: Polynomial) -> list[int]:
    if p.is_zero:
        raise ZeroPolynomial("operation undefined for the zero polynomial")
    return _trim(p.integer_coeffs())


def _poly_from_ints(a: list[int]) -> Polynomial:
    return Polynomial(tuple(Fraction(v) for v in a))


# ---------------------------------------------------------------------------
# square-free decomposition and Sturm counting (reference route)


def _yun(a: list[int]) -> list[tuple[list[int], int]]:
    a = _primitive(a)
    if len(a) <= 1:
        return []
    da = _deriv(a)
    g = _gcd(a, da)
    b = _divexact(a, g)
    c = _divexact(da, g)
    d = _sub(c, _deriv(b))
    out = []
    i = 1
    while len(b) > 1:
        ai = _gcd(b, d) if d else _primitive(b)
        b = _divexact(b, ai)
        c = _divexact(d, ai) if d else []
        d = _sub(c, _deriv(b))
        if len(ai) > 1:
            out.append((_primitive(ai), i))
        i += 1
    return out


def squarefree_decompose(p: Polynomial) -> list[tuple[Polynomial, int]]:
    """Yun decomposition: p = const * prod(f_i ** m_i) with square-free, coprime f_i.

    Factors are primitive integer polynomials with positive leading
    coefficient; multiplicities are strictly increasing.  Constants give [].
    """
    a = _require_nonzero(p)
    return [(_poly_from_ints(f), m) for f, m in _yun(a)]


def _eval_sign(a: list[int], x) -> int:
    """Sign of a(x) for rational or infinite x."""
    if isinstance(x, float):
        lead = 1 if a[-1] > 0 else -1
        if x < 0 and (len(a) - 1) % 2 == 1:
            lead = -lead
        return lead
    num, den = x.numerator, x.denominator
    # homogeneous Horner: den^d * a(x) = sum a_i num^i den^(d-i)
    acc = 0
    dpow = 1
    for i in range(len(a) - 1, -1, -1):
        acc = acc * num + a[i] * dpow
        dpow *= den
    return (acc > 0) - (acc < 0)


def _sturm_chain(a: list[int]) -> list[list[int]]:
    chain = [_primitive(a), _primitive(_deriv(a))]
    if not chain[1]:
        return chain[:1]
    while True:
        r = _prem(chain[-2], chain[-1])
        if not r:
            break
        r = [-v for v in r]
        g = 0
        for v in r:
            g = math.gcd(g, v)
        chain.append([v // g for v in r])
    return chain


def _variations_at(chain: list[list[int]], x) -> int:
    v = 0
    prev = 0
    for s in chain:
        sg = _eval_sign(s, x)
        if sg:
            if prev and sg != prev:
                v += 1
            prev = sg
    return v


def _squarefree_part(a: list[int]) -> list[int]:
    a = _primitive(a)
    if len(a) <= 1:
        return a
    g = _gcd(a, _deriv(a))
    return _primitive(_divexact(a, g)) if len(g) > 1 else a


def sturm_count_distinct(p: Polynomial, interval: Interval) -> int:
    """Number of distinct real roots of p in (lo, hi], by an exact Sturm chain.

    A non-square-free input is first reduced to its square-free part.
    """
    a = _squarefree_part(_require_nonzero(p))
    if len(a) <= 1:
        return 0
    chain = _sturm_chain(a)
    return _variations_at(chain, interval.lo) - _variations_at(chain, interval.hi)


def _point_multiplicity(a: list[int], x: Fraction) -> int:
    if x == 0:
        k = 0
        while k < len(a) and a[k] == 0:
            k += 1
        return k
    k = 0
    cur = a
    while len(cur) > 1:
        q = [Fraction(v) for v in cur]
        # synthetic division by (x - root)
        out = [Fraction(0)] * (len(q) - 1)
        carry = Fraction(0)
        for i in range(len(q) - 1, 0, -1):
            carry = carry * x + q[i]
            out[i - 1] = carry
        rem = carry * x + q[0]
        if rem:
            break
        cur = _primitive(_as_integer(out))
        k += 1
    return k


def count_with_multiplicity(p: Polynomial, where) -> int:
    """Roots of p counted with multiplicity, in an :class:`Interval` or at a point."""
    a = _require_nonzero(p)
    if isinstance(where, Interval):
        return sum(m * sturm_count_distinct(_poly_from_ints(f), where) for f, m in _yun(a))
    return _point_multiplicity(a, to_fraction(where))


# ---------------------------------------------------------------------------
# region tally


_X = flint.fmpz_poly([0, 1])
_XM1 = flint.fmpz_poly([-1, 1])
_XP1 = flint.fmpz_poly([1, 1])


def _tally_sturm(a: list[int]) -> RootTally:
    at_zero = _point_multiplicity(a, Fraction(0))
    at_one = _point_multiplicity(a, Fraction(1))
    at_m1 = _point_multiplicity(a, Fraction(-1))
    regions = [Interval(0, 1), Interval(-1, 0), Interval(1, math.inf), Interval(-math.inf, -1)]
    counts = [0, 0, 0, 0]
    for f, m in _yun(a):
        chain = _sturm_chain(f)
        for k, iv in enumerate(regions):
            c = _variations_at(chain, iv.lo) - _variations_at(chain, iv.hi)
            # drop the closed right endpoint where it is a root (1 or 0 or -1)
            if not isinstance(iv.hi, float) and _eval_sign(f, iv.hi) == 0:
                c -= 1
            counts[k] += m * c
    return RootTally(at_zero, at_one, at_m1, *counts)


def tally_integer_coeffs(coeffs: Sequence[int], stats: dict | None = None) -> RootTally:
    """Fast exact tally for integer coefficients (lowest degree first)."""
    a = _trim([int(c) for c in coeffs])
    if not a:
        raise ZeroPolynomial("operation undefined for the zero polynomial")
    at_zero = 0
    while a[at_zero] == 0:
        at_zero += 1
    q = flint.fmpz_poly(a[at_zero:])
    at_one = 0
    while q.degree() > 0 and q(1) == 0:
        q = q // _XM1
        at_one += 1
    at_m1 = 0
    while q.degree() > 0 and q(-1) == 0:
        q = q // _XP1
        at_m1 += 1
    counts = [0, 0, 0, 0]
    if q.degree() > 0:
        _, factors = q.factor_squarefree()
        for f, m in factors:
            fc = [int(v) for v in f.coeffs()]
            r = _bernstein.region_counts(fc, stats)
            for k in range(4):
                counts[k] += m * r[k]
    return RootTally(at_zero, at_one, at_m1, *counts)


def root_tally(p: Polynomial, method: str = "fast") -> RootTally:
    """Region decomposition of the real zeros of p, with multiplicity.

    ``method`` is "fast" (FLINT + certified Bernstein bisection) or
    "sturm" (pure-Python Yun + Sturm reference).
    """
    a = _require_nonzero(p)
    if method == "fast":
        return tally_integer_coeffs(a)
    if method == "sturm":
        return _tally_sturm(a)
    raise ValueError(f"unknown method {method!r}")


def descartes_bound(p: Polynomial) -> int:
    """Sign changes of the coefficient sequence (bounds the positive roots)."""
    a = _require_nonzero(p)
    v = 0
    prev = 0
    for c in a:
        if c:
            s = 1 if c > 0 else -1
            if prev and s != prev:
                v += 1
            prev = s
    return v
