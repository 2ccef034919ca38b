"""Exact scalars, multi-indices and the closed-form moment constants.

Rationals are :class:`fractions.Fraction`.  :class:`GaussianRational` adds an
imaginary part; there is deliberately no polar form, only conjugation and
modulus squared, so every value stays in Q(i).

All measures are normalized: ``dV(B_N) = 1`` and ``dsigma(S_N) = 1``.
"""
from __future__ import annotations

import itertools
import re
from fractions import Fraction
from functools import lru_cache
from math import factorial, gcd
from numbers import Rational as _RationalABC
from typing import Iterable, Iterator, Sequence

__all__ = [
    "Fraction",
    "GaussianRational",
    "I",
    "ONE",
    "ZERO",
    "to_gaussian",
    "format_scalar",
    "parse_scalar",
    "multinomial",
    "monomial_norm_sq",
    "sphere_moment",
    "multi_indices",
    "multi_indices_of_degree",
    "grlex_key",
    "check_index",
    "unit_index",
    "rational_sqrt",
]

MultiIndex = tuple  # tuple[int, ...]


class GaussianRational:
    """An element ``re + im*i`` of Q(i) with exact rational parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = re if type(re) is Fraction else Fraction(re)
        self.im = im if type(im) is Fraction else Fraction(im)

    @classmethod
    def _raw(cls, re: Fraction, im: Fraction) -> "GaussianRational":
        obj = object.__new__(cls)
        obj.re = re
        obj.im = im
        return obj

    # -- conversions ---------------------------------------------------
    def __repr__(self) -> str:
        return f"GaussianRational({format_scalar(self)!r})"

    def __str__(self) -> str:
        return format_scalar(self)

    def is_real(self) -> bool:
        return not self.im

    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.im)

    def __hash__(self) -> int:
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __eq__(self, other) -> bool:
        if type(other) is GaussianRational:
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, _RationalABC)):
            return not self.im and self.re == other
        return NotImplemented

    # -- field operations ----------------------------------------------
    def __neg__(self) -> "GaussianRational":
        return GaussianRational._raw(-self.re, -self.im)

    def __pos__(self) -> "GaussianRational":
        return self

    def __add__(self, other) -> "GaussianRational":
        if type(other) is not GaussianRational:
            other = _coerce(other)
            if other is None:
                return NotImplemented
        return GaussianRational._raw(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other) -> "GaussianRational":
        if type(other) is not GaussianRational:
            other = _coerce(other)
            if other is None:
                return NotImplemented
        return GaussianRational._raw(self.re - other.re, self.im - other.im)

    def __rsub__(self, other) -> "GaussianRational":
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return other - self

    def __mul__(self, other) -> "GaussianRational":
        if type(other) is not GaussianRational:
            if isinstance(other, (int, Fraction)):
                return GaussianRational._raw(self.re * other, self.im * other)
            other = _coerce(other)
            if other is None:
                return NotImplemented
        a, b, c, d = self.re, self.im, other.re, other.im
        if not b:
            if not d:
                return GaussianRational._raw(a * c, d)
            return GaussianRational._raw(a * c, a * d)
        if not d:
            return GaussianRational._raw(a * c, b * c)
        return GaussianRational._raw(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def inverse(self) -> "GaussianRational":
        n = self.re * self.re + self.im * self.im
        if not n:
            raise ZeroDivisionError("GaussianRational division by zero")
        return GaussianRational._raw(self.re / n, -self.im / n)

    def __truediv__(self, other) -> "GaussianRational":
        if type(other) is not GaussianRational:
            if isinstance(other, (int, Fraction)):
                if not other:
                    raise ZeroDivisionError("GaussianRational division by zero")
                return GaussianRational._raw(self.re / other, self.im / other)
            other = _coerce(other)
            if other is None:
                return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other) -> "GaussianRational":
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, e: int) -> "GaussianRational":
        if not isinstance(e, int):
            return NotImplemented
        if e < 0:
            return self.inverse() ** (-e)
        result = ONE
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def conjugate(self) -> "GaussianRational":
        return GaussianRational._raw(self.re, -self.im)

    def abs2(self) -> Fraction:
        """Modulus squared ``re^2 + im^2``."""
        return self.re * self.re + self.im * self.im


def _coerce(x) -> GaussianRational | None:
    if type(x) is GaussianRational:
        return x
    if isinstance(x, (int, Fraction)):
        return GaussianRational._raw(Fraction(x), Fraction(0))
    if isinstance(x, _RationalABC):
        return GaussianRational(Fraction(x.numerator, x.denominator))
    return None


def to_gaussian(x) -> GaussianRational:
    """Coerce ints, Fractions, canonical strings and GaussianRationals."""
    if isinstance(x, str):
        return parse_scalar(x)
    g = _coerce(x)
    if g is None:
        raise TypeError(f"cannot convert {type(x).__name__} to GaussianRational")
    return g


ZERO = GaussianRational(0)
ONE = GaussianRational(1)
I = GaussianRational(0, 1)


# -- canonical text ------------------------------------------------------

def _frac_text(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def format_scalar(x) -> str:
    """Canonical text form: ``p/q`` for reals, ``p/q+r/s*i`` otherwise."""
    x = to_gaussian(x)
    if not x.im:
        return _frac_text(x.re)
    sign = "-" if x.im < 0 else "+"
    return f"{_frac_text(x.re)}{sign}{_frac_text(abs(x.im))}*i"


_RAT = r"[+-]?\d+(?:/\d+)?"
_SCALAR_RE = re.compile(
    rf"^\s*(?:(?P<re>{_RAT})(?:\s*(?P<sign>[+-])\s*(?P<im>\d+(?:/\d+)?)\s*\*\s*i)?"
    rf"|(?P<pure>{_RAT})\s*\*\s*i|(?P<unit>[+-]?)i)\s*$"
)


def parse_scalar(text: str) -> GaussianRational:
    """Parse the canonical scalar forms (integers are accepted too)."""
    m = _SCALAR_RE.match(text)
    if not m:
        raise ValueError(f"not a scalar in canonical form: {text!r}")
    if m.group("unit") is not None and m.group("re") is None and m.group("pure") is None:
        return GaussianRational(0, -1 if m.group("unit") == "-" else 1)
    if m.group("pure") is not None:
        return GaussianRational(0, Fraction(m.group("pure")))
    re_part = Fraction(m.group("re"))
    im_part = Fraction(0)
    if m.group("im") is not None:
        im_part = Fraction(m.group("im"))
        if m.group("sign") == "-":
            im_part = -im_part
    return GaussianRational(re_part, im_part)


def rational_sqrt(q: Fraction) -> Fraction | None:
    """Exact square root of a nonnegative rational, or None if irrational."""
    from math import isqrt

    q = Fraction(q)
    if q < 0:
        return None
    n, d = q.numerator, q.denominator
    rn, rd = isqrt(n), isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


# -- multi-indices -------------------------------------------------------

def check_index(alpha: Sequence[int], n: int | None = None) -> tuple:
    alpha = tuple(int(a) for a in alpha)
    if any(a < 0 for a in alpha):
        raise ValueError(f"multi-index has a negative component: {alpha}")
    if n is not None and len(alpha) != n:
        raise ValueError(f"multi-index {alpha} does not have length {n}")
    return alpha


def unit_index(j: int, n: int) -> tuple:
    """The multi-index e_j (0-based j) of length n."""
    return tuple(1 if k == j else 0 for k in range(n))


def grlex_key(alpha: Sequence[int]) -> tuple:
    """Graded-lexicographic sort key: total degree first, then z_1 before z_2."""
    return (sum(alpha), tuple(-a for a in alpha))


@lru_cache(maxsize=None)
def multi_indices_of_degree(n: int, degree: int) -> tuple:
    """All multi-indices of length n and total degree exactly ``degree``."""
    if n == 0:
        return ((),) if degree == 0 else ()
    out = []
    for c in itertools.combinations(range(degree + n - 1), n - 1):
        parts = []
        prev = -1
        for cut in c:
            parts.append(cut - prev - 1)
            prev = cut
        parts.append(degree + n - 1 - prev - 1)
        out.append(tuple(parts))
    out.sort(key=grlex_key)
    return tuple(out)


@lru_cache(maxsize=None)
def multi_indices(n: int, max_degree: int) -> tuple:
    """All multi-indices of length n with total degree <= max_degree, graded-lex."""
    out = []
    for d in range(max_degree + 1):
        out.extend(multi_indices_of_degree(n, d))
    return tuple(out)


def _fact_prod(alpha: Iterable[int]) -> int:
    p = 1
    for a in alpha:
        p *= factorial(a)
    return p


@lru_cache(maxsize=4096)
def multinomial(k: tuple) -> int:
    """``|k|! / (k_1! ... k_N!)``."""
    k = check_index(k)
    return factorial(sum(k)) // _fact_prod(k)


@lru_cache(maxsize=8192)
def monomial_norm_sq(alpha: tuple, n: int) -> Fraction:
    """``||z^alpha||^2`` in L^2(B_N, dV) = ``N! alpha! / (N + |alpha|)!``."""
    alpha = check_index(alpha, n)
    return Fraction(factorial(n) * _fact_prod(alpha), factorial(n + sum(alpha)))


@lru_cache(maxsize=8192)
def sphere_moment(mu: tuple, n: int) -> Fraction:
    """``int_S |zeta^mu|^2 dsigma = (N-1)! mu! / (N - 1 + |mu|)!``."""
    if n < 1:
        raise ValueError("dimension must be >= 1")
    mu = check_index(mu, n)
    return Fraction(factorial(n - 1) * _fact_prod(mu), factorial(n - 1 + sum(mu)))


def gaussian_lcm_denominator(values: Iterable[GaussianRational]) -> int:
    """Least common denominator of the real and imaginary parts."""
    d = 1
    for v in values:
        for q in (v.re, v.im):
            qd = q.denominator
            if qd != 1:
                d = d * qd // gcd(d, qd)
    return d


def iter_unit_vectors(n: int) -> Iterator[tuple]:
    for j in range(n):
        yield unit_index(j, n)
