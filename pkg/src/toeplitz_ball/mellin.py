"""Symbols with a prescribed polynomial Berezin transform, built through Mellin transforms.

Orientation: targets are written ``zbar^alpha z^beta (1-|z|^2)^l`` (alpha is the
zbar exponent), and the constructed symbol has the form
``u = zbar^alpha z^beta phi(|z|^2)`` where the Mellin transform of ``phi`` is a
ratio of Gamma functions with integer argument gaps, hence a rational function
of ``zeta``.  Partial fractions then invert it term by term::

    c / (zeta - r)    <->  c t^(-r)
    c / (zeta - r)^2  <->  -c t^(-r) log t
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Sequence

from .arith import grlex_key
from .bergman import QuasiHomSymbol, RadialProfile, bipoly_to_symbol
from .errors import (
    DegreeTooLarge,
    ImproperFunction,
    NotRepresentable,
    PreconditionViolation,
    UnsupportedPoles,
)
from .symbolic import BiPolynomial, UnivariatePoly


# -- rational functions of zeta ----------------------------------------------

class RationalFunctionQ:
    """``num / den`` over Q with ``den`` monic and coprime to ``num``."""

    __slots__ = ("num", "den")

    def __init__(self, num: UnivariatePoly, den: UnivariatePoly | None = None):
        den = den if den is not None else UnivariatePoly.constant(1)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        g = num.gcd(den) if not num.is_zero() else den.monic()
        if g.degree() > 0:
            num = num.divmod(g)[0]
            den = den.divmod(g)[0]
        if num.is_zero():
            den = UnivariatePoly.constant(1)
        lead = den.lead()
        self.num = num * (1 / lead)
        self.den = den * (1 / lead)

    def __call__(self, x):
        d = self.den(x)
        if not d:
            raise ZeroDivisionError(f"pole at {x}")
        return self.num(x) / d

    def __eq__(self, other) -> bool:
        if not isinstance(other, RationalFunctionQ):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __add__(self, other: "RationalFunctionQ") -> "RationalFunctionQ":
        return RationalFunctionQ(self.num * other.den + other.num * self.den, self.den * other.den)

    def __mul__(self, other: "RationalFunctionQ") -> "RationalFunctionQ":
        return RationalFunctionQ(self.num * other.num, self.den * other.den)

    def is_proper(self) -> bool:
        return self.num.is_zero() or self.num.degree() < self.den.degree()

    def __repr__(self) -> str:
        return f"RationalFunctionQ(({self.num}) / ({self.den}))"

    def __str__(self) -> str:
        if self.den.degree() == 0:
            return f"{self.num}".replace("t", "zeta")
        return f"({self.num}) / ({self.den})".replace("t", "zeta")


def _rising(lo: int, hi: int) -> UnivariatePoly:
    """``prod_{i=lo}^{hi-1} (zeta + i)``, i.e. Gamma(zeta+hi)/Gamma(zeta+lo)."""
    out = UnivariatePoly.constant(1)
    for i in range(lo, hi):
        out = out * UnivariatePoly([i, 1])
    return out


def gamma_ratio(p: int, q: int) -> RationalFunctionQ:
    """``Gamma(zeta + p) / Gamma(zeta + q)`` for integers p, q."""
    if p >= q:
        return RationalFunctionQ(_rising(q, p))
    return RationalFunctionQ(UnivariatePoly.constant(1), _rising(p, q))


def _check_indices(alpha, beta, ell: int, n: int) -> tuple[int, int]:
    a = sum(alpha) if not isinstance(alpha, int) else alpha
    b = sum(beta) if not isinstance(beta, int) else beta
    if ell < 0:
        raise PreconditionViolation("l must be >= 0")
    if b > a:
        raise PreconditionViolation(f"|beta| = {b} exceeds |alpha| = {a}; conjugate first")
    if a + b + 2 * ell > 2 * n + 1:
        raise PreconditionViolation(f"|alpha|+|beta|+2l = {a + b + 2 * ell} exceeds 2N+1 = {2 * n + 1}")
    return a, b


def phi_hat(alpha, beta, ell: int, n: int) -> RationalFunctionQ:
    """Mellin transform of the radial factor.

    ``N!/(N-l)! * Gamma(zeta) Gamma(zeta+1-|alpha|-|beta|-l) / (Gamma(zeta+1-|alpha|) Gamma(zeta+1-|beta|))``
    """
    a, b = _check_indices(alpha, beta, ell, n)
    c = Fraction(factorial(n), factorial(n - ell))
    rf = gamma_ratio(0, 1 - a) * gamma_ratio(1 - a - b - ell, 1 - b)
    return rf * RationalFunctionQ(UnivariatePoly.constant(c))


# -- partial fractions -------------------------------------------------------

@dataclass
class PartialFractionForm:
    """``poly + sum coeff / (zeta - pole)^order`` with order 1 or 2."""

    poly: UnivariatePoly
    terms: list  # (pole, order, coeff)

    def __call__(self, x):
        x = Fraction(x)
        total = self.poly(x)
        for pole, order, c in self.terms:
            total += c / (x - pole) ** order
        return total

    def to_rational(self) -> RationalFunctionQ:
        out = RationalFunctionQ(self.poly)
        for pole, order, c in self.terms:
            out = out + RationalFunctionQ(UnivariatePoly.constant(c), UnivariatePoly.linear(pole) ** order)
        return out

    def __str__(self) -> str:
        parts = [str(self.poly)] if not self.poly.is_zero() else []
        for pole, order, c in self.terms:
            lin = "zeta" if pole == 0 else (f"zeta - {pole}" if pole > 0 else f"zeta + {-pole}")
            parts.append(f"{c}/({lin})" + ("^2" if order == 2 else ""))
        return " + ".join(parts) if parts else "0"


def _integer_roots(den: UnivariatePoly) -> tuple[dict, UnivariatePoly]:
    """Integer roots of ``den`` with multiplicities, plus the unfactored remainder."""
    roots: dict[int, int] = {}
    rest = den
    while rest.degree() > 0:
        # clear denominators for the rational root test
        from math import lcm

        scale = lcm(*(c.denominator for c in rest.coeffs))
        ints = [int(c * scale) for c in rest.coeffs]
        k = next(i for i, c in enumerate(ints) if c)
        if k:
            roots[0] = roots.get(0, 0) + k
            rest = UnivariatePoly(rest.coeffs[k:])
            continue
        c0 = abs(ints[0])
        found = None
        for d in range(1, int(c0 ** 0.5) + 2):
            if c0 % d:
                continue
            for cand in (d, -d, c0 // d, -(c0 // d)):
                if not rest(Fraction(cand)):
                    found = cand
                    break
            if found is not None:
                break
        if found is None:
            break
        roots[found] = roots.get(found, 0) + 1
        rest = rest.divmod(UnivariatePoly.linear(found))[0]
    return roots, rest


def partial_fractions(rf: RationalFunctionQ) -> PartialFractionForm:
    """Exact decomposition when every pole is an integer of order <= 2."""
    poly, rem = rf.num.divmod(rf.den)
    roots, rest = _integer_roots(rf.den)
    if rest.degree() > 0:
        raise UnsupportedPoles(f"denominator factor {rest} has no integer roots")
    terms = []
    for r in sorted(roots):
        m = roots[r]
        if m > 2:
            raise UnsupportedPoles(f"pole at zeta = {r} has order {m} > 2")
        # g = rem / (den / (zeta - r)^m); leading coefficient g(r), next g'(r)
        other = rf.den.divmod(UnivariatePoly.linear(r) ** m)[0]
        g_num, g_den = rem, other
        rr = Fraction(r)
        top = g_num(rr) / g_den(rr)
        terms.append((r, m, top))
        if m == 2:
            d = (g_num.derivative() * g_den - g_num * g_den.derivative())(rr) / g_den(rr) ** 2
            if d:
                terms.append((r, 1, d))
    terms = [t for t in terms if t[2]]
    terms.sort(key=lambda t: (t[0], -t[1]))
    out = PartialFractionForm(poly, terms)
    if out.to_rational() != rf:
        raise ArithmeticError("partial fraction reconstruction failed")
    return out


def invert_mellin(pf: PartialFractionForm) -> RadialProfile:
    if not pf.poly.is_zero():
        raise ImproperFunction(f"polynomial part {pf.poly} has no Mellin preimage")
    power: dict[int, Fraction] = {}
    log: dict[int, Fraction] = {}
    for pole, order, c in pf.terms:
        k = -pole
        if order == 1:
            power[k] = power.get(k, Fraction(0)) + c
        else:
            log[k] = log.get(k, Fraction(0)) - c
    return RadialProfile(power, log)


# -- construction -------------------------------------------------------------

def _target_term(alpha: tuple, beta: tuple, rho: RadialProfile) -> tuple:
    # zbar^alpha z^beta rho  ->  symbol term with z exponent beta, zbar exponent alpha
    return (tuple(beta), tuple(alpha), rho)


def base_symbol(alpha: Sequence[int], beta: Sequence[int], ell: int, n: int) -> QuasiHomSymbol:
    """``zbar^alpha z^beta phi(|z|^2)`` with phi from the Mellin construction."""
    alpha, beta = tuple(alpha), tuple(beta)
    rho = invert_mellin(partial_fractions(phi_hat(alpha, beta, ell, n)))
    return QuasiHomSymbol(n, [_target_term(alpha, beta, rho)]).canonical()


@lru_cache(maxsize=None)
def _derivative_terms(alpha: tuple, beta: tuple, ell: int, n: int) -> tuple:
    """Structured form of the Berezin transform of :func:`base_symbol`.

    Returns terms ``(c, A, B, k)`` meaning ``c zbar^A z^B (1-|z|^2)^k``.
    Starts from ``zbar^alpha h^-M`` and applies ``dbar^beta`` using
    ``dbar_j h^-e = e z_j h^(-e-1)``.
    """
    _check_indices(alpha, beta, ell, n)
    m = n + 1 - sum(beta) - ell
    terms: dict = {(alpha, (0,) * n, m): Fraction(1)}
    for j, bj in enumerate(beta):
        for _ in range(bj):
            nxt: dict = {}
            for (A, B, e), c in terms.items():
                if A[j]:
                    key = (A[:j] + (A[j] - 1,) + A[j + 1:], B, e)
                    nxt[key] = nxt.get(key, 0) + c * A[j]
                key = (A, B[:j] + (B[j] + 1,) + B[j + 1:], e + 1)
                nxt[key] = nxt.get(key, 0) + c * e
            terms = {k: v for k, v in nxt.items() if v}
    pref = Fraction(factorial(m - 1), factorial(m + sum(beta) - 1))
    out = []
    for (A, B, e), c in sorted(terms.items(), key=lambda kv: (-sum(kv[0][1]), grlex_key(kv[0][0]), grlex_key(kv[0][1]))):
        out.append((c * pref, A, B, n + 1 - e))
    return tuple(out)


def _term_bipoly(c, A: tuple, B: tuple, k: int) -> BiPolynomial:
    n = len(A)
    return BiPolynomial.monomial(B, A, c) * BiPolynomial.defect(n) ** k


def derivative_formula_polynomial(alpha: Sequence[int], beta: Sequence[int], ell: int, n: int) -> BiPolynomial:
    """B(base_symbol) as a polynomial: ``zbar^alpha z^beta h^l`` plus corrections of lower z-degree."""
    out = BiPolynomial.zero(n)
    for c, A, B, k in _derivative_terms(tuple(alpha), tuple(beta), ell, n):
        if k < 0:
            raise ArithmeticError("negative power of (1-|z|^2) in the derivative formula")
        out = out + _term_bipoly(c, A, B, k)
    return out


def target_polynomial(alpha: Sequence[int], beta: Sequence[int], ell: int, n: int) -> BiPolynomial:
    """``zbar^alpha z^beta (1-|z|^2)^l``."""
    return BiPolynomial.monomial(tuple(beta), tuple(alpha)) * BiPolynomial.defect(n) ** ell


def preimage_monomial(alpha: Sequence[int], beta: Sequence[int], ell: int, n: int) -> QuasiHomSymbol:
    """A symbol u with ``B(u) = zbar^alpha z^beta (1-|z|^2)^l``."""
    alpha, beta = tuple(alpha), tuple(beta)
    if len(alpha) != n or len(beta) != n:
        raise ValueError("multi-indices must have length N")
    total = sum(alpha) + sum(beta) + 2 * ell
    if total > 2 * n + 1:
        raise DegreeTooLarge(f"|alpha|+|beta|+2l = {total} > 2N+1 = {2 * n + 1}")
    return _preimage(alpha, beta, ell, n)


@lru_cache(maxsize=None)
def _preimage(alpha: tuple, beta: tuple, ell: int, n: int) -> QuasiHomSymbol:
    if sum(beta) > sum(alpha):
        return _preimage(beta, alpha, ell, n).conjugate()
    u = base_symbol(alpha, beta, ell, n)
    for c, A, B, k in _derivative_terms(alpha, beta, ell, n):
        if A == alpha and B == beta and k == ell:
            if c != 1:
                raise ArithmeticError("leading coefficient of the derivative formula is not 1")
            continue
        u = u - _preimage(A, B, k, n).scale(c)
    return u.canonical()


@dataclass
class RangeResult:
    """Either a symbol u with B(u) = f, or a violation of the degree criterion."""

    witness: QuasiHomSymbol | None
    violation: dict | None

    @property
    def ok(self) -> bool:
        return self.witness is not None


def _mixed_derivative(f: BiPolynomial, j: int, l: int) -> BiPolynomial:
    def term(a, b, c):
        if a[j] and b[l]:
            a2 = a[:j] + (a[j] - 1,) + a[j + 1:]
            b2 = b[:l] + (b[l] - 1,) + b[l + 1:]
            return [((a2, b2), c * (a[j] * b[l]))]
        return []
    return f.map_terms(term)


def range_decision(f: BiPolynomial, n: int | None = None) -> RangeResult:
    """Decide whether the polynomial f is a Berezin transform of an integrable symbol.

    Criterion: every ``d_{z_j} dbar_{z_l} f`` has total degree <= 2N-1.
    """
    n = f.n if n is None else n
    worst = None
    for j in range(n):
        for l in range(n):
            d = _mixed_derivative(f, j, l)
            deg = d.degree()
            if deg > 2 * n - 1 and (worst is None or deg > worst["degree"]):
                worst = {"j": j + 1, "l": l + 1, "degree": deg, "bound": 2 * n - 1,
                         "derivative": d.to_text()}
    if worst is not None:
        return RangeResult(None, worst)
    plh = BiPolynomial.zero(n)
    u = QuasiHomSymbol.zero(n)
    for (a, b), c in f.sorted_items():
        if any(a) and any(b):
            u = u + preimage_monomial(b, a, 0, n).scale(c)
        else:
            plh = plh + BiPolynomial(n, {(a, b): c})
    return RangeResult((bipoly_to_symbol(plh) + u).canonical(), None)


def product_symbol(beta: Sequence[int], alpha: Sequence[int], n: int) -> QuasiHomSymbol:
    """u with ``T_{z^beta} T_{zbar^alpha} = T_u``."""
    beta, alpha = tuple(beta), tuple(alpha)
    if not sum(alpha) or not sum(beta):
        raise PreconditionViolation("need |alpha| >= 1 and |beta| >= 1")
    res = range_decision(BiPolynomial.monomial(beta, alpha), n)
    if not res.ok:
        v = res.violation
        raise NotRepresentable(
            f"T_z^{beta} T_zbar^{alpha} is not a Toeplitz operator with integrable symbol: "
            f"d_z{v['j']} dbar_z{v['l']} has degree {v['degree']} > 2N-1 = {v['bound']}",
            violation=v)
    return res.witness


def ahern_symbol(alpha: Sequence[int], n: int) -> QuasiHomSymbol:
    """``((|alpha|+N)/N) zbar^alpha - zbar^alpha t^-|alpha|``."""
    alpha = tuple(alpha)
    a = sum(alpha)
    zero = (0,) * n
    rho = RadialProfile({0: Fraction(a + n, n), -a: -1})
    return QuasiHomSymbol(n, [(zero, alpha, rho)])


def ahern_target(alpha: Sequence[int], n: int) -> BiPolynomial:
    """``(|alpha|/N) zbar^alpha |z|^2``."""
    alpha = tuple(alpha)
    return (BiPolynomial.monomial((0,) * n, alpha) * BiPolynomial.norm_sq(n)).scale(Fraction(sum(alpha), n))


__all__ = [
    "RationalFunctionQ", "PartialFractionForm", "RangeResult",
    "gamma_ratio", "phi_hat", "partial_fractions", "invert_mellin",
    "base_symbol", "derivative_formula_polynomial", "target_polynomial",
    "preimage_monomial", "range_decision", "product_symbol",
    "ahern_symbol", "ahern_target",
]
