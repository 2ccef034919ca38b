"""Bipolynomials in z, zbar and the differential-operator calculus on them.

``z`` and ``zbar`` are independent commuting variables (Wirtinger calculus); a
term ``c * z^alpha * zbar^beta`` is stored under the key ``(alpha, beta)``.

Operators implemented here::

    E     = sum_j z_j d/dz_j            E(z^a zbar^b)    = |a| z^a zbar^b
    Ebar  = sum_j zbar_j d/dzbar_j      Ebar(z^a zbar^b) = |b| z^a zbar^b
    Delta = sum_j d^2/dz_j dzbar_j
    |E+s|^2 - Delta = (E+s)(Ebar+s) - Delta
    inv. Laplacian  = (1-|z|^2)(Delta - E Ebar)

and the operator D of order 2m+2 in two forms, the chain
``(|E+m|^2-Delta)...(|E|^2-Delta)`` and ``(m!)^2 (1-|z|^2)^(-m-1) p_m(inv. Laplacian)``.
"""
from __future__ import annotations

import re
from fractions import Fraction
from math import factorial
from typing import Iterable, Iterator, Mapping, Sequence

from .arith import (
    ONE,
    ZERO,
    GaussianRational,
    format_scalar,
    grlex_key,
    multi_indices,
    multi_indices_of_degree,
    parse_scalar,
    to_gaussian,
    unit_index,
)
from .errors import DivisionFailure, NotHolomorphic
from .report import EXACT, Report, at_degree, check

Key = tuple  # (alpha, beta)


def _add_idx(a: tuple, b: tuple) -> tuple:
    return tuple(x + y for x, y in zip(a, b))


class BiPolynomial:
    """Finitely supported series in z and zbar over Q(i)."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: Mapping[Key, object] | None = None):
        if n < 1:
            raise ValueError("dimension must be >= 1")
        self.n = n
        out: dict[Key, GaussianRational] = {}
        if terms:
            for (a, b), c in terms.items():
                a = tuple(a)
                b = tuple(b)
                if len(a) != n or len(b) != n:
                    raise ValueError(f"term {(a, b)} does not have dimension {n}")
                if min(a + b, default=0) < 0:
                    raise ValueError(f"negative exponent in {(a, b)}")
                c = to_gaussian(c)
                if c:
                    key = (a, b)
                    prev = out.get(key)
                    c = c if prev is None else prev + c
                    if c:
                        out[key] = c
                    else:
                        out.pop(key, None)
        self.terms = out

    @classmethod
    def _from_dict(cls, n: int, terms: dict) -> "BiPolynomial":
        # trusted constructor: keys valid, values nonzero GaussianRationals
        obj = object.__new__(cls)
        obj.n = n
        obj.terms = terms
        return obj

    # -- constructors ----------------------------------------------------
    @classmethod
    def zero(cls, n: int) -> "BiPolynomial":
        return cls._from_dict(n, {})

    @classmethod
    def constant(cls, n: int, c=1) -> "BiPolynomial":
        z = (0,) * n
        return cls(n, {(z, z): c})

    @classmethod
    def monomial(cls, alpha: Sequence[int], beta: Sequence[int] | None = None, c=1) -> "BiPolynomial":
        alpha = tuple(alpha)
        beta = tuple(beta) if beta is not None else (0,) * len(alpha)
        return cls(len(alpha), {(alpha, beta): c})

    @classmethod
    def z(cls, j: int, n: int) -> "BiPolynomial":
        """The coordinate z_j (1-based j)."""
        return cls.monomial(unit_index(j - 1, n), (0,) * n)

    @classmethod
    def zbar(cls, j: int, n: int) -> "BiPolynomial":
        return cls.monomial((0,) * n, unit_index(j - 1, n))

    @classmethod
    def norm_sq(cls, n: int) -> "BiPolynomial":
        """``|z|^2 = sum_j z_j zbar_j``."""
        return cls(n, {(unit_index(j, n), unit_index(j, n)): 1 for j in range(n)})

    @classmethod
    def defect(cls, n: int) -> "BiPolynomial":
        """``h = 1 - |z|^2``."""
        return cls.constant(n) - cls.norm_sq(n)

    # -- basic queries --------------------------------------------------
    def __len__(self) -> int:
        return len(self.terms)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def coeff(self, alpha: Sequence[int], beta: Sequence[int]) -> GaussianRational:
        return self.terms.get((tuple(alpha), tuple(beta)), ZERO)

    def constant_term(self) -> GaussianRational:
        z = (0,) * self.n
        return self.terms.get((z, z), ZERO)

    def degree(self) -> int:
        """Total degree in (z, zbar); -1 for the zero polynomial."""
        return max((sum(a) + sum(b) for a, b in self.terms), default=-1)

    def is_holomorphic(self) -> bool:
        return all(not any(b) for _, b in self.terms)

    def is_antiholomorphic(self) -> bool:
        return all(not any(a) for a, _ in self.terms)

    def sorted_items(self) -> list[tuple[Key, GaussianRational]]:
        return sorted(self.terms.items(),
                      key=lambda kv: (sum(kv[0][0]) + sum(kv[0][1]),
                                      grlex_key(kv[0][0]), grlex_key(kv[0][1])))

    def __eq__(self, other) -> bool:
        if isinstance(other, BiPolynomial):
            return self.n == other.n and self.terms == other.terms
        if isinstance(other, (int, Fraction, GaussianRational)):
            return self == BiPolynomial.constant(self.n, other)
        return NotImplemented

    def __hash__(self):
        return hash((self.n, frozenset(self.terms.items())))

    def _check(self, other: "BiPolynomial") -> None:
        if other.n != self.n:
            raise ValueError(f"dimension mismatch: {self.n} vs {other.n}")

    def _lift(self, other) -> "BiPolynomial":
        if isinstance(other, BiPolynomial):
            self._check(other)
            return other
        return BiPolynomial.constant(self.n, other)

    # -- ring operations --------------------------------------------------
    def __add__(self, other) -> "BiPolynomial":
        other = self._lift(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            prev = out.get(k)
            if prev is None:
                out[k] = c
            else:
                s = prev + c
                if s:
                    out[k] = s
                else:
                    del out[k]
        return BiPolynomial._from_dict(self.n, out)

    __radd__ = __add__

    def __neg__(self) -> "BiPolynomial":
        return BiPolynomial._from_dict(self.n, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other) -> "BiPolynomial":
        return self + (-self._lift(other))

    def __rsub__(self, other) -> "BiPolynomial":
        return self._lift(other) - self

    def scale(self, c) -> "BiPolynomial":
        c = to_gaussian(c)
        if not c:
            return BiPolynomial.zero(self.n)
        return BiPolynomial._from_dict(self.n, {k: v * c for k, v in self.terms.items()})

    def __mul__(self, other) -> "BiPolynomial":
        if not isinstance(other, BiPolynomial):
            return self.scale(other)
        self._check(other)
        out: dict[Key, GaussianRational] = {}
        for (a1, b1), c1 in self.terms.items():
            for (a2, b2), c2 in other.terms.items():
                k = (_add_idx(a1, a2), _add_idx(b1, b2))
                v = c1 * c2
                prev = out.get(k)
                out[k] = v if prev is None else prev + v
        return BiPolynomial._from_dict(self.n, {k: v for k, v in out.items() if v})

    def __rmul__(self, other) -> "BiPolynomial":
        return self.scale(other)

    def __pow__(self, e: int) -> "BiPolynomial":
        if not isinstance(e, int) or e < 0:
            raise ValueError("BiPolynomial powers must be nonnegative integers")
        result = BiPolynomial.constant(self.n)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def conjugate(self) -> "BiPolynomial":
        """Complex conjugate as a function: swap z and zbar, conjugate coefficients."""
        return BiPolynomial._from_dict(self.n, {(b, a): c.conjugate() for (a, b), c in self.terms.items()})

    def map_terms(self, fn) -> "BiPolynomial":
        """Apply ``fn(alpha, beta, c) -> iterable of ((alpha', beta'), c')`` termwise."""
        out: dict[Key, GaussianRational] = {}
        for (a, b), c in self.terms.items():
            for k, v in fn(a, b, c):
                prev = out.get(k)
                out[k] = v if prev is None else prev + v
        return BiPolynomial._from_dict(self.n, {k: v for k, v in out.items() if v})

    def holomorphic_part(self) -> "BiPolynomial":
        return BiPolynomial._from_dict(self.n, {k: c for k, c in self.terms.items() if not any(k[1])})

    def evaluate(self, point: Sequence) -> GaussianRational:
        """Value at ``z = point`` with ``zbar = conj(point)``."""
        zs = [to_gaussian(x) for x in point]
        if len(zs) != self.n:
            raise ValueError("point has the wrong dimension")
        ws = [x.conjugate() for x in zs]
        total = ZERO
        for (a, b), c in self.terms.items():
            v = c
            for x, e in zip(zs, a):
                if e:
                    v = v * x ** e
            for x, e in zip(ws, b):
                if e:
                    v = v * x ** e
            total = total + v
        return total

    def evaluate_holomorphic(self, point: Sequence) -> GaussianRational:
        """Value of a holomorphic polynomial at ``point`` (zbar exponents must be 0)."""
        if not self.is_holomorphic():
            raise NotHolomorphic("evaluate_holomorphic needs a holomorphic polynomial")
        return self.evaluate(point)

    # -- text & JSON ------------------------------------------------------
    def __repr__(self) -> str:
        return f"BiPolynomial({self.n}, {self.to_text()!r})"

    def __str__(self) -> str:
        return self.to_text()

    def to_text(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for i, ((a, b), c) in enumerate(self.sorted_items()):
            neg = c.is_real() and c.re < 0
            cc = -c if neg else c
            coeff = format_scalar(cc)
            if not cc.is_real():
                coeff = f"({coeff})"
            body = coeff
            if any(a):
                body += f" * z^({','.join(map(str, a))})"
            if any(b):
                body += f" * zbar^({','.join(map(str, b))})"
            if i == 0:
                parts.append(("-" if neg else "") + body)
            else:
                parts.append((" - " if neg else " + ") + body)
        return "".join(parts)

    @classmethod
    def parse(cls, text: str, n: int | None = None) -> "BiPolynomial":
        return parse_bipoly(text, n)

    def to_json(self) -> list:
        return [{"coeff": format_scalar(c), "alpha": list(a), "beta": list(b)}
                for (a, b), c in self.sorted_items()]

    @classmethod
    def from_json(cls, data: Iterable[Mapping], n: int) -> "BiPolynomial":
        out = cls.zero(n)
        for t in data:
            out = out + cls(n, {(tuple(t["alpha"]), tuple(t["beta"])): parse_scalar(str(t["coeff"]))})
        return out


# -- text grammar -----------------------------------------------------------

_EXP_RE = re.compile(r"^(zbar|z)\s*\^\s*\(\s*([\d\s,]*)\)$")


def _split_top(text: str, seps: str) -> list[tuple[str, str]]:
    """Split at top-level separators; returns (separator, chunk) pairs."""
    out = []
    depth = 0
    cur = []
    sep = ""
    prev = ""
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if depth == 0 and ch in seps and prev not in ("", "*", "+", "-", "^", "("):
            out.append((sep, "".join(cur).strip()))
            cur = []
            sep = ch
            prev = ch
            continue
        cur.append(ch)
        if not ch.isspace():
            prev = ch
    out.append((sep, "".join(cur).strip()))
    return out


def parse_bipoly(text: str, n: int | None = None) -> BiPolynomial:
    """Parse ``coeff * z^(a1,...,aN) * zbar^(b1,...,bN) + ...``.

    Coefficients use the canonical scalar text; complex coefficients must be
    parenthesized.  Factors may appear in any order and repeat.
    """
    text = text.strip()
    if not text:
        raise ValueError("empty polynomial text")
    terms: list[tuple[tuple, tuple, GaussianRational]] = []
    for sign, chunk in _split_top(text, "+-"):
        if not chunk:
            raise ValueError(f"malformed polynomial text: {text!r}")
        c = ONE if sign != "-" else -ONE
        alpha = beta = None
        for _, factor in _split_top(chunk, "*"):
            factor = factor.strip()
            m = _EXP_RE.match(factor)
            if m:
                exps = tuple(int(x) for x in m.group(2).replace(" ", "").split(",") if x)
                if n is None:
                    n = len(exps)
                if len(exps) != n:
                    raise ValueError(f"exponent {exps} does not have dimension {n}")
                if m.group(1) == "z":
                    alpha = exps if alpha is None else _add_idx(alpha, exps)
                else:
                    beta = exps if beta is None else _add_idx(beta, exps)
                continue
            if factor.startswith("(") and factor.endswith(")"):
                factor = factor[1:-1]
            c = c * parse_scalar(factor)
        terms.append((alpha, beta, c))
    if n is None:
        n = 1
    out: dict = {}
    zero = (0,) * n
    for alpha, beta, c in terms:
        key = (alpha or zero, beta or zero)
        if len(key[0]) != n or len(key[1]) != n:
            raise ValueError("inconsistent dimensions in polynomial text")
        out[key] = out.get(key, ZERO) + c
    return BiPolynomial(n, out)


# -- univariate polynomials ------------------------------------------------

class UnivariatePoly:
    """Dense polynomial over Q in one variable; ``coeffs[k]`` multiplies t^k."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [Fraction(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def constant(cls, c) -> "UnivariatePoly":
        return cls([c])

    @classmethod
    def x(cls) -> "UnivariatePoly":
        return cls([0, 1])

    @classmethod
    def linear(cls, root) -> "UnivariatePoly":
        """``t - root``."""
        return cls([-Fraction(root), 1])

    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def lead(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __eq__(self, other) -> bool:
        if isinstance(other, UnivariatePoly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self == UnivariatePoly.constant(other)
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"UnivariatePoly({[str(c) for c in self.coeffs]})"

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if not c:
                continue
            mono = "" if k == 0 else ("t" if k == 1 else f"t^{k}")
            if mono and abs(c) == 1:
                s = mono
            else:
                s = f"{abs(c)}" + (f"*{mono}" if mono else "")
            parts.append(("- " if c < 0 else "+ ") + s)
        out = " ".join(parts)
        return out[2:] if out.startswith("+ ") else "-" + out[2:]

    def __add__(self, other) -> "UnivariatePoly":
        other = _lift_uni(other)
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        return UnivariatePoly([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)])

    __radd__ = __add__

    def __neg__(self) -> "UnivariatePoly":
        return UnivariatePoly([-c for c in self.coeffs])

    def __sub__(self, other) -> "UnivariatePoly":
        return self + (-_lift_uni(other))

    def __rsub__(self, other) -> "UnivariatePoly":
        return _lift_uni(other) - self

    def __mul__(self, other) -> "UnivariatePoly":
        other = _lift_uni(other)
        if not self.coeffs or not other.coeffs:
            return UnivariatePoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return UnivariatePoly(out)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "UnivariatePoly":
        out = UnivariatePoly.constant(1)
        for _ in range(e):
            out = out * self
        return out

    def __call__(self, x):
        acc = Fraction(0) if not isinstance(x, GaussianRational) else ZERO
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self) -> "UnivariatePoly":
        return UnivariatePoly([k * c for k, c in enumerate(self.coeffs)][1:])

    def divmod(self, other: "UnivariatePoly") -> tuple["UnivariatePoly", "UnivariatePoly"]:
        if not other.coeffs:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = len(other.coeffs) - 1
        lead = other.coeffs[-1]
        quot = [Fraction(0)] * max(len(rem) - dq, 0)
        for k in range(len(rem) - 1, dq - 1, -1):
            c = rem[k] / lead
            if c:
                quot[k - dq] = c
                for i, b in enumerate(other.coeffs):
                    rem[k - dq + i] -= c * b
        return UnivariatePoly(quot), UnivariatePoly(rem[:dq] if dq else [])

    def monic(self) -> "UnivariatePoly":
        if not self.coeffs:
            return self
        lead = self.coeffs[-1]
        return UnivariatePoly([c / lead for c in self.coeffs])

    def gcd(self, other: "UnivariatePoly") -> "UnivariatePoly":
        a, b = self, other
        while b:
            a, b = b, a.divmod(b)[1]
        return a.monic() if a else UnivariatePoly.constant(1)


def _lift_uni(x) -> UnivariatePoly:
    if isinstance(x, UnivariatePoly):
        return x
    return UnivariatePoly.constant(x)


# -- first-order operators -----------------------------------------------

def apply_first_order(kind: str, p: BiPolynomial) -> BiPolynomial:
    """Apply E, Ebar or Delta (``kind`` in {"E", "Ebar", "Delta"})."""
    if kind == "E":
        return p.map_terms(lambda a, b, c: [((a, b), c * sum(a))] if any(a) else [])
    if kind == "Ebar":
        return p.map_terms(lambda a, b, c: [((a, b), c * sum(b))] if any(b) else [])
    if kind == "Delta":
        return p.map_terms(_laplace_term)
    raise ValueError(f"unknown operator kind {kind!r}")


def _laplace_term(a, b, c):
    out = []
    for j, (aj, bj) in enumerate(zip(a, b)):
        if aj and bj:
            a2 = a[:j] + (aj - 1,) + a[j + 1:]
            b2 = b[:j] + (bj - 1,) + b[j + 1:]
            out.append(((a2, b2), c * (aj * bj)))
    return out


def apply_euler_pair(p: BiPolynomial) -> BiPolynomial:
    """``|E|^2 p = E Ebar p``."""
    return p.map_terms(lambda a, b, c: [((a, b), c * (sum(a) * sum(b)))])


def apply_shifted_pair(s, p: BiPolynomial) -> BiPolynomial:
    """``(E+s)(Ebar+s)p - Delta p``."""
    s = Fraction(s)

    def term(a, b, c):
        out = []
        f = (sum(a) + s) * (sum(b) + s)
        if f:
            out.append(((a, b), c * f))
        out.extend(_laplace_term(a, b, -c))
        return out

    return p.map_terms(term)


def apply_inv_laplacian(p: BiPolynomial) -> BiPolynomial:
    """Invariant Laplacian ``(1-|z|^2)(Delta - E Ebar)``."""
    inner = apply_first_order("Delta", p) - apply_euler_pair(p)
    return inner * BiPolynomial.defect(p.n)


# -- p_m and the operator D ---------------------------------------------

def pm_polynomial(m: int, n: int) -> UnivariatePoly:
    """``p_m(t) = (m!)^-2 prod_{j=0}^m (j(j-N) - t)``."""
    if m < 0:
        raise ValueError("m must be >= 0")
    out = UnivariatePoly.constant(1)
    for j in range(m + 1):
        out = out * UnivariatePoly([j * (j - n), -1])
    return out * Fraction(1, factorial(m) ** 2)


def apply_poly_in_inv_laplacian(poly: UnivariatePoly, p: BiPolynomial) -> BiPolynomial:
    """``poly(inv. Laplacian) p`` as a sum of iterated invariant Laplacians."""
    out = BiPolynomial.zero(p.n)
    cur = p
    for k, c in enumerate(poly.coeffs):
        if k:
            cur = apply_inv_laplacian(cur)
        if c:
            out = out + cur.scale(c)
    return out


def divide_by_defect(p: BiPolynomial, power: int = 1) -> BiPolynomial:
    """Exact quotient ``p / (1-|z|^2)^power``.

    Graded recursion: with ``p = (1-|z|^2) q`` the homogeneous parts satisfy
    ``q_k = p_k + |z|^2 q_{k-2}``; any leftover in the top two degrees is a
    remainder and raises :class:`DivisionFailure`.
    """
    n = p.n
    t = BiPolynomial.norm_sq(n)
    for _ in range(power):
        deg = p.degree()
        if deg < 0:
            return p
        by_deg: dict[int, dict] = {}
        for k, c in p.terms.items():
            by_deg.setdefault(sum(k[0]) + sum(k[1]), {})[k] = c
        q: dict[int, BiPolynomial] = {}
        for k in range(0, deg - 1):
            pk = BiPolynomial._from_dict(n, by_deg.get(k, {}))
            if k >= 2 and q[k - 2]:
                pk = pk + t * q[k - 2]
            q[k] = pk
        quotient = BiPolynomial.zero(n)
        for part in q.values():
            quotient = quotient + part
        remainder = p - quotient * BiPolynomial.defect(n)
        if remainder:
            raise DivisionFailure(
                f"polynomial is not divisible by (1-|z|^2); remainder {remainder}",
                remainder=remainder)
        p = quotient
    return p


def apply_D(m: int, p: BiPolynomial, mode: str = "chain", reverse: bool = False) -> BiPolynomial:
    """The operator of order 2m+2 built from the shifted pairs.

    ``mode="chain"`` applies ``|E+s|^2 - Delta`` for s = 0, 1, ..., m with s = 0
    acting first (``reverse=True`` flips that order, for the sensitivity
    check).  ``mode="pm_form"`` computes ``(m!)^2 p_m(inv. Laplacian) p`` and
    divides exactly by ``(1-|z|^2)^(m+1)``.
    """
    if m < 0:
        raise ValueError("m must be >= 0")
    if mode == "chain":
        shifts = range(m, -1, -1) if reverse else range(m + 1)
        out = p
        for s in shifts:
            out = apply_shifted_pair(s, out)
        return out
    if mode == "pm_form":
        poly = pm_polynomial(m, p.n) * (factorial(m) ** 2)
        return divide_by_defect(apply_poly_in_inv_laplacian(poly, p), m + 1)
    raise ValueError(f"unknown mode {mode!r}")


# -- verifications -----------------------------------------------------------

def _first_difference(lhs: BiPolynomial, rhs: BiPolynomial) -> str | None:
    diff = lhs - rhs
    if not diff:
        return None
    (a, b), c = diff.sorted_items()[0]
    return (f"coefficient of z^{a} zbar^{b}: lhs {format_scalar(lhs.coeff(a, b))} "
            f"!= rhs {format_scalar(rhs.coeff(a, b))}")


def verify_h_recursion(j: int, n: int, mutate: bool = False) -> Report:
    """Check ``j^2 h^(j+1) = (j(j-N) - inv. Laplacian)(h^j)`` with ``h = 1-|z|^2``.

    ``mutate=True`` replaces ``j^2`` by ``j^2 + 1`` (negative control).
    """
    if j < 1:
        raise ValueError("j must be >= 1")
    h = BiPolynomial.defect(n)
    hj = h ** j
    factor = j * j + (1 if mutate else 0)
    lhs = (hj * h).scale(factor)
    rhs = hj.scale(j * (j - n)) - apply_inv_laplacian(hj)
    rep = Report(f"h_recursion(j={j},N={n})")
    rep.add(check("j^2 h^(j+1) == (j(j-N) - invlap) h^j", lhs == rhs, EXACT,
                  _first_difference(lhs, rhs), j=j, N=n, mutated=mutate))
    return rep


def verify_do_identity(m: int, n: int, degree_bound: int, reverse_chain: bool = False) -> Report:
    """Compare the chain and p_m forms of D on every monomial of degree <= bound."""
    rep = Report(f"do_identity(m={m},N={n},deg<={degree_bound})")
    checked = 0
    witness = None
    for total in range(degree_bound + 1):
        for k in multi_indices_of_degree(2 * n, total):
            q = BiPolynomial.monomial(k[:n], k[n:])
            chain = apply_D(m, q, "chain", reverse=reverse_chain)
            try:
                pm = apply_D(m, q, "pm_form")
            except DivisionFailure as exc:
                witness = f"z^{k[:n]} zbar^{k[n:]}: p_m form not divisible ({exc})"
                break
            checked += 1
            diff = _first_difference(chain, pm)
            if diff is not None:
                witness = f"monomial z^{k[:n]} zbar^{k[n:]}: {diff}"
                break
        if witness:
            break
    rep.add(check("chain == (m!)^2 h^-(m+1) p_m(invlap)", witness is None,
                  at_degree(degree_bound), witness, monomials=checked,
                  reverse_chain=reverse_chain))
    return rep


# -- pluriharmonicity -----------------------------------------------------

def is_pluriharmonic(p: BiPolynomial) -> tuple[bool, Key | None]:
    """True iff no term has both |alpha| >= 1 and |beta| >= 1.

    Returns ``(verdict, witness)``; the witness is the first offending
    ``(alpha, beta)`` in graded-lex order.
    """
    for (a, b), _ in p.sorted_items():
        if any(a) and any(b):
            return False, (a, b)
    return True, None


def _require_holomorphic(polys: Iterable[BiPolynomial], what: str) -> None:
    for p in polys:
        if not p.is_holomorphic():
            raise NotHolomorphic(f"{what} has an antiholomorphic term: {p}")


def pluri_defect(g_list: Sequence[BiPolynomial], u_list: Sequence[BiPolynomial]) -> BiPolynomial:
    """``sum_j (conj(g_j) - conj(g_j(0))) (u_j - u_j(0))``."""
    if len(g_list) != len(u_list):
        raise ValueError("g_list and u_list must have the same length")
    _require_holomorphic(g_list, "g")
    _require_holomorphic(u_list, "u")
    if not g_list:
        raise ValueError("need at least one pair")
    n = g_list[0].n
    total = BiPolynomial.zero(n)
    for g, u in zip(g_list, u_list):
        gc = (g - g.constant_term()).conjugate()
        uc = u - u.constant_term()
        total = total + gc * uc
    return total


def characterization_pluri(g_list: Sequence[BiPolynomial], u_list: Sequence[BiPolynomial]) -> Report:
    """Cross-check the two sides of the pluriharmonicity criterion for sum conj(g_j) u_j."""
    defect = pluri_defect(g_list, u_list)
    n = defect.n
    total = BiPolynomial.zero(n)
    for g, u in zip(g_list, u_list):
        total = total + g.conjugate() * u
    plh, wit = is_pluriharmonic(total)
    rep = Report("characterization_pluri")
    rep.add(check("defect zero <=> sum conj(g)u pluriharmonic", defect.is_zero() == plh, EXACT,
                  f"defect {'zero' if defect.is_zero() else 'nonzero'} but pluriharmonic={plh}",
                  defect=defect.to_text(), defect_zero=defect.is_zero(), pluriharmonic=plh,
                  mixed_term=None if wit is None else [list(wit[0]), list(wit[1])]))
    return rep


def monomials_up_to(n: int, degree: int) -> Iterator[BiPolynomial]:
    """Every monomial z^a zbar^b of total degree <= ``degree``."""
    for k in multi_indices(2 * n, degree):
        yield BiPolynomial.monomial(k[:n], k[n:])
