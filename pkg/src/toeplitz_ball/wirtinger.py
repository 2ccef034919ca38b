"""Exact jets of rational expressions in Wirtinger variables.

Formal variables are ``z_j``, ``w_j`` (conjugate of z), ``xi_j`` and ``eta_j``
(conjugate of xi), j = 1..N.  At a sample point with ``w = conj(z)`` and
``eta = conj(xi)`` a jet holds the truncated Taylor expansion of an expression
in a chosen group of variables, treating the others as constants.  A jet
coefficient at ``delta^gamma`` equals ``d^gamma f / gamma!``.

Operators of the calculus (E, Ebar, Delta, the invariant Laplacian) act on jets
by lowering the order; a chain of k second-order operators needs order 2k and
the final value is the constant coefficient.
"""
from __future__ import annotations

import random
from array import array
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial, gcd
from typing import Callable, Iterable, Mapping, Sequence

from . import _accel
from .arith import ONE, ZERO, GaussianRational, format_scalar, multi_indices, rational_sqrt, to_gaussian
from .errors import PoleAtPoint, UnknownKernel
from .report import Report, at_points, check
from .symbolic import BiPolynomial, pm_polynomial

KINDS = ("z", "w", "xi", "eta")
CONJ_KIND = {"z": "w", "w": "z", "xi": "eta", "eta": "xi"}


# -- expressions ------------------------------------------------------------

class ExprNode:
    """Immutable expression tree: const, var, add, mul, neg, recip, pow."""

    __slots__ = ("op", "args", "value")

    def __init__(self, op: str, args: tuple = (), value=None):
        self.op = op
        self.args = args
        self.value = value

    # constructors
    @staticmethod
    def const(c) -> "ExprNode":
        return ExprNode("const", (), to_gaussian(c))

    @staticmethod
    def var(kind: str, j: int) -> "ExprNode":
        """Variable ``kind_j`` with 1-based ``j``."""
        if kind not in KINDS:
            raise ValueError(f"unknown variable kind {kind!r}")
        if j < 1:
            raise ValueError("variable indices are 1-based")
        return ExprNode("var", (), (kind, j))

    def __repr__(self) -> str:
        return f"ExprNode({self})"

    def __str__(self) -> str:
        if self.op == "const":
            return format_scalar(self.value)
        if self.op == "var":
            return f"{self.value[0]}{self.value[1]}"
        if self.op == "add":
            return "(" + " + ".join(map(str, self.args)) + ")"
        if self.op == "mul":
            return "*".join(map(str, self.args))
        if self.op == "neg":
            return f"-({self.args[0]})"
        if self.op == "recip":
            return f"({self.args[0]})^-1"
        return f"({self.args[0]})^{self.value}"

    def __add__(self, other) -> "ExprNode":
        return ExprNode("add", (self, lift(other)))

    def __radd__(self, other) -> "ExprNode":
        return ExprNode("add", (lift(other), self))

    def __sub__(self, other) -> "ExprNode":
        return ExprNode("add", (self, -lift(other)))

    def __rsub__(self, other) -> "ExprNode":
        return ExprNode("add", (lift(other), -self))

    def __neg__(self) -> "ExprNode":
        return ExprNode("neg", (self,))

    def __mul__(self, other) -> "ExprNode":
        return ExprNode("mul", (self, lift(other)))

    def __rmul__(self, other) -> "ExprNode":
        return ExprNode("mul", (lift(other), self))

    def __truediv__(self, other) -> "ExprNode":
        return self * lift(other).recip()

    def __pow__(self, e: int) -> "ExprNode":
        if not isinstance(e, int):
            raise TypeError("only integer powers are supported")
        return ExprNode("pow", (self,), e)

    def recip(self) -> "ExprNode":
        return ExprNode("recip", (self,))

    def variables(self) -> set:
        out = set()
        stack = [self]
        while stack:
            node = stack.pop()
            if node.op == "var":
                out.add(node.value)
            stack.extend(node.args)
        return out


def lift(x) -> ExprNode:
    return x if isinstance(x, ExprNode) else ExprNode.const(x)


def const(c) -> ExprNode:
    return ExprNode.const(c)


def var(kind: str, j: int) -> ExprNode:
    return ExprNode.var(kind, j)


def esum(items: Iterable[ExprNode]) -> ExprNode:
    items = list(items)
    if not items:
        return const(0)
    return items[0] if len(items) == 1 else ExprNode("add", tuple(items))


def eprod(items: Iterable[ExprNode]) -> ExprNode:
    items = list(items)
    if not items:
        return const(1)
    return items[0] if len(items) == 1 else ExprNode("mul", tuple(items))


def expr_from_bipoly(p: BiPolynomial, holo: str = "z") -> ExprNode:
    """A BiPolynomial as an expression in ``holo`` and its conjugate kind."""
    anti = CONJ_KIND[holo]
    terms = []
    for (a, b), c in p.sorted_items():
        factors = [const(c)]
        for j, e in enumerate(a, start=1):
            if e:
                factors.append(var(holo, j) ** e if e > 1 else var(holo, j))
        for j, e in enumerate(b, start=1):
            if e:
                factors.append(var(anti, j) ** e if e > 1 else var(anti, j))
        terms.append(eprod(factors))
    return esum(terms)


# -- sample points ----------------------------------------------------------

@dataclass(frozen=True)
class SamplePoint:
    """Values of the formal variables; ``diagonal`` means w = conj(z), eta = conj(xi)."""

    values: Mapping
    diagonal: bool = True

    @classmethod
    def from_coords(cls, z: Sequence, xi: Sequence | None = None) -> "SamplePoint":
        z = [to_gaussian(x) for x in z]
        xi = [to_gaussian(x) for x in (xi if xi is not None else [0] * len(z))]
        vals = {}
        for j, x in enumerate(z, start=1):
            vals[("z", j)] = x
            vals[("w", j)] = x.conjugate()
        for j, x in enumerate(xi, start=1):
            vals[("xi", j)] = x
            vals[("eta", j)] = x.conjugate()
        return cls(vals, True)

    def __getitem__(self, key) -> GaussianRational:
        try:
            return self.values[key]
        except KeyError:
            raise KeyError(f"sample point has no value for {key[0]}{key[1]}") from None

    def coords(self, kind: str) -> list:
        n = sum(1 for k in self.values if k[0] == kind)
        return [self.values[(kind, j)] for j in range(1, n + 1)]

    def text(self) -> str:
        parts = []
        for kind in ("z", "xi"):
            cs = self.coords(kind)
            if cs:
                parts.append(f"{kind}=(" + ", ".join(format_scalar(c) for c in cs) + ")")
        return " ".join(parts)


def _random_ball_coords(rng: random.Random, n: int, bound: Fraction) -> list:
    while True:
        cs = [GaussianRational(Fraction(rng.randint(-12, 12), 16), Fraction(rng.randint(-12, 12), 16))
              for _ in range(n)]
        if sum((c.abs2() for c in cs), Fraction(0)) <= bound:
            return cs


def random_points(n: int, count: int, seed: int, bound: Fraction = Fraction(9, 16)) -> list:
    """Seeded diagonal points with coordinates (p + q i)/16 and |z|^2, |xi|^2 <= bound."""
    rng = random.Random(seed)
    return [SamplePoint.from_coords(_random_ball_coords(rng, n, bound), _random_ball_coords(rng, n, bound))
            for _ in range(count)]


# -- jet spaces and jets ------------------------------------------------------

class JetSpace:
    """Monomials of degree <= order in ``nvars`` variables, with cached tables."""

    def __init__(self, nvars: int, order: int):
        self.nvars = nvars
        self.order = order
        self.monos = multi_indices(nvars, order)
        self.index = {m: i for i, m in enumerate(self.monos)}
        self.degrees = [sum(m) for m in self.monos]
        self._sizes = [comb(nvars + o, o) for o in range(order + 1)]
        self._tables: dict = {}
        self._deriv: dict = {}
        self._shift: dict = {}

    def size(self, o: int) -> int:
        return self._sizes[o]

    def table(self, o: int) -> tuple:
        tab = self._tables.get(o)
        if tab is None:
            offsets = array("i", [0])
            js = array("i")
            ks = array("i")
            index = self.index
            for i in range(self.size(o)):
                mi = self.monos[i]
                for j in range(self.size(o - self.degrees[i])):
                    mj = self.monos[j]
                    js.append(j)
                    ks.append(index[tuple(x + y for x, y in zip(mi, mj))])
                offsets.append(len(js))
            tab = (offsets, js, ks)
            self._tables[o] = tab
        return tab

    def deriv_map(self, v: int, o: int) -> list:
        """For the derivative of an order-o jet in variable v: (source, factor) per target."""
        key = (v, o)
        out = self._deriv.get(key)
        if out is None:
            out = []
            for g in self.monos[: self.size(o - 1)]:
                up = g[:v] + (g[v] + 1,) + g[v + 1:]
                out.append((self.index[up], g[v] + 1))
            self._deriv[key] = out
        return out

    def shift_map(self, v: int, o: int) -> list:
        """For multiplication by delta_v: source index per target, or -1."""
        key = (v, o)
        out = self._shift.get(key)
        if out is None:
            out = []
            for g in self.monos[: self.size(o)]:
                out.append(self.index[g[:v] + (g[v] - 1,) + g[v + 1:]] if g[v] else -1)
            self._shift[key] = out
        return out


@lru_cache(maxsize=64)
def jet_space(nvars: int, order: int) -> JetSpace:
    return JetSpace(nvars, order)


def _split(c: GaussianRational) -> tuple[int, int, int]:
    d = c.re.denominator * c.im.denominator // gcd(c.re.denominator, c.im.denominator)
    return c.re.numerator * (d // c.re.denominator), c.im.numerator * (d // c.im.denominator), d


class Jet:
    """Truncated Taylor expansion with Gaussian-integer numerators over one denominator."""

    __slots__ = ("space", "order", "re", "im", "den")

    def __init__(self, space: JetSpace, order: int, re: list, im: list, den: int = 1):
        self.space = space
        self.order = order
        self.re = re
        self.im = im
        self.den = den
        self._normalize()

    def _normalize(self) -> None:
        g = gcd(self.den, *self.re, *self.im)
        if g > 1:
            self.re = [x // g for x in self.re]
            self.im = [x // g for x in self.im]
            self.den //= g

    @classmethod
    def constant(cls, space: JetSpace, order: int, c) -> "Jet":
        cr, ci, d = _split(to_gaussian(c))
        n = space.size(order)
        re = [0] * n
        im = [0] * n
        re[0], im[0] = cr, ci
        return cls(space, order, re, im, d)

    @classmethod
    def variable(cls, space: JetSpace, order: int, v: int, x0) -> "Jet":
        cr, ci, d = _split(to_gaussian(x0))
        n = space.size(order)
        re = [0] * n
        im = [0] * n
        re[0], im[0] = cr, ci
        if order >= 1:
            re[space.index[tuple(1 if k == v else 0 for k in range(space.nvars))]] = d
        return cls(space, order, re, im, d)

    def value(self) -> GaussianRational:
        return GaussianRational(Fraction(self.re[0], self.den), Fraction(self.im[0], self.den))

    def coeff(self, mono: Sequence[int]) -> GaussianRational:
        i = self.space.index.get(tuple(mono))
        if i is None or i >= len(self.re):
            raise IndexError(f"monomial {tuple(mono)} is beyond the jet order {self.order}")
        return GaussianRational(Fraction(self.re[i], self.den), Fraction(self.im[i], self.den))

    def truncate(self, o: int) -> "Jet":
        if o == self.order:
            return self
        if o > self.order:
            raise ValueError("cannot raise the order of a jet")
        n = self.space.size(o)
        return Jet(self.space, o, self.re[:n], self.im[:n], self.den)

    def _align(self, other: "Jet") -> tuple["Jet", "Jet"]:
        if other.space is not self.space:
            raise ValueError("jets live in different spaces")
        o = min(self.order, other.order)
        return self.truncate(o), other.truncate(o)

    def __add__(self, other) -> "Jet":
        if not isinstance(other, Jet):
            other = Jet.constant(self.space, self.order, other)
        a, b = self._align(other)
        g = gcd(a.den, b.den)
        fa, fb = b.den // g, a.den // g
        re = [x * fa + y * fb for x, y in zip(a.re, b.re)]
        im = [x * fa + y * fb for x, y in zip(a.im, b.im)]
        return Jet(self.space, a.order, re, im, a.den * fa)

    __radd__ = __add__

    def __neg__(self) -> "Jet":
        return Jet(self.space, self.order, [-x for x in self.re], [-x for x in self.im], self.den)

    def __sub__(self, other) -> "Jet":
        if not isinstance(other, Jet):
            other = Jet.constant(self.space, self.order, other)
        return self + (-other)

    def __rsub__(self, other) -> "Jet":
        return (-self) + other

    def scale(self, c) -> "Jet":
        cr, ci, d = _split(to_gaussian(c))
        if ci == 0:
            re = [x * cr for x in self.re]
            im = [x * cr for x in self.im]
        else:
            re = [cr * x - ci * y for x, y in zip(self.re, self.im)]
            im = [cr * y + ci * x for x, y in zip(self.re, self.im)]
        return Jet(self.space, self.order, re, im, self.den * d)

    def __mul__(self, other) -> "Jet":
        if not isinstance(other, Jet):
            return self.scale(other)
        a, b = self._align(other)
        offsets, js, ks = self.space.table(a.order)
        re, im = _accel.jet_mul(a.re, a.im, b.re, b.im, offsets, js, ks)
        return Jet(self.space, a.order, re, im, a.den * b.den)

    __rmul__ = scale

    def recip(self) -> "Jet":
        c0 = self.value()
        if not c0:
            raise PoleAtPoint("reciprocal of an expression that vanishes at the point")
        inv = c0.inverse()
        q = (self - c0).scale(-inv)
        s = Jet.constant(self.space, self.order, 1)
        for _ in range(self.order):
            s = q * s + 1
        return s.scale(inv)

    def __pow__(self, e: int) -> "Jet":
        if e < 0:
            return self.recip() ** (-e)
        result = Jet.constant(self.space, self.order, 1)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def deriv(self, v: int) -> "Jet":
        """d/d(var v); the order drops by one."""
        if self.order < 1:
            raise ValueError("cannot differentiate an order-0 jet")
        m = self.space.deriv_map(v, self.order)
        re = [self.re[s] * f for s, f in m]
        im = [self.im[s] * f for s, f in m]
        return Jet(self.space, self.order - 1, re, im, self.den)

    def times_coordinate(self, v: int, x0) -> "Jet":
        """Multiply by the coordinate ``x0 + delta_v``."""
        m = self.space.shift_map(v, self.order)
        re = [self.re[s] if s >= 0 else 0 for s in m]
        im = [self.im[s] if s >= 0 else 0 for s in m]
        return self.scale(x0) + Jet(self.space, self.order, re, im, self.den)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Jet):
            return NotImplemented
        a, b = self._align(other)
        return a.den == b.den and a.re == b.re and a.im == b.im

    __hash__ = None  # type: ignore[assignment]


# -- evaluation ----------------------------------------------------------

def eval_value(expr: ExprNode, pt: SamplePoint) -> GaussianRational:
    """Pointwise exact value (order-0 evaluation without jets)."""
    memo: dict = {}

    def go(node: ExprNode) -> GaussianRational:
        key = id(node)
        if key in memo:
            return memo[key]
        op = node.op
        if op == "const":
            out = node.value
        elif op == "var":
            out = pt[node.value]
        elif op == "add":
            out = ZERO
            for a in node.args:
                out = out + go(a)
        elif op == "mul":
            out = ONE
            for a in node.args:
                out = out * go(a)
        elif op == "neg":
            out = -go(node.args[0])
        elif op == "recip":
            v = go(node.args[0])
            if not v:
                raise PoleAtPoint(f"{node.args[0]} vanishes at {pt.text()}")
            out = v.inverse()
        else:
            v = go(node.args[0])
            if node.value < 0 and not v:
                raise PoleAtPoint(f"{node.args[0]} vanishes at {pt.text()}")
            out = v ** node.value
        memo[key] = out
        return out

    return go(expr)


class JetContext:
    """Jets in one group of variables (``z`` with ``w``, or ``xi`` with ``eta``) at a point."""

    def __init__(self, n: int, pt: SamplePoint, group: str, order: int):
        if group not in ("z", "xi"):
            raise ValueError("group must be 'z' or 'xi'")
        self.n = n
        self.pt = pt
        self.order = order
        self.holo = group
        self.anti = CONJ_KIND[group]
        self.active = [(group, j) for j in range(1, n + 1)] + [(self.anti, j) for j in range(1, n + 1)]
        self.slot = {v: i for i, v in enumerate(self.active)}
        self.base = [pt[v] for v in self.active]
        self.space = jet_space(2 * n, order)

    def constant(self, c, order: int | None = None) -> Jet:
        return Jet.constant(self.space, self.order if order is None else order, c)

    def eval(self, expr: ExprNode) -> Jet:
        memo: dict = {}
        order = self.order

        def go(node: ExprNode) -> Jet:
            key = id(node)
            if key in memo:
                return memo[key]
            op = node.op
            if op == "const":
                out = Jet.constant(self.space, order, node.value)
            elif op == "var":
                i = self.slot.get(node.value)
                if i is None:
                    out = Jet.constant(self.space, order, self.pt[node.value])
                else:
                    out = Jet.variable(self.space, order, i, self.base[i])
            elif op == "add":
                out = go(node.args[0])
                for a in node.args[1:]:
                    out = out + go(a)
            elif op == "mul":
                out = go(node.args[0])
                for a in node.args[1:]:
                    out = out * go(a)
            elif op == "neg":
                out = -go(node.args[0])
            elif op == "recip":
                try:
                    out = go(node.args[0]).recip()
                except PoleAtPoint:
                    raise PoleAtPoint(f"{node.args[0]} vanishes at {self.pt.text()}") from None
            else:
                try:
                    out = go(node.args[0]) ** node.value
                except PoleAtPoint:
                    raise PoleAtPoint(f"{node.args[0]} vanishes at {self.pt.text()}") from None
            memo[key] = out
            return out

        return go(expr)

    # first-order operators; each lowers the order by one (Delta by two)
    def E(self, J: Jet) -> Jet:
        return self._euler(J, 0)

    def Ebar(self, J: Jet) -> Jet:
        return self._euler(J, self.n)

    def _euler(self, J: Jet, off: int) -> Jet:
        out = None
        for j in range(self.n):
            v = off + j
            t = J.deriv(v).times_coordinate(v, self.base[v])
            out = t if out is None else out + t
        return out

    def Delta(self, J: Jet) -> Jet:
        out = None
        for j in range(self.n):
            t = J.deriv(j).deriv(self.n + j)
            out = t if out is None else out + t
        return out

    def shifted_pair(self, s, J: Jet) -> Jet:
        """``(E+s)(Ebar+s)J - Delta J``."""
        s = Fraction(s)
        inner = self.Ebar(J) + J.truncate(J.order - 1).scale(s)
        outer = self.E(inner) + inner.truncate(inner.order - 1).scale(s)
        return outer - self.Delta(J)

    def euler_pair(self, J: Jet) -> Jet:
        return self.E(self.Ebar(J))

    def norm_sq(self, order: int) -> Jet:
        out = Jet.constant(self.space, order, 0)
        for j in range(self.n):
            x = Jet.variable(self.space, order, j, self.base[j])
            y = Jet.variable(self.space, order, self.n + j, self.base[self.n + j])
            out = out + x * y
        return out

    def inv_laplacian(self, J: Jet) -> Jet:
        """``(1-|x|^2)(Delta - E Ebar)J``."""
        inner = self.Delta(J) - self.euler_pair(J)
        return (1 - self.norm_sq(inner.order)) * inner

    def chain(self, m: int, J: Jet) -> Jet:
        """``(|E+m|^2-Delta)...(|E|^2-Delta)J`` with s = 0 applied first."""
        for s in range(m + 1):
            J = self.shifted_pair(s, J)
        return J

    def poly_inv_laplacian(self, poly, J: Jet) -> Jet:
        out = None
        cur = J
        last = len(poly.coeffs) - 1
        for k, c in enumerate(poly.coeffs):
            if k:
                cur = self.inv_laplacian(cur)
            if c:
                t = cur.scale(c)
                out = t if out is None else out + t
        if out is None:
            return Jet.constant(self.space, J.order - 2 * last, 0)
        return out


def eval_jet(expr: ExprNode, pt: SamplePoint, order: int, group: str = "z", n: int | None = None) -> Jet:
    """Jet of ``expr`` of the given order in the variables of ``group``."""
    if order < 0:
        raise ValueError("order must be >= 0")
    if n is None:
        n = max((j for k, j in expr.variables() if k in (group, CONJ_KIND[group])), default=0)
        n = max(n, sum(1 for k in pt.values if k[0] == group))
    return JetContext(n, pt, group, order).eval(expr)


# -- kernels ------------------------------------------------------------------

def _dot(kind_a: str, kind_b: str, n: int) -> ExprNode:
    return esum(var(kind_a, j) * var(kind_b, j) for j in range(1, n + 1))


def inner_z_xi(n: int) -> ExprNode:
    """``<z, xi> = sum z_j conj(xi_j)``."""
    return _dot("z", "eta", n)


def inner_xi_z(n: int) -> ExprNode:
    return _dot("xi", "w", n)


def norm_sq(kind: str, n: int) -> ExprNode:
    return _dot(kind, CONJ_KIND[kind], n)


def check_omega(omega: Sequence) -> tuple[list, Fraction, Fraction]:
    """Validate an automorphism parameter; returns (omega, |omega|^2, s_omega)."""
    om = [to_gaussian(x) for x in omega]
    r2 = sum((x.abs2() for x in om), Fraction(0))
    if r2 >= 1:
        raise ValueError("omega must lie in the open unit ball")
    s = rational_sqrt(1 - r2)
    if s is None:
        raise ValueError(f"sqrt(1-|omega|^2) = sqrt({1 - r2}) is irrational; choose omega with rational s_omega")
    return om, r2, s


def mobius_components(omega: Sequence, kind: str = "z") -> list[ExprNode]:
    """Components of phi_omega applied to the variable group ``kind``.

    ``phi_omega(x) = (omega - P x - s (x - P x)) / (1 - <x, omega>)`` with
    ``P x = <x, omega> omega / |omega|^2`` and ``phi_0(x) = -x``.  For the
    conjugate kinds (w, eta) the conjugate map is returned.
    """
    om, r2, s = check_omega(omega)
    n = len(om)
    conj = kind in ("w", "eta")
    if conj:
        om_use = [x.conjugate() for x in om]     # coefficients of conj(phi)
        om_pair = om                              # conj(<x, omega>) = sum conj(x_j) omega_j
    else:
        om_use = om
        om_pair = [x.conjugate() for x in om]
    xs = [var(kind, j) for j in range(1, n + 1)]
    if r2 == 0:
        return [-x for x in xs]
    ip = esum(x * const(c) for x, c in zip(xs, om_pair))
    denom = (1 - ip).recip()
    out = []
    for k in range(n):
        px = ip * const(om_use[k] * Fraction(1) / r2)
        out.append((const(om_use[k]) - px - const(s) * (xs[k] - px)) * denom)
    return out


def mobius_point(omega: Sequence, point: Sequence) -> list[GaussianRational]:
    """phi_omega evaluated at an explicit point (used for phi_omega(e_j))."""
    om, r2, s = check_omega(omega)
    x = [to_gaussian(c) for c in point]
    if r2 == 0:
        return [-c for c in x]
    ip = sum((a * b.conjugate() for a, b in zip(x, om)), ZERO)
    den = 1 - ip
    if not den:
        raise PoleAtPoint("1 - <x, omega> vanishes")
    out = []
    for k in range(len(om)):
        px = ip * om[k] / r2
        out.append((om[k] - px - (x[k] - px) * s) / den)
    return out


def _kernel_builders() -> dict[str, Callable]:
    def inv_kernel(n: int) -> ExprNode:
        return (1 - inner_z_xi(n)).recip() * (1 - inner_xi_z(n)).recip()

    def weighted_kernel(n: int) -> ExprNode:
        return (1 - norm_sq("xi", n)) * inv_kernel(n)

    def power_kernel(n: int, s: int = 1) -> ExprNode:
        return inv_kernel(n) ** int(s)

    def mobius_lhs(n: int, omega=None) -> ExprNode:
        om = default_omega(n) if omega is None else omega
        pz = mobius_components(om, "z")
        pxi_bar = mobius_components(om, "eta")
        return 1 - esum(a * b for a, b in zip(pz, pxi_bar))

    def mobius_rhs(n: int, omega=None) -> ExprNode:
        om, r2, _ = check_omega(default_omega(n) if omega is None else omega)
        z_om = esum(var("z", j) * const(om[j - 1].conjugate()) for j in range(1, n + 1))
        om_xi = esum(const(om[j - 1]) * var("eta", j) for j in range(1, n + 1))
        return const(1 - r2) * (1 - inner_z_xi(n)) * ((1 - z_om) * (1 - om_xi)).recip()

    def affine_lhs(n: int, omega=None, j: int = 1) -> ExprNode:
        om, _, _ = check_omega(default_omega(n) if omega is None else omega)
        z_om = esum(var("z", k) * const(om[k - 1].conjugate()) for k in range(1, n + 1))
        return var("z", j) * (1 - z_om).recip()

    def affine_rhs(n: int, omega=None, j: int = 1, literal: bool = False) -> ExprNode:
        om, r2, _ = check_omega(default_omega(n) if omega is None else omega)
        ej = [1 if k == j - 1 else 0 for k in range(n)]
        phi_ej = mobius_point(om, ej)
        c = 1 - om[j - 1]
        if not literal:
            c = c.conjugate()
        v = [-om[k] + c * phi_ej[k] for k in range(n)]
        pz = mobius_components(om, "z")
        pairing = esum(p * const(vk.conjugate()) for p, vk in zip(pz, v))
        return const(om[j - 1] / (1 - r2)) + const(Fraction(1) / (1 - r2)) * pairing

    return {
        "inv_kernel": inv_kernel,
        "weighted_kernel": weighted_kernel,
        "power_kernel": power_kernel,
        "mobius_lhs": mobius_lhs,
        "mobius_rhs": mobius_rhs,
        "affine_lhs": affine_lhs,
        "affine_rhs": affine_rhs,
    }


KERNELS = _kernel_builders()


def kernel_expr(name: str, n: int, **params) -> ExprNode:
    try:
        builder = KERNELS[name]
    except KeyError:
        raise UnknownKernel(f"unknown kernel {name!r}; known: {sorted(KERNELS)}") from None
    return builder(n, **params)


def default_omega(n: int) -> tuple:
    """A complex automorphism parameter with |omega|^2 = 9/25 (s_omega = 4/5)."""
    if n == 1:
        return (GaussianRational(Fraction(12, 25), Fraction(9, 25)),)
    return (GaussianRational(Fraction(2, 5), Fraction(2, 5)), GaussianRational(Fraction(1, 5))) + \
        (GaussianRational(0),) * (n - 2)


# -- identity registry -------------------------------------------------------
# each entry maps (n, point, params, margin) to a list of (side, value)

def _defect(kind: str, n: int) -> ExprNode:
    return 1 - norm_sq(kind, n)


def _id_e_delta_a(n, pt, params, margin):
    K = kernel_expr("inv_kernel", n)
    cx = JetContext(n, pt, "xi", 2 + margin)
    lhs = cx.shifted_pair(0, cx.eval(K)).value()
    mid_expr = (inner_z_xi(n) * inner_xi_z(n) - norm_sq("z", n)) * K ** 2
    mid = eval_value(mid_expr, pt)
    cz = JetContext(n, pt, "z", 2 + margin)
    rhs = cz.euler_pair(cz.eval(_defect("z", n) * K)).value()
    return [("lhs", lhs), ("middle", mid), ("rhs", rhs)]


def _id_e_delta_b(n, pt, params, margin):
    K = kernel_expr("inv_kernel", n)
    cx = JetContext(n, pt, "xi", 2 + margin)
    lhs = cx.shifted_pair(0, cx.eval(kernel_expr("weighted_kernel", n))).value()
    mid_expr = (const(n - 1) * K.recip() + _defect("z", n) * _defect("xi", n)) * K ** 2
    mid = eval_value(mid_expr, pt)
    cz = JetContext(n, pt, "z", 2 + margin)
    rhs = cz.shifted_pair(0, cz.eval(_defect("z", n) * K)).value()
    return [("lhs", lhs), ("middle", mid), ("rhs", rhs)]


def _id_e_s_delta(n, pt, params, margin):
    s = int(params.get("s", 1))
    cx = JetContext(n, pt, "xi", 2 + margin)
    lhs = cx.shifted_pair(s, cx.eval(kernel_expr("power_kernel", n, s=s))).value()
    rhs = eval_value(const(s * s) * _defect("z", n) * kernel_expr("power_kernel", n, s=s + 1), pt)
    return [("lhs", lhs), ("rhs", rhs)]


def _chain_rhs_kernel(n: int, m: int) -> ExprNode:
    return _defect("z", n) ** (m + 1) * kernel_expr("power_kernel", n, s=m + 1)


def _id_chain_a(n, pt, params, margin):
    m = int(params.get("m", 1))
    cx = JetContext(n, pt, "xi", 2 * (m + 1) + margin)
    lhs = cx.chain(m, cx.eval(kernel_expr("inv_kernel", n))).value()
    cz = JetContext(n, pt, "z", 2 + margin)
    rhs = cz.euler_pair(cz.eval(_chain_rhs_kernel(n, m))).value() * factorial(m) ** 2
    return [("lhs", lhs), ("rhs", rhs)]


def _id_chain_b(n, pt, params, margin):
    m = int(params.get("m", 1))
    cx = JetContext(n, pt, "xi", 2 * (m + 1) + margin)
    lhs = cx.chain(m, cx.eval(kernel_expr("weighted_kernel", n))).value()
    cz = JetContext(n, pt, "z", 2 + margin)
    rhs = cz.shifted_pair(0, cz.eval(_chain_rhs_kernel(n, m))).value() * factorial(m) ** 2
    return [("lhs", lhs), ("rhs", rhs)]


def _id_marvelous(n, pt, params, margin):
    m = int(params.get("m", 1))
    cx = JetContext(n, pt, "xi", 2 * (m + 1) + margin)
    applied = cx.poly_inv_laplacian(pm_polynomial(m, n), cx.eval(kernel_expr("weighted_kernel", n))).value()
    h_xi = eval_value(_defect("xi", n), pt)
    lhs = applied * h_xi ** (-(m + 1))
    cz = JetContext(n, pt, "z", 2 + margin)
    rhs = cz.shifted_pair(0, cz.eval(_chain_rhs_kernel(n, m))).value()
    return [("lhs", lhs), ("rhs", rhs)]


def _id_mobius(n, pt, params, margin):
    om = params.get("omega") or default_omega(n)
    return [("lhs", eval_value(kernel_expr("mobius_lhs", n, omega=om), pt)),
            ("rhs", eval_value(kernel_expr("mobius_rhs", n, omega=om), pt))]


def _affine(literal: bool):
    def run(n, pt, params, margin):
        om = params.get("omega") or default_omega(n)
        j = int(params.get("j", 1))
        return [("lhs", eval_value(kernel_expr("affine_lhs", n, omega=om, j=j), pt)),
                ("rhs", eval_value(kernel_expr("affine_rhs", n, omega=om, j=j, literal=literal), pt))]
    return run


IDENTITIES: dict[str, Callable] = {
    "E_Delta_a": _id_e_delta_a,
    "E_Delta_b": _id_e_delta_b,
    "E_s_Delta": _id_e_s_delta,
    "chain_A": _id_chain_a,
    "chain_B": _id_chain_b,
    "marvelous": _id_marvelous,
    "mobius": _id_mobius,
    "affine": _affine(False),
    "affine_literal": _affine(True),
}


def identity_sides(name: str, n: int, pt: SamplePoint, params: Mapping | None = None,
                   order_margin: int = 0) -> list[tuple[str, GaussianRational]]:
    try:
        fn = IDENTITIES[name]
    except KeyError:
        raise UnknownKernel(f"unknown identity {name!r}; known: {sorted(IDENTITIES)}") from None
    return fn(n, pt, dict(params or {}), order_margin)


def _param_text(params: Mapping) -> str:
    if not params:
        return ""
    items = []
    for k in sorted(params):
        v = params[k]
        if isinstance(v, (tuple, list)):
            v = "(" + ",".join(format_scalar(x) for x in v) + ")"
        items.append(f"{k}={v}")
    return "(" + ",".join(items) + ")"


def verify_pointwise_identity(name: str, n: int, points: Sequence[SamplePoint],
                              params: Mapping | None = None, order_margin: int = 0,
                              rhs_scale=1) -> Report:
    """Evaluate every side of a registered identity exactly at each point.

    Agreement is labelled ``verified-at-S-points``; any disagreement is a
    counterexample and is reported with the point.  ``rhs_scale`` multiplies
    the last side (negative controls).
    """
    params = dict(params or {})
    label = name + _param_text(params)
    rep = Report(f"identity:{label}:N={n}")
    rhs_scale = to_gaussian(rhs_scale)
    witness = None
    for pt in points:
        sides = identity_sides(name, n, pt, params, order_margin)
        if rhs_scale != ONE:
            sides[-1] = (sides[-1][0], sides[-1][1] * rhs_scale)
        ref_name, ref = sides[0]
        for side, v in sides[1:]:
            if v != ref:
                witness = (f"at {pt.text()}: {ref_name} = {format_scalar(ref)} but "
                           f"{side} = {format_scalar(v)}")
                break
        if witness:
            break
    rep.add(check(label, witness is None, at_points(len(points)), witness, N=n, points=len(points)))
    return rep


def identity_suite(n: int, points: Sequence[SamplePoint], order_margin: int = 0) -> Report:
    """All registered kernel identities at the given points."""
    cases: list[tuple[str, dict]] = [("E_Delta_a", {}), ("E_Delta_b", {})]
    cases += [("E_s_Delta", {"s": s}) for s in (1, 2, 3, 4)]
    cases += [("chain_A", {"m": m}) for m in (1, 2)]
    cases += [("chain_B", {"m": m}) for m in (1, 2)]
    cases += [("marvelous", {"m": m}) for m in (1, 2)]
    cases += [("mobius", {"omega": default_omega(n)})]
    cases += [("affine", {"omega": default_omega(n), "j": j}) for j in range(1, n + 1)]
    rep = Report(f"kernel_identities(N={n})")
    for name, params in cases:
        sub = verify_pointwise_identity(name, n, points, params, order_margin)
        rep.extend(sub.checks)
    return rep


# -- M-harmonicity and eigenfunctions ---------------------------------------

def inv_laplacian_value(expr: ExprNode, pt: SamplePoint, n: int) -> GaussianRational:
    ctx = JetContext(n, pt, "z", 2)
    return ctx.inv_laplacian(ctx.eval(expr)).value()


def check_mharmonic(expr: ExprNode, n: int, points: Sequence[SamplePoint], name: str = "M-harmonic") -> Report:
    """Does the invariant Laplacian of ``expr`` vanish at every sampled point?"""
    witness = None
    for pt in points:
        v = inv_laplacian_value(expr, pt, n)
        if v:
            witness = f"invariant Laplacian = {format_scalar(v)} at {pt.text()}"
            break
    rep = Report(f"mharmonic:{name}")
    rep.add(check(f"{name}: invariant Laplacian vanishes", witness is None,
                  at_points(len(points)), witness, N=n))
    return rep


def mixed_derivative_witness(expr: ExprNode, n: int, points: Sequence[SamplePoint]):
    """Find j, l and a point with d^2 expr / dz_j dzbar_l != 0.

    Returns ``(j, l, point, value)`` with 1-based j, l, or None if every mixed
    derivative vanishes at every point.
    """
    for pt in points:
        ctx = JetContext(n, pt, "z", 2)
        J = ctx.eval(expr)
        for j in range(n):
            for l in range(n):
                mono = [0] * (2 * n)
                mono[j] += 1
                mono[n + l] += 1
                v = J.coeff(mono)
                if v:
                    return j + 1, l + 1, pt, v
    return None


def check_not_pluriharmonic(expr: ExprNode, n: int, points: Sequence[SamplePoint],
                            name: str = "expr") -> Report:
    wit = mixed_derivative_witness(expr, n, points)
    rep = Report(f"not_pluriharmonic:{name}")
    if wit is None:
        rep.add(check(f"{name}: some mixed derivative is nonzero", False, at_points(len(points)),
                      "all mixed derivatives vanish at every sampled point", N=n))
    else:
        j, l, pt, v = wit
        # a single nonzero exact value already disproves pluriharmonicity
        rep.add(check(f"{name}: some mixed derivative is nonzero", True, "exact-proof", None,
                      N=n, j=j, l=l, point=pt.text(), value=format_scalar(v)))
    return rep


@dataclass
class EigenResult:
    eigenvalue: GaussianRational | None
    member: bool | None
    j_values: list = field(default_factory=list)
    valid_points: int = 0
    message: str = ""


def check_eigen(expr: ExprNode, n: int, points: Sequence[SamplePoint], min_points: int = 5) -> EigenResult:
    """Is ``expr`` an eigenfunction of the invariant Laplacian at the sampled points?"""
    ratio = None
    valid = 0
    for pt in points:
        val = eval_value(expr, pt)
        if not val:
            continue
        r = inv_laplacian_value(expr, pt, n) / val
        valid += 1
        if ratio is None:
            ratio = r
        elif r != ratio:
            return EigenResult(None, None, [], valid,
                               f"not an eigenfunction at sampled points: ratios {format_scalar(ratio)} "
                               f"and {format_scalar(r)} (at {pt.text()})")
    if valid < min_points:
        return EigenResult(None, None, [], valid, f"only {valid} points with nonzero value")
    js = [j for j in range(n + 1) if ratio == j * (j - n)]
    return EigenResult(ratio, bool(js), js, valid,
                       f"eigenvalue {format_scalar(ratio)}" + (f" = j(j-N) for j in {js}" if js else
                                                               " is not of the form j(j-N)"))


def remark_example(n: int) -> ExprNode:
    """The M-harmonic, non-pluriharmonic examples for N = 3 and N = 2."""
    a = (1 - var("z", 1)).recip()
    b = (1 - var("w", 1)).recip()
    if n == 3:
        return var("z", 2) * var("w", 3) * a * b
    if n == 2:
        return var("z", 1) * var("w", 2) * a * b - const(Fraction(1, 2)) * var("w", 2) ** 2 * var("z", 2) * a * b ** 2
    raise ValueError("the examples exist for N = 2 and N = 3")


def mharmonic_suite(points_n2: Sequence[SamplePoint], points_n3: Sequence[SamplePoint]) -> Report:
    rep = Report("mharmonic_examples")
    for n, pts in ((3, points_n3), (2, points_n2)):
        e = remark_example(n)
        rep.extend(check_mharmonic(e, n, pts, name=f"example N={n}").checks)
        rep.extend(check_not_pluriharmonic(e, n, pts, name=f"example N={n}").checks)
    return rep


__all__ = [
    "ExprNode", "SamplePoint", "Jet", "JetSpace", "JetContext", "EigenResult",
    "const", "var", "esum", "eprod", "expr_from_bipoly",
    "random_points", "eval_value", "eval_jet",
    "kernel_expr", "KERNELS", "IDENTITIES", "identity_sides", "default_omega",
    "mobius_components", "mobius_point", "check_omega",
    "verify_pointwise_identity", "identity_suite",
    "inv_laplacian_value", "check_mharmonic", "mixed_derivative_witness",
    "check_not_pluriharmonic", "check_eigen", "remark_example", "mharmonic_suite",
]
