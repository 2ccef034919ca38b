"""Truncated Toeplitz, Hankel and rank-one operators and Berezin coefficient series.

Operators act on unnormalized monomials: an :class:`OperatorMatrix` stores, for
each column ``alpha``, the finitely many ``gamma`` with ``T z^alpha = sum
entry(gamma, alpha) z^gamma``.  Everything stays in Q(i).

Symbols are quasi-homogeneous: finite sums of ``z^a zbar^b rho(t)`` with
``t = |z|^2`` and ``rho`` a combination of ``t^k`` and ``t^k log t``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial
from typing import Iterable, Iterator, Mapping

from .arith import (
    ONE,
    ZERO,
    GaussianRational,
    format_scalar,
    grlex_key,
    monomial_norm_sq,
    multi_indices,
    multinomial,
    parse_scalar,
    sphere_moment,
    to_gaussian,
)
from .errors import GuardBandViolation, NonIntegrable, NotHolomorphic
from .linalg import exact_rank
from .symbolic import BiPolynomial


def _add(a: tuple, b: tuple) -> tuple:
    return tuple(x + y for x, y in zip(a, b))


def _sub(a: tuple, b: tuple) -> tuple | None:
    out = tuple(x - y for x, y in zip(a, b))
    return out if min(out, default=0) >= 0 else None


def _mono_text(a: tuple) -> str:
    return "(" + ",".join(map(str, a)) + ")"


# -- radial profiles -----------------------------------------------------------

class RadialProfile:
    """``sum_k c_k t^k + sum_k d_k t^k log t`` with finitely many terms.

    Coefficients are Gaussian rationals (conjugating a symbol conjugates them).
    """

    __slots__ = ("power", "log")

    def __init__(self, power: Mapping[int, object] | None = None, log: Mapping[int, object] | None = None):
        self.power = {int(k): to_gaussian(c) for k, c in (power or {}).items() if to_gaussian(c)}
        self.log = {int(k): to_gaussian(c) for k, c in (log or {}).items() if to_gaussian(c)}

    @classmethod
    def one(cls) -> "RadialProfile":
        return cls({0: 1})

    @classmethod
    def t_power(cls, k: int, c=1) -> "RadialProfile":
        return cls({k: c})

    @classmethod
    def t_log(cls, k: int = 0, c=1) -> "RadialProfile":
        return cls({}, {k: c})

    def is_zero(self) -> bool:
        return not self.power and not self.log

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __eq__(self, other) -> bool:
        if not isinstance(other, RadialProfile):
            return NotImplemented
        return self.power == other.power and self.log == other.log

    def __hash__(self):
        return hash((frozenset(self.power.items()), frozenset(self.log.items())))

    def __repr__(self) -> str:
        return f"RadialProfile({self.pretty()!r})"

    def exponents(self) -> list[int]:
        return sorted(set(self.power) | set(self.log))

    def min_exponent(self) -> int | None:
        ks = self.exponents()
        return ks[0] if ks else None

    def __add__(self, other: "RadialProfile") -> "RadialProfile":
        power = dict(self.power)
        for k, c in other.power.items():
            power[k] = power.get(k, ZERO) + c
        log = dict(self.log)
        for k, c in other.log.items():
            log[k] = log.get(k, ZERO) + c
        return RadialProfile(power, log)

    def __neg__(self) -> "RadialProfile":
        return self.scale(-1)

    def __sub__(self, other: "RadialProfile") -> "RadialProfile":
        return self + (-other)

    def scale(self, c) -> "RadialProfile":
        c = to_gaussian(c)
        return RadialProfile({k: v * c for k, v in self.power.items()}, {k: v * c for k, v in self.log.items()})

    def shift(self, m: int) -> "RadialProfile":
        """Multiply by ``t^m``."""
        return RadialProfile({k + m: v for k, v in self.power.items()}, {k + m: v for k, v in self.log.items()})

    def __mul__(self, other: "RadialProfile") -> "RadialProfile":
        if self.log and other.log:
            raise ValueError("product of two log profiles leaves the supported class")
        out = RadialProfile()
        for k, c in self.power.items():
            out = out + RadialProfile({k + j: c * d for j, d in other.power.items()},
                                      {k + j: c * d for j, d in other.log.items()})
        for k, c in self.log.items():
            out = out + RadialProfile({}, {k + j: c * d for j, d in other.power.items()})
        return out

    def conjugate(self) -> "RadialProfile":
        return RadialProfile({k: v.conjugate() for k, v in self.power.items()},
                             {k: v.conjugate() for k, v in self.log.items()})

    def pretty(self) -> str:
        parts = []
        for k in self.exponents():
            for c, lg in ((self.power.get(k), False), (self.log.get(k), True)):
                if c is None:
                    continue
                parts.append((c, _t_text(k, lg)))
        return _join_terms(parts)

    def to_json(self) -> list:
        out = []
        for k in self.exponents():
            if k in self.power:
                out.append({"t": k, "log": False, "coeff": format_scalar(self.power[k])})
            if k in self.log:
                out.append({"t": k, "log": True, "coeff": format_scalar(self.log[k])})
        return out


def _t_text(k: int, lg: bool) -> str:
    parts = []
    if k == 1:
        parts.append("t")
    elif k:
        parts.append(f"t^{k}" if k > 0 else f"t^({k})")
    if lg:
        parts.append("log(t)")
    return "*".join(parts)


def _join_terms(parts: list[tuple[GaussianRational, str]]) -> str:
    """Human-readable sum like ``1 + log(t)`` or ``-1/2*z1*zbar2``."""
    if not parts:
        return "0"
    out = []
    for i, (c, body) in enumerate(parts):
        neg = c.is_real() and c.re < 0
        cc = -c if neg else c
        if cc.is_real():
            q = cc.re
            ctext = str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"
        else:
            ctext = f"({format_scalar(cc)})"
        if body:
            text = body if cc == ONE else f"{ctext}*{body}"
        else:
            text = ctext
        if i == 0:
            out.append(("-" if neg else "") + text)
        else:
            out.append((" - " if neg else " + ") + text)
    return "".join(out)


def radial_mellin(rho: RadialProfile, zeta) -> GaussianRational:
    """``int_0^1 t^(zeta-1) rho(t) dt`` exactly."""
    zeta = Fraction(zeta)
    total = ZERO
    for k, c in rho.power.items():
        if zeta + k <= 0:
            raise NonIntegrable(f"t^{k} is not integrable against t^(zeta-1) at zeta = {zeta}")
        total = total + c / (zeta + k)
    for k, c in rho.log.items():
        if zeta + k <= 0:
            raise NonIntegrable(f"t^{k} log t is not integrable against t^(zeta-1) at zeta = {zeta}")
        total = total - c / ((zeta + k) ** 2)
    return total


# -- quasi-homogeneous symbols ---------------------------------------------

class QuasiHomSymbol:
    """Finite sum of ``z^a zbar^b rho(|z|^2)``; integrability is checked at construction."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: Iterable[tuple] = ()):
        self.n = n
        merged: dict[tuple, RadialProfile] = {}
        for a, b, rho in terms:
            a = tuple(a)
            b = tuple(b)
            if len(a) != n or len(b) != n:
                raise ValueError(f"term exponents {a}, {b} do not have dimension {n}")
            if min(a + b, default=0) < 0:
                raise ValueError("negative exponent in symbol term")
            if not isinstance(rho, RadialProfile):
                rho = RadialProfile({0: rho})
            key = (a, b)
            merged[key] = merged[key] + rho if key in merged else rho
        self.terms = [(a, b, rho) for (a, b), rho in
                      sorted(merged.items(), key=lambda kv: (sum(kv[0][0]) + sum(kv[0][1]), grlex_key(kv[0][0]), grlex_key(kv[0][1])))
                      if rho]
        for a, b, rho in self.terms:
            for k in rho.exponents():
                if sum(a) + sum(b) + 2 * k <= -2 * n:
                    raise NonIntegrable(
                        f"term z^{_mono_text(a)} zbar^{_mono_text(b)} t^{k} is not integrable on the ball (N={n})")

    @classmethod
    def from_bipoly(cls, p: BiPolynomial) -> "QuasiHomSymbol":
        return bipoly_to_symbol(p)

    @classmethod
    def monomial(cls, a, b, rho: RadialProfile | None = None) -> "QuasiHomSymbol":
        a = tuple(a)
        return cls(len(a), [(a, tuple(b), rho if rho is not None else RadialProfile.one())])

    @classmethod
    def zero(cls, n: int) -> "QuasiHomSymbol":
        return cls(n, [])

    def is_zero(self) -> bool:
        return not self.terms

    def canonical(self) -> "QuasiHomSymbol":
        """Fold ``min(a, b)`` into powers of t when N = 1 (only there is z zbar = t)."""
        if self.n != 1:
            return self
        out = []
        for a, b, rho in self.terms:
            m = min(a[0], b[0])
            out.append(((a[0] - m,), (b[0] - m,), rho.shift(m)))
        return QuasiHomSymbol(1, out)

    def __add__(self, other: "QuasiHomSymbol") -> "QuasiHomSymbol":
        other = _as_symbol(other, self.n)
        return QuasiHomSymbol(self.n, list(self.terms) + list(other.terms))

    __radd__ = __add__

    def __neg__(self) -> "QuasiHomSymbol":
        return self.scale(-1)

    def __sub__(self, other) -> "QuasiHomSymbol":
        return self + (-_as_symbol(other, self.n))

    def scale(self, c) -> "QuasiHomSymbol":
        return QuasiHomSymbol(self.n, [(a, b, rho.scale(c)) for a, b, rho in self.terms])

    def __mul__(self, other) -> "QuasiHomSymbol":
        if isinstance(other, (int, Fraction, GaussianRational)):
            return self.scale(other)
        other = _as_symbol(other, self.n)
        out = []
        for a1, b1, r1 in self.terms:
            for a2, b2, r2 in other.terms:
                out.append((_add(a1, a2), _add(b1, b2), r1 * r2))
        return QuasiHomSymbol(self.n, out)

    __rmul__ = __mul__

    def conjugate(self) -> "QuasiHomSymbol":
        return QuasiHomSymbol(self.n, [(b, a, rho.conjugate()) for a, b, rho in self.terms])

    def max_shift(self) -> int:
        """Largest ``|a| - |b|``: how far T_sym can raise the degree of a column."""
        return max((sum(a) - sum(b) for a, b, _ in self.terms), default=0)

    def is_bipoly(self) -> bool:
        return all(not rho.log and min(rho.power) >= 0 for _, _, rho in self.terms)

    def to_bipoly(self) -> BiPolynomial:
        """Expand ``t = sum z_j zbar_j``; only for symbols without logs or negative powers."""
        if not self.is_bipoly():
            raise ValueError("symbol has log terms or negative powers of t")
        t = BiPolynomial.norm_sq(self.n)
        out = BiPolynomial.zero(self.n)
        for a, b, rho in self.terms:
            base = BiPolynomial.monomial(a, b)
            for k, c in rho.power.items():
                out = out + (base * t ** k).scale(c)
        return out

    def _expanded_parts(self) -> tuple[BiPolynomial, BiPolynomial, int]:
        shift = max(0, -min((rho.min_exponent() for _, _, rho in self.terms), default=0))
        t = BiPolynomial.norm_sq(self.n)
        poly = BiPolynomial.zero(self.n)
        logs = BiPolynomial.zero(self.n)
        for a, b, rho in self.terms:
            base = BiPolynomial.monomial(a, b)
            for k, c in rho.power.items():
                poly = poly + (base * t ** (k + shift)).scale(c)
            for k, c in rho.log.items():
                logs = logs + (base * t ** (k + shift)).scale(c)
        return poly, logs, shift

    def equals(self, other) -> bool:
        """Equality as functions on the ball (normal forms may differ)."""
        diff = self - _as_symbol(other, self.n)
        if diff.is_zero():
            return True
        poly, logs, _ = diff._expanded_parts()
        return poly.is_zero() and logs.is_zero()

    def __eq__(self, other) -> bool:
        if isinstance(other, (QuasiHomSymbol, BiPolynomial)):
            return self.equals(other)
        return NotImplemented

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"QuasiHomSymbol({self.n}, {self.pretty()!r})"

    def __str__(self) -> str:
        return self.pretty()

    def atoms(self) -> Iterator[tuple[tuple, tuple, int, bool, GaussianRational]]:
        for a, b, rho in self.terms:
            for k in rho.exponents():
                if k in rho.power:
                    yield a, b, k, False, rho.power[k]
                if k in rho.log:
                    yield a, b, k, True, rho.log[k]

    def pretty(self) -> str:
        """Human form, e.g. ``1 + log(t)`` or ``z1*zbar2*t^(-1)``."""
        parts = []
        for a, b, k, lg, c in self.atoms():
            factors = []
            for j, e in enumerate(a, start=1):
                if e:
                    factors.append(f"z{j}" if e == 1 else f"z{j}^{e}")
            for j, e in enumerate(b, start=1):
                if e:
                    factors.append(f"zbar{j}" if e == 1 else f"zbar{j}^{e}")
            tt = _t_text(k, lg)
            if tt:
                factors.append(tt)
            parts.append((c, "*".join(factors)))
        if self.n == 1:
            parts = [(c, body.replace("zbar1", "zbar").replace("z1", "z")) for c, body in parts]
        return _join_terms(parts)

    def to_text(self) -> str:
        """Grammar form ``coeff * z^a * zbar^b * t^k [* log(t)]`` summed with `` + ``."""
        if self.is_zero():
            return "0"
        chunks = []
        for a, b, k, lg, c in self.atoms():
            s = format_scalar(c)
            if not c.is_real():
                s = f"({s})"
            s += f" * z^{_mono_text(a)} * zbar^{_mono_text(b)} * t^{k}"
            if lg:
                s += " * log(t)"
            chunks.append(s)
        return " + ".join(chunks)

    def to_json(self) -> list:
        return [{"alpha": list(a), "beta": list(b), "t": k, "log": lg, "coeff": format_scalar(c)}
                for a, b, k, lg, c in self.atoms()]

    @classmethod
    def from_json(cls, data: Iterable[Mapping], n: int) -> "QuasiHomSymbol":
        terms = []
        for t in data:
            c = parse_scalar(str(t["coeff"]))
            k = int(t.get("t", 0))
            rho = RadialProfile({}, {k: c}) if t.get("log") else RadialProfile({k: c})
            terms.append((tuple(t["alpha"]), tuple(t["beta"]), rho))
        return cls(n, terms)


def bipoly_to_symbol(p: BiPolynomial) -> QuasiHomSymbol:
    """Each term ``c z^a zbar^b`` becomes ``(a, b, rho = c)``."""
    return QuasiHomSymbol(p.n, [(a, b, RadialProfile({0: c})) for (a, b), c in p.sorted_items()])


def _as_symbol(x, n: int) -> QuasiHomSymbol:
    if isinstance(x, QuasiHomSymbol):
        if x.n != n:
            raise ValueError("dimension mismatch")
        return x
    if isinstance(x, BiPolynomial):
        return bipoly_to_symbol(x)
    return QuasiHomSymbol(n, [((0,) * n, (0,) * n, RadialProfile({0: x}))])


def as_symbol(x, n: int | None = None) -> QuasiHomSymbol:
    if n is None:
        n = x.n
    return _as_symbol(x, n)


def symbol_moment(a: tuple, b: tuple, rho: RadialProfile, mu: tuple, n: int) -> GaussianRational:
    """``int z^mu zbar^mu rho(|z|^2) dV = N * mellin(rho, N+|mu|) * sigma_mu``."""
    return radial_mellin(rho, n + sum(mu)) * (n * sphere_moment(mu, n))


def integral(sym, n: int | None = None) -> GaussianRational:
    """``int_B sym dV``: only diagonal terms a = b contribute."""
    sym = as_symbol(sym, n)
    total = ZERO
    for a, b, rho in sym.terms:
        if a == b:
            total = total + symbol_moment(a, b, rho, a, sym.n)
    return total


# -- operator matrices ----------------------------------------------------------

class OperatorMatrix:
    """Columns ``alpha`` with ``|alpha| <= d_in`` of an operator on monomials."""

    __slots__ = ("n", "d_in", "cols")

    def __init__(self, n: int, d_in: int, cols: Mapping[tuple, Mapping[tuple, GaussianRational]] | None = None):
        self.n = n
        self.d_in = d_in
        self.cols: dict[tuple, dict[tuple, GaussianRational]] = {}
        for alpha in multi_indices(n, d_in):
            src = (cols or {}).get(alpha, {})
            self.cols[alpha] = {g: to_gaussian(v) for g, v in src.items() if to_gaussian(v)}

    @classmethod
    def zero(cls, n: int, d_in: int) -> "OperatorMatrix":
        return cls(n, d_in)

    def column(self, alpha: tuple) -> dict:
        alpha = tuple(alpha)
        try:
            return self.cols[alpha]
        except KeyError:
            raise GuardBandViolation(
                f"column {_mono_text(alpha)} was not built (matrix has |alpha| <= {self.d_in})") from None

    def entry(self, gamma: tuple, alpha: tuple) -> GaussianRational:
        return self.column(alpha).get(tuple(gamma), ZERO)

    def restrict(self, d: int) -> "OperatorMatrix":
        if d > self.d_in:
            raise GuardBandViolation(f"cannot restrict to degree {d} > built degree {self.d_in}")
        return OperatorMatrix(self.n, d, {a: c for a, c in self.cols.items() if sum(a) <= d})

    def _pair(self, other: "OperatorMatrix") -> int:
        if other.n != self.n:
            raise ValueError("dimension mismatch")
        return min(self.d_in, other.d_in)

    def __add__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        d = self._pair(other)
        out = {}
        for alpha in multi_indices(self.n, d):
            col = dict(self.cols[alpha])
            for g, v in other.cols[alpha].items():
                col[g] = col.get(g, ZERO) + v
            out[alpha] = col
        return OperatorMatrix(self.n, d, out)

    def __neg__(self) -> "OperatorMatrix":
        return self.scale(-1)

    def __sub__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        return self + (-other)

    def scale(self, c) -> "OperatorMatrix":
        c = to_gaussian(c)
        return OperatorMatrix(self.n, self.d_in, {a: {g: v * c for g, v in col.items()} for a, col in self.cols.items()})

    def __rmul__(self, c) -> "OperatorMatrix":
        return self.scale(c)

    def compose(self, inner: "OperatorMatrix") -> "OperatorMatrix":
        """``self @ inner``; every row reached by ``inner`` must be a built column of ``self``."""
        return compose(self, inner)

    def __matmul__(self, inner: "OperatorMatrix") -> "OperatorMatrix":
        return compose(self, inner)

    def is_zero(self) -> bool:
        return not any(self.cols.values())

    def rows(self) -> list[tuple]:
        rs = set()
        for col in self.cols.values():
            rs.update(col)
        return sorted(rs, key=grlex_key)

    def dense(self, d: int | None = None) -> tuple[list, list, list]:
        """(row indices, column indices, rows) for columns ``|alpha| <= d``."""
        m = self if d is None else self.restrict(d)
        cols = list(multi_indices(self.n, m.d_in))
        rows = m.rows()
        table = [[m.cols[a].get(g, ZERO) for a in cols] for g in rows]
        return rows, cols, table

    def rank(self, d: int | None = None) -> int:
        """Exact rank of the truncation to columns ``|alpha| <= d`` (a lower bound)."""
        _, _, table = self.dense(d)
        return exact_rank(table)

    def to_json(self) -> dict:
        columns = []
        for alpha in multi_indices(self.n, self.d_in):
            col = self.cols[alpha]
            columns.append({"col": list(alpha),
                            "entries": [{"row": list(g), "value": format_scalar(col[g])}
                                        for g in sorted(col, key=grlex_key)]})
        return {"dimension": self.n, "d_in": self.d_in, "columns": columns}

    @classmethod
    def from_json(cls, data: Mapping) -> "OperatorMatrix":
        cols = {tuple(c["col"]): {tuple(e["row"]): parse_scalar(e["value"]) for e in c["entries"]}
                for c in data["columns"]}
        return cls(int(data["dimension"]), int(data["d_in"]), cols)


def compose(outer: OperatorMatrix, inner: OperatorMatrix) -> OperatorMatrix:
    if outer.n != inner.n:
        raise ValueError("dimension mismatch")
    out = {}
    for alpha, col in inner.cols.items():
        acc: dict = {}
        for g, v in col.items():
            if g not in outer.cols:
                raise GuardBandViolation(
                    f"composition needs column {_mono_text(g)} of the outer operator, "
                    f"built only for |alpha| <= {outer.d_in}")
            for r, u in outer.cols[g].items():
                acc[r] = acc.get(r, ZERO) + u * v
        out[alpha] = acc
    return OperatorMatrix(inner.n, inner.d_in, out)


def toeplitz_matrix(sym, d_in: int, d_out: int | None = None) -> OperatorMatrix:
    """Exact matrix of T_sym on columns ``|alpha| <= d_in``.

    For a term ``(a, b, rho)`` column alpha goes to ``gamma = alpha + a - b``
    with entry ``N mellin(rho, N+|mu|) sigma_mu / ||z^gamma||^2``, ``mu = alpha + a``.
    """
    sym = as_symbol(sym)
    n = sym.n
    if d_out is not None and d_out < d_in + sym.max_shift():
        raise GuardBandViolation(f"d_out = {d_out} is below d_in + max shift = {d_in + sym.max_shift()}")
    cols = {}
    for alpha in multi_indices(n, d_in):
        col: dict = {}
        for a, b, rho in sym.terms:
            mu = _add(alpha, a)
            gamma = _sub(mu, b)
            if gamma is None:
                continue
            v = symbol_moment(a, b, rho, mu, n) / monomial_norm_sq(gamma, n)
            col[gamma] = col.get(gamma, ZERO) + v
        cols[alpha] = col
    return OperatorMatrix(n, d_in, cols)


def rank_one_matrix(x: BiPolynomial, y: BiPolynomial, d_in: int) -> OperatorMatrix:
    """``(x (x) y) h = <h, y> x``; column alpha is ``conj(y_alpha) ||z^alpha||^2 x``."""
    if not x.is_holomorphic() or not y.is_holomorphic():
        raise NotHolomorphic("rank-one factors must be holomorphic")
    n = x.n
    zero = (0,) * n
    xcol = {a: c for (a, _), c in x.terms.items()}
    cols = {}
    for alpha in multi_indices(n, d_in):
        yc = y.terms.get((alpha, zero))
        if yc is None:
            cols[alpha] = {}
            continue
        f = yc.conjugate() * monomial_norm_sq(alpha, n)
        cols[alpha] = {g: c * f for g, c in xcol.items()}
    return OperatorMatrix(n, d_in, cols)


def toeplitz_product(phi, psi, d: int) -> OperatorMatrix:
    """``T_phi T_psi`` on columns ``|alpha| <= d`` with the needed guard band."""
    phi = as_symbol(phi)
    psi = as_symbol(psi, phi.n)
    inner = toeplitz_matrix(psi, d)
    outer = toeplitz_matrix(phi, d + max(0, psi.max_shift()))
    return compose(outer, inner)


def hankel_product(phi, psi, d: int) -> OperatorMatrix:
    """``T_{phi psi} - T_phi T_psi`` (the product of Hankel operators) at degree d."""
    phi = as_symbol(phi)
    psi = as_symbol(psi, phi.n)
    return toeplitz_matrix(phi * psi, d) - toeplitz_product(phi, psi, d)


@dataclass
class Comparison:
    equal: bool
    degree: int
    witness: str | None = None

    def __bool__(self) -> bool:
        return self.equal


def operator_equal(A: OperatorMatrix, B: OperatorMatrix, d: int) -> Comparison:
    """Exact comparison on every column ``|alpha| <= d``."""
    if A.n != B.n:
        raise ValueError("dimension mismatch")
    if d > A.d_in or d > B.d_in:
        raise GuardBandViolation(f"comparison at degree {d} needs columns beyond what was built "
                                 f"({A.d_in}, {B.d_in})")
    for alpha in multi_indices(A.n, d):
        ca, cb = A.cols[alpha], B.cols[alpha]
        for g in sorted(set(ca) | set(cb), key=grlex_key):
            va, vb = ca.get(g, ZERO), cb.get(g, ZERO)
            if va != vb:
                return Comparison(False, d, f"column {_mono_text(alpha)}, row {_mono_text(g)}: "
                                            f"{format_scalar(va)} vs {format_scalar(vb)}")
    return Comparison(True, d)


# -- Berezin coefficient series -----------------------------------------------

class CoeffSeries:
    """Exact coefficients ``c_{alpha, beta}`` of ``z^alpha zbar^beta`` for ``|alpha|+|beta| <= D``."""

    __slots__ = ("n", "degree", "coeffs")

    def __init__(self, n: int, degree: int, coeffs: Mapping[tuple, GaussianRational]):
        self.n = n
        self.degree = degree
        self.coeffs = {k: to_gaussian(v) for k, v in coeffs.items()
                       if to_gaussian(v) and sum(k[0]) + sum(k[1]) <= degree}

    @classmethod
    def from_bipoly(cls, p: BiPolynomial, degree: int | None = None) -> "CoeffSeries":
        """The (finite) series of a polynomial, truncated at ``degree``."""
        return cls(p.n, p.degree() if degree is None else degree, p.terms)

    def coeff(self, alpha, beta) -> GaussianRational:
        alpha, beta = tuple(alpha), tuple(beta)
        if sum(alpha) + sum(beta) > self.degree:
            raise GuardBandViolation(f"coefficient of degree {sum(alpha) + sum(beta)} beyond D = {self.degree}")
        return self.coeffs.get((alpha, beta), ZERO)

    def to_bipoly(self) -> BiPolynomial:
        return BiPolynomial(self.n, self.coeffs)

    def matches(self, p) -> Comparison:
        """Compare with the series of a polynomial (or symbol without logs) up to D."""
        if isinstance(p, QuasiHomSymbol):
            p = p.to_bipoly()
        target = {k: c for k, c in p.terms.items() if sum(k[0]) + sum(k[1]) <= self.degree}
        for k in sorted(set(target) | set(self.coeffs),
                        key=lambda k: (sum(k[0]) + sum(k[1]), grlex_key(k[0]), grlex_key(k[1]))):
            a, b = target.get(k, ZERO), self.coeffs.get(k, ZERO)
            if a != b:
                return Comparison(False, self.degree,
                                  f"c[{_mono_text(k[0])},{_mono_text(k[1])}] = {format_scalar(b)}, "
                                  f"expected {format_scalar(a)}")
        return Comparison(True, self.degree)

    def to_json(self) -> dict:
        items = sorted(self.coeffs.items(),
                       key=lambda kv: (sum(kv[0][0]) + sum(kv[0][1]), grlex_key(kv[0][0]), grlex_key(kv[0][1])))
        return {"dimension": self.n, "degree": self.degree,
                "coefficients": [{"alpha": list(a), "beta": list(b), "coeff": format_scalar(c)}
                                 for (a, b), c in items]}

    @classmethod
    def from_json(cls, data: Mapping) -> "CoeffSeries":
        return cls(int(data["dimension"]), int(data["degree"]),
                   {(tuple(t["alpha"]), tuple(t["beta"])): parse_scalar(t["coeff"]) for t in data["coefficients"]})


def _kernel_coeff(k: tuple, n: int) -> int:
    """Coefficient of ``z^k conj(xi)^k`` in ``(1 - <z, xi>)^-(N+1)``."""
    return factorial(n + sum(k)) // (factorial(n) * (factorial(sum(k)) // multinomial(k)))


def berezin_series(sym, degree: int, n: int | None = None) -> CoeffSeries:
    """Taylor coefficients of B(sym) up to total degree ``degree``, each exact."""
    sym = as_symbol(sym, n)
    n = sym.n
    # moments M(k, l) = int sym * conj(xi)^k xi^l dV, nonzero only when a + l = b + k
    moments: dict = {}

    def moment(k: tuple, l: tuple) -> GaussianRational:
        key = (k, l)
        v = moments.get(key)
        if v is None:
            v = ZERO
            for a, b, rho in sym.terms:
                mu = _add(a, l)
                if mu == _add(b, k):
                    v = v + symbol_moment(a, b, rho, mu, n)
            moments[key] = v
        return v

    coeffs = {}
    for total in range(degree + 1):
        for ab in multi_indices(2 * n, total):
            if sum(ab) != total:
                continue
            alpha, beta = ab[:n], ab[n:]
            c = ZERO
            for mu in multi_indices(n, min(sum(alpha), sum(beta))):
                ka = _sub(alpha, mu)
                kb = _sub(beta, mu)
                if ka is None or kb is None:
                    continue
                m = moment(ka, kb)
                if not m:
                    continue
                j = sum(mu)
                w = (-1) ** j * comb(n + 1, j) * multinomial(mu) * _kernel_coeff(ka, n) * _kernel_coeff(kb, n)
                c = c + m * w
            if c:
                coeffs[(alpha, beta)] = c
    return CoeffSeries(n, degree, coeffs)


@dataclass
class SeriesAnalysis:
    rank_lower_bound: int
    violations: list
    degree: int

    @property
    def pluriharmonic_to_degree(self) -> bool:
        return not self.violations


def series_analyze(cs: CoeffSeries) -> SeriesAnalysis:
    """Rank lower bound of ``[c_{alpha, beta}]`` and the non-pluriharmonic coefficients.

    Only blocks ``|alpha| <= p, |beta| <= D - p`` are fully known, so the rank
    is maximized over p; it is a lower bound for the rank of the infinite matrix.
    """
    n, d = cs.n, cs.degree
    best = 0
    for p in range(d + 1):
        rows = multi_indices(n, p)
        cols = multi_indices(n, d - p)
        if min(len(rows), len(cols)) <= best:
            continue
        table = [[cs.coeffs.get((a, b), ZERO) for b in cols] for a in rows]
        best = max(best, exact_rank(table))
    violations = sorted(((a, b) for (a, b) in cs.coeffs if any(a) and any(b)),
                        key=lambda k: (sum(k[0]) + sum(k[1]), grlex_key(k[0]), grlex_key(k[1])))
    return SeriesAnalysis(best, violations, d)


__all__ = [
    "RadialProfile", "QuasiHomSymbol", "OperatorMatrix", "CoeffSeries", "Comparison", "SeriesAnalysis",
    "bipoly_to_symbol", "as_symbol", "radial_mellin", "symbol_moment", "integral",
    "toeplitz_matrix", "rank_one_matrix", "compose", "toeplitz_product", "hankel_product",
    "operator_equal", "berezin_series", "series_analyze",
]
