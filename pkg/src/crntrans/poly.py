"""Sparse multivariate polynomials over Q in named symbols.

A polynomial is a mapping from monomials to nonzero ``Fraction``
coefficients; a monomial is a tuple of ``(symbol, exponent)`` pairs sorted
by a natural-order key on the symbol name (so ``k2`` sorts before ``k10``).

Also here: rational functions, power products with rational exponents, an
exact identity test for "does this power product depend on these symbols",
and a best-effort ``simplify_ratio`` used to present adjustment factors.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import Iterable, Mapping, Union

Monomial = tuple  # tuple[tuple[str, int], ...]


def natural_key(name: str):
    parts = re.split(r"(\d+)", name)
    return tuple(int(p) if i % 2 else p for i, p in enumerate(parts))


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for s, e in b:
        d[s] = d.get(s, 0) + e
    return tuple(sorted(d.items(), key=lambda kv: natural_key(kv[0])))


def _mono_div(a: Monomial, b: Monomial) -> Monomial | None:
    d = dict(a)
    for s, e in b:
        have = d.get(s, 0)
        if have < e:
            return None
        if have == e:
            del d[s]
        else:
            d[s] = have - e
    return tuple(sorted(d.items(), key=lambda kv: natural_key(kv[0])))


def _mono_str(mono: Monomial) -> str:
    return "*".join(s if e == 1 else f"{s}^{e}" for s, e in mono)


class Polynomial:
    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, Fraction] | None = None):
        clean = {}
        if terms:
            for mono, c in terms.items():
                if c:
                    clean[mono] = Fraction(c)
        self._terms = clean
        self._hash = None

    # --- constructors -----------------------------------------------------

    @classmethod
    def constant(cls, c) -> "Polynomial":
        return cls({(): Fraction(c)})

    @classmethod
    def symbol(cls, name: str) -> "Polynomial":
        return cls({((name, 1),): Fraction(1)})

    @classmethod
    def monomial(cls, exps: Mapping[str, int], coeff=1) -> "Polynomial":
        mono = tuple(sorted(((s, e) for s, e in exps.items() if e), key=lambda kv: natural_key(kv[0])))
        return cls({mono: Fraction(coeff)})

    @classmethod
    def parse(cls, text: str) -> "Polynomial":
        return _Parser(text).parse()

    # --- basic protocol ----------------------------------------------------

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(m == () for m in self._terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return self._terms.get((), Fraction(0))

    def symbols(self) -> frozenset:
        return frozenset(s for mono in self._terms for s, _ in mono)

    def degree(self, symbol: str | None = None) -> int:
        if not self._terms:
            return -1
        if symbol is None:
            return max(sum(e for _, e in m) for m in self._terms)
        return max(dict(m).get(symbol, 0) for m in self._terms)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # --- arithmetic ----------------------------------------------------------

    @staticmethod
    def _lift(x) -> "Polynomial":
        if isinstance(x, Polynomial):
            return x
        if isinstance(x, (int, Fraction)):
            return Polynomial.constant(x)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for mono, c in other._terms.items():
            v = out.get(mono, 0) + c
            if v:
                out[mono] = v
            else:
                out.pop(mono, None)
        return Polynomial(out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial({m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        out: dict = {}
        for ma, ca in self._terms.items():
            for mb, cb in other._terms.items():
                mono = _mono_mul(ma, mb)
                v = out.get(mono, 0) + ca * cb
                if v:
                    out[mono] = v
                else:
                    out.pop(mono, None)
        return Polynomial(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("polynomial powers must be nonnegative integers")
        result = Polynomial.constant(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    # --- evaluation / substitution -----------------------------------------

    def evaluate(self, point: Mapping[str, object]):
        total = 0
        for mono, c in self._terms.items():
            term = c
            for s, e in mono:
                if s not in point:
                    raise KeyError(f"no value for symbol {s!r}")
                term = term * point[s] ** e
            total = total + term
        return total if self._terms else Fraction(0)

    def substitute(self, mapping: Mapping[str, object]) -> "Polynomial":
        """Replace symbols by polynomials or numbers."""
        out = Polynomial()
        for mono, c in self._terms.items():
            term = Polynomial.constant(c)
            keep = {}
            for s, e in mono:
                if s in mapping:
                    term = term * Polynomial._lift(mapping[s]) ** e
                else:
                    keep[s] = e
            out = out + term * Polynomial.monomial(keep)
        return out

    def rename(self, mapping: Mapping[str, str]) -> "Polynomial":
        return self.substitute({a: Polynomial.symbol(b) for a, b in mapping.items()})

    def derivative(self, symbol: str) -> "Polynomial":
        out = {}
        for mono, c in self._terms.items():
            d = dict(mono)
            e = d.get(symbol, 0)
            if not e:
                continue
            if e == 1:
                del d[symbol]
            else:
                d[symbol] = e - 1
            key = tuple(sorted(d.items(), key=lambda kv: natural_key(kv[0])))
            out[key] = out.get(key, 0) + c * e
        return Polynomial(out)

    # --- structure -------------------------------------------------------------

    def monomial_content(self) -> Monomial:
        """Largest monomial dividing every term."""
        if not self._terms:
            return ()
        monos = list(self._terms)
        common = dict(monos[0])
        for mono in monos[1:]:
            d = dict(mono)
            common = {s: min(e, d.get(s, 0)) for s, e in common.items()}
        return tuple(sorted(((s, e) for s, e in common.items() if e), key=lambda kv: natural_key(kv[0])))

    def divide_monomial(self, mono: Monomial) -> "Polynomial":
        out = {}
        for m, c in self._terms.items():
            q = _mono_div(m, mono)
            if q is None:
                raise ValueError("monomial does not divide polynomial")
            out[q] = c
        return Polynomial(out)

    def _order_key(self, mono: Monomial, symbols: list[str]):
        d = dict(mono)
        return tuple(d.get(s, 0) for s in symbols)

    def leading_term(self, symbols: list[str] | None = None) -> tuple[Monomial, Fraction]:
        if not self._terms:
            raise ValueError("zero polynomial has no leading term")
        symbols = symbols or sorted(self.symbols(), key=natural_key)
        mono = max(self._terms, key=lambda m: self._order_key(m, symbols))
        return mono, self._terms[mono]

    def divide_exact(self, other: "Polynomial") -> "Polynomial | None":
        """Quotient q with self == q * other, or None if other does not divide self."""
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        symbols = sorted(self.symbols() | other.symbols(), key=natural_key)
        lt_m, lt_c = other.leading_term(symbols)
        rem = self
        quot = Polynomial()
        while rem:
            m, c = rem.leading_term(symbols)
            q = _mono_div(m, lt_m)
            if q is None:
                return None
            t = Polynomial({q: c / lt_c})
            quot = quot + t
            rem = rem - t * other
        return quot

    def content(self) -> Fraction:
        """Positive rational c such that self / c has coprime integer coefficients."""
        if not self._terms:
            return Fraction(1)
        cs = list(self._terms.values())
        den = reduce(lcm, (c.denominator for c in cs), 1)
        num = reduce(gcd, (int(c * den) for c in cs), 0)
        return Fraction(num, den)

    # --- rendering -------------------------------------------------------------

    def sorted_terms(self):
        symbols = sorted(self.symbols(), key=natural_key)
        return sorted(self._terms.items(), key=lambda kv: self._order_key(kv[0], symbols), reverse=True)

    def __str__(self):
        if not self._terms:
            return "0"
        out = []
        for k, (mono, c) in enumerate(self.sorted_terms()):
            sign = "-" if c < 0 else "+"
            a = abs(c)
            body = _mono_str(mono)
            if not body:
                txt = str(a)
            elif a == 1:
                txt = body
            else:
                txt = f"{a}*{body}"
            if k == 0:
                out.append(("-" if sign == "-" else "") + txt)
            else:
                out.append(f" {sign} {txt}")
        return "".join(out)

    def __repr__(self):
        return f"Polynomial({str(self)!r})"


PolyLike = Union[Polynomial, int, Fraction]


class _Parser:
    """Recursive-descent reader for ``(k1m + k2)*k3p^2 - 1/2*k4`` style text."""

    _tok = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_~']*)|(.))")

    def __init__(self, text: str):
        self.tokens = []
        for num, ident, op in self._tok.findall(text):
            if num:
                self.tokens.append(("num", int(num)))
            elif ident:
                self.tokens.append(("id", ident))
            elif op.strip():
                self.tokens.append(("op", op))
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else (None, None)

    def take(self, op=None):
        tok = self.peek()
        if op is not None and tok != ("op", op):
            raise ValueError(f"expected {op!r} in polynomial text")
        self.pos += 1
        return tok

    def parse(self) -> Polynomial:
        p = self.expr()
        if self.pos != len(self.tokens):
            raise ValueError("trailing input in polynomial text")
        return p

    def expr(self):
        p = self.term()
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            q = self.term()
            p = p + q if op == "+" else p - q
        return p

    def term(self):
        p = self.factor()
        while self.peek() in (("op", "*"), ("op", "/")):
            op = self.take()[1]
            q = self.factor()
            if op == "*":
                p = p * q
            else:
                if not q.is_constant() or q.is_zero():
                    raise ValueError("only division by nonzero constants is supported")
                p = p * Polynomial.constant(1 / q.constant_value())
        return p

    def factor(self):
        if self.peek() == ("op", "-"):
            self.take()
            return -self.factor()
        base = self.atom()
        if self.peek() in (("op", "^"),):
            self.take()
            kind, val = self.take()
            if kind != "num":
                raise ValueError("exponent must be an integer")
            base = base**val
        return base

    def atom(self):
        kind, val = self.take()
        if kind == "num":
            return Polynomial.constant(val)
        if kind == "id":
            return Polynomial.symbol(val)
        if (kind, val) == ("op", "("):
            p = self.expr()
            self.take(")")
            return p
        raise ValueError(f"unexpected token {val!r} in polynomial text")


# ---------------------------------------------------------------------------
# rational functions


class RationalFunction:
    __slots__ = ("num", "den")

    def __init__(self, num: PolyLike, den: PolyLike = 1):
        num = Polynomial._lift(num)
        den = Polynomial._lift(den)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        self.num = num
        self.den = den

    @staticmethod
    def _lift(x) -> "RationalFunction":
        if isinstance(x, RationalFunction):
            return x
        return RationalFunction(x)

    def __add__(self, other):
        o = self._lift(other)
        if self.den == o.den:
            return RationalFunction(self.num + o.num, self.den)
        return RationalFunction(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        o = self._lift(other)
        return RationalFunction(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        return RationalFunction(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        return self._lift(other) / self

    def __pow__(self, k: int):
        if k >= 0:
            return RationalFunction(self.num**k, self.den**k)
        return RationalFunction(self.den ** (-k), self.num ** (-k))

    def __eq__(self, other):
        if isinstance(other, (Polynomial, int, Fraction)):
            other = RationalFunction(other)
        if not isinstance(other, RationalFunction):
            return NotImplemented
        return self.num * other.den == other.num * self.den

    __hash__ = None

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def symbols(self) -> frozenset:
        return self.num.symbols() | self.den.symbols()

    def evaluate(self, point):
        return self.num.evaluate(point) / self.den.evaluate(point)

    def simplified(self) -> "RationalFunction":
        return RationalFunction(*simplify_ratio(self.num, self.den))

    def __str__(self):
        if self.den == 1:
            return str(self.num)
        n = str(self.num)
        d = str(self.den)
        if len(self.num) > 1:
            n = f"({n})"
        if any(ch in d for ch in " */"):
            d = f"({d})"
        return f"{n}/{d}"

    def __repr__(self):
        return f"RationalFunction({str(self)!r})"


def substitute_rational(p: Polynomial, mapping: Mapping[str, RationalFunction]) -> RationalFunction:
    """Substitute rational functions for symbols with a single common denominator."""
    maxdeg = {s: p.degree(s) for s in mapping if s in p.symbols()}
    den = Polynomial.constant(1)
    for s, d in maxdeg.items():
        den = den * RationalFunction._lift(mapping[s]).den ** d
    num = Polynomial()
    for mono, c in p.items():
        term = Polynomial.constant(c)
        keep = {}
        used = {}
        for s, e in mono:
            if s in maxdeg:
                used[s] = e
            else:
                keep[s] = e
        term = term * Polynomial.monomial(keep)
        for s, dmax in maxdeg.items():
            rf = RationalFunction._lift(mapping[s])
            e = used.get(s, 0)
            term = term * rf.num**e * rf.den ** (dmax - e)
        num = num + term
    return RationalFunction(num, den)


# ---------------------------------------------------------------------------
# power products


@dataclass(frozen=True)
class PowerProduct:
    """prod_j (num_j / den_j) ** exp_j with rational exponents."""

    factors: tuple  # tuple[tuple[Polynomial, Polynomial, Fraction], ...]

    def __post_init__(self):
        for num, den, e in self.factors:
            if num.is_zero() or den.is_zero():
                raise ValueError("power product bases must be nonzero")
            if e == 0:
                raise ValueError("power product exponents must be nonzero")

    def common_denominator(self) -> int:
        return reduce(lcm, (Fraction(e).denominator for _, _, e in self.factors), 1)

    def cleared(self) -> tuple[Polynomial, Polynomial, int]:
        """(N, D, L) with self ** L == N / D."""
        L = self.common_denominator()
        N = Polynomial.constant(1)
        D = Polynomial.constant(1)
        for num, den, e in self.factors:
            k = int(Fraction(e) * L)
            if k > 0:
                N, D = N * num**k, D * den**k
            else:
                N, D = N * den ** (-k), D * num ** (-k)
        return N, D, L

    def symbols(self) -> frozenset:
        out = frozenset()
        for num, den, _ in self.factors:
            out |= num.symbols() | den.symbols()
        return out

    def evaluate(self, point):
        """Exact when every exponent is an integer, float otherwise."""
        N, D, L = self.cleared()
        val = N.evaluate(point) / D.evaluate(point)
        if L == 1:
            return val
        return float(val) ** (1.0 / L)

    def __str__(self):
        if not self.factors:
            return "1"
        parts = []
        for num, den, e in self.factors:
            base = f"({num})/({den})"
            parts.append(base if e == 1 else f"[{base}]^({e})")
        return " * ".join(parts)


def power_product_independent_of(pp: PowerProduct, symbols: Iterable[str]) -> bool:
    """Exact test that ``pp`` does not depend on any of ``symbols``.

    With pp**L = N/D, independence of v is the polynomial identity
    N(v, w) D(v', w) == N(v', w) D(v, w) in fresh copies v'.
    """
    N, D, _ = pp.cleared()
    if D.is_zero():
        raise ZeroDivisionError("power product has a zero denominator")
    syms = [s for s in symbols if s in (N.symbols() | D.symbols())]
    if not syms:
        return True
    fresh = {s: s + "'" for s in syms}
    N2, D2 = N.rename(fresh), D.rename(fresh)
    return (N * D2 - N2 * D).is_zero()


# ---------------------------------------------------------------------------
# presentation: cancelling shared factors


def _split_disjoint(P: Polynomial) -> list[Polynomial]:
    """Split P (no monomial content) into factors over disjoint symbol sets.

    Symbols x, y are linked when P * P_xy != P_x * P_y; each connected block
    yields one factor (the coefficient of a fixed monomial in the remaining
    symbols).  Returns [P] when no split exists or P is constant.
    """
    syms = sorted(P.symbols(), key=natural_key)
    if len(syms) < 2 or len(P) < 2:
        return [P]
    parent = {s: s for s in syms}

    def find(s):
        while parent[s] != s:
            parent[s] = parent[parent[s]]
            s = parent[s]
        return s

    first = {s: P.derivative(s) for s in syms}
    for a_i, a in enumerate(syms):
        for b in syms[a_i + 1:]:
            if find(a) == find(b):
                continue
            if P * first[a].derivative(b) != first[a] * first[b]:
                parent[find(a)] = find(b)
    blocks: dict[str, list[str]] = {}
    for s in syms:
        blocks.setdefault(find(s), []).append(s)
    if len(blocks) == 1:
        return [P]
    ref_mono = next(iter(P.items()))[0]
    factors = []
    for members in blocks.values():
        inside = set(members)
        outside_ref = tuple((s, e) for s, e in ref_mono if s not in inside)
        coeff = {}
        for mono, c in P.items():
            outside = tuple((s, e) for s, e in mono if s not in inside)
            if outside == outside_ref:
                inner = tuple((s, e) for s, e in mono if s in inside)
                coeff[inner] = c
        factors.append(Polynomial(coeff))
    prod = reduce(lambda a, b: a * b, factors)
    scale = P.divide_exact(prod)
    if scale is None or not scale.is_constant():
        return [P]
    return [f for f in factors] + [scale]


def _factor_list(P: Polynomial) -> list[Polynomial]:
    mono = P.monomial_content()
    rest = P.divide_monomial(mono)
    out = []
    for s, e in mono:
        out.extend([Polynomial.symbol(s)] * e)
    out.extend(_split_disjoint(rest))
    return out


def simplify_ratio(num: Polynomial, den: Polynomial) -> tuple[Polynomial, Polynomial]:
    """Cancel common monomials and shared variable-disjoint factors of num/den.

    Best effort; the returned ratio always equals the input ratio.
    """
    if den.is_zero():
        raise ZeroDivisionError("simplify_ratio with zero denominator")
    if num.is_zero():
        return Polynomial(), Polynomial.constant(1)
    common = _mono_common(num.monomial_content(), den.monomial_content())
    num, den = num.divide_monomial(common), den.divide_monomial(common)
    nf, df = _factor_list(num), _factor_list(den)
    changed = True
    while changed:
        changed = False
        for i, f in enumerate(nf):
            if f.is_constant():
                continue
            for j, g in enumerate(df):
                if g.is_constant():
                    continue
                q = f.divide_exact(g)
                if q is not None:
                    nf[i], df[j] = q, Polynomial.constant(1)
                    changed = True
                    break
                q = g.divide_exact(f)
                if q is not None:
                    nf[i], df[j] = Polynomial.constant(1), q
                    changed = True
                    break
            if changed:
                break
    one = Polynomial.constant(1)
    N = reduce(lambda a, b: a * b, nf, one)
    D = reduce(lambda a, b: a * b, df, one)
    c = D.content()
    lead = D.leading_term()[1] if not D.is_constant() else D.constant_value()
    if lead < 0:
        c = -c
    return N * Polynomial.constant(1 / c), D * Polynomial.constant(1 / c)


def _mono_common(a: Monomial, b: Monomial) -> Monomial:
    db = dict(b)
    return tuple((s, min(e, db[s])) for s, e in a if s in db)
