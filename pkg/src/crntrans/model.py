"""Reaction network data model, text format and structural matrices.

A network is stored as three tuples: species names, complexes (integer
stoichiometric vectors, deduplicated, first occurrence wins) and reactions
pointing at complex indices.  All indices are 0-based in code; reports
number reactions and complexes from 1.

Text format (one statement per line, ``#`` starts a comment)::

    network futile
    species S E SE P F PF
    S + E <-> SE ; k1p, k1m
    SE -> P + E ; k2
    kinetic S + E := 2 S + E      # generalised mass action only
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .errors import NetworkError, ParseError

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_TERM = re.compile(r"\s*(?:(\d+)\s*\*?\s*)?([A-Za-z_][A-Za-z0-9_]*)\s*$")

Complex = tuple  # tuple[int, ...]


@dataclass(frozen=True)
class Reaction:
    reactant: int
    product: int
    rate: str


@dataclass(frozen=True)
class Network:
    species: tuple[str, ...]
    complexes: tuple[Complex, ...]
    reactions: tuple[Reaction, ...]
    name: str = ""

    def __post_init__(self):
        m = len(self.species)
        if len(set(self.species)) != m:
            raise NetworkError("species names must be unique")
        seen = set()
        for c in self.complexes:
            if len(c) != m:
                raise NetworkError("complex length differs from species count")
            if any(v < 0 for v in c):
                raise NetworkError("complex with a negative coefficient")
            if c in seen:
                raise NetworkError("complexes must be pairwise distinct")
            seen.add(c)
        rates = set()
        used = set()
        n = len(self.complexes)
        for i, rx in enumerate(self.reactions):
            if not (0 <= rx.reactant < n and 0 <= rx.product < n):
                raise NetworkError(f"reaction {i + 1} refers to an unknown complex")
            if rx.reactant == rx.product:
                raise NetworkError(f"reaction {i + 1} is a self-reaction")
            if rx.rate in rates:
                raise NetworkError(f"duplicate rate symbol {rx.rate!r}")
            rates.add(rx.rate)
            used.update((rx.reactant, rx.product))
        if len(used) != n:
            raise NetworkError("every complex must take part in a reaction")

    @property
    def m(self) -> int:
        return len(self.species)

    @property
    def n(self) -> int:
        return len(self.complexes)

    @property
    def r(self) -> int:
        return len(self.reactions)

    @property
    def rate_symbols(self) -> tuple[str, ...]:
        return tuple(rx.rate for rx in self.reactions)

    def reactant_complexes(self) -> tuple[int, ...]:
        return tuple(sorted({rx.reactant for rx in self.reactions}))

    def reaction_vector(self, i: int) -> tuple[int, ...]:
        rx = self.reactions[i]
        return tuple(p - q for p, q in zip(self.complexes[rx.product], self.complexes[rx.reactant]))

    def complex_str(self, j: int) -> str:
        return format_complex(self.complexes[j], self.species)

    def reaction_str(self, i: int) -> str:
        rx = self.reactions[i]
        return f"{self.complex_str(rx.reactant)} -> {self.complex_str(rx.product)}"


@dataclass(frozen=True)
class GeneralizedNetwork:
    """A network whose reactant complexes carry kinetic complexes.

    ``kinetic[j]`` is the kinetic vector of complex ``j`` or ``None`` when the
    file gave none (only allowed for complexes that never act as reactants).
    """

    base: Network
    kinetic: tuple = field(default=())

    def __post_init__(self):
        if len(self.kinetic) != self.base.n:
            raise NetworkError("kinetic assignment must list every complex")
        for v in self.kinetic:
            if v is not None and (len(v) != self.base.m or any(c < 0 for c in v)):
                raise NetworkError("bad kinetic complex vector")

    @classmethod
    def mass_action(cls, net: Network) -> "GeneralizedNetwork":
        return cls(net, tuple(net.complexes))

    def kinetic_vector(self, j: int) -> tuple[int, ...]:
        v = self.kinetic[j]
        if v is None:
            raise NetworkError(f"complex {self.base.complex_str(j)} has no kinetic complex")
        return v

    def kinetic_matrix(self) -> list[list[int]]:
        """Ỹ (m x n); every complex must carry a kinetic vector."""
        cols = [self.kinetic_vector(j) for j in range(self.base.n)]
        return [[c[s] for c in cols] for s in range(self.base.m)]


@dataclass(frozen=True)
class StructuralMatrices:
    Y: tuple
    Ia: tuple
    Gamma: tuple
    Ik: tuple | None = None
    Ak: tuple | None = None
    Sigma: tuple | None = None


# ---------------------------------------------------------------------------
# complexes as text


def format_complex(vec: Sequence[int], species: Sequence[str]) -> str:
    parts = []
    for c, s in zip(vec, species):
        if c == 1:
            parts.append(s)
        elif c:
            parts.append(f"{c} {s}")
    return " + ".join(parts) if parts else "0"


def _parse_complex(text: str, line: int, col0: int, register) -> dict[str, int]:
    """Parse ``2 A + B`` / ``0`` into a species->coefficient map.

    ``register`` is called for each species name in order of appearance.
    """
    stripped = text.strip()
    if not stripped:
        raise ParseError("empty complex", line, col0 + 1)
    if stripped == "0":
        return {}
    out: dict[str, int] = {}
    offset = 0
    for piece in text.split("+"):
        col = col0 + offset + (len(piece) - len(piece.lstrip())) + 1
        mt = _TERM.match(piece)
        if not mt or not piece.strip():
            raise ParseError(f"cannot read term {piece.strip()!r}", line, col)
        coeff = int(mt.group(1)) if mt.group(1) else 1
        if coeff <= 0:
            raise ParseError("coefficients must be positive", line, col)
        name = mt.group(2)
        register(name)
        out[name] = out.get(name, 0) + coeff
        offset += len(piece) + 1
    return out


def parse_signed_complex(text: str, species: Sequence[str], line: int | None = None) -> tuple[int, ...]:
    """Parse an integer combination such as ``-A1 + 2 A2`` or ``0``."""
    idx = {s: i for i, s in enumerate(species)}
    vec = [0] * len(species)
    s = text.replace(" ", "")
    if s in ("", "0", "+0"):
        return tuple(vec)
    if s[0] not in "+-":
        s = "+" + s
    if not re.fullmatch(r"(?:[+-]\d*\*?[A-Za-z_][A-Za-z0-9_]*)+", s):
        raise ParseError(f"cannot read signed complex {text.strip()!r}", line)
    for sign, coeff, name in re.findall(r"([+-])(\d*)\*?([A-Za-z_][A-Za-z0-9_]*)", s):
        if name not in idx:
            raise ParseError(f"unknown species {name!r}", line)
        vec[idx[name]] += (-1 if sign == "-" else 1) * (int(coeff) if coeff else 1)
    return tuple(vec)


# ---------------------------------------------------------------------------
# parser


def _strip_comment(raw: str) -> str:
    k = raw.find("#")
    return raw if k < 0 else raw[:k]


def _parse(text: str):
    declared: list[str] = []
    declared_line: dict[str, int] = {}
    order: list[str] = []
    name = ""
    raw_reactions = []  # (lhs map, rhs map, rate, line)
    raw_kinetic = []  # (complex map, kinetic map, line)
    rates_seen: dict[str, int] = {}

    def register(sp):
        if sp not in order:
            order.append(sp)

    for ln, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw).rstrip()
        if not line.strip():
            continue
        head = line.split(None, 1)[0]
        if head == "network":
            rest = line.split(None, 1)[1].strip() if len(line.split(None, 1)) > 1 else ""
            if not _IDENT.fullmatch(rest):
                raise ParseError("network name must be an identifier", ln, line.find(head) + 9)
            name = rest
            continue
        if head == "species":
            start = line.find("species") + len("species")
            for mt in re.finditer(r"\S+", line[start:]):
                tok = mt.group(0)
                if not _IDENT.fullmatch(tok):
                    raise ParseError(f"bad species name {tok!r}", ln, start + mt.start() + 1)
                if tok in declared_line:
                    raise ParseError(f"species {tok!r} declared twice", ln, start + mt.start() + 1)
                declared.append(tok)
                declared_line[tok] = ln
            continue
        if head == "kinetic":
            body_start = line.find("kinetic") + len("kinetic")
            body = line[body_start:]
            if ":=" not in body:
                raise ParseError("kinetic line needs ':='", ln, body_start + 1)
            k = body.index(":=")
            cmap = _parse_complex(body[:k], ln, body_start, lambda s: None)
            kmap = _parse_complex(body[k + 2:], ln, body_start + k + 2, lambda s: None)
            raw_kinetic.append((cmap, kmap, ln))
            continue
        if ";" not in line:
            raise ParseError("reaction needs '; <rate>'", ln, len(line) + 1)
        semi = line.index(";")
        body, rate_txt = line[:semi], line[semi + 1:]
        if "<->" in body:
            arrow, reversible = "<->", True
        elif "->" in body:
            arrow, reversible = "->", False
        else:
            raise ParseError("expected '->' or '<->'", ln, 1)
        a = body.index(arrow)
        lhs = _parse_complex(body[:a], ln, 0, register)
        rhs = _parse_complex(body[a + len(arrow):], ln, a + len(arrow), register)
        rate_names = [t.strip() for t in rate_txt.split(",")]
        need = 2 if reversible else 1
        if len(rate_names) != need:
            raise ParseError(f"expected {need} rate symbol(s), got {len(rate_names)}", ln, semi + 2)
        for rn in rate_names:
            if not _IDENT.fullmatch(rn):
                raise ParseError(f"bad rate symbol {rn!r}", ln, semi + 2)
            if rn in rates_seen:
                raise ParseError(f"duplicate rate symbol {rn!r} (first on line {rates_seen[rn]})", ln, semi + 2)
            rates_seen[rn] = ln
        if lhs == rhs:
            raise ParseError("self-reaction: both sides are the same complex", ln, 1)
        raw_reactions.append((lhs, rhs, rate_names[0], ln))
        if reversible:
            raw_reactions.append((rhs, lhs, rate_names[1], ln))

    if not raw_reactions:
        raise ParseError("no reactions found")
    for sp in declared:
        if sp not in order:
            raise ParseError(f"species {sp!r} declared but never used", declared_line[sp])
    species = list(declared) + [s for s in order if s not in declared_line]
    sidx = {s: i for i, s in enumerate(species)}

    def vec(cmap, ln):
        v = [0] * len(species)
        for s, c in cmap.items():
            if s not in sidx:
                raise ParseError(f"unknown species {s!r}", ln)
            v[sidx[s]] = c
        return tuple(v)

    complexes: list[tuple[int, ...]] = []
    cindex: dict[tuple[int, ...], int] = {}

    def cid(v):
        if v not in cindex:
            cindex[v] = len(complexes)
            complexes.append(v)
        return cindex[v]

    reactions = []
    for lhs, rhs, rate, ln in raw_reactions:
        reactions.append(Reaction(cid(vec(lhs, ln)), cid(vec(rhs, ln)), rate))
    net = Network(tuple(species), tuple(complexes), tuple(reactions), name)

    kinetic = None
    if raw_kinetic:
        kinetic = [None] * net.n
        for cmap, kmap, ln in raw_kinetic:
            v = vec(cmap, ln)
            if v not in cindex:
                raise ParseError("kinetic line names a complex that is not in the network", ln)
            j = cindex[v]
            if kinetic[j] is not None:
                raise ParseError("kinetic complex assigned twice", ln)
            kinetic[j] = vec(kmap, ln)
    return net, kinetic


def parse_network(text: str) -> Network:
    """Parse CRN text; ``kinetic`` lines, if any, are ignored."""
    return _parse(text)[0]


def parse_generalized_network(text: str) -> GeneralizedNetwork:
    """Parse CRN text with ``kinetic`` lines.

    Reactant complexes without a ``kinetic`` line are an error.
    """
    net, kinetic = _parse(text)
    if kinetic is None:
        kinetic = [None] * net.n
    for j in net.reactant_complexes():
        if kinetic[j] is None:
            raise ParseError(f"reactant complex {net.complex_str(j)} has no kinetic line")
    return GeneralizedNetwork(net, tuple(kinetic))


def serialize_network(net: Network | GeneralizedNetwork) -> str:
    gnet = None
    if isinstance(net, GeneralizedNetwork):
        gnet, net = net, net.base
    lines = []
    if net.name:
        lines.append(f"network {net.name}")
    lines.append("species " + " ".join(net.species))
    rx = net.reactions
    i = 0
    while i < len(rx):
        a = rx[i]
        if i + 1 < len(rx) and rx[i + 1].reactant == a.product and rx[i + 1].product == a.reactant:
            lines.append(f"{net.complex_str(a.reactant)} <-> {net.complex_str(a.product)} ; {a.rate}, {rx[i + 1].rate}")
            i += 2
        else:
            lines.append(f"{net.complex_str(a.reactant)} -> {net.complex_str(a.product)} ; {a.rate}")
            i += 1
    if gnet is not None:
        for j, v in enumerate(gnet.kinetic):
            if v is not None:
                lines.append(f"kinetic {net.complex_str(j)} := {format_complex(v, net.species)}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# matrices and right-hand sides


def _rate_values(net: Network, rates: Mapping) -> list:
    vals = []
    for rx in net.reactions:
        if rx.rate not in rates:
            raise NetworkError(f"missing value for rate {rx.rate!r}")
        v = rates[rx.rate]
        if v <= 0:
            raise NetworkError(f"rate {rx.rate!r} must be positive")
        vals.append(v)
    return vals


def build_matrices(net: Network, rates: Mapping | None = None) -> StructuralMatrices:
    m, n, r = net.m, net.n, net.r
    Y = tuple(tuple(net.complexes[j][s] for j in range(n)) for s in range(m))
    Ia = [[0] * r for _ in range(n)]
    for i, rx in enumerate(net.reactions):
        Ia[rx.reactant][i] = -1
        Ia[rx.product][i] = 1
    Gamma = tuple(tuple(net.reaction_vector(i)[s] for i in range(r)) for s in range(m))
    if rates is None:
        return StructuralMatrices(Y, tuple(map(tuple, Ia)), Gamma)
    k = [Fraction(v) if not isinstance(v, float) else v for v in _rate_values(net, rates)]
    Ik = [[0] * n for _ in range(r)]
    for i, rx in enumerate(net.reactions):
        Ik[i][rx.reactant] = k[i]
    Ak = [[sum(Ia[a][i] * Ik[i][b] for i in range(r)) for b in range(n)] for a in range(n)]
    Sigma = [[sum(Y[s][a] * Ak[a][b] for a in range(n)) for b in range(n)] for s in range(m)]
    return StructuralMatrices(
        Y, tuple(map(tuple, Ia)), Gamma, tuple(map(tuple, Ik)), tuple(map(tuple, Ak)), tuple(map(tuple, Sigma))
    )


def _monomial(x: Sequence, exps: Sequence[int]):
    out = 1
    for xi, e in zip(x, exps):
        if e:
            out = out * xi**e
    return out


def _check_state(net: Network, x: Sequence) -> None:
    if len(x) != net.m:
        raise ValueError(f"state has length {len(x)}, expected {net.m}")
    if any(v <= 0 for v in x):
        raise ValueError("state entries must be positive")


def mass_action_rhs(net: Network, rates: Mapping, x: Sequence) -> list:
    """Y Ia Ik Psi(x).  Exact when ``rates`` and ``x`` are rationals."""
    _check_state(net, x)
    k = _rate_values(net, rates)
    out = [0] * net.m
    for i, rx in enumerate(net.reactions):
        flux = k[i] * _monomial(x, net.complexes[rx.reactant])
        for s, g in enumerate(net.reaction_vector(i)):
            if g:
                out[s] += g * flux
    return out


def gmas_rhs(gnet: GeneralizedNetwork, rates: Mapping, x: Sequence) -> list:
    """Y Ia Ik Psi~(x) with kinetic monomials x^{y~_j}."""
    net = gnet.base
    _check_state(net, x)
    k = _rate_values(net, rates)
    out = [0] * net.m
    for i, rx in enumerate(net.reactions):
        flux = k[i] * _monomial(x, gnet.kinetic_vector(rx.reactant))
        for s, g in enumerate(net.reaction_vector(i)):
            if g:
                out[s] += g * flux
    return out


def reaction_fluxes(net: Network, rates: Mapping, x: Sequence) -> list:
    """R(x) = Ik Psi(x)."""
    _check_state(net, x)
    k = _rate_values(net, rates)
    return [k[i] * _monomial(x, net.complexes[rx.reactant]) for i, rx in enumerate(net.reactions)]
