"""Tree constants and the kernel of the kinetic matrix A_k.

For a weakly reversible network the tree constant of complex i is the sum,
over spanning trees of i's linkage class directed towards i, of the
product of edge rate symbols.  Trees are enumerated explicitly (one outgoing
reaction per non-sink complex, rejecting choices that close a cycle), so the
resulting polynomials have only positive coefficients.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from . import linalg
from .errors import CapExceededError, NotWeaklyReversibleError
from .graph import is_weakly_reversible, linkage_classes
from .model import Network
from .poly import Polynomial, natural_key

MAX_CLASS_COMPLEXES = 12
MAX_CLASS_EDGES = 24


@dataclass(frozen=True)
class TreeConstantSet:
    per_complex: tuple  # tuple[Polynomial, ...]
    linkage_class: tuple  # tuple[int, ...]
    values: tuple | None = None

    def __getitem__(self, j: int) -> Polynomial:
        return self.per_complex[j]


def _require_wr(net: Network) -> None:
    if not is_weakly_reversible(net):
        raise NotWeaklyReversibleError("tree constants need a weakly reversible network")


def _class_edges(net: Network, members: tuple[int, ...]) -> dict[int, list[int]]:
    inside = set(members)
    out = {v: [] for v in members}
    for i, rx in enumerate(net.reactions):
        if rx.reactant in inside:
            out[rx.reactant].append(i)
    return out


def _check_caps(members, out_edges, max_complexes, max_edges) -> None:
    n_edges = sum(len(v) for v in out_edges.values())
    if len(members) > max_complexes or n_edges > max_edges:
        raise CapExceededError(
            f"linkage class with {len(members)} complexes and {n_edges} reactions exceeds the "
            f"tree enumeration limit ({max_complexes} complexes, {max_edges} reactions)"
        )


def spanning_i_trees(
    net: Network,
    i: int,
    max_complexes: int = MAX_CLASS_COMPLEXES,
    max_edges: int = MAX_CLASS_EDGES,
) -> list[tuple[int, ...]]:
    """All spanning i-trees of i's linkage class as sorted reaction-index tuples."""
    _require_wr(net)
    part = linkage_classes(net)
    members = part.classes[part.class_of(i)]
    out_edges = _class_edges(net, members)
    _check_caps(members, out_edges, max_complexes, max_edges)
    return _enumerate(net, i, members, out_edges)


def _enumerate(net, sink, members, out_edges) -> list[tuple[int, ...]]:
    others = [v for v in members if v != sink]
    succ: dict[int, int] = {}
    chosen: list[int] = []
    found: list[tuple[int, ...]] = []

    def closes_cycle(v: int) -> bool:
        # follow successors from v; meeting v again means a cycle
        w = succ.get(v)
        steps = 0
        while w is not None and w != sink:
            if w == v:
                return True
            w = succ.get(w)
            steps += 1
            if steps > len(members):
                return True
        return False

    def rec(k: int):
        if k == len(others):
            found.append(tuple(sorted(chosen)))
            return
        v = others[k]
        for e in out_edges[v]:
            succ[v] = net.reactions[e].product
            if not closes_cycle(v):
                chosen.append(e)
                rec(k + 1)
                chosen.pop()
            del succ[v]

    rec(0)
    return sorted(found)


def _tree_polynomial(net: Network, trees) -> Polynomial:
    terms: dict = {}
    for t in trees:
        exps: dict[str, int] = {}
        for e in t:
            s = net.reactions[e].rate
            exps[s] = exps.get(s, 0) + 1
        mono = tuple(sorted(exps.items(), key=lambda kv: natural_key(kv[0])))
        terms[mono] = terms.get(mono, 0) + 1
    return Polynomial(terms)


def tree_constants(
    net: Network,
    rates: Mapping | None = None,
    max_complexes: int = MAX_CLASS_COMPLEXES,
    max_edges: int = MAX_CLASS_EDGES,
) -> TreeConstantSet:
    _require_wr(net)
    part = linkage_classes(net)
    polys: list = [None] * net.n
    cls: list = [None] * net.n
    for k, members in enumerate(part.classes):
        out_edges = _class_edges(net, members)
        _check_caps(members, out_edges, max_complexes, max_edges)
        for j in members:
            polys[j] = _tree_polynomial(net, _enumerate(net, j, members, out_edges))
            cls[j] = k
    values = None
    if rates is not None:
        values = tuple(p.evaluate(rates) for p in polys)
    return TreeConstantSet(tuple(polys), tuple(cls), values)


def kinetic_matrix_entries(net: Network, weights) -> list[list]:
    """A_k = Ia Ik with the given per-reaction weights (numbers or polynomials)."""
    zero = weights[0] * 0 if weights else 0
    A = [[zero for _ in range(net.n)] for _ in range(net.n)]
    for i, rx in enumerate(net.reactions):
        w = weights[i]
        A[rx.reactant][rx.reactant] = A[rx.reactant][rx.reactant] - w
        A[rx.product][rx.reactant] = A[rx.product][rx.reactant] + w
    return A


def tree_constants_via_minors(net: Network, rates: Mapping) -> tuple[Fraction, ...]:
    """K_i = (-1)^(|L|-1) det(A_k restricted to L with row and column i removed)."""
    _require_wr(net)
    weights = [Fraction(rates[rx.rate]) for rx in net.reactions]
    A = kinetic_matrix_entries(net, weights)
    out: list = [None] * net.n
    for members in linkage_classes(net).classes:
        for i in members:
            rest = [v for v in members if v != i]
            minor = [[A[a][b] for b in rest] for a in rest]
            out[i] = (-1) ** (len(members) - 1) * linalg.det(minor)
    return tuple(out)


def kernel_Ak(net: Network, rates: Mapping | None = None) -> list[tuple]:
    """One kernel vector of A_k per linkage class, supported on that class.

    Entries are tree-constant polynomials, or their values when ``rates`` is
    given.
    """
    tc = tree_constants(net, rates)
    zero = Polynomial() if rates is None else Fraction(0)
    src = tc.per_complex if rates is None else tc.values
    out = []
    for members in linkage_classes(net).classes:
        vec = [zero] * net.n
        for j in members:
            vec[j] = src[j]
        out.append(tuple(vec))
    return out


def symbolic_kinetic_matrix(net: Network) -> list[list[Polynomial]]:
    return kinetic_matrix_entries(net, [Polynomial.symbol(rx.rate) for rx in net.reactions])


def verify_kernel_identity(net: Network) -> bool:
    """A_k K_j == 0 as exact polynomial identities for every class vector."""
    A = symbolic_kinetic_matrix(net)
    for vec in kernel_Ak(net):
        for row in A:
            acc = Polynomial()
            for a, v in zip(row, vec):
                if a and v:
                    acc = acc + a * v
            if not acc.is_zero():
                return False
    return True
