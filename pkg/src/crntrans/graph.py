"""Reaction-graph structure: linkage classes, reversibility, deficiencies."""

from __future__ import annotations

from dataclasses import dataclass

import networkx as nx

from . import linalg
from .model import GeneralizedNetwork, Network, build_matrices


@dataclass(frozen=True)
class LinkagePartition:
    classes: tuple[tuple[int, ...], ...]
    strong_classes: tuple[tuple[int, ...], ...]

    def class_of(self, j: int) -> int:
        for k, c in enumerate(self.classes):
            if j in c:
                return k
        raise KeyError(j)

    @property
    def l(self) -> int:
        return len(self.classes)


@dataclass(frozen=True)
class DeficiencyReport:
    n: int
    l: int
    s: int
    delta_structural: int
    delta_kernel: int
    kinetic_delta: int | None = None

    @property
    def delta(self) -> int:
        return self.delta_structural


def reaction_digraph(net: Network) -> nx.MultiDiGraph:
    g = nx.MultiDiGraph()
    g.add_nodes_from(range(net.n))
    for i, rx in enumerate(net.reactions):
        g.add_edge(rx.reactant, rx.product, key=i)
    return g


def _ordered(components) -> tuple[tuple[int, ...], ...]:
    return tuple(sorted((tuple(sorted(c)) for c in components), key=lambda c: c[0]))


def linkage_classes(net: Network) -> LinkagePartition:
    g = reaction_digraph(net)
    return LinkagePartition(
        _ordered(nx.weakly_connected_components(g)),
        _ordered(nx.strongly_connected_components(g)),
    )


def is_weakly_reversible(net: Network) -> bool:
    part = linkage_classes(net)
    return set(part.classes) == set(part.strong_classes)


def is_reversible(net: Network) -> bool:
    arcs = {(rx.reactant, rx.product) for rx in net.reactions}
    return all((b, a) in arcs for a, b in arcs)


def stoichiometric_subspace(net: Network) -> linalg.SubspaceBasis:
    return linalg.span((net.reaction_vector(i) for i in range(net.r)), net.m)


def deficiency(net: Network) -> DeficiencyReport:
    """Deficiency by both n - l - s and dim(ker Y ∩ Im Ia); they must agree."""
    mats = build_matrices(net)
    n = net.n
    l = linkage_classes(net).l
    s = linalg.rank(mats.Gamma)
    ker_y = linalg.kernel_basis(mats.Y, n)
    im_ia = linalg.column_space(mats.Ia, n)
    dk = linalg.intersect(ker_y, im_ia).dim
    ds = n - l - s
    if ds != dk:
        raise AssertionError(f"deficiency formulas disagree: n-l-s={ds}, kernel={dk}")
    return DeficiencyReport(n, l, s, ds, dk)


def kinetic_order_subspace(gnet: GeneralizedNetwork) -> linalg.SubspaceBasis:
    """S~ = span{y~_{rho'(i)} - y~_{rho(i)}}."""
    net = gnet.base
    vecs = []
    for rx in net.reactions:
        a = gnet.kinetic_vector(rx.reactant)
        b = gnet.kinetic_vector(rx.product)
        vecs.append(tuple(p - q for p, q in zip(b, a)))
    return linalg.span(vecs, net.m)


def kinetic_deficiency(gnet: GeneralizedNetwork) -> int:
    """dim(ker Y~ ∩ Im Ia)."""
    net = gnet.base
    Yk = gnet.kinetic_matrix()
    Ia = build_matrices(net).Ia
    return linalg.intersect(linalg.kernel_basis(Yk, net.n), linalg.column_space(Ia, net.n)).dim
