"""Extreme currents of the flux cone ker(Gamma) ∩ R^r_{>=0}.

Double description: start from the simplicial cone cut out by the free
coordinates of the kernel (one ray per kernel basis vector) and add the
remaining nonnegativity constraints one at a time, combining adjacent
positive/negative ray pairs.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Sequence

from . import linalg
from .model import Network, build_matrices


class CurrentKind(str, Enum):
    CYCLIC = "cyclic"
    STOICHIOMETRIC = "stoichiometric"
    NOT_IN_CONE = "not-in-cone"


@dataclass(frozen=True)
class ExtremeCurrent:
    vector: tuple[int, ...]
    kind: CurrentKind

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(i for i, v in enumerate(self.vector) if v)


def _adjacent(p, q, rays, zeros, d) -> bool:
    common = zeros[p] & zeros[q]
    if len(common) < d - 2:
        return False
    for k in range(len(rays)):
        if k != p and k != q and common <= zeros[k]:
            return False
    return True


def cone_rays(M: Sequence[Sequence], ncols: int) -> list[tuple[int, ...]]:
    """Extreme rays of {v : M v = 0, v >= 0} as primitive integer vectors."""
    rows, pivots = linalg.reduced_echelon(M, ncols)
    free = [j for j in range(ncols) if j not in set(pivots)]
    d = len(free)
    if d == 0:
        return []
    # kernel vector for free column f has a 1 there and 0 at the other free columns
    rays: list[tuple[int, ...]] = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, pc in zip(rows, pivots):
            v[pc] = Fraction(-row[f], row[pc])
        rays.append(tuple(linalg.primitive_row(v)))
    seen = list(free)

    for c in pivots:
        pos = [k for k, v in enumerate(rays) if v[c] > 0]
        neg = [k for k, v in enumerate(rays) if v[c] < 0]
        zer = [k for k, v in enumerate(rays) if v[c] == 0]
        if not neg:
            seen.append(c)
            continue
        zeros = [frozenset(j for j in seen if v[j] == 0) for v in rays]
        new = []
        for p in pos:
            for q in neg:
                if not _adjacent(p, q, rays, zeros, d):
                    continue
                a, b = rays[p][c], -rays[q][c]
                w = [b * x + a * y for x, y in zip(rays[p], rays[q])]
                new.append(tuple(linalg.primitive_row(w)))
        rays = [rays[k] for k in pos] + [rays[k] for k in zer] + new
        seen.append(c)
    # drop duplicates (cannot normally arise, cheap insurance)
    return list(dict.fromkeys(rays))


def extreme_currents(net: Network) -> list[ExtremeCurrent]:
    """All extreme rays of the current cone, classified and sorted.

    Cyclic rays come first; within a kind rays are in descending
    lexicographic order.
    """
    mats = build_matrices(net)
    out = []
    for v in cone_rays(mats.Gamma, net.r):
        out.append(ExtremeCurrent(v, _kind(mats.Ia, v)))
    order = {CurrentKind.CYCLIC: 0, CurrentKind.STOICHIOMETRIC: 1}
    out.sort(key=lambda e: (order[e.kind], tuple(-x for x in e.vector)))
    return out


def _kind(Ia, v) -> CurrentKind:
    return CurrentKind.CYCLIC if all(x == 0 for x in linalg.matvec(Ia, v)) else CurrentKind.STOICHIOMETRIC


def classify_current(net: Network, v: Sequence) -> CurrentKind:
    if len(v) != net.r:
        raise ValueError(f"current has length {len(v)}, expected {net.r}")
    if any(x < 0 for x in v) or all(x == 0 for x in v):
        return CurrentKind.NOT_IN_CONE
    mats = build_matrices(net)
    if any(x != 0 for x in linalg.matvec(mats.Gamma, v)):
        return CurrentKind.NOT_IN_CONE
    return _kind(mats.Ia, v)


def stoichiometric_generators(net: Network) -> list[ExtremeCurrent]:
    return [e for e in extreme_currents(net) if e.kind is CurrentKind.STOICHIOMETRIC]


def cyclic_generators(net: Network) -> list[ExtremeCurrent]:
    return [e for e in extreme_currents(net) if e.kind is CurrentKind.CYCLIC]
