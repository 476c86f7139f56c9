"""Network translation: validation, classification, search and resolvability.

A translation keeps every reaction vector but moves each reaction by a
per-reaction shift, so that the translated reaction graph can be weakly
reversible with deficiency zero.  The original source complexes survive as
kinetic complexes of the translated network.  Reaction indices are never
permuted by the search (h1 is the identity there), though user-supplied
candidates may carry any bijection.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from . import linalg
from .cone import cyclic_generators, stoichiometric_generators
from .errors import ParseError, TranslationError
from .graph import deficiency, is_weakly_reversible, kinetic_deficiency, linkage_classes
from .model import GeneralizedNetwork, Network, Reaction, format_complex, parse_signed_complex
from .poly import Polynomial, PowerProduct, RationalFunction, power_product_independent_of, simplify_ratio
from .trees import tree_constants

FRESH_MARK = "~"


@dataclass(frozen=True)
class TranslationClassification:
    proper: bool
    strong: bool
    improper_complexes: tuple[int, ...]
    improper_reactions: tuple[int, ...]
    kinetically_relevant: tuple[int, ...]  # rho(i)_K for every reaction i
    delta: int
    kinetic_delta: int | None


@dataclass(frozen=True)
class Translation:
    source: Network
    translated: GeneralizedNetwork
    h1: tuple[int, ...]
    h2: tuple  # source complex index -> translated complex index, None off CR
    kinetic_set: tuple[int, ...]  # CR_K, sorted source complex indices
    shift: tuple[tuple[int, ...], ...]

    @property
    def network(self) -> Network:
        return self.translated.base

    def kinetic_source(self, jt: int) -> int | None:
        """The CR_K member acting as kinetic complex of translated complex jt."""
        for p in self.kinetic_set:
            if self.h2[p] == jt:
                return p
        return None

    def preimage(self, jt: int) -> tuple[int, ...]:
        return tuple(p for p, q in enumerate(self.h2) if q == jt)

    def describe_shifts(self) -> list[str]:
        sp = self.source.species
        out = []
        for i, t in enumerate(self.shift):
            parts = []
            for c, s in zip(t, sp):
                if c:
                    sign = "+" if c > 0 else "-"
                    parts.append(f"{sign}{'' if abs(c) == 1 else abs(c)}{s}")
            out.append(f"{i + 1}: {' '.join(parts) if parts else '+0'}")
        return out


# ---------------------------------------------------------------------------
# validation


def validate_translation(
    source: Network,
    candidate: GeneralizedNetwork,
    h1: Sequence[int] | None = None,
    h2: Mapping[int, int] | Sequence | None = None,
) -> tuple[Translation, TranslationClassification]:
    """Check the three translation conditions exactly and classify the result.

    ``h1`` defaults to the identity.  ``h2`` defaults to the map forced by
    condition 2 (source of reaction i goes to the translated source of h1(i)).
    """
    tnet = candidate.base
    if tnet.species != source.species:
        raise TranslationError("translated network must use the same species in the same order")
    r = source.r
    if tnet.r != r:
        raise TranslationError(f"reaction counts differ ({r} vs {tnet.r}); h1 cannot be a bijection")
    h1 = tuple(range(r)) if h1 is None else tuple(h1)
    if sorted(h1) != list(range(r)):
        raise TranslationError("h1 is not a bijection of the reaction indices")

    for i in range(r):
        if tnet.reaction_vector(h1[i]) != source.reaction_vector(i):
            raise TranslationError(f"reaction {i + 1}: reaction vector changed by the translation")

    forced: dict[int, int] = {}
    for i, rx in enumerate(source.reactions):
        jt = tnet.reactions[h1[i]].reactant
        if forced.setdefault(rx.reactant, jt) != jt:
            raise TranslationError(
                f"source complex {source.complex_str(rx.reactant)} is sent to two translated complexes"
            )
    if h2 is not None:
        given = dict(h2) if isinstance(h2, Mapping) else {j: v for j, v in enumerate(h2) if v is not None}
        for j, jt in forced.items():
            if given.get(j) != jt:
                raise TranslationError(f"h2 disagrees with the reactions at source complex {j + 1}")
        extra = set(given) - set(forced)
        if extra:
            raise TranslationError("h2 is defined on complexes that are not reactant complexes")
    h2_tuple = tuple(forced.get(j) for j in range(source.n))
    if set(forced.values()) != set(tnet.reactant_complexes()):
        raise TranslationError("h2 is not onto the translated reactant complexes")

    kset: list[int] = []
    for jt in tnet.reactant_complexes():
        kv = candidate.kinetic[jt]
        pre = [p for p, q in forced.items() if q == jt]
        match = [p for p in pre if source.complexes[p] == kv]
        if kv is None or not match:
            raise TranslationError(
                f"translated complex {tnet.complex_str(jt)} has a kinetic complex outside its h2-preimage"
            )
        kset.append(match[0])
    kset_vecs = {source.complexes[p] for p in kset}
    for jt in range(tnet.n):
        kv = candidate.kinetic[jt]
        if jt not in forced.values() and kv is not None and kv not in kset_vecs:
            raise TranslationError(f"product-only complex {tnet.complex_str(jt)} has a kinetic complex outside CR_K")

    shift = []
    for i, rx in enumerate(source.reactions):
        a = tnet.complexes[tnet.reactions[h1[i]].reactant]
        shift.append(tuple(p - q for p, q in zip(a, source.complexes[rx.reactant])))

    t = Translation(source, candidate, h1, h2_tuple, tuple(sorted(kset)), tuple(shift))
    return t, classify(t)


def classify(t: Translation) -> TranslationClassification:
    src = t.source
    counts: dict[int, int] = {}
    for jt in t.h2:
        if jt is not None:
            counts[jt] = counts.get(jt, 0) + 1
    improper_cx = tuple(sorted(jt for jt, c in counts.items() if c > 1))
    kset = set(t.kinetic_set)
    relevant = []
    for rx in src.reactions:
        relevant.append(t.kinetic_source(t.h2[rx.reactant]))
    improper_rx = tuple(i for i, rx in enumerate(src.reactions) if rx.reactant not in kset)
    strong = is_weakly_reversible(t.network)
    kd = None
    if all(v is not None for v in t.translated.kinetic):
        kd = kinetic_deficiency(t.translated)
    return TranslationClassification(
        proper=not improper_cx,
        strong=strong,
        improper_complexes=improper_cx,
        improper_reactions=improper_rx,
        kinetically_relevant=tuple(relevant),
        delta=deficiency(t.network).delta,
        kinetic_delta=kd,
    )


# ---------------------------------------------------------------------------
# construction from shifts and the translation file format


def translation_from_shifts(
    source: Network,
    shifts: Sequence[Sequence[int]],
    kinetic_choice: Mapping[tuple, int] | None = None,
    name: str | None = None,
) -> tuple[Translation, TranslationClassification]:
    """Build and validate the translation that moves reaction i by ``shifts[i]``.

    Translated complexes are numbered by first appearance (reactant before
    product, reactions in order).  ``kinetic_choice`` maps a translated
    complex vector to the source complex index chosen as its kinetic complex;
    by default the lowest-indexed source complex in the preimage is used.
    """
    if len(shifts) != source.r:
        raise TranslationError(f"expected {source.r} shifts, got {len(shifts)}")
    index: dict[tuple, int] = {}
    complexes: list[tuple] = []

    def cid(v):
        if any(c < 0 for c in v):
            raise TranslationError(f"shift produces a negative complex {v}")
        if v not in index:
            index[v] = len(complexes)
            complexes.append(v)
        return index[v]

    reactions = []
    preimage: dict[int, list[int]] = {}
    for i, rx in enumerate(source.reactions):
        t = tuple(shifts[i])
        if len(t) != source.m:
            raise TranslationError(f"shift {i + 1} has the wrong length")
        a = cid(tuple(p + q for p, q in zip(source.complexes[rx.reactant], t)))
        b = cid(tuple(p + q for p, q in zip(source.complexes[rx.product], t)))
        if a == b:
            raise TranslationError(f"reaction {i + 1} became a self-reaction")
        reactions.append(Reaction(a, b, rx.rate))
        pre = preimage.setdefault(a, [])
        if rx.reactant not in pre:
            pre.append(rx.reactant)
    tnet = Network(source.species, tuple(complexes), tuple(reactions), name or (source.name + "_translated"))
    kinetic: list = [None] * tnet.n
    choice = dict(kinetic_choice or {})
    for jt, pre in preimage.items():
        pick = choice.pop(complexes[jt], None)
        if pick is None:
            pick = min(pre)
        elif pick not in pre:
            raise TranslationError(
                f"kinetic choice for {tnet.complex_str(jt)} is not in its preimage"
            )
        kinetic[jt] = source.complexes[pick]
    if choice:
        raise TranslationError("kinetic choice given for a complex that is not a translated source complex")
    return validate_translation(source, GeneralizedNetwork(tnet, tuple(kinetic)))


_SHIFT = re.compile(r"^\s*shift\s+([0-9,\s-]+):(.*)$")
_CHOICE = re.compile(r"^\s*kinetic-choice\s+(.*):=(.*)$")


def _parse_ids(text: str, r: int, ln: int) -> list[int]:
    out = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if "-" in part:
            a, b = part.split("-", 1)
            ids = range(int(a), int(b) + 1)
        else:
            ids = [int(part)]
        for i in ids:
            if not 1 <= i <= r:
                raise ParseError(f"reaction id {i} out of range 1..{r}", ln)
            out.append(i - 1)
    return out


def parse_translation(text: str, source: Network) -> tuple[Translation, TranslationClassification]:
    """Read ``shift <ids>: <signed complex>`` and ``kinetic-choice X := Y`` lines.

    Reactions without a shift line keep a zero shift.
    """
    shifts: list = [None] * source.r
    choice: dict[tuple, int] = {}
    cindex = {c: j for j, c in enumerate(source.complexes)}
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        ms = _SHIFT.match(line)
        mc = _CHOICE.match(line)
        if ms:
            vec = parse_signed_complex(ms.group(2), source.species, ln)
            for i in _parse_ids(ms.group(1), source.r, ln):
                if shifts[i] is not None:
                    raise ParseError(f"reaction {i + 1} shifted twice", ln)
                shifts[i] = vec
        elif mc:
            tvec = parse_signed_complex(mc.group(1), source.species, ln)
            svec = parse_signed_complex(mc.group(2), source.species, ln)
            if svec not in cindex:
                raise ParseError("kinetic-choice source is not a complex of the network", ln)
            choice[tvec] = cindex[svec]
        else:
            raise ParseError("expected 'shift <ids>: <complex>' or 'kinetic-choice <complex> := <complex>'", ln)
    zero = (0,) * source.m
    shifts = [s if s is not None else zero for s in shifts]
    return translation_from_shifts(source, shifts, choice)


def serialize_translation(t: Translation) -> str:
    sp = t.source.species
    groups: dict[tuple, list[int]] = {}
    for i, s in enumerate(t.shift):
        groups.setdefault(s, []).append(i + 1)
    lines = []
    for s, ids in groups.items():
        if any(s):
            lines.append(f"shift {', '.join(map(str, ids))}: {_signed(s, sp)}")
    for jt in classify(t).improper_complexes:
        p = t.kinetic_source(jt)
        lines.append(f"kinetic-choice {t.network.complex_str(jt)} := {t.source.complex_str(p)}")
    return "\n".join(lines) + ("\n" if lines else "")


def _signed(v: Sequence[int], species: Sequence[str]) -> str:
    parts = []
    for c, s in zip(v, species):
        if c:
            mag = "" if abs(c) == 1 else f"{abs(c)} "
            parts.append(("- " if c < 0 else "+ ") + mag + s)
    text = " ".join(parts)
    return text[2:] if text.startswith("+ ") else "-" + text[2:] if text else "0"


# ---------------------------------------------------------------------------
# search


class _Potentials:
    """Union-find with vector offsets: t[node] = t[root] + off[node]."""

    def __init__(self, nodes: int, dim: int):
        self.parent = list(range(nodes))
        self.off = [(0,) * dim for _ in range(nodes)]

    def copy(self) -> "_Potentials":
        c = _Potentials.__new__(_Potentials)
        c.parent = list(self.parent)
        c.off = list(self.off)
        return c

    def offset(self, a: int) -> tuple[int, tuple]:
        """(root, t[a] - t[root]) with path compression."""
        if self.parent[a] == a:
            return a, (0,) * len(self.off[a])
        root, o = self.offset(self.parent[a])
        self.off[a] = _add(self.off[a], o)
        self.parent[a] = root
        return root, self.off[a]

    def constrain(self, a: int, b: int, d: tuple) -> bool:
        """Impose t[b] - t[a] = d; False on contradiction."""
        ra, oa = self.offset(a)
        rb, ob = self.offset(b)
        if ra == rb:
            return _sub(ob, oa) == d
        # t[rb] = t[a] + d - ob = t[ra] + oa + d - ob
        self.parent[rb] = ra
        self.off[rb] = _sub(_add(oa, d), ob)
        return True


def _add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def _reaction_groups(net: Network) -> list[int]:
    """Group id per reaction: same source, or a common cyclic generator."""
    parent = list(range(net.r))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)

    by_source: dict[int, int] = {}
    for i, rx in enumerate(net.reactions):
        if rx.reactant in by_source:
            union(by_source[rx.reactant], i)
        else:
            by_source[rx.reactant] = i
    for gen in cyclic_generators(net):
        sup = gen.support
        for i in sup[1:]:
            union(sup[0], i)
    roots = sorted({find(i) for i in range(net.r)})
    ids = {r: k for k, r in enumerate(roots)}
    return [ids[find(i)] for i in range(net.r)]


def _orderings(support: tuple[int, ...], cap: int):
    first, rest = support[0], support[1:]
    return itertools.islice(((first,) + p for p in itertools.permutations(rest)), cap)


def _cycle_constraints(net: Network, group: list[int], order: tuple[int, ...]):
    q = len(order)
    for k in range(q):
        prev, nxt = order[k], order[(k + 1) % q]
        rp, rn = net.reactions[prev], net.reactions[nxt]
        d = _sub(net.complexes[rp.product], net.complexes[rn.reactant])
        yield group[prev], group[nxt], d


def _component_shifts(net: Network, group: list[int], pot: _Potentials, touched: set[int]):
    """Per-group shifts and component id per group, minimal nonnegative offsets."""
    m = net.m
    ngroups = max(group) + 1
    rel = {}
    comp_of = {}
    for g in range(ngroups):
        root, off = pot.offset(g)
        rel[g] = off
        comp_of[g] = root
    comps: dict[int, list[int]] = {}
    for g in range(ngroups):
        comps.setdefault(comp_of[g], []).append(g)
    shifts: dict[int, tuple] = {}
    order = sorted(comps, key=lambda c: min(i for i in range(net.r) if comp_of[group[i]] == c))
    for c in order:
        members = comps[c]
        if not any(g in touched for g in members):
            for g in members:
                shifts[g] = (0,) * m
            continue
        low = [None] * m
        for i, rx in enumerate(net.reactions):
            if comp_of[group[i]] != c:
                continue
            for cx in (rx.reactant, rx.product):
                v = _add(net.complexes[cx], rel[group[i]])
                for s in range(m):
                    low[s] = v[s] if low[s] is None else min(low[s], v[s])
        base = tuple(-x for x in low)
        for g in members:
            shifts[g] = _add(base, rel[g])
    return shifts, [comp_of[g] for g in range(ngroups)], order


def _translated_sets(net, group, shifts, comp_of, comp_order):
    sets = {c: set() for c in comp_order}
    for i, rx in enumerate(net.reactions):
        t = shifts[group[i]]
        c = comp_of[group[i]]
        sets[c].add(_add(net.complexes[rx.reactant], t))
        sets[c].add(_add(net.complexes[rx.product], t))
    return sets


def _variants(net, group, shifts, comp_of, comp_order):
    """The glued shift assignment, plus a separated one if components collide."""
    per_reaction = tuple(shifts[group[i]] for i in range(net.r))
    out = [per_reaction]
    sets = _translated_sets(net, group, shifts, comp_of, comp_order)
    collide = any(sets[a] & sets[b] for a, b in itertools.combinations(comp_order, 2))
    if not collide:
        return out
    rank = {c: k for k, c in enumerate(comp_order)}
    for s in range(net.m):
        moved = {}
        for g, t in shifts.items():
            e = [0] * net.m
            e[s] = rank[comp_of[g]]
            moved[g] = _add(t, e)
        msets = _translated_sets(net, group, moved, comp_of, comp_order)
        if not any(msets[a] & msets[b] for a, b in itertools.combinations(comp_order, 2)):
            out.append(tuple(moved[group[i]] for i in range(net.r)))
            break
    return out


def _kinetic_choices(source: Network, shifts) -> list[dict]:
    """All kinetic choices at improper complexes, lowest source index first."""
    pre: dict[tuple, list[int]] = {}
    for i, rx in enumerate(source.reactions):
        v = _add(source.complexes[rx.reactant], shifts[i])
        lst = pre.setdefault(v, [])
        if rx.reactant not in lst:
            lst.append(rx.reactant)
    conflicted = [(v, sorted(p)) for v, p in pre.items() if len(p) > 1]
    if not conflicted:
        return [{}]
    keys = [v for v, _ in conflicted]
    return [dict(zip(keys, combo)) for combo in itertools.product(*(p for _, p in conflicted))]


@dataclass(frozen=True)
class Candidate:
    translation: Translation
    classification: TranslationClassification
    resolvability: "ResolvabilityReport | None" = None

    @property
    def signature(self) -> tuple:
        t = self.translation
        return (t.shift, t.kinetic_set)

    @property
    def tier(self) -> int:
        c = self.classification
        if c.proper:
            return 0
        if self.resolvability is not None and self.resolvability.strongly_resolvable:
            return 1
        if self.resolvability is not None and self.resolvability.weakly_resolvable:
            return 2
        return 3


def find_translations(
    net: Network,
    max_orderings: int = 5040,
    max_candidates: int = 10000,
) -> list[Candidate]:
    """Search for strong translations with zero deficiency.

    Each stoichiometric generator's support is put in cyclic order (first
    reaction fixed, so (q-1)! orderings, at most ``max_orderings``); every
    consecutive pair forces the difference of two group shifts.  Reactions
    sharing a source, or lying on a cyclic generator, share one shift.
    ``max_candidates`` bounds the number of constraint solutions examined.
    Returned candidates are sorted: proper, then strongly resolvable, then
    weakly resolvable, then the rest; ties by signature.
    """
    group = _reaction_groups(net)
    ngroups = max(group) + 1 if group else 0
    gens = stoichiometric_generators(net)
    touched = {group[i] for g in gens for i in g.support}
    solutions: list[_Potentials] = []
    budget = [max_candidates]

    def rec(k: int, pot: _Potentials):
        if budget[0] <= 0:
            return
        if k == len(gens):
            budget[0] -= 1
            solutions.append(pot)
            return
        for order in _orderings(gens[k].support, max_orderings):
            trial = pot.copy()
            if all(trial.constrain(a, b, d) for a, b, d in _cycle_constraints(net, group, order)):
                rec(k + 1, trial)
            if budget[0] <= 0:
                return

    rec(0, _Potentials(ngroups, net.m))

    seen_shifts: set = set()
    found: dict[tuple, Candidate] = {}
    for pot in solutions:
        shifts, comp_of, comp_order = _component_shifts(net, group, pot, touched)
        for per_reaction in _variants(net, group, shifts, comp_of, comp_order):
            if per_reaction in seen_shifts:
                continue
            seen_shifts.add(per_reaction)
            for choice in _kinetic_choices(net, per_reaction):
                try:
                    t, cls = translation_from_shifts(net, per_reaction, choice)
                except TranslationError:
                    break
                if not cls.strong or cls.delta != 0:
                    break
                rep = None if cls.proper else check_resolvability(t, cls)
                cand = Candidate(t, cls, rep)
                found.setdefault(cand.signature, cand)
    return sorted(found.values(), key=lambda c: (c.tier, c.signature))


# ---------------------------------------------------------------------------
# resolvability


@dataclass(frozen=True)
class ResolvabilityReport:
    SI_basis: linalg.SubspaceBasis
    weakly_resolvable: bool
    pair_basis: tuple[tuple[int, int], ...]
    coeffs: dict = field(default_factory=dict)  # reaction -> tuple of Fractions
    strong_factors: dict = field(default_factory=dict)  # reaction -> PowerProduct
    strongly_resolvable: bool = False
    simplified: dict = field(default_factory=dict)  # reaction -> (num, den)
    fresh_symbols: dict = field(default_factory=dict)  # rate -> fresh symbol


def improper_kinetic_subspace(t: Translation, cls: TranslationClassification | None = None) -> linalg.SubspaceBasis:
    cls = cls or classify(t)
    src = t.source
    vecs = []
    for i in cls.improper_reactions:
        k = cls.kinetically_relevant[i]
        if k is None:
            raise TranslationError(f"improper reaction {i + 1} has no kinetically relevant complex")
        vecs.append(_sub(src.complexes[src.reactions[i].reactant], src.complexes[k]))
    return linalg.span(vecs, src.m)


def kinetic_pairs(t: Translation) -> list[tuple[int, int]]:
    """Pairs (p, q) of CR_K members in one translated linkage class, scan order."""
    out = []
    for members in linkage_classes(t.network).classes:
        ks = [t.kinetic_source(jt) for jt in members]
        ks = [p for p in ks if p is not None]
        for a, b in itertools.combinations(ks, 2):
            out.append((a, b))
    return out


def kinetic_subspace_from_pairs(t: Translation) -> linalg.SubspaceBasis:
    """S~ as the span of y_p - y_q over same-class kinetic pairs."""
    src = t.source
    return linalg.span((_sub(src.complexes[p], src.complexes[q]) for p, q in kinetic_pairs(t)), src.m)


def pair_basis(t: Translation) -> list[tuple[int, int]]:
    """Greedy rank-increasing selection from the kinetic pairs."""
    src = t.source
    chosen: list[tuple[int, int]] = []
    vecs: list = []
    for p, q in kinetic_pairs(t):
        v = _sub(src.complexes[p], src.complexes[q])
        if linalg.rank(vecs + [v]) > len(vecs):
            vecs.append(v)
            chosen.append((p, q))
    return chosen


def check_weak_resolvability(t: Translation, cls: TranslationClassification | None = None):
    """(weakly_resolvable, pair_basis, coeffs) with coeffs per improper reaction."""
    cls = cls or classify(t)
    if not cls.strong:
        return False, [], {}
    pairs = pair_basis(t)
    src = t.source
    basis = [_sub(src.complexes[p], src.complexes[q]) for p, q in pairs]
    coeffs = {}
    for i in cls.improper_reactions:
        target = _sub(src.complexes[src.reactions[i].reactant], src.complexes[cls.kinetically_relevant[i]])
        c = linalg.solve_coords(basis, target) if basis else (None if any(target) else ())
        if c is None:
            return False, pairs, {}
        coeffs[i] = c
    return True, pairs, coeffs


def _fresh_names(t: Translation, improper: Iterable[int]) -> dict[str, str]:
    used = set(t.source.rate_symbols)
    out = {}
    for i in improper:
        sym = t.source.reactions[i].rate + FRESH_MARK
        while sym in used:
            sym += FRESH_MARK
        used.add(sym)
        out[t.source.reactions[i].rate] = sym
    return out


def semi_proper_network(t: Translation, cls: TranslationClassification | None = None) -> tuple[Network, dict]:
    """Translated graph with improper reactions carrying fresh rate symbols."""
    cls = cls or classify(t)
    fresh = _fresh_names(t, cls.improper_reactions)
    tnet = t.network
    inv = {t.h1[i]: i for i in range(t.source.r)}
    rx = []
    for j, r in enumerate(tnet.reactions):
        i = inv[j]
        sym = t.source.reactions[i].rate
        rx.append(Reaction(r.reactant, r.product, fresh.get(sym, sym)))
    return Network(tnet.species, tnet.complexes, tuple(rx), tnet.name + "_semiproper"), fresh


def check_resolvability(t: Translation, cls: TranslationClassification | None = None) -> ResolvabilityReport:
    """Weak and strong resolvability of an improper translation."""
    cls = cls or classify(t)
    SI = improper_kinetic_subspace(t, cls)
    weak, pairs, coeffs = check_weak_resolvability(t, cls)
    if not weak:
        return ResolvabilityReport(SI, False, tuple(pairs), coeffs)
    semi, fresh = semi_proper_network(t, cls)
    K = tree_constants(semi).per_complex
    fresh_syms = set(fresh.values())
    factors, simplified = {}, {}
    strong = True
    for i, c in coeffs.items():
        pp = PowerProduct(
            tuple((K[t.h2[p]], K[t.h2[q]], Fraction(cj)) for (p, q), cj in zip(pairs, c) if cj != 0)
        )
        factors[i] = pp
        if not power_product_independent_of(pp, fresh_syms):
            strong = False
            continue
        simplified[i] = _simplify_factor(pp, fresh_syms)
    return ResolvabilityReport(SI, True, tuple(pairs), coeffs, factors, strong, simplified, fresh)


def _simplify_factor(pp: PowerProduct, fresh: set[str]):
    """Presentable (num, den, L) of a factor already known to be free of ``fresh``."""
    N, D, L = pp.cleared()
    n, d = simplify_ratio(N, D)
    if (n.symbols() | d.symbols()) & fresh:
        one = {s: 1 for s in fresh}
        n, d = simplify_ratio(N.substitute(one), D.substitute(one))
    return n, d, L


def check_strong_resolvability(t: Translation) -> ResolvabilityReport:
    return check_resolvability(t)


# ---------------------------------------------------------------------------
# translated rate constants


def adjustment_factors(t: Translation, cls: TranslationClassification | None = None) -> dict[int, tuple]:
    """reaction -> (num, den, L) with factor ** L == num / den, for improper reactions."""
    cls = cls or classify(t)
    if cls.proper:
        return {}
    rep = check_resolvability(t, cls)
    if not rep.strongly_resolvable:
        raise TranslationError("improper translation is not strongly resolvable; rates cannot be transferred")
    return dict(rep.simplified)


def translated_rate_constants_symbolic(t: Translation) -> dict[str, RationalFunction]:
    """Translated rate per rate symbol (symbolic).  Raises for non-integer exponents."""
    factors = adjustment_factors(t)
    out = {}
    for i, rx in enumerate(t.source.reactions):
        k = Polynomial.symbol(rx.rate)
        if i in factors:
            n, d, L = factors[i]
            if L != 1:
                raise TranslationError("adjustment factor has a fractional exponent; no rational form")
            out[rx.rate] = RationalFunction(n * k, d)
        else:
            out[rx.rate] = RationalFunction(k)
    return out


def translated_rate_constants(t: Translation, rates: Mapping[str, object]) -> dict[str, object]:
    """Numeric translated rates keyed by the (shared) rate symbols.

    Proper reactions keep k_i; improper ones get the strong kinetic
    adjustment factor times k_i.  Exact for rational input and integer
    exponents, float otherwise.
    """
    factors = adjustment_factors(t)
    out = {}
    for i, rx in enumerate(t.source.reactions):
        k = rates[rx.rate]
        if i in factors:
            n, d, L = factors[i]
            val = n.evaluate(rates) / d.evaluate(rates)
            f = val if L == 1 else float(val) ** (1.0 / L)
            out[rx.rate] = f * k
        else:
            out[rx.rate] = k
    return out


def format_shift(v: Sequence[int], species: Sequence[str]) -> str:
    return _signed(v, species)


__all__ = [
    "Candidate",
    "ResolvabilityReport",
    "Translation",
    "TranslationClassification",
    "adjustment_factors",
    "check_resolvability",
    "check_strong_resolvability",
    "check_weak_resolvability",
    "classify",
    "find_translations",
    "format_complex",
    "format_shift",
    "improper_kinetic_subspace",
    "kinetic_pairs",
    "kinetic_subspace_from_pairs",
    "pair_basis",
    "parse_translation",
    "semi_proper_network",
    "serialize_translation",
    "translated_rate_constants",
    "translated_rate_constants_symbolic",
    "translation_from_shifts",
    "validate_translation",
]
