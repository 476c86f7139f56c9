"""Bundled example networks and generators for test corpora."""

from __future__ import annotations

import random
from importlib import resources

from .model import GeneralizedNetwork, Network, Reaction, parse_generalized_network, parse_network

EXAMPLES = (
    "futile_cycle",
    "lotka_volterra",
    "shinar_feinberg",
    "network38",
    "network39",
    "network32",
    "two_cycle",
)


def example_text(name: str) -> str:
    fname = name if "." in name else name + ".crn"
    return resources.files("crntrans").joinpath("data", fname).read_text(encoding="utf-8")


def load_example(name: str) -> Network:
    if name.startswith("multiple_futile_cycle"):
        n = int(name.rsplit("_", 1)[1]) if name[-1].isdigit() else 2
        return parse_network(multiple_futile_cycle(n))
    return parse_network(example_text(name))


def load_generalized_example(name: str) -> GeneralizedNetwork:
    return parse_generalized_network(example_text(name))


def multiple_futile_cycle(n: int) -> str:
    """Text of the n-site sequential phosphorylation network."""
    if n < 1:
        raise ValueError("n must be at least 1")
    species = ["S0", "E", "ES0", "S1", "F", "FS1"]
    for i in range(2, n + 1):
        species += [f"ES{i - 1}", f"S{i}", f"FS{i}"]
    lines = [f"network multiple_futile_cycle_{n}", "species " + " ".join(species)]
    for i in range(1, n + 1):
        a, b = i - 1, i
        lines += [
            f"S{a} + E <-> ES{a} ; kon_{a}, koff_{a}",
            f"ES{a} -> S{b} + E ; kcat_{a}",
            f"S{b} + F <-> FS{b} ; lon_{a}, loff_{a}",
            f"FS{b} -> S{a} + F ; lcat_{a}",
        ]
    return "\n".join(lines) + "\n"


def random_network(
    seed: int,
    n_species: int = 3,
    n_complexes: int = 5,
    n_reactions: int = 6,
    max_coeff: int = 2,
    weakly_reversible: bool = False,
) -> Network:
    """A small random network; every species and complex is used.

    With ``weakly_reversible`` the complexes are split into classes and each
    class gets a directed Hamiltonian cycle plus random chords.
    """
    if not 2 <= n_complexes <= (max_coeff + 1) ** n_species:
        raise ValueError(f"cannot draw {n_complexes} distinct complexes over {n_species} species")
    if n_reactions > n_complexes * (n_complexes - 1):
        raise ValueError(f"at most {n_complexes * (n_complexes - 1)} distinct reactions on {n_complexes} complexes")
    rng = random.Random(seed)
    species = tuple(f"X{i + 1}" for i in range(n_species))
    while True:
        pool = set()
        while len(pool) < n_complexes:
            v = tuple(rng.randint(0, max_coeff) for _ in range(n_species))
            pool.add(v)
        complexes = sorted(pool, key=lambda v: (sum(v), v))
        if all(any(c[s] for c in complexes) for s in range(n_species)):
            break
    arcs: list[tuple[int, int]] = []
    if weakly_reversible:
        order = list(range(n_complexes))
        rng.shuffle(order)
        cut = sorted(rng.sample(range(2, n_complexes - 1), k=min(1, max(0, n_complexes - 4)))) if n_complexes >= 4 else []
        groups, start = [], 0
        for c in cut + [n_complexes]:
            groups.append(order[start:c])
            start = c
        for g in groups:
            for a, b in zip(g, g[1:] + g[:1]):
                arcs.append((a, b))
            for _ in range(rng.randint(0, len(g))):
                a, b = rng.sample(g, 2)
                if (a, b) not in arcs:
                    arcs.append((a, b))
    else:
        used = set()
        while len(arcs) < n_reactions or len(used) < n_complexes:
            a, b = rng.sample(range(n_complexes), 2)
            if (a, b) not in arcs:
                arcs.append((a, b))
                used.update((a, b))
    # renumber complexes in first-occurrence order, matching the parser
    remap: dict[int, int] = {}
    for a, b in arcs:
        for c in (a, b):
            remap.setdefault(c, len(remap))
    cx = [None] * len(remap)
    for old, new in remap.items():
        cx[new] = complexes[old]
    reactions = tuple(Reaction(remap[a], remap[b], f"k{i + 1}") for i, (a, b) in enumerate(arcs))
    return Network(species, tuple(cx), reactions, f"random_{seed}")
