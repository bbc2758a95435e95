"""Seeded random instances for property tests and fuzz campaigns."""

from __future__ import annotations

import random
from fractions import Fraction

from .order import FinitePoset, build_poset
from .powercone import GenSet, Shape, hull
from .prevision import ForkPres, Kind, PrevisionPres
from .valuation import Flavor, Valuation, combine, lift_into, lift_poset, random_of_flavor, random_subnormalized


def random_poset(rng: random.Random, max_elems: int, min_elems: int = 1, edge_prob: float = 0.4) -> FinitePoset:
    n = rng.randint(min_elems, max_elems)
    names = [f"e{i}" for i in range(n)]
    covers = [(names[i], names[j]) for i in range(n) for j in range(i + 1, n) if rng.random() < edge_prob]
    return build_poset(names, covers)


def flavored_space(rng: random.Random, flavor: Flavor, max_elems: int) -> FinitePoset:
    """A poset for ``flavor``; normalized instances live on a lifted poset ``X_bot``."""
    if flavor is Flavor.NORM1:
        return lift_poset(random_poset(rng, max(1, max_elems - 1)))
    return random_poset(rng, max_elems)


def random_generators(rng: random.Random, p: FinitePoset, flavor: Flavor, count: int) -> list[Valuation]:
    """Generators respecting ``flavor``; normalized ones are lifts of subnormalized ones."""
    if flavor is Flavor.NORM1 and p.elements[0] == "_bot":
        base = build_poset(p.elements[1:], [c for c in p.covers if c[0] != "_bot"])
        return [Valuation(p, lift_into(p, random_subnormalized(base, rng)).weights) for _ in range(count)]
    return [random_of_flavor(p, rng, flavor) for _ in range(count)]


def random_presentation(rng: random.Random, kind: Kind, flavor: Flavor, max_elems: int, max_gens: int) -> PrevisionPres:
    p = flavored_space(rng, flavor, max_elems)
    k = 1 if kind is Kind.LINEAR else rng.randint(1, max_gens)
    return PrevisionPres(kind, flavor, tuple(random_generators(rng, p, flavor, k)))


def random_convex_combination(rng: random.Random, gens) -> Valuation:
    den = rng.randint(1, 4)
    cuts = sorted(rng.randint(0, den) for _ in range(len(gens) - 1))
    parts = [b - a for a, b in zip([0] + cuts, cuts + [den])]
    return combine(list(gens), [Fraction(x, den) for x in parts])


def random_valid_fork(rng: random.Random, flavor: Flavor, max_elems: int, max_gens: int) -> ForkPres:
    """``r`` of the lens hull of a random generator set, hence a fork."""
    p = flavored_space(rng, flavor, max_elems)
    raw = tuple(random_generators(rng, p, flavor, rng.randint(1, max_gens)))
    return ForkPres(PrevisionPres(Kind.SMYTH, flavor, raw), PrevisionPres(Kind.HOARE, flavor, raw))


def shift_mass(rng: random.Random, v: Valuation, upward: bool) -> Valuation:
    """Move all of ``v``'s mass onto one random maximal (``upward``) or minimal element."""
    p = v.poset
    n = len(p)
    if upward:
        ends = [j for j in range(n) if not any(p.leq[j][k] for k in range(n) if k != j)]
    else:
        ends = [j for j in range(n) if not any(p.leq[k][j] for k in range(n) if k != j)]
    target = rng.choice(ends)
    w = [Fraction(0)] * n
    w[target] = sum(v.weights, Fraction(0))
    return Valuation(p, tuple(w))


def random_fork_candidate(rng: random.Random, flavor: Flavor, max_elems: int, max_gens: int) -> ForkPres:
    """A mix: valid forks, independent random pairs, and valid forks with one side perturbed."""
    mode = rng.choice((0, 1, 1, 2))
    if mode == 0:
        return random_valid_fork(rng, flavor, max_elems, max_gens)
    p = flavored_space(rng, flavor, max_elems)
    if mode == 1:
        lo = random_generators(rng, p, flavor, rng.randint(1, max_gens))
        up = random_generators(rng, p, flavor, rng.randint(1, max_gens))
    else:
        raw = random_generators(rng, p, flavor, rng.randint(1, max_gens))
        lo, up = list(raw), list(raw)
        # a lower generator pushed up, or an upper one pushed down, often breaks Walley
        to_lower = rng.random() < 0.5
        side = lo if to_lower else up
        k = rng.randrange(len(side))
        side[k] = shift_mass(rng, side[k], upward=to_lower)
    return ForkPres(PrevisionPres(Kind.SMYTH, flavor, tuple(lo)), PrevisionPres(Kind.HOARE, flavor, tuple(up)))


def random_genset(rng: random.Random, shape: Shape, flavor: Flavor, p: FinitePoset, max_gens: int) -> GenSet:
    raw = random_generators(rng, p, flavor, rng.randint(1, max_gens))
    return hull(raw, shape, flavor)
