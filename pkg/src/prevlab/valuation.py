"""Simple valuations, their integrals, and the stochastic order."""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .errors import MassExceedsOne
from .order import FinitePoset, StepFn, build_poset, layer_cake
from .rational import as_rat

ZERO = Fraction(0)


class Flavor(enum.Enum):
    UNBOUNDED = "unbounded"
    SUB1 = "sub1"
    NORM1 = "norm1"

    def admits(self, mass: Fraction) -> bool:
        if self is Flavor.SUB1:
            return mass <= 1
        if self is Flavor.NORM1:
            return mass == 1
        return True


@dataclass(frozen=True)
class Valuation:
    """A simple valuation ``sum_x w(x) delta_x``; also a linear prevision via :func:`integrate`."""

    poset: FinitePoset
    weights: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.weights) != len(self.poset):
            raise ValueError("one weight per element expected")
        if any(w < 0 for w in self.weights):
            raise ValueError("valuation weights must be nonnegative")

    @classmethod
    def from_map(cls, p: FinitePoset, weights: Mapping[str, object]) -> "Valuation":
        for e in weights:
            p.index(e)
        return cls(p, tuple(as_rat(weights.get(e, 0)) for e in p.elements))

    @classmethod
    def point(cls, p: FinitePoset, element: str, weight=1) -> "Valuation":
        return cls.from_map(p, {element: weight})

    @classmethod
    def zero(cls, p: FinitePoset) -> "Valuation":
        return cls(p, (ZERO,) * len(p))

    def __getitem__(self, element: str) -> Fraction:
        return self.weights[self.poset.index(element)]

    def as_map(self) -> dict[str, Fraction]:
        return dict(zip(self.poset.elements, self.weights))

    def measure(self, mask: int) -> Fraction:
        """``nu(U)`` for the up-set with bitmask ``mask``."""
        return sum((w for i, w in enumerate(self.weights) if mask >> i & 1), ZERO)

    def __add__(self, other: "Valuation") -> "Valuation":
        self.poset.check_same(other.poset)
        return Valuation(self.poset, tuple(a + b for a, b in zip(self.weights, other.weights)))

    def scale(self, a) -> "Valuation":
        a = as_rat(a)
        return Valuation(self.poset, tuple(a * w for w in self.weights))

    def __rmul__(self, a) -> "Valuation":
        return self.scale(a)

    def __repr__(self):
        terms = [f"{w}*{e}" for e, w in zip(self.poset.elements, self.weights) if w]
        return "Valuation(" + (" + ".join(terms) or "0") + ")"


def combine(vals, coeffs) -> Valuation:
    """``sum_i coeffs[i] * vals[i]`` over a shared poset."""
    p = vals[0].poset
    out = [ZERO] * len(p)
    for v, c in zip(vals, coeffs):
        if c:
            for i, w in enumerate(v.weights):
                if w:
                    out[i] += c * w
    return Valuation(p, tuple(out))


def mass(v: Valuation) -> Fraction:
    return sum(v.weights, ZERO)


def flavor_of(v: Valuation) -> Flavor:
    """The strictest flavor ``v`` belongs to."""
    m = mass(v)
    if m == 1:
        return Flavor.NORM1
    return Flavor.SUB1 if m < 1 else Flavor.UNBOUNDED


def upset_measures(v: Valuation) -> tuple[Fraction, ...]:
    """``nu(U)`` for every nonempty up-set, in canonical order."""
    w = v.weights
    return tuple(sum((w[i] for i in members), ZERO) for members in v.poset.upset_members)


def integrate(h: StepFn, v: Valuation, method: str = "direct") -> Fraction:
    """Integral of ``h`` against ``v``.

    ``direct`` sums ``w(x) h(x)``; ``choquet`` integrates the level-set
    measures ``nu({h >= t})`` over the sorted positive values of ``h``.
    """
    h.poset.check_same(v.poset)
    if method == "direct":
        return sum((w * x for w, x in zip(v.weights, h.values) if w and x), ZERO)
    if method == "choquet":
        return sum((step * v.measure(mask) for step, mask in layer_cake(h)), ZERO)
    raise ValueError(f"unknown integration method {method!r}")


def riesz_measures(v: Valuation) -> dict[int, Fraction]:
    """Recover ``nu(U) = F(chi_U)`` with ``F`` the integral against ``v``, for every up-set."""
    p = v.poset
    out = {}
    for mask in p.upset_masks:
        chi_u = StepFn(p, tuple(Fraction(mask >> i & 1) for i in range(len(p))))
        out[mask] = integrate(chi_u, v)
    return out


def mobius_weights(p: FinitePoset, measures: Mapping[int, Fraction]) -> Valuation:
    """Point masses from an up-set function: ``w(x) = nu(up x) - nu(up x minus x)``."""
    weights = []
    for i in range(len(p)):
        up = p.up_mask(i)
        weights.append(measures[up] - measures[up & ~(1 << i)])
    return Valuation(p, tuple(weights))


def riesz_roundtrip(v: Valuation) -> Valuation:
    return mobius_weights(v.poset, riesz_measures(v))


def stochastic_witness(v1: Valuation, v2: Valuation) -> int | None:
    """Bitmask of the first up-set ``U`` with ``nu1(U) > nu2(U)``, or None if ``v1 <= v2``."""
    v1.poset.check_same(v2.poset)
    for mask in v1.poset.nonempty_upset_masks:
        if v1.measure(mask) > v2.measure(mask):
            return mask
    return None


def stochastic_leq(v1: Valuation, v2: Valuation) -> bool:
    return stochastic_witness(v1, v2) is None


BOTTOM = "_bot"


def lift_poset(p: FinitePoset, bottom: str = BOTTOM) -> FinitePoset:
    """``p`` with a fresh least element prepended."""
    if bottom in p.elements:
        raise ValueError(f"{bottom!r} already names an element")
    covers = [(bottom, e) for e in p.elements] + list(p.covers)
    return build_poset((bottom,) + p.elements, covers)


def edalat_lift(p: FinitePoset, v: Valuation, bottom: str = BOTTOM) -> tuple[FinitePoset, Valuation]:
    """Normalize a subnormalized ``v`` by putting the missing mass on a fresh bottom."""
    p.check_same(v.poset)
    m = mass(v)
    if m > 1:
        raise MassExceedsOne(f"mass {m} exceeds 1")
    lp = lift_poset(p, bottom)
    return lp, Valuation(lp, (1 - m,) + v.weights)


def lift_into(lifted: FinitePoset, v: Valuation) -> Valuation:
    """Lift ``v`` onto an already-built lifted poset (bottom first)."""
    m = mass(v)
    if m > 1:
        raise MassExceedsOne(f"mass {m} exceeds 1")
    return Valuation(lifted, (1 - m,) + v.weights)


def edalat_unlift(p: FinitePoset, lifted: Valuation) -> Valuation:
    """Drop the bottom's weight (the restriction of ``nu'`` to opens inside ``X``)."""
    return Valuation(p, lifted.weights[1:])


def random_valuation(
    p: FinitePoset,
    rng: random.Random,
    denom_bound: int = 4,
    max_weight: int = 2,
    density: float = 0.6,
) -> Valuation:
    """A seeded random simple valuation with small-denominator weights."""
    w = []
    for _ in p.elements:
        if rng.random() < density:
            den = rng.randint(1, denom_bound)
            w.append(Fraction(rng.randint(0, max_weight * den), den))
        else:
            w.append(ZERO)
    return Valuation(p, tuple(w))


def random_subnormalized(p: FinitePoset, rng: random.Random, denom_bound: int = 4) -> Valuation:
    """A random valuation with mass at most 1."""
    n = len(p)
    den = rng.randint(1, denom_bound)
    budget = rng.randint(0, den)
    w = [0] * n
    for _ in range(budget):
        w[rng.randrange(n)] += 1
    return Valuation(p, tuple(Fraction(x, den) for x in w))


def random_normalized(p: FinitePoset, rng: random.Random, denom_bound: int = 4) -> Valuation:
    n = len(p)
    den = rng.randint(1, denom_bound)
    w = [0] * n
    for _ in range(den):
        w[rng.randrange(n)] += 1
    return Valuation(p, tuple(Fraction(x, den) for x in w))


def random_of_flavor(p: FinitePoset, rng: random.Random, flavor: Flavor, denom_bound: int = 4) -> Valuation:
    if flavor is Flavor.NORM1:
        return random_normalized(p, rng, denom_bound)
    if flavor is Flavor.SUB1:
        return random_subnormalized(p, rng, denom_bound)
    return random_valuation(p, rng, denom_bound)
