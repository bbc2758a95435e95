"""Finite posets, their up-sets, and monotone step functions.

On a finite poset the Scott and Alexandrov topologies coincide: the open
sets are exactly the upward-closed subsets, and a map into the extended
nonnegative reals is continuous iff it is monotone.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .errors import (
    CycleDetected,
    DuplicateElement,
    NotMonotone,
    NotUpwardClosed,
    PosetMismatch,
    SizeLimitExceeded,
)
from .rational import as_rat

#: Largest carrier for which up-sets are enumerated.
MAX_ELEMENTS = 12


@dataclass(frozen=True, eq=False)
class FinitePoset:
    """A finite partial order stored as its reflexive-transitive closure.

    ``leq[i][j]`` is true iff ``elements[i] <= elements[j]``.
    Use :func:`build_poset` rather than calling this directly.
    """

    elements: tuple[str, ...]
    leq: tuple[tuple[bool, ...], ...]
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_index", {e: i for i, e in enumerate(self.elements)})

    def __len__(self) -> int:
        return len(self.elements)

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, FinitePoset):
            return NotImplemented
        return self.elements == other.elements and self.leq == other.leq

    def __hash__(self):
        return hash((self.elements, self.leq))

    def __repr__(self):
        covers = ", ".join(f"{a}<{b}" for a, b in self.covers)
        return f"FinitePoset({list(self.elements)}" + (f", covers: {covers})" if covers else ")")

    def index(self, element: str) -> int:
        try:
            return self._index[element]
        except KeyError:
            raise KeyError(f"unknown element {element!r}") from None

    def is_leq(self, a: str, b: str) -> bool:
        return self.leq[self.index(a)][self.index(b)]

    def up_mask(self, i: int) -> int:
        """Bitmask of the principal up-set of element ``i``."""
        return sum(1 << j for j in range(len(self)) if self.leq[i][j])

    @cached_property
    def covers(self) -> tuple[tuple[str, str], ...]:
        """Hasse diagram edges ``(a, b)`` with ``a < b`` and nothing between."""
        n = len(self)
        out = []
        for i in range(n):
            for j in range(n):
                if i == j or not self.leq[i][j]:
                    continue
                if any(k != i and k != j and self.leq[i][k] and self.leq[k][j] for k in range(n)):
                    continue
                out.append((self.elements[i], self.elements[j]))
        return tuple(out)

    @cached_property
    def strict_pairs(self) -> tuple[tuple[int, int], ...]:
        n = len(self)
        return tuple((i, j) for i in range(n) for j in range(n) if i != j and self.leq[i][j])

    @cached_property
    def cover_pairs(self) -> tuple[tuple[int, int], ...]:
        return tuple((self.index(a), self.index(b)) for a, b in self.covers)

    @cached_property
    def topological_order(self) -> tuple[int, ...]:
        """A linear extension: element indices sorted by number of predecessors."""
        n = len(self)
        return tuple(sorted(range(n), key=lambda j: (sum(self.leq[i][j] for i in range(n)), j)))

    @cached_property
    def upset_masks(self) -> tuple[int, ...]:
        """All up-sets as bitmasks, ordered by size then lexicographically."""
        n = len(self)
        if n > MAX_ELEMENTS:
            raise SizeLimitExceeded(f"{n} elements exceeds the up-set cap of {MAX_ELEMENTS}")
        ups = [self.up_mask(i) for i in range(n)]
        found = [m for m in range(1 << n) if all(ups[i] & ~m == 0 for i in range(n) if m >> i & 1)]
        return tuple(sorted(found, key=lambda m: (_popcount(m), _mask_indices(m))))

    @cached_property
    def nonempty_upset_masks(self) -> tuple[int, ...]:
        return tuple(m for m in self.upset_masks if m)

    @cached_property
    def upset_members(self) -> tuple[tuple[int, ...], ...]:
        """Index tuples of the nonempty up-sets, aligned with ``nonempty_upset_masks``."""
        return tuple(_mask_indices(m) for m in self.nonempty_upset_masks)

    def mask_of(self, members: Iterable[str]) -> int:
        return sum(1 << self.index(e) for e in set(members))

    def members_of(self, mask: int) -> frozenset[str]:
        return frozenset(self.elements[i] for i in _mask_indices(mask))

    def is_upward_closed(self, mask: int) -> bool:
        return all(self.up_mask(i) & ~mask == 0 for i in _mask_indices(mask))

    def check_same(self, other: "FinitePoset") -> None:
        if self is not other and self != other:
            raise PosetMismatch("objects live on different posets")


def _popcount(m: int) -> int:
    return bin(m).count("1")


def _mask_indices(m: int) -> tuple[int, ...]:
    out = []
    i = 0
    while m:
        if m & 1:
            out.append(i)
        m >>= 1
        i += 1
    return tuple(out)


def build_poset(elements: Sequence[str], covers: Iterable[Sequence[str]] = ()) -> FinitePoset:
    """Close ``covers`` reflexively and transitively into a partial order.

    >>> c2 = build_poset(["bot", "top"], [("bot", "top")])
    >>> c2.is_leq("bot", "top"), c2.is_leq("top", "bot")
    (True, False)
    """
    elements = tuple(str(e) for e in elements)
    if not elements:
        raise ValueError("a poset needs at least one element")
    seen = set()
    for e in elements:
        if e in seen:
            raise DuplicateElement(f"element {e!r} listed twice")
        seen.add(e)
    index = {e: i for i, e in enumerate(elements)}
    n = len(elements)
    rel = [[i == j for j in range(n)] for i in range(n)]
    for pair in covers:
        a, b = (str(x) for x in pair)
        if a not in index or b not in index:
            raise KeyError(f"cover ({a!r}, {b!r}) mentions an unknown element")
        rel[index[a]][index[b]] = True
    for k in range(n):
        for i in range(n):
            if rel[i][k]:
                for j in range(n):
                    if rel[k][j]:
                        rel[i][j] = True
    for i in range(n):
        for j in range(i + 1, n):
            if rel[i][j] and rel[j][i]:
                raise CycleDetected(f"{elements[i]!r} and {elements[j]!r} lie on a cycle")
    return FinitePoset(elements, tuple(tuple(r) for r in rel))


def chain(n: int, prefix: str = "c") -> FinitePoset:
    names = [f"{prefix}{i}" for i in range(n)]
    return build_poset(names, zip(names, names[1:]))


def antichain(n: int, prefix: str = "a") -> FinitePoset:
    return build_poset([f"{prefix}{i}" for i in range(n)])


def restrict(p: FinitePoset, keep: Sequence[str]) -> FinitePoset:
    """Induced suborder on ``keep`` (already transitive, so no re-closure is lost)."""
    keep = [e for e in p.elements if e in set(keep)]
    covers = [(a, b) for a in keep for b in keep if a != b and p.is_leq(a, b)]
    return build_poset(keep, covers)


@dataclass(frozen=True)
class UpSet:
    """An upward-closed subset, i.e. an open set of the poset."""

    poset: FinitePoset
    members: frozenset[str]

    def __post_init__(self):
        if not self.poset.is_upward_closed(self.mask):
            raise NotUpwardClosed(f"{sorted(self.members)} is not upward closed")

    @property
    def mask(self) -> int:
        return self.poset.mask_of(self.members)

    def __repr__(self):
        order = {e: i for i, e in enumerate(self.poset.elements)}
        return "UpSet{" + ", ".join(sorted(self.members, key=order.get)) + "}"


def upsets(p: FinitePoset) -> list[UpSet]:
    """Every up-set of ``p`` exactly once, ordered by size then lexicographically."""
    return [UpSet(p, p.members_of(m)) for m in p.upset_masks]


@dataclass(frozen=True)
class StepFn:
    """A monotone map from poset elements to nonnegative rationals."""

    poset: FinitePoset
    values: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.values) != len(self.poset):
            raise ValueError("one value per element expected")
        if any(v < 0 for v in self.values):
            raise ValueError("step functions take nonnegative values")
        if not is_monotone(self.poset, self.values):
            raise NotMonotone("values are not monotone in the order")

    @classmethod
    def from_map(cls, p: FinitePoset, values: Mapping[str, object], default=0) -> "StepFn":
        vals = [as_rat(values.get(e, default)) for e in p.elements]
        return cls(p, tuple(vals))

    @classmethod
    def constant(cls, p: FinitePoset, c=1) -> "StepFn":
        return cls(p, (as_rat(c),) * len(p))

    def __getitem__(self, element: str) -> Fraction:
        return self.values[self.poset.index(element)]

    def as_map(self) -> dict[str, Fraction]:
        return dict(zip(self.poset.elements, self.values))

    def __repr__(self):
        return "StepFn(" + ", ".join(f"{e}={v}" for e, v in zip(self.poset.elements, self.values)) + ")"

    def _combine(self, other: "StepFn", op) -> "StepFn":
        self.poset.check_same(other.poset)
        return StepFn(self.poset, tuple(op(a, b) for a, b in zip(self.values, other.values)))

    def __add__(self, other: "StepFn") -> "StepFn":
        return self._combine(other, lambda a, b: a + b)

    def scale(self, a) -> "StepFn":
        a = as_rat(a)
        if a < 0:
            raise ValueError("cone scaling needs a nonnegative factor")
        return StepFn(self.poset, tuple(a * v for v in self.values))

    def __rmul__(self, a) -> "StepFn":
        return self.scale(a)

    def max(self, other: "StepFn") -> "StepFn":
        return self._combine(other, max)

    def min(self, other: "StepFn") -> "StepFn":
        return self._combine(other, min)


def is_monotone(p: FinitePoset, values: Sequence) -> bool:
    return all(values[i] <= values[j] for i, j in p.strict_pairs)


def chi(p: FinitePoset, u: UpSet | Iterable[str]) -> StepFn:
    """Characteristic function of an up-set (raises NotUpwardClosed otherwise)."""
    members = u.members if isinstance(u, UpSet) else frozenset(u)
    mask = p.mask_of(members)
    if not p.is_upward_closed(mask):
        raise NotUpwardClosed(f"{sorted(members)} is not upward closed")
    return chi_mask(p, mask)


def chi_mask(p: FinitePoset, mask: int) -> StepFn:
    return StepFn(p, tuple(Fraction(mask >> i & 1) for i in range(len(p))))


def layer_cake(h: StepFn) -> list[tuple[Fraction, int]]:
    """Write ``h`` as ``sum(c * chi(U))`` over its level up-sets.

    Returns ``(c, mask)`` pairs with ``c > 0``; the level sets
    ``{x : h(x) >= t}`` are nested and upward closed because ``h`` is monotone.
    """
    levels = sorted(set(v for v in h.values if v > 0))
    out = []
    prev = Fraction(0)
    for t in levels:
        mask = sum(1 << i for i, v in enumerate(h.values) if v >= t)
        out.append((t - prev, mask))
        prev = t
    return out


def from_layers(p: FinitePoset, layers: Iterable[tuple[Fraction, int]]) -> StepFn:
    vals = [Fraction(0)] * len(p)
    for c, mask in layers:
        for i in _mask_indices(mask):
            vals[i] += c
    return StepFn(p, tuple(vals))


def _random_rat(rng: random.Random, lower: Fraction, denom_bound: int) -> Fraction:
    # Any a/b >= lower with b <= denom_bound is reachable: pick b, then a
    # geometric offset above the smallest admissible numerator.
    den = rng.randint(1, denom_bound)
    num = -((-lower.numerator * den) // lower.denominator)
    while rng.random() < 0.55:
        num += 1
    return Fraction(num, den)


def random_monotone(p: FinitePoset, seed: int | random.Random, denom_bound: int = 4) -> StepFn:
    """A seeded random monotone step function with denominators <= ``denom_bound``."""
    if denom_bound < 1:
        raise ValueError("denom_bound must be at least 1")
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    vals = [Fraction(0)] * len(p)
    for j in p.topological_order:
        lower = max((vals[i] for i in range(len(p)) if i != j and p.leq[i][j]), default=Fraction(0))
        vals[j] = _random_rat(rng, lower, denom_bound)
    return StepFn(p, tuple(vals))
