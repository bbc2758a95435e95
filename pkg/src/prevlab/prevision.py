"""Finitely presented Hoare, Smyth and linear previsions, and forks.

A Hoare presentation denotes ``h -> max_i <a_i, h>`` (sublinear), a Smyth
presentation ``h -> min_i <a_i, h>`` (superlinear).  A fork pairs a Smyth
lower prevision with a Hoare upper one; whether the pair satisfies
Walley's condition is decided by :func:`walley_decide`.
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence, Union

import numpy as np

from .encode import add_flavor_mass, add_monotone_fn, add_stoch_rows, add_terms, integral_stepfn, pairing
from .errors import CertificateError, FlavorMismatch
from .lp import Optimal, Unbounded, lp_solve
from .lp.builder import LpModel
from .order import FinitePoset, StepFn, random_monotone
from .rational import lcm_of_denominators
from .valuation import Flavor, Valuation, combine, integrate, mass, stochastic_leq


class Kind(enum.Enum):
    HOARE = "hoare"
    SMYTH = "smyth"
    LINEAR = "linear"


@dataclass(frozen=True)
class PrevisionPres:
    """A generator presentation of a prevision.

    ``checked=False`` skips the generator-mass flavor invariant so that
    mis-declared presentations can be fed to :func:`check_flavor_semantic`.
    """

    kind: Kind
    flavor: Flavor
    generators: tuple[Valuation, ...]
    checked: bool = field(default=True, compare=False, repr=False)

    def __post_init__(self):
        if not self.generators:
            raise ValueError("a presentation needs at least one generator")
        p = self.generators[0].poset
        for g in self.generators[1:]:
            p.check_same(g.poset)
        if self.kind is Kind.LINEAR and len(self.generators) != 1:
            raise ValueError("a linear prevision has exactly one generator")
        if self.checked:
            for g in self.generators:
                if not self.flavor.admits(mass(g)):
                    raise FlavorMismatch(f"generator of mass {mass(g)} violates flavor {self.flavor.value}")

    @property
    def poset(self) -> FinitePoset:
        return self.generators[0].poset

    @classmethod
    def hoare(cls, gens, flavor=Flavor.UNBOUNDED) -> "PrevisionPres":
        return cls(Kind.HOARE, flavor, tuple(gens))

    @classmethod
    def smyth(cls, gens, flavor=Flavor.UNBOUNDED) -> "PrevisionPres":
        return cls(Kind.SMYTH, flavor, tuple(gens))

    @classmethod
    def linear(cls, gen, flavor=Flavor.UNBOUNDED) -> "PrevisionPres":
        return cls(Kind.LINEAR, flavor, (gen,))


@dataclass(frozen=True)
class ForkPres:
    lower: PrevisionPres
    upper: PrevisionPres

    def __post_init__(self):
        if self.lower.kind is not Kind.SMYTH or self.upper.kind is not Kind.HOARE:
            raise ValueError("a fork pairs a Smyth lower part with a Hoare upper part")
        self.lower.poset.check_same(self.upper.poset)
        if self.lower.flavor is not self.upper.flavor:
            raise FlavorMismatch("fork components have different flavors")

    @property
    def poset(self) -> FinitePoset:
        return self.lower.poset

    @property
    def flavor(self) -> Flavor:
        return self.lower.flavor


Presentation = Union[PrevisionPres, ForkPres]


def eval_prev(f: PrevisionPres, h: StepFn) -> Fraction:
    """``max`` (Hoare), ``min`` (Smyth) or the single integral (linear) over the generators."""
    f.poset.check_same(h.poset)
    vals = [integrate(h, g) for g in f.generators]
    if f.kind is Kind.HOARE:
        return max(vals)
    if f.kind is Kind.SMYTH:
        return min(vals)
    return vals[0]


def eval_fork(fk: ForkPres, h: StepFn) -> tuple[Fraction, Fraction]:
    return eval_prev(fk.lower, h), eval_prev(fk.upper, h)


def flavor_violation(f: PrevisionPres, trials: int = 100, seed: int = 0) -> StepFn | None:
    """First sampled ``h`` breaking ``F(1+h) <= 1+F(h)`` (Sub1) or ``=`` (Norm1).

    The zero function is always tried first, then ``trials`` seeded samples.
    """
    if f.flavor is Flavor.UNBOUNDED:
        return None
    p = f.poset
    one = StepFn.constant(p, 1)
    rng = random.Random(seed)
    samples = [StepFn.constant(p, 0)]
    samples += [random_monotone(p, rng, 4) for _ in range(trials)]
    for h in samples:
        lhs, rhs = eval_prev(f, one + h), 1 + eval_prev(f, h)
        if lhs > rhs or (f.flavor is Flavor.NORM1 and lhs != rhs):
            return h
    return None


def check_flavor_semantic(f: PrevisionPres, trials: int = 100, seed: int = 0) -> bool:
    return flavor_violation(f, trials, seed) is None


# -- Walley's condition ----------------------------------------------------


@dataclass(frozen=True)
class Fork:
    """Verdict: the pair satisfies Walley's condition."""


@dataclass(frozen=True)
class NotFork:
    """Verdict with a pair ``(h, h2)`` breaking one of Walley's inequalities.

    ``W1``: ``F-(h+h2) > F-(h) + F+(h2)``; ``W2``: ``F-(h) + F+(h2) > F+(h+h2)``.
    """

    witness_h: StepFn
    witness_h2: StepFn
    side: str


def walley_violation(fk: ForkPres, h: StepFn, h2: StepFn) -> str | None:
    """Which inequality (``"W2"`` checked first, then ``"W1"``) fails at ``(h, h2)``."""
    s = h + h2
    lo_h, lo_s = eval_prev(fk.lower, h), eval_prev(fk.lower, s)
    up_h2, up_s = eval_prev(fk.upper, h2), eval_prev(fk.upper, s)
    if lo_h + up_h2 > up_s:
        return "W2"
    if lo_s > lo_h + up_h2:
        return "W1"
    return None


def _int_weights(gens: Sequence[Valuation], scale: int) -> np.ndarray:
    return np.array([[int(w * scale) for w in g.weights] for g in gens], dtype=object)


def _random_monotone_ints(p: FinitePoset, rng: np.random.Generator, count: int) -> np.ndarray:
    """``count`` random monotone integer vectors, one per row."""
    n = len(p)
    V = np.zeros((count, n), dtype=np.int64)
    for j in p.topological_order:
        below = [i for i in range(n) if i != j and p.leq[i][j]]
        base = V[:, below].max(axis=1) if below else 0
        V[:, j] = base + rng.integers(0, 4, size=count) * (rng.random(count) < 0.6)
    return V


def _screen(fk: ForkPres, samples: int, seed: int):
    """Cheap refutation pass over up-set pairs and random pairs.

    Both sides are positively homogeneous, so integer-valued samples and
    integer-scaled generators decide the same inequalities as the rationals.
    """
    p = fk.poset
    n = len(p)
    masks = p.nonempty_upset_masks
    chis = np.array([[m >> i & 1 for i in range(n)] for m in masks], dtype=np.int64).reshape(-1, n)
    zeros = np.zeros_like(chis)
    rng = np.random.default_rng(seed)
    extra = max(0, samples - 2 * len(masks))
    H = np.vstack([chis, zeros, _random_monotone_ints(p, rng, extra)])[:samples].astype(object)
    H2 = np.vstack([zeros, chis, _random_monotone_ints(p, rng, extra)])[:samples].astype(object)
    gens = fk.lower.generators + fk.upper.generators
    scale = lcm_of_denominators(w for g in gens for w in g.weights)
    B, C = _int_weights(fk.lower.generators, scale), _int_weights(fk.upper.generators, scale)
    S = H + H2
    lo_h, lo_s = H.dot(B.T).min(axis=1), S.dot(B.T).min(axis=1)
    up_h2, up_s = H2.dot(C.T).max(axis=1), S.dot(C.T).max(axis=1)
    bad2 = np.flatnonzero(lo_h + up_h2 > up_s)
    bad1 = np.flatnonzero(lo_s > lo_h + up_h2)
    for side, bad in (("W2", bad2), ("W1", bad1)):
        if bad.size:
            k = int(bad[0])
            as_fn = lambda row: StepFn(p, tuple(Fraction(int(x)) for x in row))
            return as_fn(H[k]), as_fn(H2[k]), side
    return None


def _cell_lp_w2(fk: ForkPres, j: int):
    p = fk.poset
    lows, ups = fk.lower.generators, fk.upper.generators
    model = LpModel()
    h = add_monotone_fn(model, p)
    h2 = add_monotone_fn(model, p)
    (eps,) = model.var(1, free=True)
    cj = pairing(h2, ups[j])
    for k, ck in enumerate(ups):
        if k != j:
            model.add(add_terms(cj, pairing(h2, ck, -1)), ">=", 0)
    for ck in ups:
        lhs = add_terms(pairing(h, ck), pairing(h2, ck), {eps: 1})
        for bi in lows:
            model.add(add_terms(lhs, pairing(h, bi, -1), pairing(h2, ups[j], -1)), "<=", 0)
    model.add({x: 1 for x in h + h2}, "=", 1)
    return model.build({eps: 1}, maximize=True), h, h2


def _cell_lp_w1(fk: ForkPres, i: int, j: int):
    p = fk.poset
    lows, ups = fk.lower.generators, fk.upper.generators
    model = LpModel()
    h = add_monotone_fn(model, p)
    h2 = add_monotone_fn(model, p)
    (eps,) = model.var(1, free=True)
    bi, cj = pairing(h, lows[i]), pairing(h2, ups[j])
    for k, bk in enumerate(lows):
        if k != i:
            model.add(add_terms(pairing(h, bk), pairing(h, lows[i], -1)), ">=", 0)
    for k, ck in enumerate(ups):
        if k != j:
            model.add(add_terms(cj, pairing(h2, ck, -1)), ">=", 0)
    for bk in lows:
        rhs_side = add_terms(pairing(h, bk), pairing(h2, bk))
        model.add(add_terms(rhs_side, {v: -c for v, c in bi.items()}, {v: -c for v, c in cj.items()}, {eps: -1}), ">=", 0)
    model.add({x: 1 for x in h + h2}, "=", 1)
    return model.build({eps: 1}, maximize=True), h, h2


def _cells(fk: ForkPres):
    n_lo, n_up = len(fk.lower.generators), len(fk.upper.generators)
    for j in range(n_up):
        yield ("W2",) + _cell_lp_w2(fk, j)
    for i in range(n_lo):
        for j in range(n_up):
            yield ("W1",) + _cell_lp_w1(fk, i, j)


def walley_decide(fk: ForkPres, screen: int = 500, seed: int = 0) -> Fork | NotFork:
    """Decide Walley's condition for every pair of monotone ``h, h' >= 0``.

    Both sides are piecewise linear, linear on each cell where a fixed
    lower generator attains the min at ``h`` and a fixed upper generator
    attains the max at ``h'``.  Each cell is an LP maximizing a violation
    margin over the normalized pairs of that cell, so the decision is
    complete.  A sampled screen runs first; every refutation is re-checked
    by direct evaluation.
    """
    found = _screen(fk, screen, seed) if screen else None
    if found is None:
        for side, prog, hv, h2v in _cells(fk):
            out = lp_solve(prog, verify=False)
            if isinstance(out, Unbounded) or (isinstance(out, Optimal) and out.value > 0):
                x = out.point
                p = fk.poset
                found = (StepFn(p, tuple(x[k] for k in hv)), StepFn(p, tuple(x[k] for k in h2v)), side)
                break
    if found is None:
        return Fork()
    h, h2, side = found
    if walley_violation(fk, h, h2) != side:
        raise CertificateError(f"{side} witness did not reproduce under direct evaluation")
    return NotFork(h, h2, side)


# -- sandwich --------------------------------------------------------------


@dataclass(frozen=True)
class NoWitness:
    """No linear prevision fits between ``q`` and ``p``; ``h`` has ``q(h) > p(h)``."""

    h: StepFn
    q_value: Fraction
    p_value: Fraction


def _sandwich_lp(q: PrevisionPres, p: PrevisionPres):
    P = q.poset
    model = LpModel()
    g = model.var(len(P))
    lam = model.add_simplex(len(q.generators))
    mu = model.add_simplex(len(p.generators))
    add_stoch_rows(model, P, g, lam, q.generators, below=False)
    add_stoch_rows(model, P, g, mu, p.generators, below=True)
    add_flavor_mass(model, g, q.flavor)
    return model.build(), g, lam, mu


def _separating_fn(q: PrevisionPres, p: PrevisionPres) -> StepFn | None:
    """Monotone ``h`` maximizing ``min_i <q_i,h> - max_j <p_j,h>`` over ``sum h = 1``."""
    P = q.poset
    model = LpModel()
    h = add_monotone_fn(model, P)
    s, delta = model.var(2, free=True)
    for gq in q.generators:
        model.add(add_terms(pairing(h, gq), {s: -1}), ">=", 0)
    for gp in p.generators:
        model.add(add_terms(pairing(h, gp), {s: -1, delta: 1}), "<=", 0)
    model.add({x: 1 for x in h}, "=", 1)
    out = lp_solve(model.build({delta: 1}, maximize=True), verify=False)
    if isinstance(out, Optimal) and out.value > 0:
        return integral_stepfn(P, [out.point[k] for k in h])
    return None


def sandwich_witness(q: PrevisionPres, p: PrevisionPres) -> Valuation | NoWitness:
    """A linear prevision ``g`` with ``q <= g <= p``, or a function refuting ``q <= p``."""
    if q.kind is not Kind.SMYTH or p.kind is not Kind.HOARE:
        raise ValueError("sandwich_witness takes a Smyth minorant and a Hoare majorant")
    q.poset.check_same(p.poset)
    if q.flavor is not p.flavor:
        raise FlavorMismatch("q and p have different flavors")
    prog, g, lam, mu = _sandwich_lp(q, p)
    out = lp_solve(prog)
    if isinstance(out, Optimal):
        x = out.point
        witness = Valuation(q.poset, tuple(x[k] for k in g))
        below = combine(q.generators, [x[k] for k in lam])
        above = combine(p.generators, [x[k] for k in mu])
        if not (stochastic_leq(below, witness) and stochastic_leq(witness, above)):
            raise CertificateError("sandwich witness failed the up-set check")
        return witness
    h = _separating_fn(q, p)
    if h is None:
        raise CertificateError("infeasible sandwich without a separating function")
    qv, pv = eval_prev(q, h), eval_prev(p, h)
    if not qv > pv:
        raise CertificateError("separating function did not reproduce")
    return NoWitness(h, qv, pv)
