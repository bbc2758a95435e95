"""Finitely generated powercone elements over the valuations of a finite poset.

A :class:`GenSet` is stored by generators only.  With ``conv E`` the convex
hull of the generators and ``<=st`` the stochastic order:

* ``HOARE_DOWN``: ``{g : g <=st c for some c in conv E}``
* ``SMYTH_UP``: ``{g : g >=st c for some c in conv E}``
* ``LENS``: the intersection of an up-part and a down-part

each cut down to the flavor's mass slice.  Membership, comparison,
support values and the Minkowski gauge all reduce to one exact LP, and
every membership answer carries a certificate that is re-checked before
it is returned.
"""

from __future__ import annotations

import enum
import functools
import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence, Union

import numpy as np

from .encode import add_flavor_mass, add_monotone_fn, add_stoch_rows, add_terms, integral_stepfn, pairing
from .errors import CertificateError, EmptyGenerators, EmptyLens, NotAFork, ShapeMismatch
from .lp import Infeasible, LpSession, Optimal, lp_solve
from .lp.builder import LpModel
from .order import FinitePoset, StepFn, random_monotone
from .rational import lcm_of_denominators
from .prevision import (
    Fork,
    ForkPres,
    Kind,
    NoWitness,
    PrevisionPres,
    eval_prev,
    sandwich_witness,
    walley_decide,
)
from .valuation import Flavor, Valuation, combine, integrate, mass, stochastic_leq, upset_measures

INFINITY = math.inf


class Shape(enum.Enum):
    HOARE_DOWN = "hoare"
    SMYTH_UP = "smyth"
    LENS = "lens"


@dataclass(frozen=True)
class GenSet:
    shape: Shape
    flavor: Flavor
    down: tuple[Valuation, ...] = ()
    up: tuple[Valuation, ...] = ()
    checked: bool = field(default=True, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "down", tuple(self.down))
        object.__setattr__(self, "up", tuple(self.up))
        need_down = self.shape in (Shape.HOARE_DOWN, Shape.LENS)
        need_up = self.shape in (Shape.SMYTH_UP, Shape.LENS)
        if need_down != bool(self.down) or need_up != bool(self.up):
            raise EmptyGenerators(f"{self.shape.value} needs exactly its own generator lists, nonempty")
        gens = self.down + self.up
        p = gens[0].poset
        for g in gens[1:]:
            p.check_same(g.poset)
        for g in gens:
            if not self.flavor.admits(mass(g)):
                raise ValueError(f"generator of mass {mass(g)} violates flavor {self.flavor.value}")
        if self.shape is Shape.LENS and self.checked:
            w = sandwich_witness(PrevisionPres.smyth(self.up, self.flavor), PrevisionPres.hoare(self.down, self.flavor))
            if isinstance(w, NoWitness):
                raise EmptyLens(f"the two halves do not meet (separated by {w.h.values})")

    @property
    def poset(self) -> FinitePoset:
        return (self.down or self.up)[0].poset

    def hoare_part(self) -> "GenSet":
        return GenSet(Shape.HOARE_DOWN, self.flavor, down=self.down)

    def smyth_part(self) -> "GenSet":
        return GenSet(Shape.SMYTH_UP, self.flavor, up=self.up)


def hoare_down(gens, flavor=Flavor.UNBOUNDED) -> GenSet:
    return GenSet(Shape.HOARE_DOWN, flavor, down=tuple(gens))


def smyth_up(gens, flavor=Flavor.UNBOUNDED) -> GenSet:
    return GenSet(Shape.SMYTH_UP, flavor, up=tuple(gens))


def lens(up, down, flavor=Flavor.UNBOUNDED) -> GenSet:
    return GenSet(Shape.LENS, flavor, down=tuple(down), up=tuple(up))


# -- certificates ----------------------------------------------------------


@dataclass(frozen=True)
class Inside:
    """Convex weights on the down-generators (``lam``) and/or up-generators (``lam_up``)."""

    lam: tuple[Fraction, ...] | None = None
    lam_up: tuple[Fraction, ...] | None = None


@dataclass(frozen=True)
class Outside:
    """``sep`` separates the point from the set by ``margin > 0``.

    ``side == "hoare"``: ``<v, sep> - max_i <a_i, sep> = margin``;
    ``side == "smyth"``: ``min_i <a_i, sep> - <v, sep> = margin``.
    """

    sep: StepFn
    margin: Fraction
    side: str


@dataclass(frozen=True)
class FlavorViolation:
    """The queried point's mass lies outside the set's flavor slice."""

    mass: Fraction


Certificate = Union[Inside, Outside, FlavorViolation]


def _is_simplex(lam) -> bool:
    return lam is not None and all(x >= 0 for x in lam) and sum(lam) == 1


def verify_certificate(s: GenSet, v: Valuation, inside: bool, cert: Certificate) -> bool:
    """Re-check a membership answer by up-set arithmetic or direct evaluation."""
    if isinstance(cert, FlavorViolation):
        return not inside and cert.mass == mass(v) and not s.flavor.admits(cert.mass)
    if isinstance(cert, Inside):
        if not inside or not s.flavor.admits(mass(v)):
            return False
        if s.down:
            if not _is_simplex(cert.lam) or not stochastic_leq(v, combine(s.down, cert.lam)):
                return False
        if s.up:
            if not _is_simplex(cert.lam_up) or not stochastic_leq(combine(s.up, cert.lam_up), v):
                return False
        return True
    if isinstance(cert, Outside):
        if inside or cert.margin <= 0:
            return False
        h = cert.sep
        if cert.side == "hoare" and s.down:
            return integrate(h, v) - max(integrate(h, a) for a in s.down) == cert.margin
        if cert.side == "smyth" and s.up:
            return min(integrate(h, a) for a in s.up) - integrate(h, v) == cert.margin
        return False
    return False


def _part_member(gens: Sequence[Valuation], v: Valuation, below: bool):
    """``v <=st`` (below) or ``>=st`` some convex combination of ``gens``."""
    p = v.poset
    model = LpModel()
    lam = model.add_simplex(len(gens))
    add_stoch_rows(model, p, v, lam, gens, below=below)
    out = lp_solve(model.build(), verify=False)
    if isinstance(out, Optimal):
        return True, tuple(out.point[k] for k in lam)
    return False, _separator(gens, v, below)


def _separator(gens: Sequence[Valuation], v: Valuation, below: bool) -> tuple[StepFn, Fraction]:
    """The dual problem: a normalized monotone ``h`` with the largest separation margin."""
    p = v.poset
    model = LpModel()
    h = add_monotone_fn(model, p)
    t, delta = model.var(2, free=True)
    if below:
        for a in gens:
            model.add(add_terms(pairing(h, a), {t: -1}), "<=", 0)
        model.add(add_terms(pairing(h, v), {t: -1, delta: -1}), ">=", 0)
    else:
        for a in gens:
            model.add(add_terms(pairing(h, a), {t: -1}), ">=", 0)
        model.add(add_terms(pairing(h, v), {t: -1, delta: 1}), "<=", 0)
    model.add({x: 1 for x in h}, "=", 1)
    out = lp_solve(model.build({delta: 1}, maximize=True), verify=False)
    if not isinstance(out, Optimal) or out.value <= 0:
        raise CertificateError("membership LP infeasible but no separating function found")
    sep = integral_stepfn(p, [out.point[k] for k in h])
    if below:
        margin = integrate(sep, v) - max(integrate(sep, a) for a in gens)
    else:
        margin = min(integrate(sep, a) for a in gens) - integrate(sep, v)
    return sep, margin


def member(s: GenSet, v: Valuation) -> tuple[bool, Certificate]:
    """Decide ``v in s`` and return a re-checked certificate for the answer."""
    s.poset.check_same(v.poset)
    m = mass(v)
    if not s.flavor.admits(m):
        result = (False, FlavorViolation(m))
    else:
        result = None
        lam = lam_up = None
        if s.down:
            ok, data = _part_member(s.down, v, below=True)
            if ok:
                lam = data
            else:
                result = (False, Outside(data[0], data[1], "hoare"))
        if result is None and s.up:
            ok, data = _part_member(s.up, v, below=False)
            if ok:
                lam_up = data
            else:
                result = (False, Outside(data[0], data[1], "smyth"))
        if result is None:
            result = (True, Inside(lam, lam_up))
    if not verify_certificate(s, v, *result):
        raise CertificateError(f"membership certificate failed its re-check: {result}")
    return result


def is_member(s: GenSet, v: Valuation) -> bool:
    return member(s, v)[0]


# -- r and s maps ----------------------------------------------------------


def r_apply(s: GenSet) -> PrevisionPres | ForkPres:
    """The prevision ``h -> sup/inf`` over the set, presented by the same generators."""
    if s.shape is Shape.HOARE_DOWN:
        return PrevisionPres(Kind.HOARE, s.flavor, s.down)
    if s.shape is Shape.SMYTH_UP:
        return PrevisionPres(Kind.SMYTH, s.flavor, s.up)
    return ForkPres(PrevisionPres(Kind.SMYTH, s.flavor, s.up), PrevisionPres(Kind.HOARE, s.flavor, s.down))


def s_apply(f: PrevisionPres | ForkPres) -> GenSet:
    """The set of linear previsions below (Hoare), above (Smyth) or between (fork) ``f``."""
    if isinstance(f, ForkPres):
        if not isinstance(walley_decide(f), Fork):
            raise NotAFork("the pair fails Walley's condition")
        return GenSet(Shape.LENS, f.flavor, down=f.upper.generators, up=f.lower.generators, checked=False)
    if f.kind is Kind.SMYTH:
        return GenSet(Shape.SMYTH_UP, f.flavor, up=f.generators)
    return GenSet(Shape.HOARE_DOWN, f.flavor, down=f.generators)


def _set_model(s: GenSet):
    """LP variables ``g`` (one per element) constrained to lie in ``s``."""
    p = s.poset
    model = LpModel()
    g = model.var(len(p))
    if s.down:
        lam = model.add_simplex(len(s.down))
        add_stoch_rows(model, p, g, lam, s.down, below=True)
    if s.up:
        lam_up = model.add_simplex(len(s.up))
        add_stoch_rows(model, p, g, lam_up, s.up, below=False)
    add_flavor_mass(model, g, s.flavor)
    return model, g


class SupportOracle:
    """Repeated support queries on one set; the feasibility phase runs once."""

    def __init__(self, s: GenSet):
        model, self._g = _set_model(s)
        prog = model.build()
        self._n = prog.num_vars
        self._session = LpSession(prog)

    def __call__(self, h: StepFn, maximize: bool) -> Fraction:
        obj = [Fraction(0)] * self._n
        for j, x in zip(self._g, h.values):
            obj[j] = x
        out = self._session.optimize(obj, maximize)
        if not isinstance(out, Optimal):
            raise CertificateError(f"support LP did not reach an optimum: {type(out).__name__}")
        return out.value


def support(s: GenSet, h: StepFn, maximize: bool) -> Fraction:
    """``max`` or ``min`` of ``<g, h>`` over ``g in s``, as an LP optimum."""
    return SupportOracle(s)(h, maximize)


def _as_val(h: StepFn) -> Valuation:
    # pairing() reads weights; reuse it for the objective vector of h
    return Valuation(h.poset, h.values)


def rs_mismatch(f: PrevisionPres | ForkPres, trials: int = 50, seed: int = 0) -> StepFn | None:
    """First sampled ``h`` where ``r(s(f))(h)`` differs from ``f(h)``."""
    s = s_apply(f)
    sup = SupportOracle(s)
    rng = random.Random(seed)
    for _ in range(trials):
        h = random_monotone(s.poset, rng, 4)
        if isinstance(f, ForkPres):
            if sup(h, maximize=False) != eval_prev(f.lower, h):
                return h
            if sup(h, maximize=True) != eval_prev(f.upper, h):
                return h
        elif sup(h, maximize=f.kind is not Kind.SMYTH) != eval_prev(f, h):
            return h
    return None


def verify_rs_identity(f: PrevisionPres | ForkPres, trials: int = 50, seed: int = 0) -> bool:
    return rs_mismatch(f, trials, seed) is None


# -- hulls -----------------------------------------------------------------


def hull(raw: Sequence[Valuation], shape: Shape, flavor: Flavor = Flavor.UNBOUNDED) -> GenSet:
    """The convex set of the given shape generated by ``raw``."""
    raw = tuple(raw)
    if not raw:
        raise EmptyGenerators("hull of an empty generator list")
    if shape is Shape.HOARE_DOWN:
        return hoare_down(raw, flavor)
    if shape is Shape.SMYTH_UP:
        return smyth_up(raw, flavor)
    return GenSet(Shape.LENS, flavor, down=raw, up=raw)


@functools.lru_cache(maxsize=64)
def simplex_grid(k: int, bound: int) -> np.ndarray:
    """Integer numerators ``(q, k)`` of every point of the k-simplex with denominator ``q <= bound``.

    Returned as int64 rows ``[q, n_1, ..., n_k]`` with ``sum n_i = q``;
    duplicates across denominators are dropped.  The array is shared, do
    not modify it.
    """
    seen = set()
    rows = []
    for q in range(1, bound + 1):
        for cuts in itertools.combinations(range(q + k - 1), k - 1):
            parts, prev = [], -1
            for c in cuts:
                parts.append(c - prev - 1)
                prev = c
            parts.append(q + k - 2 - prev)
            key = tuple(Fraction(x, q) for x in parts)
            if key not in seen:
                seen.add(key)
                rows.append([q] + parts)
    out = np.array(rows, dtype=np.int64)
    out.flags.writeable = False
    return out


def _grid_part(gens: Sequence[Valuation], v: Valuation, below: bool, bound: int) -> bool:
    """Brute force: does some grid combination dominate (below) / sit under ``v``?"""
    grid = simplex_grid(len(gens), bound)
    rows = [upset_measures(a) for a in gens]
    vm = upset_measures(v)
    den = lcm_of_denominators(itertools.chain(vm, *rows))
    ints = [[int(x * den) for x in r] for r in rows + [vm]]
    top = max((abs(x) for r in ints for x in r), default=0)
    # exact in int64 while bound * len(gens) * top stays far below 2**63
    dtype = np.int64 if top * bound * len(gens) < 1 << 60 else object
    A = np.array(ints[:-1], dtype=dtype)
    vv = np.array(ints[-1], dtype=dtype)
    g = grid.astype(dtype)
    combos = g[:, 1:] @ A
    scaled_v = np.outer(g[:, 0], vv)
    ok = (combos >= scaled_v) if below else (combos <= scaled_v)
    return bool(np.any(np.all(ok, axis=1)))


def grid_member(s: GenSet, v: Valuation, bound: int = 6) -> bool:
    if not s.flavor.admits(mass(v)):
        return False
    if s.down and not _grid_part(s.down, v, True, bound):
        return False
    if s.up and not _grid_part(s.up, v, False, bound):
        return False
    return True


def hull_disagreement(raw, shape: Shape, probes, flavor=Flavor.UNBOUNDED, bound: int = 6):
    """First probe where LP membership and the arbitrated grid oracle disagree.

    A grid miss against an LP hit is settled by the LP's re-checked Inside
    certificate (grids are incomplete); a grid hit against an LP miss is a
    real contradiction, because the grid point is itself a valid witness.
    """
    s = hull(raw, shape, flavor)
    for v in probes:
        inside, cert = member(s, v)
        brute = grid_member(s, v, bound)
        if brute and not inside:
            return v
        if inside and not brute and not verify_certificate(s, v, True, cert):
            return v
    return None


def verify_sr_hull(raw, shape: Shape, probes, flavor=Flavor.UNBOUNDED, bound: int = 6) -> bool:
    return hull_disagreement(raw, shape, probes, flavor, bound) is None


# -- orders ----------------------------------------------------------------


def _check_comparable(s1: GenSet, s2: GenSet) -> None:
    if s1.shape is not s2.shape:
        raise ShapeMismatch(f"cannot compare {s1.shape.value} with {s2.shape.value}")
    s1.poset.check_same(s2.poset)
    if s1.flavor is not s2.flavor:
        raise ShapeMismatch("cannot compare sets of different flavors")


def compare_failure(s1: GenSet, s2: GenSet) -> tuple[str, Outside] | None:
    """Why ``s1 <= s2`` fails in the set's powerdomain order, or None if it holds.

    Hoare: inclusion, checked on the down-generators of ``s1``.  Smyth:
    reverse inclusion, checked on the up-generators of ``s2``.  Lens: both
    (the Egli-Milner order).
    """
    _check_comparable(s1, s2)
    if s1.down:
        target = s2.hoare_part()
        for a in s1.down:
            ok, cert = member(target, a)
            if not ok:
                return "hoare", cert
    if s1.up:
        target = s1.smyth_part()
        for a in s2.up:
            ok, cert = member(target, a)
            if not ok:
                return "smyth", cert
    return None


def compare(s1: GenSet, s2: GenSet) -> bool:
    return compare_failure(s1, s2) is None


def same_set(s1: GenSet, s2: GenSet) -> bool:
    return compare(s1, s2) and compare(s2, s1)


def _r_values(s: GenSet, h: StepFn) -> tuple[Fraction, ...]:
    r = r_apply(s)
    if isinstance(r, ForkPres):
        return (eval_prev(r.lower, h), eval_prev(r.upper, h))
    return (eval_prev(r, h),)


def order_embedding_failure(s1: GenSet, s2: GenSet, trials: int = 200, seed: int = 0) -> str | None:
    """Check ``compare(s1, s2)`` against pointwise dominance of ``r(s1)`` by ``r(s2)``.

    When ``compare`` holds, dominance must hold on every sampled ``h``;
    when it fails, the failing generator's separator must show
    ``r(s1)(h) > r(s2)(h)`` on the matching component.
    """
    failure = compare_failure(s1, s2)
    if failure is None:
        rng = random.Random(seed)
        for _ in range(trials):
            h = random_monotone(s1.poset, rng, 4)
            if any(a > b for a, b in zip(_r_values(s1, h), _r_values(s2, h))):
                return f"compare holds but r(s1) > r(s2) at {h.values}"
        return None
    side, cert = failure
    if not isinstance(cert, Outside):
        return f"negative compare without a separating function: {cert}"
    v1, v2 = _r_values(s1, cert.sep), _r_values(s2, cert.sep)
    k = 1 if (s1.shape is Shape.LENS and side == "hoare") else 0
    if not v1[k] > v2[k]:
        return f"separator {cert.sep.values} does not separate r(s1) from r(s2)"
    return None


def verify_order_embedding(s1: GenSet, s2: GenSet, trials: int = 200, seed: int = 0) -> bool:
    return order_embedding_failure(s1, s2, trials, seed) is None


# -- lens closures and the fork characterization ---------------------------


def _closure_feasible(s: GenSet, v: Valuation, below_v: bool) -> bool:
    """Is there ``g in s`` with ``g <=st v`` (below_v) or ``g >=st v``?"""
    model, g = _set_model(s)
    gm = upset_measures(v)
    for k, members in enumerate(s.poset.upset_members):
        model.add({g[i]: 1 for i in members}, "<=" if below_v else ">=", gm[k])
    return not isinstance(lp_solve(model.build(), verify=False), Infeasible)


def in_upper_closure(s: GenSet, v: Valuation) -> bool:
    return _closure_feasible(s, v, below_v=True)


def in_lower_closure(s: GenSet, v: Valuation) -> bool:
    return _closure_feasible(s, v, below_v=False)


def is_nonempty(s: GenSet) -> bool:
    model, _ = _set_model(s)
    return not isinstance(lp_solve(model.build(), verify=False), Infeasible)


def lens_roundtrip(fk: ForkPres) -> bool:
    """Does ``r(s(fk)) == fk`` hold, with ``s(fk)`` the lens between the two parts?

    The lens ``L`` is nonempty, every lower generator lies in the upper
    closure of ``L`` (so ``min`` over ``L`` reproduces the lower prevision)
    and every upper generator lies in its lower closure (so ``max``
    reproduces the upper one).  Independent of :func:`walley_decide`.
    """
    L = GenSet(Shape.LENS, fk.flavor, down=fk.upper.generators, up=fk.lower.generators, checked=False)
    if not is_nonempty(L):
        return False
    return all(in_upper_closure(L, u) for u in L.up) and all(in_lower_closure(L, d) for d in L.down)


def egli_milner_semantic(s1: GenSet, s2: GenSet) -> bool:
    """Egli-Milner order through the closures of the lenses themselves."""
    _check_comparable(s1, s2)
    return all(in_upper_closure(s1, u) for u in s2.up) and all(in_lower_closure(s2, d) for d in s1.down)


# -- Minkowski gauge -------------------------------------------------------


def minkowski(s: GenSet, v: Valuation) -> Fraction | float:
    """``inf {b > 0 : v / b in s}`` for a Hoare set, ``math.inf`` when no ``b`` works.

    Substituting ``mu = b * lam`` turns the scaled membership into the LP
    ``min sum mu`` subject to ``v <=st sum mu_i a_i``.  Flavor slices are
    not imposed, so the gauge is that of the cone-downward set.
    """
    if s.shape is not Shape.HOARE_DOWN:
        raise ShapeMismatch("the Minkowski gauge is defined for Hoare sets")
    s.poset.check_same(v.poset)
    if not any(v.weights):
        return Fraction(0)
    model = LpModel()
    mu = model.var(len(s.down))
    add_stoch_rows(model, v.poset, v, mu, s.down, below=True)
    out = lp_solve(model.build({j: 1 for j in mu}, maximize=False))
    if isinstance(out, Infeasible):
        return INFINITY
    return out.value
