"""LP encodings of stochastic-order constraints shared by previsions and powercones."""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

from .lp.builder import LpModel
from .order import FinitePoset, StepFn
from .valuation import Flavor, Valuation, upset_measures


def add_stoch_rows(model: LpModel, p: FinitePoset, g, lam: Sequence[int], gens: Sequence[Valuation], below: bool) -> None:
    """Constrain ``g <=st sum_i lam_i gens_i`` (``below``) or ``>=st``, one row per nonempty up-set.

    ``g`` is either a fixed :class:`Valuation` or a list of per-element variable indices.
    """
    fixed = isinstance(g, Valuation)
    g_meas = upset_measures(g) if fixed else None
    gen_meas = [upset_measures(a) for a in gens]
    rel = "<=" if below else ">="
    for k, members in enumerate(p.upset_members):
        terms = {} if fixed else {g[i]: 1 for i in members}
        for lj, meas in zip(lam, gen_meas):
            if meas[k]:
                terms[lj] = terms.get(lj, 0) - meas[k]
        model.add(terms, rel, -g_meas[k] if fixed else 0)


def add_flavor_mass(model: LpModel, g: Sequence[int], flavor: Flavor) -> None:
    if flavor is Flavor.SUB1:
        model.add({j: 1 for j in g}, "<=", 1)
    elif flavor is Flavor.NORM1:
        model.add({j: 1 for j in g}, "=", 1)


def add_monotone_fn(model: LpModel, p: FinitePoset) -> list[int]:
    """Nonnegative variables, one per element, monotone along every cover."""
    h = model.var(len(p))
    for a, b in p.cover_pairs:
        model.add({h[a]: 1, h[b]: -1}, "<=", 0)
    return h


def pairing(h_vars: Sequence[int], v: Valuation, sign=1) -> dict:
    """Linear form ``h -> sign * <v, h>`` over variable indices."""
    return {j: sign * w for j, w in zip(h_vars, v.weights) if w}


def add_terms(*forms: dict) -> dict:
    out: dict = {}
    for f in forms:
        for j, c in f.items():
            out[j] = out.get(j, 0) + c
    return out


def integral_stepfn(p: FinitePoset, values: Sequence[Fraction]) -> StepFn:
    """Rescale nonnegative rationals to coprime integers (positive scaling keeps any separation)."""
    vals = [Fraction(v) for v in values]
    den = 1
    for v in vals:
        den = math.lcm(den, v.denominator)
    ints = [int(v * den) for v in vals]
    g = 0
    for x in ints:
        g = math.gcd(g, x)
    g = g or 1
    return StepFn(p, tuple(Fraction(x // g) for x in ints))
