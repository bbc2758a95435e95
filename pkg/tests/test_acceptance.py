"""Acceptance criteria, each with its instance count and runtime budget.

Run under pytest (a PASS/FAIL line per criterion is printed in the terminal
summary) or directly: ``python tests/test_acceptance.py``.
"""

import json
import math
import random
import time
from fractions import Fraction as F

import pytest

from prevlab import (
    Flavor,
    Fork,
    NotFork,
    NoWitness,
    PrevisionPres,
    Shape,
    Valuation,
    build_poset,
    chi,
    edalat_lift,
    edalat_unlift,
    eval_prev,
    hoare_down,
    hull,
    integrate,
    is_member,
    lens_roundtrip,
    mass,
    member,
    minkowski,
    random_monotone,
    riesz_roundtrip,
    sandwich_witness,
    stochastic_leq,
    upsets,
    verify_sr_hull,
    walley_decide,
    walley_violation,
)
from prevlab.fuzz import case_walley_vs_lens, fuzz, trial_rng
from prevlab.generate import flavored_space, random_generators, random_poset
from prevlab.tasks import execute, parse_scenario
from prevlab.valuation import random_subnormalized, random_valuation

RESULTS = {}
SEED = 20261015


def criterion(number, title, budget):
    def wrap(fn):
        def run():
            t0 = time.perf_counter()
            try:
                detail = fn()
                ok, err = True, None
            except AssertionError as exc:
                ok, detail, err = False, None, str(exc) or "assertion failed"
            elapsed = time.perf_counter() - t0
            if ok and elapsed > budget:
                ok, err = False, f"over budget: {elapsed:.1f}s > {budget}s"
            RESULTS[number] = (ok, title, elapsed, budget, detail if ok else err)
            return ok, err

        run.number = number
        return run

    return wrap


def _fuzz_all_pass(suite, trials, **kw):
    report = fuzz(suite, trials, SEED, **kw)
    assert report["failed"] == 0, json.dumps(report["counterexample"])
    return report


@criterion(1, "retraction identities r(s(F)) = F", 60)
def c1_rs_identity():
    # trials cycle through shape x flavor, so 900 trials = 100 per combination
    report = _fuzz_all_pass("rs-identity", 900, max_elems=5, max_gens=4)
    return f"{report['passed']} instances, 9 shape/flavor combinations, 50 h each"


@criterion(2, "hull theorems", 60)
def c2_sr_hull():
    p = build_poset(["x", "y"])
    dx, dy = Valuation.point(p, "x"), Valuation.point(p, "y")
    mid = Valuation.from_map(p, {"x": "1/2", "y": "1/2"})
    assert is_member(hull([dx, dy], Shape.HOARE_DOWN), mid)
    assert not stochastic_leq(mid, dx) and not stochastic_leq(mid, dy)
    assert verify_sr_hull([dx, dy], Shape.HOARE_DOWN, [mid])
    report = _fuzz_all_pass("sr-hull", 300, max_elems=5, max_gens=4)
    return f"{report['passed']} generator sets (100 per shape), 20 probes each, plus the midpoint example"


@criterion(3, "order embeddings", 60)
def c3_order_embedding():
    report = _fuzz_all_pass("order-embed", 300, max_elems=5, max_gens=4)
    outcomes = [r["outcome"] for r in report["results"]]
    for k, shape in enumerate(("hoare", "smyth", "lens")):
        mine = outcomes[k::3]
        assert mine.count("separated") >= 10 and mine.count("ordered") >= 10, (shape, mine)
    n_sep = outcomes.count("separated")
    return f"{report['passed']} pairs (100 per shape), {n_sep} separated by a re-verified function"


@criterion(4, "minimax value equality", 30)
def c4_minimax():
    report = _fuzz_all_pass("minimax", 200)
    return f"{report['passed']} matrices up to 5x5"


@criterion(5, "Choquet integral equals direct sum", 10)
def c5_integrals():
    report = _fuzz_all_pass("integral-agreement", 500, max_elems=6)
    return f"{report['passed']} (h, v) pairs on posets with at most 6 elements"


@criterion(6, "Riesz roundtrip", 10)
def c6_riesz():
    rng = random.Random(SEED)
    for _ in range(200):
        v = random_valuation(random_poset(rng, 6), rng)
        assert riesz_roundtrip(v) == v, v
    return "200 valuations"


@criterion(7, "Walley decision vs lens characterization", 120)
def c7_walley():
    kinds = {Fork: 0, NotFork: 0}
    for i in range(200):
        fk = case_walley_vs_lens(trial_rng("walley-vs-lens", SEED, i), i, 4, 3).bindings["fk"]
        out = walley_decide(fk, seed=i)
        assert isinstance(out, Fork) == lens_roundtrip(fk), f"disagreement on trial {i}"
        if isinstance(out, NotFork):
            assert walley_violation(fk, out.witness_h, out.witness_h2) == out.side
        kinds[type(out)] += 1
    assert kinds[Fork] >= 20 and kinds[NotFork] >= 20, kinds
    return f"{kinds[Fork]} forks, {kinds[NotFork]} non-forks, all agreeing"


def _planted_violation(rng, flavor):
    """Smyth gens living on an up-set U, Hoare gens living off it: chi_U separates."""
    while True:
        p = random_poset(rng, 5, min_elems=2)
        maximal = [i for i in range(len(p)) if p.up_mask(i) == 1 << i]
        u = p.up_mask(rng.choice(maximal))
        inside = [e for i, e in enumerate(p.elements) if u >> i & 1]
        outside = [e for i, e in enumerate(p.elements) if not u >> i & 1]
        if outside:
            break

    def spread(names):
        w = {e: rng.randint(0, 3) for e in names}
        w[rng.choice(names)] += 1
        total = sum(w.values())
        return Valuation.from_map(p, {e: F(x, total) for e, x in w.items()})

    q = PrevisionPres.smyth([spread(inside) for _ in range(rng.randint(1, 3))], flavor)
    pp = PrevisionPres.hoare([spread(outside) for _ in range(rng.randint(1, 3))], flavor)
    return q, pp


@criterion(8, "sandwich existence", 60)
def c8_sandwich():
    rng = random.Random(SEED)
    flavors = list(Flavor)
    for i in range(100):
        flavor = flavors[i % 3]
        p = flavored_space(rng, flavor, 5)
        shared = random_generators(rng, p, flavor, 1)
        q = PrevisionPres.smyth(shared + random_generators(rng, p, flavor, rng.randint(0, 3)), flavor)
        pp = PrevisionPres.hoare(shared + random_generators(rng, p, flavor, rng.randint(0, 3)), flavor)
        g = sandwich_witness(q, pp)
        assert isinstance(g, Valuation), f"no witness on constructed pair {i}"
        for u in upsets(p):
            h = chi(p, u)
            assert eval_prev(q, h) <= integrate(h, g) <= eval_prev(pp, h)
    for i in range(100):
        q, pp = _planted_violation(rng, flavors[i % 3])
        out = sandwich_witness(q, pp)
        assert isinstance(out, NoWitness), f"witness returned for planted violation {i}"
        assert eval_prev(q, out.h) == out.q_value > out.p_value == eval_prev(pp, out.h)
    return "100 dominated pairs with witnesses, 100 planted violations refuted"


@criterion(9, "Edalat lift", 10)
def c9_lift():
    rng = random.Random(SEED)
    for _ in range(200):
        p = random_poset(rng, 5)
        v, w = random_subnormalized(p, rng), random_subnormalized(p, rng)
        lp, lv = edalat_lift(p, v)
        _, lw = edalat_lift(p, w)
        assert mass(lv) == 1 and lv.weights[0] == 1 - mass(v)
        assert edalat_unlift(p, lv) == v
        assert stochastic_leq(v, w) == stochastic_leq(lv, lw)
    return "200 subnormalized valuations"


@criterion(10, "Minkowski functional", 30)
def c10_minkowski():
    one = build_poset(["*"])
    A = hoare_down([Valuation.point(one, "*", 2)])
    for k in range(1, 13):
        x = F(k, 5)
        assert minkowski(A, Valuation.point(one, "*", x)) == x / 2
    rng = random.Random(SEED)
    for _ in range(200):
        p = random_poset(rng, 5)
        flavor = rng.choice([Flavor.UNBOUNDED, Flavor.SUB1])
        s = hoare_down(random_generators(rng, p, flavor, rng.randint(1, 4)), flavor)
        v, w = random_valuation(p, rng), random_valuation(p, rng)
        a = F(rng.randint(1, 9), rng.randint(1, 4))
        mv, mw = minkowski(s, v), minkowski(s, w)
        assert minkowski(s, v.scale(a)) == (math.inf if mv == math.inf else a * mv)
        assert minkowski(s, v + w) <= mv + mw
        assert (mv <= 1) == member(s, v)[0]
    return "200 (set, v) instances plus the one-point closed form"


@criterion(11, "deterministic reports", 120)
def c11_determinism():
    for suite in ("rs-identity", "sr-hull", "order-embed", "walley-vs-lens", "integral-agreement", "minimax"):
        a = json.dumps(fuzz(suite, 30, SEED))
        b = json.dumps(fuzz(suite, 30, SEED))
        assert a == b, suite
    sc = {
        "poset": {"elements": ["bot", "top"], "covers": [["bot", "top"]]},
        "bindings": {
            "fk": {
                "type": "fork",
                "lower": {"kind": "smyth", "generators": [{"top": "1"}]},
                "upper": {"kind": "hoare", "generators": [{"bot": "1"}]},
            }
        },
        "tasks": [{"kind": "fork-check", "fork": "fk"}, {"kind": "rs-check", "prevision": "fk"}],
    }
    runs = {json.dumps(execute(parse_scenario(sc), seed=3)) for _ in range(3)}
    assert len(runs) == 1
    return "6 fuzz suites and a scenario, byte-identical on rerun"


CRITERIA = [
    c1_rs_identity, c2_sr_hull, c3_order_embedding, c4_minimax, c5_integrals, c6_riesz,
    c7_walley, c8_sandwich, c9_lift, c10_minkowski, c11_determinism,
]


@pytest.mark.acceptance
@pytest.mark.parametrize("crit", CRITERIA, ids=[f"criterion_{c.number:02d}" for c in CRITERIA])
def test_criterion(crit):
    ok, err = crit()
    assert ok, err


def format_line(number) -> str:
    ok, title, elapsed, budget, detail = RESULTS[number]
    return f"{'PASS' if ok else 'FAIL'} [{number:2d}] {title} ({elapsed:.1f}s / {budget}s): {detail}"


if __name__ == "__main__":
    for crit in CRITERIA:
        crit()
        print(format_line(crit.number), flush=True)
