"""Seeded fuzz campaigns with counterexample shrinking.

Each suite turns a trial index into a small scenario (bindings plus one
task).  Trials draw from their own ``random.Random`` keyed by suite, seed
and index, so the instance stream does not depend on execution order.  The
first failing instance is shrunk by dropping generators, then elements, and
reported as a runnable scenario.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .errors import PrevlabError, UnknownSuite
from .generate import (
    flavored_space,
    random_convex_combination,
    random_fork_candidate,
    random_generators,
    random_poset,
    random_presentation,
    random_valid_fork,
    shift_mass,
)
from .order import FinitePoset, StepFn, chain, random_monotone, restrict
from .powercone import GenSet, Shape, hull
from .prevision import ForkPres, Kind, PrevisionPres
from .serialize import digest
from .tasks import Env, run_task, scenario_json
from .valuation import Flavor, Valuation, random_of_flavor, random_valuation

FLAVORS = (Flavor.UNBOUNDED, Flavor.SUB1, Flavor.NORM1)
SHAPES = (Shape.HOARE_DOWN, Shape.SMYTH_UP, Shape.LENS)


@dataclass
class Case:
    poset: FinitePoset
    bindings: dict
    task: dict

    def to_json(self) -> dict:
        used = {k: v for k, v in self.bindings.items() if _referenced(self.task, k)}
        return scenario_json(self.poset, used, [self.task])


def _referenced(task: dict, name: str) -> bool:
    for k, v in task.items():
        if k in ("kind", "id", "shape", "flavor"):
            continue
        if v == name or (isinstance(v, list) and name in v):
            return True
    return False


def _combo(trial: int):
    return SHAPES[trial % 3], FLAVORS[trial // 3 % 3]


# -- suites ----------------------------------------------------------------


def case_rs_identity(rng, trial, max_elems, max_gens) -> Case:
    shape, flavor = _combo(trial)
    if shape is Shape.LENS:
        f = random_valid_fork(rng, flavor, max_elems, max_gens)
        return Case(f.poset, {"f": f}, {"kind": "rs-check", "fork": "f", "trials": 50, "seed": trial})
    kind = Kind.HOARE if shape is Shape.HOARE_DOWN else Kind.SMYTH
    f = random_presentation(rng, kind, flavor, max_elems, max_gens)
    return Case(f.poset, {"f": f}, {"kind": "rs-check", "prevision": "f", "trials": 50, "seed": trial})


def _probe(rng, raw, flavor) -> Valuation:
    mode = rng.randrange(3)
    if mode == 0:
        return random_convex_combination(rng, raw)
    if mode == 1:
        return shift_mass(rng, random_convex_combination(rng, raw), upward=rng.random() < 0.5)
    return random_of_flavor(raw[0].poset, rng, flavor)


def case_sr_hull(rng, trial, max_elems, max_gens, probes=20) -> Case:
    shape, flavor = _combo(trial)
    p = flavored_space(rng, flavor, max_elems)
    raw = random_generators(rng, p, flavor, rng.randint(1, max_gens))
    bindings = {f"g{k}": g for k, g in enumerate(raw)}
    for k in range(probes):
        bindings[f"p{k}"] = _probe(rng, raw, flavor)
    task = {
        "kind": "sr-hull",
        "shape": shape.value,
        "flavor": flavor.value,
        "generators": [f"g{k}" for k in range(len(raw))],
        "probes": [f"p{k}" for k in range(probes)],
    }
    return Case(p, bindings, task)


def case_order_embed(rng, trial, max_elems, max_gens, h_trials=200) -> Case:
    shape, flavor = _combo(trial)
    p = flavored_space(rng, flavor, max_elems)
    a = random_generators(rng, p, flavor, rng.randint(1, max_gens))
    b = random_generators(rng, p, flavor, rng.randint(1, max_gens))
    mode = rng.randrange(3)
    if mode == 0:
        s1, s2 = hull(a, shape, flavor), hull(b, shape, flavor)
    else:
        small, big = hull(a, shape, flavor), hull(a + b, shape, flavor)
        # nested hulls: ordered one way for Hoare, the other for Smyth
        s1, s2 = (small, big) if (shape is Shape.HOARE_DOWN) == (mode == 1) else (big, small)
    task = {"kind": "order-embed", "left": "s1", "right": "s2", "trials": h_trials, "seed": trial}
    return Case(p, {"s1": s1, "s2": s2}, task)


def case_walley_vs_lens(rng, trial, max_elems, max_gens) -> Case:
    fk = random_fork_candidate(rng, FLAVORS[trial % 3], max_elems, max_gens)
    return Case(fk.poset, {"fk": fk}, {"kind": "walley-vs-lens", "fork": "fk", "seed": trial})


def case_integral(rng, trial, max_elems, max_gens) -> Case:
    p = random_poset(rng, max_elems)
    h = random_monotone(p, rng, 4)
    v = random_valuation(p, rng)
    return Case(p, {"h": h, "v": v}, {"kind": "integrate", "valuation": "v", "fn": "h"})


def random_matrix(rng, max_dim=5) -> tuple:
    n, m = rng.randint(1, max_dim), rng.randint(1, max_dim)
    return tuple(
        tuple(Fraction(rng.randint(-6, 6), rng.randint(1, 4)) for _ in range(m)) for _ in range(n)
    )


def case_minimax(rng, trial, max_elems, max_gens) -> Case:
    return Case(chain(1), {"M": random_matrix(rng)}, {"kind": "minimax", "matrix": "M"})


SUITES = {
    "rs-identity": case_rs_identity,
    "sr-hull": case_sr_hull,
    "order-embed": case_order_embed,
    "walley-vs-lens": case_walley_vs_lens,
    "integral-agreement": case_integral,
    "minimax": case_minimax,
}


# -- running and shrinking -------------------------------------------------


def run_case(case: Case) -> dict:
    return run_task(case.task, Env(case.poset, case.bindings), 0)


def _failure_class(result: dict):
    if result["verdict"] != "fail":
        return None
    return "error" if "error" in result else "verdict"


def _drop(items: tuple, k: int) -> tuple:
    return items[:k] + items[k + 1:]


def _generator_drops(case: Case):
    for key in ("generators", "probes"):
        names = case.task.get(key)
        if isinstance(names, list) and len(names) > 1:
            for k in range(len(names)):
                reduced = names[:k] + names[k + 1:]
                yield lambda key=key, reduced=reduced: Case(case.poset, case.bindings, {**case.task, key: reduced})
    for name, obj in case.bindings.items():
        for k, make in _object_drops(obj):
            yield lambda name=name, make=make: Case(case.poset, {**case.bindings, name: make()}, case.task)


def _object_drops(obj):
    if isinstance(obj, PrevisionPres) and len(obj.generators) > 1:
        for k in range(len(obj.generators)):
            yield k, lambda k=k: PrevisionPres(obj.kind, obj.flavor, _drop(obj.generators, k))
    elif isinstance(obj, ForkPres):
        for k, make in _object_drops(obj.lower):
            yield k, lambda make=make: ForkPres(make(), obj.upper)
        for k, make in _object_drops(obj.upper):
            yield k, lambda make=make: ForkPres(obj.lower, make())
    elif isinstance(obj, GenSet):
        for attr in ("down", "up"):
            gens = getattr(obj, attr)
            if len(gens) > 1:
                for k in range(len(gens)):
                    parts = {"down": obj.down, "up": obj.up, attr: _drop(gens, k)}
                    yield k, lambda parts=parts: GenSet(obj.shape, obj.flavor, **parts)
    elif isinstance(obj, tuple) and obj and isinstance(obj[0], tuple):
        if len(obj) > 1:
            for k in range(len(obj)):
                yield k, lambda k=k: _drop(obj, k)
        if len(obj[0]) > 1:
            for k in range(len(obj[0])):
                yield k, lambda k=k: tuple(_drop(row, k) for row in obj)


def _project(obj, p: FinitePoset, keep: list[int]):
    if isinstance(obj, Valuation):
        return Valuation(p, tuple(obj.weights[i] for i in keep))
    if isinstance(obj, StepFn):
        return StepFn(p, tuple(obj.values[i] for i in keep))
    if isinstance(obj, PrevisionPres):
        return PrevisionPres(obj.kind, obj.flavor, tuple(_project(g, p, keep) for g in obj.generators))
    if isinstance(obj, ForkPres):
        return ForkPres(_project(obj.lower, p, keep), _project(obj.upper, p, keep))
    if isinstance(obj, GenSet):
        return GenSet(
            obj.shape,
            obj.flavor,
            down=tuple(_project(g, p, keep) for g in obj.down),
            up=tuple(_project(g, p, keep) for g in obj.up),
        )
    return obj


def _element_drops(case: Case):
    p = case.poset
    if len(p) < 2:
        return
    for e in p.elements:
        def make(e=e):
            keep_names = [x for x in p.elements if x != e]
            q = restrict(p, keep_names)
            keep = [p.index(x) for x in keep_names]
            return Case(q, {k: _project(v, q, keep) for k, v in case.bindings.items()}, case.task)

        yield make


def shrink(case: Case, max_steps: int = 200) -> Case:
    """Greedy shrink: take the first reduction that still fails the same way."""
    target = _failure_class(run_case(case))
    if target is None:
        return case
    for _ in range(max_steps):
        for make in [*_generator_drops(case), *_element_drops(case)]:
            try:
                cand = make()
                still = _failure_class(run_case(cand)) == target
            except (PrevlabError, ValueError):
                continue
            if still:
                case = cand
                break
        else:
            return case
    return case


def trial_rng(suite: str, seed: int, trial: int) -> random.Random:
    return random.Random(f"{suite}/{seed}/{trial}")


def fuzz(suite: str, trials: int, seed: int = 0, max_elems: int = 4, max_gens: int = 3) -> dict:
    """Run ``trials`` instances of ``suite``; the report is a pure function of the arguments."""
    if suite not in SUITES:
        raise UnknownSuite(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")
    if trials < 1 or max_elems < 1 or max_gens < 1:
        raise ValueError("trials, max_elems and max_gens must be at least 1")
    make = SUITES[suite]
    results, first_failure = [], None
    for i in range(trials):
        case = make(trial_rng(suite, seed, i), i, max_elems, max_gens)
        r = run_case(case)
        entry = {"trial": i, "instance": digest(case.to_json())[:16], "verdict": r["verdict"]}
        if isinstance(r.get("value"), str) and r["verdict"] == "pass":
            entry["outcome"] = r["value"]
        if r["verdict"] == "fail":
            entry["result"] = {k: v for k, v in r.items() if k not in ("id", "kind", "verdict")}
            if first_failure is None:
                first_failure = case
        results.append(entry)
    failed = sum(e["verdict"] == "fail" for e in results)
    report = {
        "suite": suite,
        "seed": seed,
        "trials": trials,
        "max_elems": max_elems,
        "max_gens": max_gens,
        "passed": trials - failed,
        "failed": failed,
        "results": results,
        "counterexample": shrink(first_failure).to_json() if first_failure else None,
    }
    report["digest"] = digest(report)
    return report
