"""Scenario tasks: named bindings in, one JSON-ready result per task out.

A result always has a ``verdict``: ``"value"`` for a computed answer with
no expectation attached, ``"pass"``/``"fail"`` otherwise.  Every ``fail``
carries the witness or certificate that reproduces it through the library.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable

from .errors import PrevlabError, SchemaError, SizeLimitExceeded, UnboundName
from .lp import minimax
from .order import FinitePoset, StepFn
from .powercone import (
    GenSet,
    Shape,
    compare,
    compare_failure,
    hull_disagreement,
    lens_roundtrip,
    member,
    minkowski,
    order_embedding_failure,
    rs_mismatch,
)
from .prevision import Fork, ForkPres, NoWitness, PrevisionPres, eval_prev, sandwich_witness, walley_decide
from .rational import format_rat
from .serialize import (
    canonical,
    digest,
    dump,
    dump_certificate,
    dump_fn,
    dump_poset,
    dump_valuation,
    field as get_field,
    load,
    load_poset,
    loads_json,
)
from .valuation import Flavor, Valuation, edalat_lift, integrate


@dataclass
class Env:
    poset: FinitePoset
    bindings: dict
    seed: int = 0

    def get(self, task: dict, key: str, types, default=None):
        name = task.get(key, default)
        if name is None:
            raise SchemaError(f"task {task.get('id')!r}: missing field {key!r}")
        if name not in self.bindings:
            raise UnboundName(f"task {task.get('id')!r}: {key} refers to unknown binding {name!r}")
        obj = self.bindings[name]
        if not isinstance(obj, types):
            raise SchemaError(f"task {task.get('id')!r}: binding {name!r} has the wrong type for {key!r}")
        return obj

    def get_list(self, task: dict, key: str, types) -> list:
        names = get_field(task, key, f"task {task.get('id')!r}", list)
        return [self.get({key: n, "id": task.get("id")}, key, types) for n in names]


def _value(v) -> dict:
    return {"verdict": "value", "value": v}


def _fail(witness, **extra) -> dict:
    return {"verdict": "fail", "witness": witness, **extra}


def _pass(**extra) -> dict:
    return {"verdict": "pass", **extra}


def _seed(task, env) -> int:
    seed = task.get("seed", env.seed)
    if not isinstance(seed, int) or isinstance(seed, bool):
        raise SchemaError(f"task {task.get('id')!r}: seed must be an integer")
    return seed


def _int_opt(task, key, default) -> int:
    v = task.get(key, default)
    if not isinstance(v, int) or isinstance(v, bool) or v < 0:
        raise SchemaError(f"task {task.get('id')!r}: {key} must be a nonnegative integer")
    return v


def t_eval(task, env):
    key = "fork" if "fork" in task else "prevision"
    f = env.get(task, key, (PrevisionPres, ForkPres))
    h = env.get(task, "fn", StepFn)
    if isinstance(f, ForkPres):
        return _value({"lower": format_rat(eval_prev(f.lower, h)), "upper": format_rat(eval_prev(f.upper, h))})
    return _value(format_rat(eval_prev(f, h)))


def t_integrate(task, env):
    v = env.get(task, "valuation", Valuation)
    h = env.get(task, "fn", StepFn)
    direct, choquet = integrate(h, v, "direct"), integrate(h, v, "choquet")
    if direct != choquet:
        return _fail({"direct": format_rat(direct), "choquet": format_rat(choquet)})
    return _value(format_rat(direct))


def t_member(task, env):
    s = env.get(task, "set", GenSet)
    v = env.get(task, "valuation", Valuation)
    inside, cert = member(s, v)
    return {**_value(inside), "certificate": dump_certificate(cert)}


def t_compare(task, env):
    s1 = env.get(task, "left", GenSet)
    s2 = env.get(task, "right", GenSet)
    failure = compare_failure(s1, s2)
    if failure is None:
        return _value(True)
    side, cert = failure
    return {**_value(False), "certificate": {**dump_certificate(cert), "part": side}}


def t_rs_check(task, env):
    key = "fork" if "fork" in task else "prevision"
    f = env.get(task, key, (PrevisionPres, ForkPres))
    h = rs_mismatch(f, _int_opt(task, "trials", 50), _seed(task, env))
    return _pass() if h is None else _fail({"h": dump_fn(h)})


def t_sr_hull(task, env):
    raw = env.get_list(task, "generators", Valuation)
    probes = env.get_list(task, "probes", Valuation)
    shape = Shape(get_field(task, "shape", "task"))
    flavor = Flavor(task.get("flavor", "unbounded"))
    bad = hull_disagreement(raw, shape, probes, flavor, _int_opt(task, "bound", 6))
    return _pass() if bad is None else _fail({"probe": dump_valuation(bad)})


def t_order_embed(task, env):
    s1 = env.get(task, "left", GenSet)
    s2 = env.get(task, "right", GenSet)
    msg = order_embedding_failure(s1, s2, _int_opt(task, "trials", 200), _seed(task, env))
    if msg is not None:
        return _fail({"reason": msg})
    return _pass(value="ordered" if compare(s1, s2) else "separated")


def t_fork_check(task, env):
    fk = env.get(task, "fork", ForkPres)
    out = walley_decide(fk, _int_opt(task, "screen", 500), _seed(task, env))
    if isinstance(out, Fork):
        return _pass()
    return _fail(dump_certificate(out))


def t_walley_vs_lens(task, env):
    fk = env.get(task, "fork", ForkPres)
    out = walley_decide(fk, _int_opt(task, "screen", 500), _seed(task, env))
    walley = isinstance(out, Fork)
    lens = lens_roundtrip(fk)
    if walley != lens:
        return _fail({"walley": walley, "lens": lens})
    return _pass(value="fork" if walley else "not-fork")


def t_sandwich(task, env):
    q = env.get(task, "lower", PrevisionPres)
    p = env.get(task, "upper", PrevisionPres)
    out = sandwich_witness(q, p)
    if isinstance(out, NoWitness):
        return _fail(dump_certificate(out))
    return _value(dump_valuation(out))


def t_minimax(task, env):
    M = env.get(task, "matrix", tuple)
    value, alpha, beta = minimax(M)
    return _value({
        "value": format_rat(value),
        "alpha": [format_rat(x) for x in alpha.weights],
        "beta": [format_rat(x) for x in beta.weights],
    })


def t_minkowski(task, env):
    s = env.get(task, "set", GenSet)
    v = env.get(task, "valuation", Valuation)
    return _value(format_rat(minkowski(s, v)))


def t_lift(task, env):
    v = env.get(task, "valuation", Valuation)
    lp, lv = edalat_lift(v.poset, v)
    return _value({"poset": dump_poset(lp), "valuation": dump_valuation(lv)})


TASKS: dict[str, Callable] = {
    "eval": t_eval,
    "integrate": t_integrate,
    "member": t_member,
    "compare": t_compare,
    "rs-check": t_rs_check,
    "sr-hull": t_sr_hull,
    "order-embed": t_order_embed,
    "fork-check": t_fork_check,
    "walley-vs-lens": t_walley_vs_lens,
    "sandwich": t_sandwich,
    "minimax": t_minimax,
    "minkowski": t_minkowski,
    "lift": t_lift,
}

# fields naming bindings; used by the CLI to build per-task options
TASK_FIELDS = {
    "eval": ("prevision", "fork", "fn"),
    "integrate": ("valuation", "fn"),
    "member": ("set", "valuation"),
    "compare": ("left", "right"),
    "rs-check": ("prevision", "fork", "trials"),
    "sr-hull": ("generators", "probes", "shape", "flavor", "bound"),
    "order-embed": ("left", "right", "trials"),
    "fork-check": ("fork", "screen"),
    "walley-vs-lens": ("fork", "screen"),
    "sandwich": ("lower", "upper"),
    "minimax": ("matrix",),
    "minkowski": ("set", "valuation"),
    "lift": ("valuation",),
}


def run_task(task: dict, env: Env, index: int = 0) -> dict:
    """Run one task; library errors become ``fail`` verdicts, schema errors propagate."""
    if not isinstance(task, dict):
        raise SchemaError(f"tasks[{index}]: expected an object")
    kind = get_field(task, "kind", f"tasks[{index}]", str)
    if kind not in TASKS:
        raise SchemaError(f"tasks[{index}]: unknown task kind {kind!r}")
    tid = task.get("id", f"t{index}")
    task = {**task, "id": tid}
    try:
        out = TASKS[kind](task, env)
    except (SchemaError, UnboundName):
        raise
    except PrevlabError as exc:
        out = {"verdict": "fail", "error": f"{type(exc).__name__}: {exc}"}
    except ValueError as exc:
        # enum lookups and argument-kind checks: a malformed task, not a finding
        raise SchemaError(f"task {tid!r}: {exc}") from None
    if "expect" in task and out["verdict"] == "value":
        ok = canonical(out["value"]) == canonical(task["expect"])
        out = {**out, "verdict": "pass" if ok else "fail"}
        if not ok:
            out["witness"] = {"expected": task["expect"], "got": out["value"]}
    return {"id": tid, "kind": kind, **out}


@dataclass
class Scenario:
    poset: FinitePoset
    bindings: dict
    tasks: list = field(default_factory=list)


def parse_scenario(data, max_elems: int | None = None) -> Scenario:
    if not isinstance(data, dict):
        raise SchemaError("scenario: expected a JSON object")
    p = load_poset(get_field(data, "poset", "scenario"))
    if max_elems is not None and len(p) > max_elems:
        raise SizeLimitExceeded(f"poset has {len(p)} elements, limit is {max_elems}")
    raw = data.get("bindings", {})
    if not isinstance(raw, dict):
        raise SchemaError("scenario.bindings: expected an object")
    bindings = {}
    for name, entry in raw.items():
        try:
            bindings[name] = load(p, entry, f"bindings.{name}")
        except (ValueError, TypeError) as exc:
            if isinstance(exc, PrevlabError):
                raise
            raise SchemaError(f"bindings.{name}: {exc}") from None
    tasks = data.get("tasks", [])
    if not isinstance(tasks, list):
        raise SchemaError("scenario.tasks: expected a list")
    return Scenario(p, bindings, tasks)


def scenario_json(p: FinitePoset, bindings: dict, tasks: list) -> dict:
    return {"poset": dump_poset(p), "bindings": {k: dump(v) for k, v in bindings.items()}, "tasks": tasks}


def execute(sc: Scenario, seed: int = 0, timings: bool = False) -> dict:
    """Run every task in order and assemble the report.

    Without ``timings`` the report is a pure function of ``(scenario, seed)``.
    """
    env = Env(sc.poset, sc.bindings, seed)
    results = []
    for k, task in enumerate(sc.tasks):
        t0 = time.perf_counter()
        r = run_task(task, env, k)
        if timings:
            r["elapsed"] = round(time.perf_counter() - t0, 6)
        results.append(r)
    failed = sum(r["verdict"] == "fail" for r in results)
    report = {
        "seed": seed,
        "tasks": results,
        "summary": {"total": len(results), "failed": failed, "ok": failed == 0},
    }
    report["digest"] = digest(_strip_elapsed(report))
    return report


def _strip_elapsed(report: dict) -> dict:
    return {**report, "tasks": [{k: v for k, v in r.items() if k != "elapsed"} for r in report["tasks"]]}


def run_scenario(path, seed: int = 0, max_elems: int | None = None, timings: bool = False) -> dict:
    with open(path, encoding="utf-8") as fh:
        data = loads_json(fh.read(), str(path))
    return execute(parse_scenario(data, max_elems), seed, timings)
