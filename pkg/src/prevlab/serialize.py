"""JSON forms of posets, functions, valuations, presentations and sets.

Rationals are strings ``"p/q"``; functions and valuations are objects keyed
by element name (omitted elements are zero).  Bound objects carry a
``"type"`` tag so scenario files are self-describing.  Loaders report the
JSON path of the offending value in every error.
"""

from __future__ import annotations

import hashlib
import json
from fractions import Fraction

from .errors import ParseError, SchemaError
from .order import FinitePoset, StepFn, build_poset
from .powercone import FlavorViolation, GenSet, Inside, Outside, Shape
from .prevision import ForkPres, Kind, NotFork, NoWitness, PrevisionPres
from .rational import format_rat, parse_rat
from .valuation import Flavor, Valuation

TYPES = ("fn", "valuation", "prevision", "fork", "genset", "matrix")


def canonical(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def digest(obj) -> str:
    return hashlib.sha256(canonical(obj).encode()).hexdigest()


# -- dumping ---------------------------------------------------------------


def dump_poset(p: FinitePoset) -> dict:
    return {"elements": list(p.elements), "covers": [list(c) for c in p.covers]}


def dump_values(poset: FinitePoset, values) -> dict:
    return {e: format_rat(x) for e, x in zip(poset.elements, values) if x}


def dump_fn(h: StepFn) -> dict:
    return dump_values(h.poset, h.values)


def dump_valuation(v: Valuation) -> dict:
    return dump_values(v.poset, v.weights)


def dump_prevision(f: PrevisionPres) -> dict:
    return {
        "kind": f.kind.value,
        "flavor": f.flavor.value,
        "generators": [dump_valuation(g) for g in f.generators],
    }


def dump_fork(fk: ForkPres) -> dict:
    return {"lower": dump_prevision(fk.lower), "upper": dump_prevision(fk.upper)}


def dump_genset(s: GenSet) -> dict:
    return {
        "shape": s.shape.value,
        "flavor": s.flavor.value,
        "up": [dump_valuation(g) for g in s.up],
        "down": [dump_valuation(g) for g in s.down],
    }


def dump_matrix(M) -> list:
    return [[format_rat(x) for x in row] for row in M]


def dump(obj) -> dict:
    """Tagged form of any bindable object."""
    if isinstance(obj, StepFn):
        return {"type": "fn", "values": dump_fn(obj)}
    if isinstance(obj, Valuation):
        return {"type": "valuation", "values": dump_valuation(obj)}
    if isinstance(obj, PrevisionPres):
        return {"type": "prevision", **dump_prevision(obj)}
    if isinstance(obj, ForkPres):
        return {"type": "fork", **dump_fork(obj)}
    if isinstance(obj, GenSet):
        return {"type": "genset", **dump_genset(obj)}
    if isinstance(obj, (list, tuple)):
        return {"type": "matrix", "rows": dump_matrix(obj)}
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dump_certificate(cert) -> dict:
    if isinstance(cert, Inside):
        out = {"type": "inside"}
        if cert.lam is not None:
            out["lam"] = [format_rat(x) for x in cert.lam]
        if cert.lam_up is not None:
            out["lam_up"] = [format_rat(x) for x in cert.lam_up]
        return out
    if isinstance(cert, Outside):
        return {"type": "outside", "side": cert.side, "sep": dump_fn(cert.sep), "margin": format_rat(cert.margin)}
    if isinstance(cert, FlavorViolation):
        return {"type": "flavor", "mass": format_rat(cert.mass)}
    if isinstance(cert, NotFork):
        return {"type": "not-fork", "side": cert.side, "h": dump_fn(cert.witness_h), "h2": dump_fn(cert.witness_h2)}
    if isinstance(cert, NoWitness):
        return {"type": "no-witness", "h": dump_fn(cert.h), "q": format_rat(cert.q_value), "p": format_rat(cert.p_value)}
    raise TypeError(f"cannot serialize certificate {type(cert).__name__}")


# -- loading ---------------------------------------------------------------


def field(data, key, path, kind=None):
    if not isinstance(data, dict):
        raise SchemaError(f"{path}: expected an object")
    if key not in data:
        raise SchemaError(f"{path}: missing field {key!r}")
    value = data[key]
    if kind is not None and not isinstance(value, kind):
        raise SchemaError(f"{path}.{key}: expected {getattr(kind, '__name__', kind)}")
    return value


def load_poset(data, path="poset") -> FinitePoset:
    elements = field(data, "elements", path, list)
    covers = data.get("covers", []) if isinstance(data, dict) else []
    if not all(isinstance(e, str) for e in elements):
        raise SchemaError(f"{path}.elements: names must be strings")
    if not isinstance(covers, list) or not all(
        isinstance(c, list) and len(c) == 2 and all(isinstance(x, str) for x in c) for c in covers
    ):
        raise SchemaError(f"{path}.covers: expected a list of [lower, upper] name pairs")
    return build_poset(elements, covers)


def load_values(p: FinitePoset, data, path) -> tuple[Fraction, ...]:
    if not isinstance(data, dict):
        raise SchemaError(f"{path}: expected an object keyed by element")
    for e in data:
        if e not in p.elements:
            raise SchemaError(f"{path}: unknown element {e!r}")
    return tuple(parse_rat(data[e], f"{path}.{e}") if e in data else Fraction(0) for e in p.elements)


def load_fn(p: FinitePoset, data, path="fn") -> StepFn:
    return StepFn(p, load_values(p, data, path))


def load_valuation(p: FinitePoset, data, path="valuation") -> Valuation:
    w = load_values(p, data, path)
    if any(x < 0 for x in w):
        raise SchemaError(f"{path}: valuation weights must be nonnegative")
    return Valuation(p, w)


def _enum(cls, value, path):
    try:
        return cls(value)
    except ValueError:
        choices = ", ".join(m.value for m in cls)
        raise SchemaError(f"{path}: {value!r} is not one of {choices}") from None


def _gens(p, data, key, path, required=True):
    if not required and key not in data:
        return ()
    items = field(data, key, path, list)
    return tuple(load_valuation(p, g, f"{path}.{key}[{k}]") for k, g in enumerate(items))


def load_prevision(p: FinitePoset, data, path="prevision") -> PrevisionPres:
    kind = _enum(Kind, field(data, "kind", path), f"{path}.kind")
    flavor = _enum(Flavor, data.get("flavor", "unbounded"), f"{path}.flavor")
    return PrevisionPres(kind, flavor, _gens(p, data, "generators", path))


def load_fork(p: FinitePoset, data, path="fork") -> ForkPres:
    return ForkPres(
        load_prevision(p, field(data, "lower", path), f"{path}.lower"),
        load_prevision(p, field(data, "upper", path), f"{path}.upper"),
    )


def load_genset(p: FinitePoset, data, path="genset") -> GenSet:
    shape = _enum(Shape, field(data, "shape", path), f"{path}.shape")
    flavor = _enum(Flavor, data.get("flavor", "unbounded"), f"{path}.flavor")
    return GenSet(shape, flavor, down=_gens(p, data, "down", path, False), up=_gens(p, data, "up", path, False))


def load_matrix(data, path="matrix") -> tuple[tuple[Fraction, ...], ...]:
    if not isinstance(data, list) or not all(isinstance(r, list) for r in data):
        raise SchemaError(f"{path}: expected a list of rows")
    return tuple(
        tuple(parse_rat(x, f"{path}[{i}][{j}]") for j, x in enumerate(row)) for i, row in enumerate(data)
    )


def load(p: FinitePoset, data, path="binding"):
    """Inverse of :func:`dump`."""
    tag = field(data, "type", path, str)
    if tag == "fn":
        return load_fn(p, field(data, "values", path), f"{path}.values")
    if tag == "valuation":
        return load_valuation(p, field(data, "values", path), f"{path}.values")
    if tag == "prevision":
        return load_prevision(p, data, path)
    if tag == "fork":
        return load_fork(p, data, path)
    if tag == "genset":
        return load_genset(p, data, path)
    if tag == "matrix":
        return load_matrix(field(data, "rows", path), f"{path}.rows")
    raise SchemaError(f"{path}.type: unknown type {tag!r} (expected one of {', '.join(TYPES)})")


def loads_json(text: str, source="<input>"):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON in {source}: {exc.msg}", f"line {exc.lineno} column {exc.colno}") from None
