"""Linear programs over the rationals and their self-certifying outcomes.

Every outcome carries a certificate that :func:`check_outcome` re-checks
with plain rational arithmetic, without trusting the solver:

* ``Optimal``: a feasible point attaining ``value`` and a dual vector whose
  objective equals ``value`` (weak duality then proves optimality).
* ``Infeasible``: a Farkas combination of the constraints that reads
  ``0 <= negative``.
* ``Unbounded``: a feasible point plus an improving recession direction.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from ..errors import CertificateError
from ..rational import as_rat

LE, GE, EQ = "<=", ">=", "="
_RELATIONS = (LE, GE, EQ)


@dataclass(frozen=True)
class Constraint:
    coeffs: tuple[Fraction, ...]
    rel: str
    rhs: Fraction

    def __post_init__(self):
        if self.rel not in _RELATIONS:
            raise ValueError(f"unknown relation {self.rel!r}")


@dataclass(frozen=True)
class LinProg:
    """``maximize``/``minimize`` ``objective . x`` subject to ``constraints``.

    Variables listed in ``nonneg`` are constrained ``>= 0``; the rest are free.
    """

    num_vars: int
    objective: tuple[Fraction, ...]
    maximize: bool
    constraints: tuple[Constraint, ...]
    nonneg: frozenset[int]

    def __post_init__(self):
        if len(self.objective) != self.num_vars:
            raise ValueError("objective length differs from num_vars")
        for c in self.constraints:
            if len(c.coeffs) != self.num_vars:
                raise ValueError("constraint length differs from num_vars")
        if any(not 0 <= j < self.num_vars for j in self.nonneg):
            raise ValueError("nonneg index out of range")

    @classmethod
    def build(cls, num_vars, objective, constraints, maximize=True, nonneg=None) -> "LinProg":
        """Convenience constructor; ``constraints`` holds ``(coeffs, rel, rhs)`` triples.

        ``nonneg=None`` makes every variable nonnegative.
        """
        cons = tuple(
            Constraint(tuple(as_rat(a) for a in coeffs), rel, as_rat(rhs))
            for coeffs, rel, rhs in constraints
        )
        nn = frozenset(range(num_vars)) if nonneg is None else frozenset(nonneg)
        return cls(num_vars, tuple(as_rat(c) for c in objective), maximize, cons, nn)


@dataclass(frozen=True)
class Optimal:
    value: Fraction
    point: tuple[Fraction, ...]
    dual: tuple[Fraction, ...]


@dataclass(frozen=True)
class Infeasible:
    farkas: tuple[Fraction, ...]


@dataclass(frozen=True)
class Unbounded:
    ray: tuple[Fraction, ...]
    point: tuple[Fraction, ...]


LpOutcome = Union[Optimal, Infeasible, Unbounded]


def _dot(a: Sequence[Fraction], b: Sequence[Fraction]) -> Fraction:
    return sum((x * y for x, y in zip(a, b) if x and y), Fraction(0))


def is_feasible(prog: LinProg, x: Sequence[Fraction]) -> bool:
    if len(x) != prog.num_vars:
        return False
    if any(x[j] < 0 for j in prog.nonneg):
        return False
    for c in prog.constraints:
        lhs = _dot(c.coeffs, x)
        if c.rel == LE and lhs > c.rhs or c.rel == GE and lhs < c.rhs or c.rel == EQ and lhs != c.rhs:
            return False
    return True


def _dual_signs_ok(prog: LinProg, y: Sequence[Fraction]) -> bool:
    for c, yi in zip(prog.constraints, y):
        if c.rel == LE and yi < 0 or c.rel == GE and yi > 0:
            return False
    return True


def _transpose_apply(prog: LinProg, y: Sequence[Fraction]) -> list[Fraction]:
    out = [Fraction(0)] * prog.num_vars
    for c, yi in zip(prog.constraints, y):
        if yi:
            for j, a in enumerate(c.coeffs):
                if a:
                    out[j] += yi * a
    return out


def check_farkas(prog: LinProg, y: Sequence[Fraction]) -> bool:
    """True iff ``y`` proves the constraint system has no solution.

    Sign convention: ``y_i >= 0`` on ``<=`` rows, ``y_i <= 0`` on ``>=`` rows,
    free on equalities.  Then ``y . (Ax - b) <= 0`` for every feasible ``x``,
    while ``y^T A >= 0`` on nonnegative variables (``= 0`` on free ones) and
    ``y . b < 0`` force ``0 <= y^T A x <= y . b < 0``.
    """
    if len(y) != len(prog.constraints) or not _dual_signs_ok(prog, y):
        return False
    ya = _transpose_apply(prog, y)
    for j, v in enumerate(ya):
        if v < 0 if j in prog.nonneg else v != 0:
            return False
    return _dot(y, [c.rhs for c in prog.constraints]) < 0


def check_ray(prog: LinProg, ray: Sequence[Fraction], point: Sequence[Fraction]) -> bool:
    """True iff ``point`` is feasible and ``point + t*ray`` stays feasible and improves forever."""
    if not is_feasible(prog, point) or len(ray) != prog.num_vars:
        return False
    if any(ray[j] < 0 for j in prog.nonneg):
        return False
    for c in prog.constraints:
        lhs = _dot(c.coeffs, ray)
        if c.rel == LE and lhs > 0 or c.rel == GE and lhs < 0 or c.rel == EQ and lhs != 0:
            return False
    gain = _dot(prog.objective, ray)
    return gain > 0 if prog.maximize else gain < 0


def check_optimal(prog: LinProg, out: Optimal) -> bool:
    """Primal feasibility, attained value, dual feasibility, and zero duality gap."""
    if not is_feasible(prog, out.point) or _dot(prog.objective, out.point) != out.value:
        return False
    y = out.dual
    if len(y) != len(prog.constraints) or not _dual_signs_ok(prog, y):
        return False
    f = prog.objective if prog.maximize else tuple(-c for c in prog.objective)
    ya = _transpose_apply(prog, y)
    for j, (v, fj) in enumerate(zip(ya, f)):
        if v < fj if j in prog.nonneg else v != fj:
            return False
    dual_value = _dot(y, [c.rhs for c in prog.constraints])
    return dual_value == (out.value if prog.maximize else -out.value)


def check_outcome(prog: LinProg, out: LpOutcome) -> bool:
    if isinstance(out, Optimal):
        return check_optimal(prog, out)
    if isinstance(out, Infeasible):
        return check_farkas(prog, out.farkas)
    if isinstance(out, Unbounded):
        return check_ray(prog, out.ray, out.point)
    raise TypeError(f"not an LP outcome: {out!r}")


def require(ok: bool, what: str) -> None:
    if not ok:
        raise CertificateError(what)
