"""Incremental construction of :class:`LinProg` instances from sparse rows."""

from __future__ import annotations

from fractions import Fraction

from .model import Constraint, LinProg

_ZERO = Fraction(0)


class LpModel:
    """Collects variables and sparse constraints, then freezes into a LinProg."""

    def __init__(self):
        self.num_vars = 0
        self.free: set[int] = set()
        self.rows: list[tuple[dict, str, Fraction]] = []

    def var(self, count: int = 1, free: bool = False) -> list[int]:
        idx = list(range(self.num_vars, self.num_vars + count))
        self.num_vars += count
        if free:
            self.free.update(idx)
        return idx

    def add(self, terms: dict, rel: str, rhs=0) -> None:
        self.rows.append((terms, rel, Fraction(rhs)))

    def add_simplex(self, count: int) -> list[int]:
        """Fresh nonnegative variables summing to one."""
        idx = self.var(count)
        self.add({j: 1 for j in idx}, "=", 1)
        return idx

    def build(self, objective: dict | None = None, maximize: bool = True) -> LinProg:
        n = self.num_vars
        obj = [_ZERO] * n
        for j, c in (objective or {}).items():
            obj[j] += Fraction(c)
        cons = []
        for terms, rel, rhs in self.rows:
            row = [_ZERO] * n
            for j, c in terms.items():
                row[j] += Fraction(c)
            cons.append(Constraint(tuple(row), rel, rhs))
        nonneg = frozenset(j for j in range(n) if j not in self.free)
        return LinProg(n, tuple(obj), maximize, tuple(cons), nonneg)
