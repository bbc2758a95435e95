"""Two-phase exact simplex with Bland's rule and certificate extraction."""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from ..errors import CertificateError
from . import kernels
from .model import (
    EQ,
    GE,
    LE,
    Infeasible,
    LinProg,
    LpOutcome,
    Optimal,
    Unbounded,
    check_outcome,
)


def _row_scale(values) -> int:
    out = 1
    for v in values:
        if v.denominator != 1:
            out = math.lcm(out, v.denominator)
    return out


class _Standard:
    """``prog`` rewritten as ``A x = b, x >= 0, b >= 0`` over integers.

    Column layout: structural (free variables split into +/- parts), then
    slacks, then artificials.  Every row records the column that starts as
    its identity basis column.
    """

    def __init__(self, prog: LinProg):
        self.prog = prog
        n = prog.num_vars
        self.pos = list(range(n))
        self.neg = {}
        ncol = n
        for j in range(n):
            if j not in prog.nonneg:
                self.neg[j] = ncol
                ncol += 1
        self.n_struct = ncol
        rows = prog.constraints
        m = len(rows)
        slack_of = {}
        for i, c in enumerate(rows):
            if c.rel != EQ:
                slack_of[i] = ncol
                ncol += 1
        self.n_real = ncol
        self.sign = [1] * m
        self.scale = [1] * m
        self.idcol = [0] * m
        self.art_rows = []
        dense = []
        for i, c in enumerate(rows):
            row = [Fraction(0)] * ncol
            for j, a in enumerate(c.coeffs):
                if a:
                    row[j] = a
                    if j in self.neg:
                        row[self.neg[j]] = -a
            b = c.rhs
            slack = 1 if c.rel == LE else -1
            if b < 0:
                self.sign[i] = -1
                row = [-v for v in row]
                b = -b
                slack = -slack
            s = _row_scale(row + [b])
            self.scale[i] = s
            ints = [v.numerator * (s // v.denominator) if v else 0 for v in row]
            # slack columns stay +-1 so identity columns keep holding B^-1
            if i in slack_of:
                ints[slack_of[i]] = slack
            dense.append((ints, b.numerator * (s // b.denominator)))
            if i in slack_of and slack > 0:
                self.idcol[i] = slack_of[i]
            else:
                self.art_rows.append(i)
        self.n_art = len(self.art_rows)
        for k, i in enumerate(self.art_rows):
            self.idcol[i] = ncol + k
        self.width = ncol + self.n_art + 1
        T = np.zeros((m + 1, self.width), dtype=object)
        T[:, :] = 0
        for i, (row, b) in enumerate(dense):
            T[i, : self.n_real] = row
            T[i, -1] = b
        for i in range(m):
            T[i, self.idcol[i]] = 1
        self.T = T
        self.basis = np.array(self.idcol, dtype=np.int64)
        self.d = 1
        self.m = m

    def phase2_costs(self, objective=None, maximize=None) -> list[int]:
        """Integer minimization costs over real columns (objective scaled positive)."""
        f = self.prog.objective if objective is None else objective
        maximize = self.prog.maximize if maximize is None else maximize
        g = [(-v if maximize else v) for v in f]
        s = _row_scale(g)
        self.obj_scale = s
        cost = [0] * self.n_real
        for j, v in enumerate(g):
            cost[j] = v.numerator * (s // v.denominator)
            if j in self.neg:
                cost[self.neg[j]] = -cost[j]
        return cost

    def set_objective(self, cost_real: list[int]) -> None:
        """Install reduced costs ``d*c_j - sum_i c_B(i) T[i, j]`` in the last row."""
        T, m = self.T, self.m
        cost = list(cost_real) + [0] * (self.width - 1 - self.n_real)
        obj = np.zeros(self.width, dtype=object)
        obj[:] = 0
        obj[:-1] = [self.d * c for c in cost]
        for i in range(m):
            cb = cost[self.basis[i]]
            if cb:
                obj = obj - cb * T[i]
        T[m] = obj
        self._cost = cost

    def duals(self) -> list[Fraction]:
        """Simplex multipliers of the standardized rows for the current objective."""
        rc = self.T[self.m]
        return [Fraction(self._cost[k] * self.d - rc[k], self.d) for k in self.idcol]

    def values(self) -> list[Fraction]:
        x = [Fraction(0)] * (self.width - 1)
        for i in range(self.m):
            x[self.basis[i]] = Fraction(self.T[i, -1], self.d)
        return x

    def to_original(self, x_std) -> tuple[Fraction, ...]:
        out = []
        for j in range(self.prog.num_vars):
            v = x_std[j]
            if j in self.neg:
                v -= x_std[self.neg[j]]
            out.append(v)
        return tuple(out)

    def run(self, ncols: int, kernel) -> tuple[int, int]:
        status, T, d, col = kernels.run_bland(self.T, self.basis, self.d, ncols, kernel=kernel)
        self.T, self.d = T, d
        if status == kernels.ITERATION_LIMIT:
            raise RuntimeError("simplex iteration limit reached")
        return status, col

    def drive_out_artificials(self) -> None:
        """Pivot zero-level artificials out of the basis where a real column allows it."""
        art0 = self.n_real
        for r in range(self.m):
            if self.basis[r] < art0:
                continue
            nz = [j for j in range(self.n_real) if self.T[r, j] != 0]
            if not nz:
                continue
            c = nz[0]
            T, d, p = self.T, self.d, self.T[r, c]
            row = T[r].copy()
            T = (T * p - np.multiply.outer(T[:, c], row)) // d
            T[r] = row
            if p < 0:
                T = -T
                p = -p
            self.T, self.d = T, p
            self.basis[r] = c


def _phase1(sf: _Standard, prog: LinProg, verify: bool, kernel) -> Infeasible | None:
    if not sf.n_art:
        return None
    T, m = sf.T, sf.m
    obj = np.zeros(sf.width, dtype=object)
    obj[:] = 0
    for i in sf.art_rows:
        obj = obj - T[i]
    for i in sf.art_rows:
        obj[sf.idcol[i]] = 0
    T[m] = obj
    sf._cost = [0] * sf.n_real + [1] * sf.n_art
    sf.run(sf.width - 1, kernel)
    if sf.T[m, -1] != 0:
        pi = sf.duals()
        y = tuple(-pi[i] * sf.sign[i] * sf.scale[i] for i in range(m))
        out = Infeasible(_normalize(y))
        if verify and not check_outcome(prog, out):
            raise CertificateError("Farkas certificate failed its check")
        return out
    sf.drive_out_artificials()
    return None


def _phase2(sf: _Standard, prog: LinProg, kernel) -> Optimal | Unbounded:
    status, col = sf.run(sf.n_real, kernel)
    point = sf.to_original(sf.values())
    if status == kernels.UNBOUNDED:
        dir_std = [Fraction(0)] * (sf.width - 1)
        dir_std[col] = Fraction(1)
        for i in range(sf.m):
            dir_std[sf.basis[i]] = Fraction(-sf.T[i, col], sf.d)
        return Unbounded(_normalize(sf.to_original(dir_std)), point)
    pi = sf.duals()
    s = sf.obj_scale
    y = tuple(-pi[i] * sf.sign[i] * sf.scale[i] / s for i in range(sf.m))
    value = sum((a * x for a, x in zip(prog.objective, point) if a), Fraction(0))
    return Optimal(value, point, y)


def solve(prog: LinProg, verify: bool = True, kernel: str | None = None) -> LpOutcome:
    """Solve ``prog`` exactly.

    Pivoting follows Bland's rule (lowest-index entering column, lowest-index
    leaving basic variable among ratio ties), so results are deterministic.
    With ``verify`` the certificate is re-checked before returning.
    """
    sf = _Standard(prog)
    infeasible = _phase1(sf, prog, verify, kernel)
    if infeasible is not None:
        return infeasible
    sf.set_objective(sf.phase2_costs())
    out = _phase2(sf, prog, kernel)
    if verify and not check_outcome(prog, out):
        raise CertificateError(f"{type(out).__name__} certificate failed its check")
    return out


class LpSession:
    """One feasible region, many objectives.

    Phase 1 runs once; each :meth:`optimize` call restarts phase 2 from the
    previous optimal basis, which stays primal feasible because only the
    objective changes.  Results are deterministic for a given call sequence.
    """

    def __init__(self, prog: LinProg, kernel: str | None = None):
        self.prog = prog
        self.kernel = kernel
        self._sf = _Standard(prog)
        self.infeasible = _phase1(self._sf, prog, False, kernel)

    def optimize(self, objective, maximize: bool, verify: bool = False) -> LpOutcome:
        if self.infeasible is not None:
            return self.infeasible
        prog = LinProg(self.prog.num_vars, tuple(Fraction(c) for c in objective), maximize,
                       self.prog.constraints, self.prog.nonneg)
        sf = self._sf
        sf.prog = prog
        sf.set_objective(sf.phase2_costs())
        out = _phase2(sf, prog, self.kernel)
        if verify and not check_outcome(prog, out):
            raise CertificateError(f"{type(out).__name__} certificate failed its check")
        return out


def _normalize(v) -> tuple[Fraction, ...]:
    """Scale a certificate direction so its entries are coprime integers."""
    v = [Fraction(x) for x in v]
    den = 1
    for x in v:
        den = math.lcm(den, x.denominator)
    ints = [int(x * den) for x in v]
    g = 0
    for x in ints:
        g = math.gcd(g, x)
    g = g or 1
    return tuple(Fraction(x // g) for x in ints)
