"""Zero-sum matrix games solved as a pair of exact LPs."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from ..errors import CertificateError, EmptyMatrix
from ..rational import as_rat
from .model import EQ, GE, LE, LinProg, Optimal
from .simplex import solve


@dataclass(frozen=True)
class MixedStrategy:
    weights: tuple[Fraction, ...]

    def __post_init__(self):
        if any(w < 0 for w in self.weights) or sum(self.weights) != 1:
            raise ValueError("a mixed strategy is a probability vector")

    def __len__(self):
        return len(self.weights)

    def __iter__(self):
        return iter(self.weights)


def _column_player_lp(M) -> LinProg:
    # min t  s.t.  (M alpha)_r <= t for every row r, alpha in the simplex
    n, m = len(M), len(M[0])
    cons = [(list(M[r]) + [-1], LE, 0) for r in range(n)]
    cons.append(([1] * m + [0], EQ, 1))
    return LinProg.build(m + 1, [0] * m + [1], cons, maximize=False, nonneg=range(m))


def _row_player_lp(M) -> LinProg:
    # max s  s.t.  (beta^T M)_c >= s for every column c, beta in the simplex
    n, m = len(M), len(M[0])
    cons = [([M[r][c] for r in range(n)] + [-1], GE, 0) for c in range(m)]
    cons.append(([1] * n + [0], EQ, 1))
    return LinProg.build(n + 1, [0] * n + [1], cons, maximize=True, nonneg=range(n))


def minimax(matrix: Sequence[Sequence]) -> tuple[Fraction, MixedStrategy, MixedStrategy]:
    """Value and optimal strategies of the game with payoff ``beta^T M alpha``.

    ``M`` has one row per pure ``beta`` strategy and one column per pure
    ``alpha`` strategy; ``alpha`` minimizes and ``beta`` maximizes.  The two
    LP values must agree exactly, and both guarantees are re-checked against
    every pure response before returning.

    >>> v, a, b = minimax([[1, 0], [0, 1]])
    >>> v, a.weights, b.weights
    (Fraction(1, 2), (Fraction(1, 2), Fraction(1, 2)), (Fraction(1, 2), Fraction(1, 2)))
    """
    if not matrix or not matrix[0]:
        raise EmptyMatrix("minimax needs at least one row and one column")
    M = [[as_rat(x) for x in row] for row in matrix]
    if any(len(row) != len(M[0]) for row in M):
        raise ValueError("ragged payoff matrix")
    n, m = len(M), len(M[0])
    col = solve(_column_player_lp(M))
    row = solve(_row_player_lp(M))
    if not isinstance(col, Optimal) or not isinstance(row, Optimal):
        raise CertificateError("a finite game always has an optimal value")
    if col.value != row.value:
        raise CertificateError(f"primal value {col.value} != dual value {row.value}")
    alpha = MixedStrategy(col.point[:m])
    beta = MixedStrategy(row.point[:n])
    if not verify_minimax(M, col.value, alpha, beta):
        raise CertificateError("strategy guarantees failed")
    return col.value, alpha, beta


def verify_minimax(M, value, alpha: MixedStrategy, beta: MixedStrategy) -> bool:
    """Both guarantees against every pure response, by direct arithmetic."""
    M = [[as_rat(x) for x in row] for row in M]
    rows_vs_alpha = [sum(a * x for a, x in zip(alpha.weights, row)) for row in M]
    cols_vs_beta = [sum(b * M[r][c] for r, b in enumerate(beta.weights)) for c in range(len(M[0]))]
    return max(rows_vs_alpha) <= value and min(cols_vs_beta) >= value
