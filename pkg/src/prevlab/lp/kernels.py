"""Fraction-free Bland-rule simplex loops.

The tableau is an integer matrix ``T`` with a shared positive denominator
``d``: the true tableau is ``T / d``.  Pivoting on ``(r, c)`` with
``p = T[r, c] > 0`` replaces every other row by
``(T[i] * p - T[i, c] * T[r]) // d`` (an exact division, since all entries
stay minors of the starting matrix) and sets ``d = p``.

Two interchangeable implementations run the same pivot sequence:

* ``numba``: int64 arrays under ``@njit``.  Entries are kept below 2**31 so
  every product fits in 63 bits; on overflow the loop reports status
  ``OVERFLOW`` and the caller restarts the solve on the object path.
* ``numpy``: object-dtype arrays of Python ints, unbounded and exact.

``PREVLAB_KERNEL=numpy`` forces the object path; the default is ``numba``
when it imports.
"""

from __future__ import annotations

import os

import numpy as np

OPTIMAL, UNBOUNDED, OVERFLOW, ITERATION_LIMIT = 0, 1, 2, 3

INT64_SAFE = 1 << 31

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False


def backend() -> str:
    choice = os.environ.get("PREVLAB_KERNEL", "numba").strip().lower()
    if choice not in ("numba", "numpy"):
        raise ValueError(f"PREVLAB_KERNEL must be 'numba' or 'numpy', not {choice!r}")
    if choice == "numba" and not HAVE_NUMBA:
        return "numpy"
    return choice


def bland_loop_object(T, basis, d, ncols, max_iter):
    """Object-dtype reference loop; returns ``(status, T, d, column)``."""
    m = T.shape[0] - 1
    rhs = T.shape[1] - 1
    for _ in range(max_iter):
        neg = np.flatnonzero(T[m, :ncols] < 0)
        if neg.size == 0:
            return OPTIMAL, T, d, -1
        c = int(neg[0])
        r = -1
        for i in np.flatnonzero(T[:m, c] > 0):
            if r < 0:
                r = i
                continue
            lhs = T[i, rhs] * T[r, c]
            rgt = T[r, rhs] * T[i, c]
            if lhs < rgt or (lhs == rgt and basis[i] < basis[r]):
                r = i
        if r < 0:
            return UNBOUNDED, T, d, c
        p = T[r, c]
        row = T[r].copy()
        T = (T * p - np.multiply.outer(T[:, c], row)) // d
        T[r] = row
        d = p
        basis[r] = c
    return ITERATION_LIMIT, T, d, -1


if HAVE_NUMBA:

    @njit(cache=True)
    def _bland_loop_int64(T, basis, d, ncols, max_iter):
        m = T.shape[0] - 1
        width = T.shape[1]
        rhs = width - 1
        for _ in range(max_iter):
            c = -1
            for j in range(ncols):
                if T[m, j] < 0:
                    c = j
                    break
            if c < 0:
                return OPTIMAL, d, -1
            r = -1
            for i in range(m):
                a = T[i, c]
                if a > 0:
                    if r < 0:
                        r = i
                    else:
                        lhs = T[i, rhs] * T[r, c]
                        rgt = T[r, rhs] * a
                        if lhs < rgt or (lhs == rgt and basis[i] < basis[r]):
                            r = i
            if r < 0:
                return UNBOUNDED, d, c
            p = T[r, c]
            for i in range(m + 1):
                if i == r:
                    continue
                f = T[i, c]
                for j in range(width):
                    v = (T[i, j] * p - f * T[r, j]) // d
                    if v >= INT64_SAFE or v <= -INT64_SAFE:
                        return OVERFLOW, d, -1
                    T[i, j] = v
            d = p
            basis[r] = c
        return ITERATION_LIMIT, d, -1


def _fits_int64(T) -> bool:
    return T.size == 0 or int(np.abs(T).max()) < INT64_SAFE


def run_bland(T, basis, d, ncols, max_iter=100_000, kernel=None):
    """Run Bland's rule on integer tableau ``T`` (object dtype, modified copy returned).

    Returns ``(status, T, d, column)`` where ``T`` is object dtype.  The
    numba path is tried first when selected and the entries fit; any
    overflow replays the loop from the untouched input on the object path,
    so both paths yield the same pivots and the same final tableau.
    """
    kernel = kernel or backend()
    basis0 = basis.copy()
    if kernel == "numba" and _fits_int64(T):
        T64 = T.astype(np.int64)
        b64 = basis.astype(np.int64)
        status, d64, col = _bland_loop_int64(T64, b64, np.int64(d), ncols, max_iter)
        if status != OVERFLOW:
            basis[:] = b64
            return status, T64.astype(object), int(d64), int(col)
    basis[:] = basis0
    return bland_loop_object(T.copy(), basis, d, ncols, max_iter)
