"""Compiled search for a counterexample assignment to an identity.

Assignments are enumerated as an odometer (variable 0 most significant), so
the first counterexample found is the lexicographically least one.  Prefix
products of both sides are cached; when the odometer turns variable j only
the suffix starting at the first occurrence of a variable >= j is recomputed.
"""
import numba
import numpy as np


@numba.njit(cache=True, nogil=True)
def _first_counterexample(table, values, lhs, rhs, start_l, start_r, nvars, lo, hi, empty):
    """Search assignments drawn from ``values`` whose variable 0 has value index in ``lo..hi-1``.

    ``lhs``/``rhs`` hold variable indices; ``empty`` is the value of an empty
    side (-1 for plain semigroups, where sides are never empty).  Returns the
    witness as value indices, or an empty array.
    """
    nvals = values.shape[0]
    nl = lhs.shape[0]
    nr = rhs.shape[0]
    vals = np.zeros(nvars, dtype=np.int64)
    vals[0] = lo
    pl = np.empty(nl + 1, dtype=np.int64)
    pr = np.empty(nr + 1, dtype=np.int64)
    pl[0] = empty
    pr[0] = empty
    changed = 0
    while True:
        for i in range(start_l[changed], nl):
            v = values[vals[lhs[i]]]
            a = pl[i]
            pl[i + 1] = v if a < 0 else table[a, v]
        for i in range(start_r[changed], nr):
            v = values[vals[rhs[i]]]
            a = pr[i]
            pr[i + 1] = v if a < 0 else table[a, v]
        if pl[nl] != pr[nr]:
            return vals
        j = nvars - 1
        while j >= 0:
            vals[j] += 1
            limit = hi if j == 0 else nvals
            if vals[j] < limit:
                break
            vals[j] = 0
            j -= 1
        if j < 0:
            return np.empty(0, dtype=np.int64)
        changed = j


def _starts(side, nvars):
    """start[j] = first position of ``side`` holding a variable with index >= j."""
    start = np.full(nvars, len(side), dtype=np.int64)
    for pos in range(len(side) - 1, -1, -1):
        v = side[pos]
        start[: v + 1] = np.minimum(start[: v + 1], pos)
    return start


def first_counterexample(table, values, lhs, rhs, nvars, empty, lo=0, hi=None):
    """Lexicographically first assignment (as element indices) separating the sides, or None."""
    table = np.ascontiguousarray(table, dtype=np.int32)
    values = np.asarray(values, dtype=np.int64)
    hi = len(values) if hi is None else hi
    if nvars == 0 or hi <= lo:
        return None
    lhs = np.asarray(lhs, dtype=np.int64)
    rhs = np.asarray(rhs, dtype=np.int64)
    out = _first_counterexample(
        table, values, lhs, rhs, _starts(lhs, nvars), _starts(rhs, nvars), nvars, lo, hi, empty
    )
    return None if len(out) == 0 else [int(values[x]) for x in out]


@numba.njit(cache=True)
def bool_matrix_table(rows, lookup, k):
    """Multiplication table of Boolean matrices given as row bitmasks.

    ``rows[a, i]`` is row i of matrix a; ``lookup`` maps a full bit code back
    to an element index (or -1).
    """
    n = rows.shape[0]
    table = np.empty((n, n), dtype=np.int32)
    for a in range(n):
        for b in range(n):
            code = 0
            for i in range(k):
                r = 0
                ra = rows[a, i]
                for j in range(k):
                    if (ra >> j) & 1:
                        r |= rows[b, j]
                code |= r << (i * k)
            table[a, b] = lookup[code]
    return table
