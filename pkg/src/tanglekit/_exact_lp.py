"""Exact-rational linear programming for the balance analyzer.

A small two-phase simplex over ``fractions.Fraction`` with Bland's rule,
plus the handful of problem formulations the analyzer needs.  Problem sizes
here are tiny (a handful of rows, a few dozen columns), so clarity beats
speed.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm


def solve_lp(a_rows, b, c, maximize=True):
    """Solve max (or min) c.x subject to A x = b, x >= 0 in exact rationals.

    Returns (status, x, objective); status is one of "optimal",
    "infeasible", "unbounded".  x and objective are None unless optimal.
    Bland's rule makes the pivot sequence finite and deterministic.
    """
    m = len(a_rows)
    n = len(c)
    rows = [[Fraction(v) for v in row] for row in a_rows]
    rhs = [Fraction(v) for v in b]
    cost = [Fraction(v) for v in c]
    sense = 1 if maximize else -1
    work_cost = [sense * v for v in cost]

    for i in range(m):
        if rhs[i] < 0:
            rows[i] = [-v for v in rows[i]]
            rhs[i] = -rhs[i]

    ncols = n + m
    tab = [
        rows[i]
        + [Fraction(1) if j == i else Fraction(0) for j in range(m)]
        + [rhs[i]]
        for i in range(m)
    ]
    basis = [n + i for i in range(m)]

    # phase 1: maximize minus the sum of artificials
    zrow = [sum(tab[i][j] for i in range(m)) for j in range(n)]
    zrow += [Fraction(0)] * m
    zrow.append(sum(rhs))
    _simplex(tab, zrow, basis, range(ncols))
    if zrow[-1] != 0:
        return "infeasible", None, None

    # drive leftover artificials out of the basis; drop redundant rows
    i = 0
    while i < len(tab):
        if basis[i] >= n:
            piv_col = next((j for j in range(n) if tab[i][j] != 0), None)
            if piv_col is None:
                del tab[i]
                del basis[i]
                continue
            _pivot(tab, zrow, basis, i, piv_col)
        i += 1

    # phase 2 with the real objective
    zrow = [
        work_cost[j] - sum(work_cost[basis[i]] * tab[i][j] for i in range(len(tab)))
        for j in range(n)
    ]
    zrow += [Fraction(0)] * m
    zrow.append(-sum(work_cost[basis[i]] * tab[i][-1] for i in range(len(tab))))
    status = _simplex(tab, zrow, basis, range(n))
    if status == "unbounded":
        return "unbounded", None, None

    x = [Fraction(0)] * n
    for i, bv in enumerate(basis):
        if bv < n:
            x[bv] = tab[i][-1]
    objective = sum(ci * xi for ci, xi in zip(cost, x))
    return "optimal", x, objective


def _simplex(tab, zrow, basis, allowed):
    allowed = list(allowed)
    while True:
        enter = -1
        for j in allowed:
            if zrow[j] > 0:
                enter = j
                break
        if enter < 0:
            return "optimal"
        leave = -1
        best = None
        for i in range(len(tab)):
            coef = tab[i][enter]
            if coef > 0:
                ratio = tab[i][-1] / coef
                if (
                    best is None
                    or ratio < best
                    or (ratio == best and basis[i] < basis[leave])
                ):
                    best = ratio
                    leave = i
        if leave < 0:
            return "unbounded"
        _pivot(tab, zrow, basis, leave, enter)


def _pivot(tab, zrow, basis, r, c):
    piv = tab[r][c]
    tab[r] = [v / piv for v in tab[r]]
    prow = tab[r]
    for i in range(len(tab)):
        if i != r:
            f = tab[i][c]
            if f:
                tab[i] = [a - f * p for a, p in zip(tab[i], prow)]
    f = zrow[c]
    if f:
        zrow[:] = [a - f * p for a, p in zip(zrow, prow)]
    basis[r] = c


# --- analyzer-facing formulations ---------------------------------------------


def positive_kernel_witness(a_rows):
    """Rational x with A x = 0 and x_j >= 1 for all j, or None.

    Substituting x = 1 + s turns the problem into feasibility of
    {A s = -A.1, s >= 0}.
    """
    n = len(a_rows[0])
    b = [-sum(row) for row in a_rows]
    status, s, _ = solve_lp(a_rows, b, [0] * n, maximize=True)
    if status != "optimal":
        return None
    return [Fraction(1) + si for si in s]


def lexmin_positive_kernel_witness(a_rows):
    """Lexicographically smallest rational x >= 1 with A x = 0.

    Minimizes x_1, then x_2 with x_1 pinned, and so on; each stage is a
    bounded LP, so the result is well defined and deterministic.
    """
    n = len(a_rows[0])
    fixed: list[Fraction] = []
    for j in range(n):
        rows = [list(r) for r in a_rows]
        rhs = [-sum(r) for r in a_rows]
        for i, v in enumerate(fixed):
            extra = [0] * n
            extra[i] = 1
            rows.append(extra)
            rhs.append(v)
        cost = [0] * n
        cost[j] = 1
        status, _, obj = solve_lp(rows, rhs, cost, maximize=False)
        if status != "optimal":
            return None
        fixed.append(obj)
    return [Fraction(1) + v for v in fixed]


def box_kernel_max(a_rows, weights):
    """Maximize weights.x subject to A x = 0, 0 <= x <= 1.

    Returns (x, objective) with x restricted to the original variables.
    """
    m = len(a_rows)
    n = len(a_rows[0])
    rows = [list(r) + [0] * n for r in a_rows]
    for i in range(n):
        extra = [0] * (2 * n)
        extra[i] = 1
        extra[n + i] = 1
        rows.append(extra)
    b = [0] * m + [1] * n
    cost = list(weights) + [0] * n
    status, x, obj = solve_lp(rows, b, cost, maximize=True)
    if status != "optimal":  # the box always contains 0, so this cannot happen
        raise RuntimeError(f"box LP unexpectedly {status}")
    return x[:n], obj


def negative_column_scores(a_rows):
    """Rational p with (A^T p)_j <= -1 for every column j, or None."""
    q = len(a_rows)
    n = len(a_rows[0])
    rows = []
    for j in range(n):
        row = [a_rows[i][j] for i in range(q)]
        row += [-a_rows[i][j] for i in range(q)]
        row += [1 if t == j else 0 for t in range(n)]
        rows.append(row)
    b = [-1] * n
    status, x, _ = solve_lp(rows, b, [0] * (2 * q + n), maximize=True)
    if status != "optimal":
        return None
    return [x[i] - x[q + i] for i in range(q)]


def rank_and_kernel(a_rows, n):
    """Exact rank and a kernel basis of an integer matrix, over Q."""
    rows = [[Fraction(v) for v in r] for r in a_rows]
    pivots: list[int] = []
    r = 0
    for col in range(n):
        sel = next((i for i in range(r, len(rows)) if rows[i][col] != 0), None)
        if sel is None:
            continue
        rows[r], rows[sel] = rows[sel], rows[r]
        piv = rows[r][col]
        rows[r] = [v / piv for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col] != 0:
                f = rows[i][col]
                rows[i] = [a - f * p for a, p in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
        if r == len(rows):
            break
    free = [c for c in range(n) if c not in pivots]
    kernel = []
    for fc in free:
        vec = [Fraction(0)] * n
        vec[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            vec[pc] = -rows[i][fc]
        kernel.append(vec)
    return r, kernel


def coprime_integers(vec):
    """Scale a rational vector to integers and divide out the gcd."""
    fracs = [Fraction(v) for v in vec]
    scale = lcm(*[f.denominator for f in fracs]) if fracs else 1
    ints = [int(f * scale) for f in fracs]
    g = 0
    for v in ints:
        g = gcd(g, v)
    if g > 1:
        ints = [v // g for v in ints]
    return ints
