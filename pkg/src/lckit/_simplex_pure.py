"""Pure-Python phase-1 simplex on a dense tableau.

Solves the feasibility problem: find x >= 0 with A x = b, b >= 0, by
minimizing the sum of one artificial variable per row (Bland's smallest-
index pivot rule, so the iteration cannot cycle).  The compiled twin in
``_simplex_c.pyx`` runs the identical pivot sequence; any change here must
be mirrored there so the two backends stay bit-identical.
"""

from __future__ import annotations

FEASIBLE = 0
INFEASIBLE = 1


def phase1(
    rows: list[list[float]],
    rhs: list[float],
    feas_tol: float,
    pivot_tol: float,
    max_iter: int,
) -> tuple[int, list[float], list[float], float, int]:
    """Run phase-1 and report (status, x, dual, objective, iterations).

    ``x`` is a basic solution of A x = b when status is FEASIBLE.  ``dual``
    is the simplex multiplier vector y; at an INFEASIBLE optimum it is a
    Farkas certificate: y.b = objective > 0 while y.A_j <= pivot_tol for
    every column j.
    """
    m = len(rows)
    n = len(rows[0])
    width = n + m + 1
    rhs_col = n + m

    # Tableau: original columns, artificial identity block, rhs column.
    tab = []
    for i in range(m):
        row = [0.0] * width
        src = rows[i]
        for j in range(n):
            row[j] = src[j]
        row[n + i] = 1.0
        row[rhs_col] = rhs[i]
        tab.append(row)
    basis = list(range(n, n + m))

    # Reduced costs for min sum(artificials); the rhs slot carries the
    # negated objective value.
    cost = [0.0] * width
    for i in range(m):
        trow = tab[i]
        for j in range(width):
            cost[j] -= trow[j]
    for i in range(m):
        cost[n + i] += 1.0

    iterations = 0
    while True:
        # Bland entering rule: smallest column index with negative reduced cost.
        enter = -1
        for j in range(n + m):
            if cost[j] < -pivot_tol:
                enter = j
                break
        if enter < 0:
            break
        if iterations >= max_iter:
            raise ArithmeticError("simplex pivot limit exceeded")

        # Ratio test; ties broken by smallest basis index (Bland).
        leave = -1
        best = 0.0
        for i in range(m):
            coef = tab[i][enter]
            if coef > pivot_tol:
                ratio = tab[i][rhs_col] / coef
                if leave < 0 or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    leave = i
                    best = ratio
        if leave < 0:
            # Phase-1 is bounded below by zero, so this is numeric breakage.
            raise ArithmeticError("phase-1 ratio test found no pivot row")

        prow = tab[leave]
        inv = 1.0 / prow[enter]
        for j in range(width):
            prow[j] *= inv
        prow[enter] = 1.0
        for i in range(m):
            if i == leave:
                continue
            factor = tab[i][enter]
            if factor != 0.0:
                trow = tab[i]
                for j in range(width):
                    trow[j] -= factor * prow[j]
                trow[enter] = 0.0
        factor = cost[enter]
        if factor != 0.0:
            for j in range(width):
                cost[j] -= factor * prow[j]
            cost[enter] = 0.0
        basis[leave] = enter
        iterations += 1

    objective = -cost[rhs_col]
    x = [0.0] * n
    for i in range(m):
        if basis[i] < n:
            x[basis[i]] = tab[i][rhs_col]
    dual = [1.0 - cost[n + i] for i in range(m)]
    status = FEASIBLE if objective <= feas_tol else INFEASIBLE
    return status, x, dual, objective, iterations
