# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled phase-1 simplex, the hot kernel behind polytope membership.

Pivot-for-pivot identical to ``_simplex_pure.phase1`` (same entering rule,
ratio test, tie-breaking, and arithmetic order), so both backends return
bit-identical results.  Keep the two files in sync.
"""

from libc.stdlib cimport free, malloc

FEASIBLE = 0
INFEASIBLE = 1


def phase1(rows, rhs, double feas_tol, double pivot_tol, int max_iter):
    """Run phase-1 and report (status, x, dual, objective, iterations)."""
    cdef Py_ssize_t m = len(rows)
    cdef Py_ssize_t n = len(rows[0])
    cdef Py_ssize_t width = n + m + 1
    cdef Py_ssize_t rhs_col = n + m
    cdef Py_ssize_t i, j, enter, leave, base, pbase
    cdef double coef, ratio, best, inv, factor, objective
    cdef int iterations = 0
    cdef int status

    cdef double *tab = <double *> malloc(m * width * sizeof(double))
    cdef double *cost = <double *> malloc(width * sizeof(double))
    cdef Py_ssize_t *basis = <Py_ssize_t *> malloc(m * sizeof(Py_ssize_t))
    if tab == NULL or cost == NULL or basis == NULL:
        free(tab)
        free(cost)
        free(basis)
        raise MemoryError

    try:
        for i in range(m):
            src = rows[i]
            base = i * width
            for j in range(width):
                tab[base + j] = 0.0
            for j in range(n):
                tab[base + j] = src[j]
            tab[base + n + i] = 1.0
            tab[base + rhs_col] = rhs[i]
            basis[i] = n + i

        for j in range(width):
            cost[j] = 0.0
        for i in range(m):
            base = i * width
            for j in range(width):
                cost[j] -= tab[base + j]
        for i in range(m):
            cost[n + i] += 1.0

        while True:
            enter = -1
            for j in range(n + m):
                if cost[j] < -pivot_tol:
                    enter = j
                    break
            if enter < 0:
                break
            if iterations >= max_iter:
                raise ArithmeticError("simplex pivot limit exceeded")

            leave = -1
            best = 0.0
            for i in range(m):
                coef = tab[i * width + enter]
                if coef > pivot_tol:
                    ratio = tab[i * width + rhs_col] / coef
                    if leave < 0 or ratio < best or (ratio == best and basis[i] < basis[leave]):
                        leave = i
                        best = ratio
            if leave < 0:
                raise ArithmeticError("phase-1 ratio test found no pivot row")

            pbase = leave * width
            inv = 1.0 / tab[pbase + enter]
            for j in range(width):
                tab[pbase + j] *= inv
            tab[pbase + enter] = 1.0
            for i in range(m):
                if i == leave:
                    continue
                base = i * width
                factor = tab[base + enter]
                if factor != 0.0:
                    for j in range(width):
                        tab[base + j] -= factor * tab[pbase + j]
                    tab[base + enter] = 0.0
            factor = cost[enter]
            if factor != 0.0:
                for j in range(width):
                    cost[j] -= factor * tab[pbase + j]
                cost[enter] = 0.0
            basis[leave] = enter
            iterations += 1

        objective = -cost[rhs_col]
        x = [0.0] * n
        for i in range(m):
            if basis[i] < n:
                x[basis[i]] = tab[i * width + rhs_col]
        dual = [1.0 - cost[n + i] for i in range(m)]
        status = FEASIBLE if objective <= feas_tol else INFEASIBLE
        return status, x, dual, objective, iterations
    finally:
        free(tab)
        free(cost)
        free(basis)
