"""Backend selection for the equality-feasibility simplex kernel.

The compiled core (``lckit._simplex_c``) is preferred when importable;
otherwise the pure-Python twin is used.  Set ``LCKIT_SIMPLEX_BACKEND`` to
``c`` or ``python`` to force one (forcing ``c`` without the built extension
raises at import).  Both backends run the identical pivot sequence, so
results do not depend on the choice.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

from ._simplex_pure import FEASIBLE, INFEASIBLE

_requested = os.environ.get("LCKIT_SIMPLEX_BACKEND", "").strip().lower()
if _requested == "python":
    from . import _simplex_pure as _impl

    BACKEND = "python"
elif _requested == "c":
    from . import _simplex_c as _impl  # type: ignore[no-redef]

    BACKEND = "c"
elif _requested == "":
    try:
        from . import _simplex_c as _impl  # type: ignore[no-redef]

        BACKEND = "c"
    except ImportError:
        from . import _simplex_pure as _impl

        BACKEND = "python"
else:
    raise RuntimeError(
        f"LCKIT_SIMPLEX_BACKEND must be 'c' or 'python', got {_requested!r}"
    )

DEFAULT_FEAS_TOL = 1e-9
DEFAULT_PIVOT_TOL = 1e-10
DEFAULT_MAX_ITER = 10_000


@dataclass(frozen=True)
class FeasibilityResult:
    """Outcome of the phase-1 run for A x = b, x >= 0."""

    status: int
    x: tuple[float, ...]
    dual: tuple[float, ...]
    objective: float
    iterations: int
    backend: str

    @property
    def feasible(self) -> bool:
        return self.status == FEASIBLE


def solve_equality_feasibility(
    rows: list[list[float]],
    rhs: list[float],
    feas_tol: float = DEFAULT_FEAS_TOL,
    pivot_tol: float = DEFAULT_PIVOT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
) -> FeasibilityResult:
    """Find x >= 0 with rows @ x == rhs, or a Farkas certificate.

    Every rhs entry must be nonnegative (flip row signs before calling).
    """
    if not rows:
        raise ValueError("constraint matrix must have at least one row")
    n = len(rows[0])
    if n == 0:
        raise ValueError("constraint matrix must have at least one column")
    if any(len(row) != n for row in rows):
        raise ValueError("constraint rows must all have the same length")
    if len(rhs) != len(rows):
        raise ValueError("rhs length must match the row count")
    if any(b < 0.0 for b in rhs):
        raise ValueError("rhs entries must be nonnegative")
    status, x, dual, objective, iterations = _impl.phase1(
        [list(map(float, row)) for row in rows],
        [float(b) for b in rhs],
        feas_tol,
        pivot_tol,
        max_iter,
    )
    return FeasibilityResult(status, tuple(x), tuple(dual), objective, iterations, BACKEND)
