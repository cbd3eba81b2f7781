"""Deterministic local strategies and polytope membership by linear program.

A behavior is local exactly when it is a convex mixture of deterministic
per-wing strategies.  Membership is decided by a phase-1 simplex on the
cell-matching equalities; the explicit mixture-weight normalization row is
dropped because summing any setting pair's four cell equations already
forces the weights to total one.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from enum import Enum

from .behavior import (
    Behavior,
    ChshFunctional,
    Scenario,
    best_chsh,
    chsh_max,
    chsh_value,
    no_signaling_check,
    require_valid,
)
from .quantum import CHSH_ANGLES_ALICE, CHSH_ANGLES_BOB, behavior_from_state, singlet
from .simplex import solve_equality_feasibility

VERTEX_LIMIT = 2**20
FEASIBILITY_TOL = 1e-9
VERDICT_MARGIN = 1e-9


class ScenarioTooLargeError(ValueError):
    """Vertex enumeration would exceed the size guard."""


class SignalingBehaviorError(ValueError):
    """Membership was asked about a behavior outside the no-signaling set."""


class MembershipStatus(Enum):
    LOCAL = "Local"
    NONLOCAL = "NonLocal"


@dataclass(frozen=True)
class DeterministicStrategy:
    """One definite outcome per setting on each wing; a polytope vertex."""

    assign_a: tuple[int, ...]
    assign_b: tuple[int, ...]


@dataclass(frozen=True)
class Certificate:
    """Linear functional separating a nonlocal behavior from the polytope.

    ``kind`` is ``chsh`` on 2x2 scenarios (data holds the settings and sign
    pattern, bound 2) and ``lp-dual`` otherwise (data holds the Farkas
    vector y with y.p = value while y stays <= bound on every vertex).
    """

    kind: str
    value: float
    bound: float
    data: tuple

    @property
    def margin(self) -> float:
        return self.value - self.bound


@dataclass(frozen=True)
class MembershipVerdict:
    status: MembershipStatus
    weights: tuple[float, ...] | None
    max_cell_residual: float
    certificate: Certificate | None

    @property
    def is_local(self) -> bool:
        return self.status is MembershipStatus.LOCAL


def enumerate_vertices(scenario: Scenario) -> list[DeterministicStrategy]:
    """All deterministic strategies, lexicographic with outcomes ordered (+1, -1).

    Alice's assignment varies slowest; 2^(settings_a + settings_b) total.
    """
    count = 2 ** (scenario.settings_a + scenario.settings_b)
    if count > VERTEX_LIMIT:
        raise ScenarioTooLargeError(
            f"{count} deterministic strategies exceed the {VERTEX_LIMIT} vertex cap"
        )
    outcomes = scenario.outcomes
    vertices = []
    for assign_a in itertools.product(outcomes, repeat=scenario.settings_a):
        for assign_b in itertools.product(outcomes, repeat=scenario.settings_b):
            vertices.append(DeterministicStrategy(assign_a, assign_b))
    return vertices


def strategy_behavior(strategy: DeterministicStrategy, scenario: Scenario) -> Behavior:
    """The point-mass behavior produced by a deterministic strategy."""
    if len(strategy.assign_a) != scenario.settings_a or len(strategy.assign_b) != scenario.settings_b:
        raise ValueError("strategy does not cover the scenario's settings")
    table = {}
    for a, b, outcome_a, outcome_b in scenario.cells():
        hit = strategy.assign_a[a] == outcome_a and strategy.assign_b[b] == outcome_b
        table[(a, b, outcome_a, outcome_b)] = 1.0 if hit else 0.0
    return Behavior(scenario, table)


def membership(behavior: Behavior, feasibility_tol: float = FEASIBILITY_TOL) -> MembershipVerdict:
    """Decide whether the behavior is a mixture of deterministic strategies.

    Signaling behaviors are rejected: the cell-matching equalities model the
    polytope inside the no-signaling set only.
    """
    require_valid(behavior)
    ns = no_signaling_check(behavior)
    if not ns.passes:
        raise SignalingBehaviorError(
            f"behavior signals (residuals {ns.max_residual_a:.3e}, {ns.max_residual_b:.3e})"
        )
    scenario = behavior.scenario
    vertices = enumerate_vertices(scenario)
    cells = list(scenario.cells())
    rows = []
    for a, b, outcome_a, outcome_b in cells:
        rows.append(
            [
                1.0 if (v.assign_a[a] == outcome_a and v.assign_b[b] == outcome_b) else 0.0
                for v in vertices
            ]
        )
    # Cell values can sit a few ulp below zero after honest arithmetic.
    rhs = [max(behavior.table[cell], 0.0) for cell in cells]
    result = solve_equality_feasibility(rows, rhs, feas_tol=feasibility_tol)

    if result.feasible:
        weights = tuple(w if w > 0.0 else 0.0 for w in result.x)
        residual = 0.0
        for row, cell in zip(rows, cells):
            total = 0.0
            for weight, coef in zip(weights, row):
                total += weight * coef
            residual = max(residual, abs(total - behavior.table[cell]))
        return MembershipVerdict(MembershipStatus.LOCAL, weights, residual, None)

    if scenario.settings_a == 2 and scenario.settings_b == 2:
        functional = best_chsh(behavior)
        certificate = Certificate(
            "chsh", functional.value, 2.0, functional.settings + functional.signs
        )
    else:
        dual = result.dual
        value = sum(y * b for y, b in zip(dual, rhs))
        bound = max(
            sum(y * row[col] for y, row in zip(dual, rows)) for col in range(len(vertices))
        )
        certificate = Certificate("lp-dual", value, bound, dual)
    return MembershipVerdict(MembershipStatus.NONLOCAL, None, result.objective, certificate)


def local_bound_chsh(scenario: Scenario) -> float:
    """Max of the plain CHSH combination over all deterministic strategies.

    Exact enumeration on a 2x2 scenario; the result is exactly 2.0.
    """
    if scenario.settings_a != 2 or scenario.settings_b != 2:
        raise ValueError("the CHSH bound is defined on 2x2 scenarios")
    return max(
        chsh_value(strategy_behavior(v, scenario)) for v in enumerate_vertices(scenario)
    )


def chsh_maximizing_vertex(scenario: Scenario) -> tuple[float, DeterministicStrategy]:
    """A deterministic strategy attaining the CHSH bound, with its value."""
    if scenario.settings_a != 2 or scenario.settings_b != 2:
        raise ValueError("the CHSH bound is defined on 2x2 scenarios")
    best_value = -math.inf
    witness = None
    for vertex in enumerate_vertices(scenario):
        value = chsh_value(strategy_behavior(vertex, scenario))
        if value > best_value:
            best_value = value
            witness = vertex
    assert witness is not None
    return best_value, witness


@dataclass(frozen=True)
class ViolationDemo:
    """Singlet CHSH violation versus its single-setting local restriction."""

    chsh: float
    violation: MembershipVerdict
    single_setting: MembershipVerdict


def quantum_violation_demo() -> ViolationDemo:
    """Run membership on the CHSH-optimal singlet behavior and its 1x1 cut.

    The full behavior is nonlocal with symmetrized CHSH 2*sqrt(2); restricted
    to one equal-angle setting pair, the perfect anti-correlation alone is
    local.
    """
    state = singlet()
    full = behavior_from_state(state, CHSH_ANGLES_ALICE, CHSH_ANGLES_BOB)
    single = behavior_from_state(state, (0.0,), (0.0,))
    return ViolationDemo(
        chsh=chsh_max(full),
        violation=membership(full),
        single_setting=membership(single),
    )
