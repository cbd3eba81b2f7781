"""Bipartite two-outcome measurement behaviors and their statistics.

A behavior is the finite table P(A,B|a,b) of joint outcome probabilities
produced by two measuring stations, indexed by integer setting choices on
each wing.  Outcomes are fixed to the signs +1 and -1.  Everything here is
an immutable value; all operations are pure functions.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterator, Mapping

OUTCOMES = (+1, -1)

NORMALIZATION_TOL = 1e-12
NO_SIGNALING_TOL = 1e-10

Cell = tuple[int, int, int, int]


class InvalidBehaviorError(ValueError):
    """An operation received a behavior that fails validation."""


class Wing(Enum):
    """Selects one side of the experiment."""

    ALICE = "a"
    BOB = "b"


@dataclass(frozen=True)
class Scenario:
    """Measurement scenario: setting counts per wing plus the outcome labels.

    ``outcomes`` is ordered and shared by both wings; only the two-outcome
    sign labeling (+1, -1) is supported.
    """

    settings_a: int
    settings_b: int
    outcomes: tuple[int, ...] = OUTCOMES

    def __post_init__(self) -> None:
        if self.settings_a < 1 or self.settings_b < 1:
            raise ValueError("scenario needs at least one setting per wing")
        if not self.outcomes:
            raise ValueError("outcome label set must be nonempty")
        if len(set(self.outcomes)) != len(self.outcomes):
            raise ValueError("outcome labels must be duplicate-free")
        if tuple(self.outcomes) != OUTCOMES:
            raise ValueError("only the sign outcomes (+1, -1) are supported")

    def setting_pairs(self) -> Iterator[tuple[int, int]]:
        return itertools.product(range(self.settings_a), range(self.settings_b))

    def cells(self) -> Iterator[Cell]:
        """All (a, b, A, B) keys, ascending in settings, outcomes in (+1, -1) order."""
        for a, b in self.setting_pairs():
            for outcome_a in self.outcomes:
                for outcome_b in self.outcomes:
                    yield (a, b, outcome_a, outcome_b)


@dataclass(frozen=True)
class Behavior:
    """Joint probability table P(A,B|a,b) over a scenario.

    Construction checks only that the table covers exactly the scenario's
    cells; the numeric invariants (normalization per setting pair, entries
    in [0,1]) are the job of :func:`validate_behavior`.  Invalid tables are
    rejected by the operations, never repaired.
    """

    scenario: Scenario
    table: Mapping[Cell, float]

    def __post_init__(self) -> None:
        cells = set(self.scenario.cells())
        keys = set(self.table)
        if keys != cells:
            missing = sorted(cells - keys)
            extra = sorted(keys - cells)
            detail = []
            if missing:
                detail.append(f"missing cell {missing[0]}")
            if extra:
                detail.append(f"unexpected cell {extra[0]}")
            raise ValueError("behavior table does not match scenario: " + "; ".join(detail))
        object.__setattr__(
            self, "table", {cell: float(self.table[cell]) for cell in self.scenario.cells()}
        )

    def __getitem__(self, cell: Cell) -> float:
        return self.table[cell]


@dataclass(frozen=True)
class ValidationResult:
    ok: bool
    error: str | None = None


@dataclass(frozen=True)
class NoSignalingReport:
    """Worst marginal dependence on the distant wing's setting choice."""

    max_residual_a: float
    max_residual_b: float
    tolerance: float = NO_SIGNALING_TOL

    @property
    def passes(self) -> bool:
        return self.max_residual_a <= self.tolerance and self.max_residual_b <= self.tolerance


def validate_behavior(behavior: Behavior, tolerance: float = NORMALIZATION_TOL) -> ValidationResult:
    """Check entry bounds and per-setting-pair normalization.

    Returns the first violated constraint with its indices; entry bounds are
    checked with the same slack as normalization so that probabilities a few
    ulp outside [0,1] from honest arithmetic are not rejected.
    """
    scenario = behavior.scenario
    for a, b in scenario.setting_pairs():
        total = 0.0
        for outcome_a in scenario.outcomes:
            for outcome_b in scenario.outcomes:
                p = behavior.table[(a, b, outcome_a, outcome_b)]
                if not math.isfinite(p):
                    return ValidationResult(
                        False, f"non-finite probability at cell (a={a}, b={b}, A={outcome_a:+d}, B={outcome_b:+d})"
                    )
                if p < -tolerance or p > 1.0 + tolerance:
                    return ValidationResult(
                        False,
                        f"probability out of [0,1] at cell (a={a}, b={b}, A={outcome_a:+d}, "
                        f"B={outcome_b:+d}): {p!r}",
                    )
                total += p
        if abs(total - 1.0) > tolerance:
            return ValidationResult(
                False, f"normalization violated at setting pair (a={a}, b={b}): sum={total!r}"
            )
    return ValidationResult(True)


def require_valid(behavior: Behavior) -> None:
    result = validate_behavior(behavior)
    if not result.ok:
        raise InvalidBehaviorError(result.error)


def _check_setting(value: int, count: int, name: str) -> None:
    if not 0 <= value < count:
        raise IndexError(f"{name} setting {value} out of range [0, {count})")


def marginal(
    behavior: Behavior,
    wing: Wing | str,
    outcome: int,
    own_setting: int,
    other_setting: int,
) -> float:
    """Single-wing marginal: the joint summed over the distant wing's outcomes."""
    require_valid(behavior)
    wing = Wing(wing)
    scenario = behavior.scenario
    if outcome not in scenario.outcomes:
        raise ValueError(f"unknown outcome {outcome!r}")
    if wing is Wing.ALICE:
        _check_setting(own_setting, scenario.settings_a, "Alice")
        _check_setting(other_setting, scenario.settings_b, "Bob")
        return sum(
            behavior.table[(own_setting, other_setting, outcome, other)]
            for other in scenario.outcomes
        )
    _check_setting(own_setting, scenario.settings_b, "Bob")
    _check_setting(other_setting, scenario.settings_a, "Alice")
    return sum(
        behavior.table[(other_setting, own_setting, other, outcome)]
        for other in scenario.outcomes
    )


def correlator(behavior: Behavior, setting_a: int, setting_b: int) -> float:
    """E(a,b) = sum over outcomes of A*B*P(A,B|a,b); lies in [-1, 1]."""
    require_valid(behavior)
    scenario = behavior.scenario
    _check_setting(setting_a, scenario.settings_a, "Alice")
    _check_setting(setting_b, scenario.settings_b, "Bob")
    total = 0.0
    for outcome_a in scenario.outcomes:
        for outcome_b in scenario.outcomes:
            total += outcome_a * outcome_b * behavior.table[(setting_a, setting_b, outcome_a, outcome_b)]
    return total


# The CHSH family: sign vectors (s00, s01, s10, s11) with an odd number of
# minus signs.  Each functional sum(s_ij * E(i,j)) is bounded by 2 on
# deterministic strategies; the plain combination is (+,+,+,-).
CHSH_SIGNS = (+1, +1, +1, -1)
CHSH_SIGN_PATTERNS = tuple(
    signs for signs in itertools.product((+1, -1), repeat=4) if signs[0] * signs[1] * signs[2] * signs[3] == -1
)


def _chsh_correlators(behavior: Behavior, settings: tuple[int, int, int, int]) -> tuple[float, float, float, float]:
    scenario = behavior.scenario
    if scenario.settings_a < 2 or scenario.settings_b < 2:
        raise ValueError("CHSH needs at least two settings per wing")
    a0, a1, b0, b1 = settings
    return (
        correlator(behavior, a0, b0),
        correlator(behavior, a0, b1),
        correlator(behavior, a1, b0),
        correlator(behavior, a1, b1),
    )


def chsh_value(behavior: Behavior, settings: tuple[int, int, int, int] = (0, 1, 0, 1)) -> float:
    """Plain CHSH combination E(a0,b0) + E(a0,b1) + E(a1,b0) - E(a1,b1)."""
    e = _chsh_correlators(behavior, settings)
    return sum(s * v for s, v in zip(CHSH_SIGNS, e))


def chsh_max(behavior: Behavior, settings: tuple[int, int, int, int] = (0, 1, 0, 1)) -> float:
    """Max of the 8 symmetrized CHSH combinations at the given settings.

    Invariant under relabeling which physical setting is called a0 vs a1
    (likewise for Bob), unlike the plain combination.
    """
    e = _chsh_correlators(behavior, settings)
    return max(sum(s * v for s, v in zip(signs, e)) for signs in CHSH_SIGN_PATTERNS)


@dataclass(frozen=True)
class ChshFunctional:
    """A symmetrized CHSH functional together with its value on a behavior."""

    settings: tuple[int, int, int, int]
    signs: tuple[int, int, int, int]
    value: float


def best_chsh(behavior: Behavior) -> ChshFunctional:
    """Strongest symmetrized CHSH functional over all setting index pairs."""
    require_valid(behavior)
    scenario = behavior.scenario
    if scenario.settings_a < 2 or scenario.settings_b < 2:
        raise ValueError("CHSH needs at least two settings per wing")
    best: ChshFunctional | None = None
    for a0, a1 in itertools.combinations(range(scenario.settings_a), 2):
        for b0, b1 in itertools.combinations(range(scenario.settings_b), 2):
            e = _chsh_correlators(behavior, (a0, a1, b0, b1))
            for signs in CHSH_SIGN_PATTERNS:
                value = sum(s * v for s, v in zip(signs, e))
                if best is None or value > best.value:
                    best = ChshFunctional((a0, a1, b0, b1), signs, value)
    assert best is not None
    return best


def no_signaling_check(behavior: Behavior, tolerance: float = NO_SIGNALING_TOL) -> NoSignalingReport:
    """Worst-case dependence of either wing's marginals on the distant setting."""
    require_valid(behavior)
    scenario = behavior.scenario
    residual_a = 0.0
    for outcome in scenario.outcomes:
        for a in range(scenario.settings_a):
            values = [
                marginal(behavior, Wing.ALICE, outcome, a, b) for b in range(scenario.settings_b)
            ]
            residual_a = max(residual_a, max(values) - min(values))
    residual_b = 0.0
    for outcome in scenario.outcomes:
        for b in range(scenario.settings_b):
            values = [
                marginal(behavior, Wing.BOB, outcome, b, a) for a in range(scenario.settings_a)
            ]
            residual_b = max(residual_b, max(values) - min(values))
    return NoSignalingReport(residual_a, residual_b, tolerance)


def uniform_behavior(scenario: Scenario) -> Behavior:
    """The maximally mixed behavior: every cell 1/4."""
    return Behavior(scenario, {cell: 0.25 for cell in scenario.cells()})
