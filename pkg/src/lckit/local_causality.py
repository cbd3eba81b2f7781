"""Finite common-cause models and the screening-off condition.

A common-cause model is a finite distribution over lambda values, each
carrying per-wing response probabilities P(A|a,lambda) and P(B|b,lambda).
Screening-off holds when the conditional joint P(A,B|a,b,lambda) factorizes
into that product for every lambda; the check consumes an explicitly
supplied conditional joint, because factorization is a statement about the
per-lambda joints, not about the mixture.

Lambda payloads may be opaque tokens or quantum states; for a quantum
lambda the responses and conditional joint come from the Born rule.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping

from .behavior import Behavior, Scenario, Wing, marginal
from .quantum import (
    PlanarSetting,
    QubitPairState,
    joint_probability,
    single_wing_probability,
    singlet,
)

WEIGHT_TOL = 1e-12
SCREENING_TOL = 1e-10

ResponseTable = Mapping[tuple[str, int, int], float]
ConditionalJoint = Mapping[tuple[str, int, int, int, int], float]


class InvalidModelError(ValueError):
    """A model's weights or response tables violate their invariants."""


@dataclass(frozen=True)
class LambdaValue:
    """One value of the common cause: a label plus an optional payload.

    The payload is an opaque token (any object) or a QubitPairState; the
    label alone identifies the value inside a model.
    """

    label: str
    payload: object | None = None


def _check_responses(
    name: str,
    responses: ResponseTable,
    labels: list[str],
    settings: int,
    outcomes: tuple[int, ...],
) -> dict[tuple[str, int, int], float]:
    checked = {}
    for label in labels:
        for setting in range(settings):
            total = 0.0
            for outcome in outcomes:
                key = (label, setting, outcome)
                if key not in responses:
                    raise InvalidModelError(f"{name} response missing for {key}")
                p = float(responses[key])
                if not math.isfinite(p) or p < 0.0 or p > 1.0:
                    raise InvalidModelError(f"{name} response out of [0,1] at {key}: {p!r}")
                checked[key] = p
                total += p
            if abs(total - 1.0) > WEIGHT_TOL:
                raise InvalidModelError(
                    f"{name} responses for (lambda={label}, setting={setting}) sum to {total!r}"
                )
    if len(checked) != len(responses):
        raise InvalidModelError(f"{name} response table has keys outside the model")
    return checked


@dataclass(frozen=True)
class CommonCauseModel:
    """Setting-independent mixture of per-wing response distributions."""

    scenario: Scenario
    lambdas: tuple[LambdaValue, ...]
    weights: Mapping[str, float]
    responses_a: ResponseTable
    responses_b: ResponseTable

    def __post_init__(self) -> None:
        labels = [lam.label for lam in self.lambdas]
        if not labels:
            raise InvalidModelError("a model needs at least one lambda value")
        if len(set(labels)) != len(labels):
            raise InvalidModelError("lambda labels must be unique within a model")
        if set(self.weights) != set(labels):
            raise InvalidModelError("weights must cover exactly the model's lambdas")
        weights = {}
        total = 0.0
        for label in labels:
            w = float(self.weights[label])
            if not math.isfinite(w) or w < 0.0:
                raise InvalidModelError(f"weight for lambda {label!r} must be nonnegative")
            weights[label] = w
            total += w
        if abs(total - 1.0) > WEIGHT_TOL:
            raise InvalidModelError(f"lambda weights sum to {total!r}, expected 1")
        object.__setattr__(self, "lambdas", tuple(self.lambdas))
        object.__setattr__(self, "weights", weights)
        object.__setattr__(
            self,
            "responses_a",
            _check_responses(
                "Alice", self.responses_a, labels, self.scenario.settings_a, self.scenario.outcomes
            ),
        )
        object.__setattr__(
            self,
            "responses_b",
            _check_responses(
                "Bob", self.responses_b, labels, self.scenario.settings_b, self.scenario.outcomes
            ),
        )

    def is_deterministic(self) -> bool:
        """True when every response probability is exactly 0 or 1."""
        return all(p in (0.0, 1.0) for p in self.responses_a.values()) and all(
            p in (0.0, 1.0) for p in self.responses_b.values()
        )


@dataclass(frozen=True)
class ScreeningReport:
    """Factorization residuals |P(A,B|a,b,l) - P(A|a,l)P(B|b,l)| per cell and lambda."""

    residuals: Mapping[tuple[str, int, int, int, int], float]
    max_residual: float
    tolerance: float = SCREENING_TOL
    exact: bool = False

    @property
    def passes(self) -> bool:
        if self.exact:
            return self.max_residual == 0.0
        return self.max_residual <= self.tolerance


@dataclass(frozen=True)
class ViolationWitness:
    """One screening-off data point for the singlet with lambda = the state itself."""

    setting_a: PlanarSetting
    setting_b: PlanarSetting
    joint: float
    marginal_a: float
    marginal_b: float

    @property
    def product(self) -> float:
        return self.marginal_a * self.marginal_b

    @property
    def residual(self) -> float:
        return abs(self.joint - self.product)


def model_behavior(model: CommonCauseModel) -> Behavior:
    """Mixture behavior: cell = sum over lambda of P(l) P(A|a,l) P(B|b,l)."""
    scenario = model.scenario
    table = {}
    for a, b, outcome_a, outcome_b in scenario.cells():
        total = 0.0
        for lam in model.lambdas:
            label = lam.label
            total += (
                model.weights[label]
                * model.responses_a[(label, a, outcome_a)]
                * model.responses_b[(label, b, outcome_b)]
            )
        table[(a, b, outcome_a, outcome_b)] = total
    return Behavior(scenario, table)


def induced_joint(model: CommonCauseModel) -> dict[tuple[str, int, int, int, int], float]:
    """Per-lambda product joint P(A|a,l)P(B|b,l).

    For deterministic models this is the physical conditional joint (the
    outcomes are fixed by lambda); for stochastic responses it is the joint
    the screening-off hypothesis asserts.
    """
    joint = {}
    for lam in model.lambdas:
        label = lam.label
        for a, b, outcome_a, outcome_b in model.scenario.cells():
            joint[(label, a, b, outcome_a, outcome_b)] = (
                model.responses_a[(label, a, outcome_a)] * model.responses_b[(label, b, outcome_b)]
            )
    return joint


def screening_off_check(
    joint: ConditionalJoint,
    model: CommonCauseModel,
    tolerance: float = SCREENING_TOL,
    exact: bool = False,
) -> ScreeningReport:
    """Compare the supplied conditional joint against the response products.

    The joint must cover exactly the model's lambdas and cells and be
    normalized per (a, b, lambda).  With ``exact=True`` the report passes
    only on a residual of exactly 0.0 (classical fixtures are exact in
    binary floating point).
    """
    scenario = model.scenario
    expected_keys = {
        (lam.label, a, b, outcome_a, outcome_b)
        for lam in model.lambdas
        for a, b, outcome_a, outcome_b in scenario.cells()
    }
    if set(joint) != expected_keys:
        raise ValueError("conditional joint does not match the model's lambdas and cells")
    for lam in model.lambdas:
        for a, b in scenario.setting_pairs():
            total = 0.0
            for outcome_a in scenario.outcomes:
                for outcome_b in scenario.outcomes:
                    total += joint[(lam.label, a, b, outcome_a, outcome_b)]
            if abs(total - 1.0) > WEIGHT_TOL:
                raise ValueError(
                    f"conditional joint for (lambda={lam.label}, a={a}, b={b}) sums to {total!r}"
                )
    residuals = {}
    max_residual = 0.0
    for lam in model.lambdas:
        label = lam.label
        for a, b, outcome_a, outcome_b in scenario.cells():
            product = (
                model.responses_a[(label, a, outcome_a)] * model.responses_b[(label, b, outcome_b)]
            )
            residual = abs(joint[(label, a, b, outcome_a, outcome_b)] - product)
            residuals[(label, a, b, outcome_a, outcome_b)] = residual
            if residual > max_residual:
                max_residual = residual
    return ScreeningReport(residuals, max_residual, tolerance, exact)


def quantum_common_cause_model(
    state: QubitPairState,
    alice_angles: Iterable[PlanarSetting | float],
    bob_angles: Iterable[PlanarSetting | float],
    label: str = "psi",
) -> tuple[CommonCauseModel, dict[tuple[str, int, int, int, int], float]]:
    """Single-lambda model with the quantum state itself as the common cause.

    Returns the model together with its Born-rule conditional joint, ready
    for :func:`screening_off_check`.
    """
    alice = [a if isinstance(a, PlanarSetting) else PlanarSetting(float(a)) for a in alice_angles]
    bob = [b if isinstance(b, PlanarSetting) else PlanarSetting(float(b)) for b in bob_angles]
    if not alice or not bob:
        raise ValueError("angle lists must be nonempty")
    scenario = Scenario(len(alice), len(bob))
    responses_a = {
        (label, i, outcome): single_wing_probability(state, Wing.ALICE, setting, outcome)
        for i, setting in enumerate(alice)
        for outcome in scenario.outcomes
    }
    responses_b = {
        (label, j, outcome): single_wing_probability(state, Wing.BOB, setting, outcome)
        for j, setting in enumerate(bob)
        for outcome in scenario.outcomes
    }
    model = CommonCauseModel(
        scenario,
        (LambdaValue(label, state),),
        {label: 1.0},
        responses_a,
        responses_b,
    )
    joint = {
        (label, i, j, outcome_a, outcome_b): joint_probability(
            state, alice[i], bob[j], outcome_a, outcome_b
        )
        for i, j, outcome_a, outcome_b in scenario.cells()
    }
    return model, joint


def quantum_screening_violation(
    setting_a: PlanarSetting | float, setting_b: PlanarSetting | float
) -> ViolationWitness:
    """Singlet screening-off data for outcomes (+1, -1) at the given angles.

    The joint is 1/2 at equal angles while the marginal product is always
    1/4, so the state itself cannot screen off the two wings there.
    """
    state = singlet()
    a = setting_a if isinstance(setting_a, PlanarSetting) else PlanarSetting(float(setting_a))
    b = setting_b if isinstance(setting_b, PlanarSetting) else PlanarSetting(float(setting_b))
    return ViolationWitness(
        setting_a=a,
        setting_b=b,
        joint=joint_probability(state, a, b, +1, -1),
        marginal_a=single_wing_probability(state, Wing.ALICE, a, +1),
        marginal_b=single_wing_probability(state, Wing.BOB, b, -1),
    )


# Red/blue pair game: colors map to signs as red=+1, blue=-1; one setting
# per wing (the two test stations).
RB_LABELS = ("red-blue", "blue-red")


def rb_game_behavior() -> Behavior:
    """Perfect anti-correlation table: opposite colors always, marginals 1/2."""
    scenario = Scenario(1, 1)
    return Behavior(
        scenario,
        {
            (0, 0, +1, +1): 0.0,
            (0, 0, +1, -1): 0.5,
            (0, 0, -1, +1): 0.5,
            (0, 0, -1, -1): 0.0,
        },
    )


def rb_game_model() -> CommonCauseModel:
    """Two equally weighted deterministic lambdas carrying the color pair."""
    scenario = Scenario(1, 1)
    rb, br = RB_LABELS
    responses_a = {
        (rb, 0, +1): 1.0,
        (rb, 0, -1): 0.0,
        (br, 0, +1): 0.0,
        (br, 0, -1): 1.0,
    }
    responses_b = {
        (rb, 0, +1): 0.0,
        (rb, 0, -1): 1.0,
        (br, 0, +1): 1.0,
        (br, 0, -1): 0.0,
    }
    return CommonCauseModel(
        scenario,
        (LambdaValue(rb, ("R", "B")), LambdaValue(br, ("B", "R"))),
        {rb: 0.5, br: 0.5},
        responses_a,
        responses_b,
    )


def rb_game_unconditioned_residual() -> float:
    """|P(+1,-1) - P(+1)P(-1)| with no conditioning: exactly 0.25.

    Same numerical gap as the singlet's screening-off violation, but here a
    local explanation exists once the source preparation is conditioned on.
    """
    behavior = rb_game_behavior()
    joint = behavior.table[(0, 0, +1, -1)]
    product = marginal(behavior, Wing.ALICE, +1, 0, 0) * marginal(behavior, Wing.BOB, -1, 0, 0)
    return abs(joint - product)


def rb_game_resolution() -> tuple[CommonCauseModel, ScreeningReport]:
    """The color-pair model plus its exact screening-off report.

    Conditioning on the prepared pair removes the correlation entirely: the
    per-lambda joints factorize with residual exactly 0.0, and the model's
    mixture reproduces the game table exactly.
    """
    model = rb_game_model()
    report = screening_off_check(induced_joint(model), model, exact=True)
    return model, report
