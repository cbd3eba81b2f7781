"""Statistical independence and setting-dependent common causes.

Statistical independence (SI) says the lambda distribution does not depend
on the chosen settings: P(lambda|a,b) = P(lambda).  Dropping it admits
models whose conditional weights track the settings; such a model can
reproduce any behavior exactly, which is why SI is a premise of the local
bound rather than a theorem.  The Bayes check verifies numerically that SI
is equivalent to the settings being independent of lambda,
P(a,b|lambda) = P(a,b), under any strictly positive setting prior.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping

from .behavior import Behavior, Scenario, require_valid
from .local_causality import (
    CommonCauseModel,
    InvalidModelError,
    LambdaValue,
    ResponseTable,
    _check_responses,
)

SI_TOL = 1e-12


@dataclass(frozen=True)
class SettingDependentModel:
    """Common-cause model whose lambda weights may depend on the setting pair."""

    scenario: Scenario
    lambdas: tuple[LambdaValue, ...]
    conditional_weights: Mapping[tuple[str, int, int], float]
    responses_a: ResponseTable
    responses_b: ResponseTable

    def __post_init__(self) -> None:
        labels = [lam.label for lam in self.lambdas]
        if not labels:
            raise InvalidModelError("a model needs at least one lambda value")
        if len(set(labels)) != len(labels):
            raise InvalidModelError("lambda labels must be unique within a model")
        expected = {(label, a, b) for label in labels for a, b in self.scenario.setting_pairs()}
        if set(self.conditional_weights) != expected:
            raise InvalidModelError(
                "conditional weights must cover exactly lambdas x setting pairs"
            )
        weights = {}
        for a, b in self.scenario.setting_pairs():
            total = 0.0
            for label in labels:
                w = float(self.conditional_weights[(label, a, b)])
                if not math.isfinite(w) or w < 0.0:
                    raise InvalidModelError(
                        f"conditional weight for (lambda={label}, a={a}, b={b}) must be nonnegative"
                    )
                weights[(label, a, b)] = w
                total += w
            if abs(total - 1.0) > SI_TOL:
                raise InvalidModelError(
                    f"conditional weights at setting pair (a={a}, b={b}) sum to {total!r}"
                )
        object.__setattr__(self, "lambdas", tuple(self.lambdas))
        object.__setattr__(self, "conditional_weights", weights)
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


@dataclass(frozen=True)
class SIReport:
    """Worst variation of P(lambda|a,b) across setting pairs."""

    max_residual: float
    tolerance: float = SI_TOL

    @property
    def passes(self) -> bool:
        return self.max_residual <= self.tolerance


@dataclass(frozen=True)
class BayesEquivalenceReport:
    """Joint check of the two equivalent independence conditions.

    ``lambda_residual`` is the worst |P(lambda|a,b) - P(lambda)|;
    ``setting_residual`` the worst |P(a,b|lambda) - P(a,b)|.  Built from the
    same joint P(lambda,a,b), the two conditions hold or fail together.
    """

    lambda_residual: float
    setting_residual: float
    tolerance: float = SI_TOL

    @property
    def lambda_independent(self) -> bool:
        return self.lambda_residual <= self.tolerance

    @property
    def settings_independent(self) -> bool:
        return self.setting_residual <= self.tolerance

    @property
    def agree(self) -> bool:
        return self.lambda_independent == self.settings_independent


def si_check(model: SettingDependentModel, tolerance: float = SI_TOL) -> SIReport:
    """Max over lambdas and setting-pair pairs of the conditional-weight gap."""
    pairs = list(model.scenario.setting_pairs())
    max_residual = 0.0
    for lam in model.lambdas:
        values = [model.conditional_weights[(lam.label, a, b)] for a, b in pairs]
        max_residual = max(max_residual, max(values) - min(values))
    return SIReport(max_residual, tolerance)


def lift_common_cause(model: CommonCauseModel) -> SettingDependentModel:
    """View a setting-independent model as a (constant) setting-dependent one."""
    conditional = {
        (label, a, b): weight
        for label, weight in model.weights.items()
        for a, b in model.scenario.setting_pairs()
    }
    return SettingDependentModel(
        model.scenario, model.lambdas, conditional, model.responses_a, model.responses_b
    )


def to_common_cause(model: SettingDependentModel, tolerance: float = SI_TOL) -> CommonCauseModel:
    """Collapse an SI-passing model back to a plain common-cause model.

    The weights are read off the first setting pair; fails when the model's
    conditional weights actually vary with the settings.
    """
    report = si_check(model, tolerance)
    if not report.passes:
        raise InvalidModelError(
            f"conditional weights vary with the settings (residual {report.max_residual:.3e})"
        )
    weights = {lam.label: model.conditional_weights[(lam.label, 0, 0)] for lam in model.lambdas}
    return CommonCauseModel(
        model.scenario, model.lambdas, weights, model.responses_a, model.responses_b
    )


def uniform_setting_prior(scenario: Scenario) -> dict[tuple[int, int], float]:
    p = 1.0 / (scenario.settings_a * scenario.settings_b)
    return {pair: p for pair in scenario.setting_pairs()}


def bayes_equivalence_check(
    model: SettingDependentModel,
    setting_prior: Mapping[tuple[int, int], float],
    tolerance: float = SI_TOL,
) -> BayesEquivalenceReport:
    """Verify that the two independence conditions hold or fail together.

    The joint P(lambda,a,b) = P(lambda|a,b) P(a,b) is formed from the given
    strictly positive prior; each condition's residual is measured against
    the marginals of that same joint.
    """
    scenario = model.scenario
    pairs = list(scenario.setting_pairs())
    if set(setting_prior) != set(pairs):
        raise ValueError("setting prior must cover exactly the scenario's setting pairs")
    total = 0.0
    for pair in pairs:
        p = float(setting_prior[pair])
        if p <= 0.0:
            raise ValueError(f"zero-probability setting pair {pair}: conditioning undefined")
        total += p
    if abs(total - 1.0) > tolerance:
        raise ValueError(f"setting prior sums to {total!r}, expected 1")

    joint = {
        (lam.label, a, b): model.conditional_weights[(lam.label, a, b)] * setting_prior[(a, b)]
        for lam in model.lambdas
        for a, b in pairs
    }
    lambda_marginal = {
        lam.label: sum(joint[(lam.label, a, b)] for a, b in pairs) for lam in model.lambdas
    }

    lambda_residual = 0.0
    for lam in model.lambdas:
        for a, b in pairs:
            gap = abs(model.conditional_weights[(lam.label, a, b)] - lambda_marginal[lam.label])
            lambda_residual = max(lambda_residual, gap)

    setting_residual = 0.0
    for lam in model.lambdas:
        weight = lambda_marginal[lam.label]
        if weight == 0.0:
            continue  # lambda never occurs; P(a,b|lambda) is undefined and vacuous
        for a, b in pairs:
            gap = abs(joint[(lam.label, a, b)] / weight - setting_prior[(a, b)])
            setting_residual = max(setting_residual, gap)

    return BayesEquivalenceReport(lambda_residual, setting_residual, tolerance)


def setting_dependent_behavior(model: SettingDependentModel) -> Behavior:
    """Mixture behavior with setting-conditioned weights."""
    scenario = model.scenario
    table = {}
    for a, b, outcome_a, outcome_b in scenario.cells():
        total = 0.0
        for lam in model.lambdas:
            label = lam.label
            total += (
                model.conditional_weights[(label, a, b)]
                * model.responses_a[(label, a, outcome_a)]
                * model.responses_b[(label, b, outcome_b)]
            )
        table[(a, b, outcome_a, outcome_b)] = total
    return Behavior(scenario, table)


def superdeterministic_reproduction(target: Behavior) -> SettingDependentModel:
    """Setting-dependent model reproducing the target behavior cell-exactly.

    One lambda per outcome pair, responding with that pair at every setting;
    its conditional weight at (a, b) is the target's cell probability, so
    the mixture reproduces the table without any arithmetic.  The price is
    conspiracy: whenever the target's cells vary across setting pairs, the
    lambda distribution must track the settings and the SI check fails.
    """
    require_valid(target)
    scenario = target.scenario
    lambdas = tuple(
        LambdaValue(f"out{outcome_a:+d}{outcome_b:+d}", (outcome_a, outcome_b))
        for outcome_a in scenario.outcomes
        for outcome_b in scenario.outcomes
    )
    conditional = {}
    for lam in lambdas:
        outcome_a, outcome_b = lam.payload  # type: ignore[misc]
        for a, b in scenario.setting_pairs():
            conditional[(lam.label, a, b)] = target.table[(a, b, outcome_a, outcome_b)]
    responses_a = {}
    responses_b = {}
    for lam in lambdas:
        outcome_a, outcome_b = lam.payload  # type: ignore[misc]
        for setting in range(scenario.settings_a):
            for outcome in scenario.outcomes:
                responses_a[(lam.label, setting, outcome)] = 1.0 if outcome == outcome_a else 0.0
        for setting in range(scenario.settings_b):
            for outcome in scenario.outcomes:
                responses_b[(lam.label, setting, outcome)] = 1.0 if outcome == outcome_b else 0.0
    return SettingDependentModel(scenario, lambdas, conditional, responses_a, responses_b)
