"""Seeded random generators for the property suites and the CLI selftest.

Everything takes an explicit ``random.Random`` so runs are reproducible;
nothing here touches global RNG state.
"""

from __future__ import annotations

import random

from .behavior import Behavior, Scenario
from .conspiracy import SettingDependentModel
from .local_causality import CommonCauseModel, LambdaValue
from .local_polytope import enumerate_vertices, strategy_behavior
from .quantum import QubitPairState


def random_state(rng: random.Random) -> QubitPairState:
    """Haar-ish random pure state: normalized complex Gaussian amplitudes."""
    while True:
        amps = [complex(rng.gauss(0.0, 1.0), rng.gauss(0.0, 1.0)) for _ in range(4)]
        norm = sum(abs(z) ** 2 for z in amps) ** 0.5
        if norm > 1e-6:
            return QubitPairState(tuple(z / norm for z in amps))


def random_angles(rng: random.Random, count: int) -> list[float]:
    return [rng.uniform(0.0, 6.283185307179586) for _ in range(count)]


def _normalized(values: list[float]) -> list[float]:
    total = sum(values)
    return [v / total for v in values]


def _random_responses(
    rng: random.Random,
    labels: list[str],
    settings: int,
    deterministic: bool,
) -> dict[tuple[str, int, int], float]:
    responses = {}
    for label in labels:
        for setting in range(settings):
            if deterministic:
                p = float(rng.randint(0, 1))
            else:
                p = rng.random()
            responses[(label, setting, +1)] = p
            responses[(label, setting, -1)] = 1.0 - p
    return responses


def random_common_cause_model(
    rng: random.Random,
    scenario: Scenario,
    max_lambdas: int = 6,
    deterministic: bool = False,
) -> CommonCauseModel:
    count = rng.randint(1, max_lambdas)
    labels = [f"l{i}" for i in range(count)]
    weights = dict(zip(labels, _normalized([rng.random() + 1e-9 for _ in labels])))
    return CommonCauseModel(
        scenario,
        tuple(LambdaValue(label) for label in labels),
        weights,
        _random_responses(rng, labels, scenario.settings_a, deterministic),
        _random_responses(rng, labels, scenario.settings_b, deterministic),
    )


def random_setting_dependent_model(
    rng: random.Random,
    scenario: Scenario,
    max_lambdas: int = 4,
) -> SettingDependentModel:
    count = rng.randint(1, max_lambdas)
    labels = [f"l{i}" for i in range(count)]
    conditional = {}
    for a, b in scenario.setting_pairs():
        for label, w in zip(labels, _normalized([rng.random() + 1e-9 for _ in labels])):
            conditional[(label, a, b)] = w
    return SettingDependentModel(
        scenario,
        tuple(LambdaValue(label) for label in labels),
        conditional,
        _random_responses(rng, labels, scenario.settings_a, False),
        _random_responses(rng, labels, scenario.settings_b, False),
    )


def random_local_mixture(rng: random.Random, scenario: Scenario) -> Behavior:
    """Random convex mixture of all deterministic strategies."""
    vertices = enumerate_vertices(scenario)
    weights = _normalized([rng.random() for _ in vertices])
    table = {cell: 0.0 for cell in scenario.cells()}
    for weight, vertex in zip(weights, vertices):
        vb = strategy_behavior(vertex, scenario)
        for cell in table:
            table[cell] += weight * vb.table[cell]
    return Behavior(scenario, table)


def pr_box() -> Behavior:
    """Extremal no-signaling 2x2 behavior with plain CHSH value 4.

    Outcomes agree except at the (1,1) setting pair, where they disagree;
    each consistent pair has probability 1/2.
    """
    scenario = Scenario(2, 2)
    table = {}
    for a, b, outcome_a, outcome_b in scenario.cells():
        want_anti = a == 1 and b == 1
        hit = (outcome_a != outcome_b) if want_anti else (outcome_a == outcome_b)
        table[(a, b, outcome_a, outcome_b)] = 0.5 if hit else 0.0
    return Behavior(scenario, table)


def random_noisy_behavior(rng: random.Random, max_noise: float = 0.5) -> Behavior:
    """Random local mixture blended with PR-box noise; no-signaling by construction."""
    scenario = Scenario(2, 2)
    local = random_local_mixture(rng, scenario)
    box = pr_box()
    eps = rng.uniform(0.0, max_noise)
    table = {
        cell: (1.0 - eps) * local.table[cell] + eps * box.table[cell]
        for cell in scenario.cells()
    }
    return Behavior(scenario, table)
