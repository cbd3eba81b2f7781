"""Text formats for behaviors and models.

All files are line oriented; blank lines and ``#`` comment lines are
ignored.  Probabilities are written with ``repr`` so canonical files
round-trip bit-identically through parse and serialize.

Behavior file::

    scenario <settings_a> <settings_b>
    cell <a> <b> <A> <B> <probability>     # one line per cell

Common-cause model file (the lambda-indexed section mirrors the behavior
format)::

    scenario <settings_a> <settings_b>
    angles a <radians...>                  # required when a state record exists
    angles b <radians...>
    lambda <label> <weight>
    state <label> <re0> <im0> <re1> <im1> <re2> <im2> <re3> <im3>
    resp a <label> <setting> <outcome> <probability>
    resp b <label> <setting> <outcome> <probability>
    joint <label> <a> <b> <A> <B> <probability>

A ``state`` record makes the lambda a quantum state: its responses and
conditional joint are computed from the Born rule at the declared angles,
and explicit ``resp``/``joint`` records for it are rejected.

Setting-dependent model file::

    scenario <settings_a> <settings_b>
    slambda <label>
    cweight <label> <a> <b> <probability>  # P(lambda | a,b)
    resp a <label> <setting> <outcome> <probability>
    resp b <label> <setting> <outcome> <probability>

Outcomes are written ``+1``/``-1``; settings are 0-based indices.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .behavior import Behavior, Scenario
from .conspiracy import SettingDependentModel
from .local_causality import CommonCauseModel, LambdaValue
from .quantum import (
    PlanarSetting,
    QubitPairState,
    Wing,
    joint_probability,
    single_wing_probability,
)


class ParseError(ValueError):
    """Malformed document, with 1-based line/column position when known."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        if line is not None and column is not None:
            message = f"line {line}, column {column}: {message}"
        elif line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class _Token:
    text: str
    column: int


def _tokenize(line: str) -> list[_Token]:
    tokens = []
    i = 0
    while i < len(line):
        if line[i].isspace():
            i += 1
            continue
        start = i
        while i < len(line) and not line[i].isspace():
            i += 1
        tokens.append(_Token(line[start:i], start + 1))
    return tokens


class _Reader:
    """Iterates records (line number + tokens), skipping comments/blanks."""

    def __init__(self, text: str):
        self.records = []
        for number, line in enumerate(text.splitlines(), start=1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            self.records.append((number, _tokenize(line)))


def _want(tokens: list[_Token], count: int, line: int, what: str) -> None:
    if len(tokens) != count:
        column = tokens[-1].column if tokens else 1
        raise ParseError(f"{what} record needs {count} fields, got {len(tokens)}", line, column)


def _parse_int(token: _Token, line: int, what: str) -> int:
    try:
        return int(token.text)
    except ValueError:
        raise ParseError(f"{what} must be an integer, got {token.text!r}", line, token.column) from None


def _parse_float(token: _Token, line: int, what: str) -> float:
    try:
        return float(token.text)
    except ValueError:
        raise ParseError(f"{what} must be a number, got {token.text!r}", line, token.column) from None


def _parse_outcome(token: _Token, line: int) -> int:
    if token.text in ("+1", "1"):
        return +1
    if token.text == "-1":
        return -1
    raise ParseError(f"outcome must be +1 or -1, got {token.text!r}", line, token.column)


def _parse_scenario(record, seen: Scenario | None) -> Scenario:
    line, tokens = record
    if seen is not None:
        raise ParseError("duplicate scenario record", line, tokens[0].column)
    _want(tokens, 3, line, "scenario")
    settings_a = _parse_int(tokens[1], line, "settings_a")
    settings_b = _parse_int(tokens[2], line, "settings_b")
    try:
        return Scenario(settings_a, settings_b)
    except ValueError as exc:
        raise ParseError(str(exc), line, tokens[1].column) from None


def _require_scenario(scenario: Scenario | None, line: int, column: int) -> Scenario:
    if scenario is None:
        raise ParseError("scenario record must come first", line, column)
    return scenario


def _check_setting(value: int, count: int, token: _Token, line: int, name: str) -> int:
    if not 0 <= value < count:
        raise ParseError(f"{name} setting {value} out of range [0, {count})", line, token.column)
    return value


# ---------------------------------------------------------------------------
# behavior files


def parse_behavior(text: str) -> Behavior:
    reader = _Reader(text)
    scenario: Scenario | None = None
    table: dict[tuple[int, int, int, int], float] = {}
    for line, tokens in reader.records:
        kind = tokens[0].text
        if kind == "scenario":
            scenario = _parse_scenario((line, tokens), scenario)
        elif kind == "cell":
            sc = _require_scenario(scenario, line, tokens[0].column)
            _want(tokens, 6, line, "cell")
            a = _check_setting(_parse_int(tokens[1], line, "a"), sc.settings_a, tokens[1], line, "Alice")
            b = _check_setting(_parse_int(tokens[2], line, "b"), sc.settings_b, tokens[2], line, "Bob")
            outcome_a = _parse_outcome(tokens[3], line)
            outcome_b = _parse_outcome(tokens[4], line)
            prob = _parse_float(tokens[5], line, "probability")
            key = (a, b, outcome_a, outcome_b)
            if key in table:
                raise ParseError(f"duplicate cell {key}", line, tokens[1].column)
            table[key] = prob
        else:
            raise ParseError(f"unknown record type {kind!r}", line, tokens[0].column)
    if scenario is None:
        raise ParseError("missing scenario record")
    missing = [cell for cell in scenario.cells() if cell not in table]
    if missing:
        raise ParseError(f"missing cell {missing[0]}")
    return Behavior(scenario, table)


def serialize_behavior(behavior: Behavior) -> str:
    scenario = behavior.scenario
    lines = [f"scenario {scenario.settings_a} {scenario.settings_b}"]
    for a, b, outcome_a, outcome_b in scenario.cells():
        prob = behavior.table[(a, b, outcome_a, outcome_b)]
        lines.append(f"cell {a} {b} {outcome_a:+d} {outcome_b:+d} {prob!r}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# common-cause model files


@dataclass(frozen=True)
class ModelDocument:
    """A parsed model file: the model plus its conditional joint, if any.

    ``joint`` is None when the file declares neither joint records nor
    quantum lambdas; screening checks then need a joint from elsewhere.
    """

    model: CommonCauseModel
    joint: dict[tuple[str, int, int, int, int], float] | None
    alice_angles: tuple[float, ...] | None = None
    bob_angles: tuple[float, ...] | None = None


def parse_model(text: str) -> ModelDocument:
    reader = _Reader(text)
    scenario: Scenario | None = None
    order: list[str] = []
    weights: dict[str, float] = {}
    states: dict[str, QubitPairState] = {}
    state_lines: dict[str, int] = {}
    responses: dict[str, dict] = {"a": {}, "b": {}}
    joint: dict[tuple[str, int, int, int, int], float] = {}
    angles: dict[str, tuple[float, ...]] = {}

    for line, tokens in reader.records:
        kind = tokens[0].text
        if kind == "scenario":
            scenario = _parse_scenario((line, tokens), scenario)
        elif kind == "angles":
            sc = _require_scenario(scenario, line, tokens[0].column)
            if len(tokens) < 3:
                raise ParseError("angles record needs a wing and at least one angle", line, tokens[0].column)
            wing = tokens[1].text
            if wing not in ("a", "b"):
                raise ParseError(f"wing must be 'a' or 'b', got {wing!r}", line, tokens[1].column)
            if wing in angles:
                raise ParseError(f"duplicate angles record for wing {wing!r}", line, tokens[0].column)
            values = tuple(_parse_float(tok, line, "angle") for tok in tokens[2:])
            expected = sc.settings_a if wing == "a" else sc.settings_b
            if len(values) != expected:
                raise ParseError(
                    f"wing {wing!r} needs {expected} angles, got {len(values)}", line, tokens[2].column
                )
            angles[wing] = values
        elif kind == "lambda":
            _require_scenario(scenario, line, tokens[0].column)
            _want(tokens, 3, line, "lambda")
            label = tokens[1].text
            if label in weights:
                raise ParseError(f"duplicate lambda {label!r}", line, tokens[1].column)
            order.append(label)
            weights[label] = _parse_float(tokens[2], line, "weight")
        elif kind == "state":
            _require_scenario(scenario, line, tokens[0].column)
            _want(tokens, 10, line, "state")
            label = tokens[1].text
            if label in states:
                raise ParseError(f"duplicate state record for lambda {label!r}", line, tokens[1].column)
            parts = [_parse_float(tok, line, "amplitude component") for tok in tokens[2:]]
            amps = tuple(complex(parts[2 * k], parts[2 * k + 1]) for k in range(4))
            try:
                states[label] = QubitPairState(amps)
            except ValueError as exc:
                raise ParseError(str(exc), line, tokens[2].column) from None
            state_lines[label] = line
        elif kind == "resp":
            sc = _require_scenario(scenario, line, tokens[0].column)
            _want(tokens, 6, line, "resp")
            wing = tokens[1].text
            if wing not in ("a", "b"):
                raise ParseError(f"wing must be 'a' or 'b', got {wing!r}", line, tokens[1].column)
            label = tokens[2].text
            count = sc.settings_a if wing == "a" else sc.settings_b
            setting = _check_setting(
                _parse_int(tokens[3], line, "setting"), count, tokens[3], line, "wing " + wing
            )
            outcome = _parse_outcome(tokens[4], line)
            prob = _parse_float(tokens[5], line, "probability")
            key = (label, setting, outcome)
            if key in responses[wing]:
                raise ParseError(f"duplicate resp record for {key}", line, tokens[2].column)
            responses[wing][key] = (prob, line, tokens[2].column)
        elif kind == "joint":
            sc = _require_scenario(scenario, line, tokens[0].column)
            _want(tokens, 7, line, "joint")
            label = tokens[1].text
            a = _check_setting(_parse_int(tokens[2], line, "a"), sc.settings_a, tokens[2], line, "Alice")
            b = _check_setting(_parse_int(tokens[3], line, "b"), sc.settings_b, tokens[3], line, "Bob")
            outcome_a = _parse_outcome(tokens[4], line)
            outcome_b = _parse_outcome(tokens[5], line)
            prob = _parse_float(tokens[6], line, "probability")
            key = (label, a, b, outcome_a, outcome_b)
            if key in joint:
                raise ParseError(f"duplicate joint record for {key}", line, tokens[1].column)
            joint[key] = prob
        else:
            raise ParseError(f"unknown record type {kind!r}", line, tokens[0].column)

    if scenario is None:
        raise ParseError("missing scenario record")
    if not order:
        raise ParseError("model file declares no lambda records")
    for label, line in state_lines.items():
        if label not in weights:
            raise ParseError(f"state record for undeclared lambda {label!r}", line)

    alice_angles = angles.get("a")
    bob_angles = angles.get("b")
    if states and (alice_angles is None or bob_angles is None):
        raise ParseError("state lambdas need angles records for both wings")

    responses_a: dict[tuple[str, int, int], float] = {}
    responses_b: dict[tuple[str, int, int], float] = {}
    for wing, target in (("a", responses_a), ("b", responses_b)):
        for key, (prob, line, column) in responses[wing].items():
            label = key[0]
            if label not in weights:
                raise ParseError(f"resp record for undeclared lambda {label!r}", line, column)
            if label in states:
                raise ParseError(
                    f"resp record for quantum lambda {label!r} (responses are computed)", line, column
                )
            target[key] = prob
    for key in joint:
        label = key[0]
        if label not in weights:
            raise ParseError(f"joint record for undeclared lambda {label!r}")
        if label in states:
            raise ParseError(f"joint record for quantum lambda {label!r} (joint is computed)")

    lambdas = []
    for label in order:
        if label in states:
            state = states[label]
            lambdas.append(LambdaValue(label, state))
            for i, angle in enumerate(alice_angles):
                for outcome in scenario.outcomes:
                    responses_a[(label, i, outcome)] = single_wing_probability(
                        state, Wing.ALICE, PlanarSetting(angle), outcome
                    )
            for j, angle in enumerate(bob_angles):
                for outcome in scenario.outcomes:
                    responses_b[(label, j, outcome)] = single_wing_probability(
                        state, Wing.BOB, PlanarSetting(angle), outcome
                    )
            for a, b, outcome_a, outcome_b in scenario.cells():
                joint[(label, a, b, outcome_a, outcome_b)] = joint_probability(
                    state, PlanarSetting(alice_angles[a]), PlanarSetting(bob_angles[b]), outcome_a, outcome_b
                )
        else:
            lambdas.append(LambdaValue(label))

    model = CommonCauseModel(scenario, tuple(lambdas), weights, responses_a, responses_b)

    if not joint:
        return ModelDocument(model, None, alice_angles, bob_angles)
    expected = {
        (label, a, b, outcome_a, outcome_b)
        for label in order
        for a, b, outcome_a, outcome_b in scenario.cells()
    }
    missing = expected - set(joint)
    if missing:
        raise ParseError(f"incomplete conditional joint: missing record for {sorted(missing)[0]}")
    return ModelDocument(model, joint, alice_angles, bob_angles)


def serialize_model(
    model: CommonCauseModel,
    joint: dict[tuple[str, int, int, int, int], float] | None = None,
    alice_angles: tuple[float, ...] | None = None,
    bob_angles: tuple[float, ...] | None = None,
) -> str:
    scenario = model.scenario
    lines = [f"scenario {scenario.settings_a} {scenario.settings_b}"]
    if alice_angles is not None:
        lines.append("angles a " + " ".join(repr(float(v)) for v in alice_angles))
    if bob_angles is not None:
        lines.append("angles b " + " ".join(repr(float(v)) for v in bob_angles))
    for lam in model.lambdas:
        if " " in lam.label or not lam.label:
            raise ValueError(f"lambda label {lam.label!r} is not serializable")
        lines.append(f"lambda {lam.label} {model.weights[lam.label]!r}")
        if isinstance(lam.payload, QubitPairState):
            parts = " ".join(
                f"{z.real!r} {z.imag!r}" for z in lam.payload.amplitudes
            )
            lines.append(f"state {lam.label} {parts}")
    for lam in model.lambdas:
        if isinstance(lam.payload, QubitPairState):
            continue
        for setting in range(scenario.settings_a):
            for outcome in scenario.outcomes:
                prob = model.responses_a[(lam.label, setting, outcome)]
                lines.append(f"resp a {lam.label} {setting} {outcome:+d} {prob!r}")
        for setting in range(scenario.settings_b):
            for outcome in scenario.outcomes:
                prob = model.responses_b[(lam.label, setting, outcome)]
                lines.append(f"resp b {lam.label} {setting} {outcome:+d} {prob!r}")
    if joint is not None:
        for lam in model.lambdas:
            if isinstance(lam.payload, QubitPairState):
                continue
            for a, b, outcome_a, outcome_b in scenario.cells():
                prob = joint[(lam.label, a, b, outcome_a, outcome_b)]
                lines.append(
                    f"joint {lam.label} {a} {b} {outcome_a:+d} {outcome_b:+d} {prob!r}"
                )
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# setting-dependent model files


def parse_setting_model(text: str) -> SettingDependentModel:
    reader = _Reader(text)
    scenario: Scenario | None = None
    order: list[str] = []
    conditional: dict[tuple[str, int, int], float] = {}
    responses: dict[str, dict] = {"a": {}, "b": {}}

    for line, tokens in reader.records:
        kind = tokens[0].text
        if kind == "scenario":
            scenario = _parse_scenario((line, tokens), scenario)
        elif kind == "slambda":
            _require_scenario(scenario, line, tokens[0].column)
            _want(tokens, 2, line, "slambda")
            label = tokens[1].text
            if label in order:
                raise ParseError(f"duplicate slambda {label!r}", line, tokens[1].column)
            order.append(label)
        elif kind == "cweight":
            sc = _require_scenario(scenario, line, tokens[0].column)
            _want(tokens, 5, line, "cweight")
            label = tokens[1].text
            if label not in order:
                raise ParseError(f"cweight for undeclared lambda {label!r}", line, tokens[1].column)
            a = _check_setting(_parse_int(tokens[2], line, "a"), sc.settings_a, tokens[2], line, "Alice")
            b = _check_setting(_parse_int(tokens[3], line, "b"), sc.settings_b, tokens[3], line, "Bob")
            prob = _parse_float(tokens[4], line, "probability")
            key = (label, a, b)
            if key in conditional:
                raise ParseError(f"duplicate cweight record for {key}", line, tokens[1].column)
            conditional[key] = prob
        elif kind == "resp":
            sc = _require_scenario(scenario, line, tokens[0].column)
            _want(tokens, 6, line, "resp")
            wing = tokens[1].text
            if wing not in ("a", "b"):
                raise ParseError(f"wing must be 'a' or 'b', got {wing!r}", line, tokens[1].column)
            label = tokens[2].text
            if label not in order:
                raise ParseError(f"resp for undeclared lambda {label!r}", line, tokens[2].column)
            count = sc.settings_a if wing == "a" else sc.settings_b
            setting = _check_setting(
                _parse_int(tokens[3], line, "setting"), count, tokens[3], line, "wing " + wing
            )
            outcome = _parse_outcome(tokens[4], line)
            prob = _parse_float(tokens[5], line, "probability")
            key = (label, setting, outcome)
            if key in responses[wing]:
                raise ParseError(f"duplicate resp record for {key}", line, tokens[2].column)
            responses[wing][key] = prob
        else:
            raise ParseError(f"unknown record type {kind!r}", line, tokens[0].column)

    if scenario is None:
        raise ParseError("missing scenario record")
    if not order:
        raise ParseError("model file declares no slambda records")
    return SettingDependentModel(
        scenario,
        tuple(LambdaValue(label) for label in order),
        conditional,
        responses["a"],
        responses["b"],
    )


def serialize_setting_model(model: SettingDependentModel) -> str:
    scenario = model.scenario
    lines = [f"scenario {scenario.settings_a} {scenario.settings_b}"]
    for lam in model.lambdas:
        if " " in lam.label or not lam.label:
            raise ValueError(f"lambda label {lam.label!r} is not serializable")
        lines.append(f"slambda {lam.label}")
    for lam in model.lambdas:
        for a, b in scenario.setting_pairs():
            prob = model.conditional_weights[(lam.label, a, b)]
            lines.append(f"cweight {lam.label} {a} {b} {prob!r}")
    for lam in model.lambdas:
        for setting in range(scenario.settings_a):
            for outcome in scenario.outcomes:
                prob = model.responses_a[(lam.label, setting, outcome)]
                lines.append(f"resp a {lam.label} {setting} {outcome:+d} {prob!r}")
        for setting in range(scenario.settings_b):
            for outcome in scenario.outcomes:
                prob = model.responses_b[(lam.label, setting, outcome)]
                lines.append(f"resp b {lam.label} {setting} {outcome:+d} {prob!r}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# path helpers


def load_behavior(path: str | Path) -> Behavior:
    return parse_behavior(Path(path).read_text(encoding="utf-8"))


def save_behavior(path: str | Path, behavior: Behavior) -> None:
    Path(path).write_text(serialize_behavior(behavior), encoding="utf-8")


def load_model(path: str | Path) -> ModelDocument:
    return parse_model(Path(path).read_text(encoding="utf-8"))


def save_model(
    path: str | Path,
    model: CommonCauseModel,
    joint: dict[tuple[str, int, int, int, int], float] | None = None,
    alice_angles: tuple[float, ...] | None = None,
    bob_angles: tuple[float, ...] | None = None,
) -> None:
    Path(path).write_text(serialize_model(model, joint, alice_angles, bob_angles), encoding="utf-8")


def load_setting_model(path: str | Path) -> SettingDependentModel:
    return parse_setting_model(Path(path).read_text(encoding="utf-8"))


def save_setting_model(path: str | Path, model: SettingDependentModel) -> None:
    Path(path).write_text(serialize_setting_model(model), encoding="utf-8")
