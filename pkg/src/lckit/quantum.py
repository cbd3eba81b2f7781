"""Two-qubit pure states and planar spin measurements.

States live on the fixed product basis (|+>|+>, |+>|->, |->|+>, |->|->),
where |+> and |-> are the z-axis spin eigenstates.  Measurement directions
are angles in the xz plane measured from the z axis; the corresponding
eigenstates follow the half-angle construction.  The dimension is fixed at
four, so amplitudes are plain ``complex`` values and no tensor machinery
is used.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .behavior import Behavior, Scenario, Wing

TWO_PI = 2.0 * math.pi
STATE_NORM_TOL = 1e-12

INV_SQRT2 = 1.0 / math.sqrt(2.0)

# Singlet measurement grids that maximize the symmetrized CHSH value (2*sqrt(2)).
CHSH_ANGLES_ALICE = (0.0, math.pi / 2.0)
CHSH_ANGLES_BOB = (math.pi / 4.0, 3.0 * math.pi / 4.0)


class NonNormalizedStateError(ValueError):
    """State vector norm differs from 1 beyond tolerance."""


@dataclass(frozen=True)
class PlanarSetting:
    """Measurement direction in the xz plane, radians from the z axis.

    Reduced mod 2*pi on construction; probabilities are unaffected because
    the half-angle sign flip cancels in every squared amplitude.
    """

    angle: float

    def __post_init__(self) -> None:
        angle = float(self.angle)
        if not math.isfinite(angle):
            raise ValueError(f"angle must be finite, got {angle!r}")
        object.__setattr__(self, "angle", angle % TWO_PI)


@dataclass(frozen=True)
class QubitPairState:
    """Normalized 4-amplitude state; global phase is left untouched."""

    amplitudes: tuple[complex, complex, complex, complex]

    def __post_init__(self) -> None:
        amps = tuple(complex(value) for value in self.amplitudes)
        if len(amps) != 4:
            raise ValueError("a two-qubit state has exactly 4 amplitudes")
        norm_sq = sum(abs(value) ** 2 for value in amps)
        if not math.isfinite(norm_sq) or abs(norm_sq - 1.0) > STATE_NORM_TOL:
            raise NonNormalizedStateError(f"state norm^2 = {norm_sq!r}, expected 1")
        object.__setattr__(self, "amplitudes", amps)


@dataclass(frozen=True)
class SpinEigenstate:
    """Spin eigenstate for a planar direction, on the (|+>, |->) basis."""

    setting: PlanarSetting
    sign: int
    amplitudes: tuple[complex, complex]


def spin_eigenstate(setting: PlanarSetting, sign: int) -> SpinEigenstate:
    """Half-angle eigenstates: (cos t/2, sin t/2) for +1, (-sin t/2, cos t/2) for -1."""
    if sign not in (+1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign!r}")
    half = setting.angle / 2.0
    c, s = math.cos(half), math.sin(half)
    if sign == +1:
        return SpinEigenstate(setting, sign, (complex(c), complex(s)))
    return SpinEigenstate(setting, sign, (complex(-s), complex(c)))


def singlet() -> QubitPairState:
    """The maximally anti-correlated state (|+>|-> - |->|+>)/sqrt(2)."""
    return QubitPairState((0.0 + 0.0j, complex(INV_SQRT2), complex(-INV_SQRT2), 0.0 + 0.0j))


def product_state(first: Sequence[complex], second: Sequence[complex]) -> QubitPairState:
    """Tensor product of two normalized single-qubit states."""
    u0, u1 = (complex(v) for v in first)
    v0, v1 = (complex(v) for v in second)
    return QubitPairState((u0 * v0, u0 * v1, u1 * v0, u1 * v1))


def _as_setting(value: PlanarSetting | float) -> PlanarSetting:
    if isinstance(value, PlanarSetting):
        return value
    return PlanarSetting(float(value))


def joint_probability(
    state: QubitPairState,
    setting_a: PlanarSetting | float,
    setting_b: PlanarSetting | float,
    outcome_a: int,
    outcome_b: int,
) -> float:
    """Born probability |<a,A| x <b,B| psi>|^2."""
    u = spin_eigenstate(_as_setting(setting_a), outcome_a).amplitudes
    v = spin_eigenstate(_as_setting(setting_b), outcome_b).amplitudes
    psi = state.amplitudes
    amplitude = 0.0 + 0.0j
    for i in range(2):
        for j in range(2):
            amplitude += u[i].conjugate() * v[j].conjugate() * psi[2 * i + j]
    return abs(amplitude) ** 2


def single_wing_probability(
    state: QubitPairState,
    wing: Wing | str,
    setting: PlanarSetting | float,
    outcome: int,
) -> float:
    """Probability of one wing's outcome with the distant wing unmeasured.

    This is the projector expectation <psi| (P x I) |psi> (or I x P for
    Bob), i.e. the projected vector's squared norm.
    """
    wing = Wing(wing)
    u = spin_eigenstate(_as_setting(setting), outcome).amplitudes
    psi = state.amplitudes
    total = 0.0
    if wing is Wing.ALICE:
        for j in range(2):
            amplitude = u[0].conjugate() * psi[j] + u[1].conjugate() * psi[2 + j]
            total += abs(amplitude) ** 2
    else:
        for i in range(2):
            amplitude = u[0].conjugate() * psi[2 * i] + u[1].conjugate() * psi[2 * i + 1]
            total += abs(amplitude) ** 2
    return total


def behavior_from_state(
    state: QubitPairState,
    alice_angles: Iterable[PlanarSetting | float],
    bob_angles: Iterable[PlanarSetting | float],
) -> Behavior:
    """Tabulate the joint probabilities over the given angle grids.

    Settings enter the behavior as indices into the angle lists; the angles
    themselves stay here in the quantum layer.
    """
    alice = [_as_setting(a) for a in alice_angles]
    bob = [_as_setting(b) for b in bob_angles]
    if not alice or not bob:
        raise ValueError("angle lists must be nonempty")
    scenario = Scenario(len(alice), len(bob))
    table = {}
    for a, b, outcome_a, outcome_b in scenario.cells():
        table[(a, b, outcome_a, outcome_b)] = joint_probability(
            state, alice[a], bob[b], outcome_a, outcome_b
        )
    return Behavior(scenario, table)
