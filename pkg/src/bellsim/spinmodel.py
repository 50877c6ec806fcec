"""Singlet-pair statistics from axis-anchored hidden variables.

A source emits two spin-1/2 particles with total spin zero.  A hidden
variable fixes a reference axis in the y-z plane together with the
predetermined outcome of particle 1 along that axis; conservation of
spin angular momentum predetermines particle 2 to the opposite value.
Along any other axis only the *mean* outcome is fixed, obtained by
projecting the particle's unit spin vector onto the measurement axis.
Outcome probabilities follow linearly from that mean, joint outcome
probabilities factorize given the hidden variable, and averaging over
the two equally likely hidden-variable signs yields the observable
singlet correlation -cos(phi) for axes separated by the angle phi.

Conditional statistics are meaningful only relative to one
hidden-variable set, anchored to a single observer's axis (the "Alice"
or "Bob" description).  The anchor is always an explicit argument, and
:func:`subquantum_correlation` rejects a hidden variable anchored to
neither measurement axis, so quantities that would mix hidden-variable
sets from different contexts cannot be formed here.

Everything in this module is a pure function of its arguments and is
safe to call concurrently.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import ContextMismatchError, ValidationError

TWO_PI = 2.0 * math.pi

#: Spin outcomes are plain ints restricted to {+1, -1} (units of hbar/2).
SpinValue = int


def require_spin(value: int, name: str = "spin value") -> int:
    """Validate a spin outcome; only the integers +1 and -1 are admitted."""
    # Reject bools explicitly: True == 1 but is not a spin outcome.
    if isinstance(value, bool) or value not in (1, -1):
        raise ValidationError(f"{name} must be +1 or -1, got {value!r}")
    return int(value)


def _require_particle(particle: int) -> int:
    if particle not in (1, 2):
        raise ValidationError(f"particle must be 1 or 2, got {particle!r}")
    return particle


@dataclass(frozen=True, slots=True)
class Direction:
    """A measurement axis in the y-z plane.

    Parameterized by a single angle ``theta`` (radians) against the z
    axis; the unit vector is (0, sin theta, cos theta).  The stored
    angle is canonicalized into [0, 2*pi), so two directions compare
    equal exactly when they describe the same axis orientation.
    """

    theta: float

    def __post_init__(self) -> None:
        t = float(self.theta)
        if not math.isfinite(t):
            raise ValidationError(f"theta must be finite, got {self.theta!r}")
        t = math.fmod(t, TWO_PI)
        if t < 0.0:
            t += TWO_PI
        if t >= TWO_PI:
            # fmod of a tiny negative can round the sum up to exactly 2*pi.
            t -= TWO_PI
        object.__setattr__(self, "theta", t)

    @classmethod
    def from_degrees(cls, degrees: float) -> "Direction":
        return cls(math.radians(degrees))

    def unit_vector(self) -> tuple[float, float, float]:
        return (0.0, math.sin(self.theta), math.cos(self.theta))


class Description(enum.Enum):
    """Which observer's measurement axis anchors the hidden-variable set."""

    ALICE = "alice"
    BOB = "bob"


@dataclass(frozen=True, slots=True)
class HiddenVariable:
    """An axis plus the predetermined outcome of particle 1 along it.

    The second particle's outcome along the same axis is always the
    negation of the first (the two predetermined values sum to zero),
    so only the first particle's sign is stored.
    """

    axis: Direction
    first_particle: SpinValue

    def __post_init__(self) -> None:
        require_spin(self.first_particle, "first_particle")

    @property
    def second_particle(self) -> SpinValue:
        return -self.first_particle

    def predetermined(self, particle: int) -> SpinValue:
        """The outcome fixed for ``particle`` along this hidden variable's axis."""
        return self.first_particle if _require_particle(particle) == 1 else -self.first_particle


@dataclass(frozen=True, slots=True)
class SpinVector:
    """A unit 3-vector carrying one particle's spin orientation."""

    components: tuple[float, float, float]

    def __post_init__(self) -> None:
        norm = math.sqrt(sum(c * c for c in self.components))
        if abs(norm - 1.0) > 1e-12:
            raise ValidationError(f"spin vector must have unit norm, got |v| = {norm!r}")

    def project(self, axis: Direction) -> float:
        """Dot product with the axis unit vector."""
        ax, ay, az = axis.unit_vector()
        x, y, z = self.components
        return x * ax + y * ay + z * az


def angle_between(n: Direction, m: Direction) -> float:
    """Planar angle between two axes, in [0, pi].

    Equal to arccos of the dot product of the two unit vectors, and
    symmetric in its arguments.
    """
    c = math.cos(n.theta - m.theta)
    if c > 1.0:
        c = 1.0
    elif c < -1.0:
        c = -1.0
    return math.acos(c)


def spin_vector(lam: HiddenVariable, particle: int) -> SpinVector:
    """The unit spin vector of one particle: its predetermined sign times the axis."""
    sign = lam.predetermined(particle)
    _, uy, uz = lam.axis.unit_vector()
    return SpinVector((0.0, sign * uy, sign * uz))


def mean_value(lam: HiddenVariable, particle: int, axis: Direction) -> float:
    """Mean outcome of measuring ``particle`` along ``axis``, given the hidden variable.

    This is the projection of the particle's spin vector onto the
    measurement axis: the predetermined sign times cos(phi), with phi
    the angle between the hidden variable's axis and ``axis``.  When
    the two axes coincide it degenerates to the predetermined outcome
    itself (exactly +1 or -1).
    """
    sign = lam.predetermined(particle)
    return sign * math.cos(angle_between(lam.axis, axis))


def conditional_outcome_prob(
    lam: HiddenVariable, particle: int, axis: Direction, outcome: SpinValue
) -> float:
    """Probability that measuring ``particle`` along ``axis`` yields ``outcome``.

    For a two-valued observable with mean m this is (1 + outcome*m)/2.
    The two outcome probabilities sum to 1 exactly, and measuring along
    the hidden variable's own axis gives exactly 1 or 0.
    """
    require_spin(outcome, "outcome")
    return 0.5 * (1.0 + outcome * mean_value(lam, particle, axis))


def joint_outcome_prob(
    lam: HiddenVariable,
    axis1: Direction,
    axis2: Direction,
    outcome1: SpinValue,
    outcome2: SpinValue,
) -> float:
    """Joint probability of the two outcomes, conditional on the hidden variable.

    Factorizes into the product of the single-particle conditionals:
    given the hidden variable, the two outcomes are independent.
    """
    return conditional_outcome_prob(lam, 1, axis1, outcome1) * conditional_outcome_prob(
        lam, 2, axis2, outcome2
    )


def pair_expectation(lam: HiddenVariable, axis1: Direction, axis2: Direction) -> float:
    """Expected product of the two outcomes, conditional on the hidden variable.

    Sums k*l over the four joint outcome probabilities.  When ``axis1``
    is the hidden variable's own axis this equals -cos(phi12) for
    either sign of the hidden variable.
    """
    total = 0.0
    for k in (1, -1):
        for l in (1, -1):
            total += k * l * joint_outcome_prob(lam, axis1, axis2, k, l)
    return total


def subquantum_correlation(lam: HiddenVariable, axis1: Direction, axis2: Direction) -> float:
    """Covariance of the two outcomes conditional on one hidden variable.

    Defined only in a matching context: the hidden variable must be
    anchored to one of the two measurement axes (first axis for the
    Alice description, second for the Bob description); anything else
    raises :class:`ContextMismatchError`.  Because the joint
    distribution factorizes given the hidden variable, the value is
    identically zero: the particles carry no correlation at this level.
    """
    if lam.axis != axis1 and lam.axis != axis2:
        raise ContextMismatchError(
            "hidden variable is anchored to neither measurement axis; conditional "
            "correlations are defined only within a matching measurement context"
        )
    return pair_expectation(lam, axis1, axis2) - mean_value(lam, 1, axis1) * mean_value(
        lam, 2, axis2
    )


def marginal_expectation(source_axis: Direction, particle: int, measure_axis: Direction) -> float:
    """Single-particle mean after averaging the two hidden-variable signs.

    With both signs equally likely the two conditional means cancel
    exactly, so the result is 0 for every pair of axes.
    """
    plus = mean_value(HiddenVariable(source_axis, 1), particle, measure_axis)
    minus = mean_value(HiddenVariable(source_axis, -1), particle, measure_axis)
    return 0.5 * plus + 0.5 * minus


def _anchor_axis(axis1: Direction, axis2: Direction, description: Description) -> Direction:
    if description is Description.ALICE:
        return axis1
    if description is Description.BOB:
        return axis2
    raise ValidationError(f"description must be a Description member, got {description!r}")


def quantum_pair_expectation(
    axis1: Direction, axis2: Direction, description: Description = Description.ALICE
) -> float:
    """Observable expectation of the outcome product: -cos of the axis angle.

    Averages the conditional pair expectation over the two equally
    likely hidden-variable signs anchored to the chosen observer's
    axis.  Both descriptions give the same value.
    """
    anchor = _anchor_axis(axis1, axis2, description)
    plus = pair_expectation(HiddenVariable(anchor, 1), axis1, axis2)
    minus = pair_expectation(HiddenVariable(anchor, -1), axis1, axis2)
    return 0.5 * plus + 0.5 * minus


def quantum_correlation(
    axis1: Direction, axis2: Direction, description: Description = Description.ALICE
) -> float:
    """Observable correlation (covariance) of the two outcomes.

    Covariance is the canonical form; since the single-particle
    marginals vanish it numerically equals the raw pair expectation,
    -cos(phi12), under either description.
    """
    anchor = _anchor_axis(axis1, axis2, description)
    mean1 = marginal_expectation(anchor, 1, axis1)
    mean2 = marginal_expectation(anchor, 2, axis2)
    return quantum_pair_expectation(axis1, axis2, description) - mean1 * mean2
