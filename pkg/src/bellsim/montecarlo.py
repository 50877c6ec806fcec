"""Seeded Monte Carlo engine for the two-particle spin experiment.

Each trial owns one counter block of its random stream: the first draw
decides the hidden-variable sign (both signs equally likely), the
second draw is inverted against the conditional outcome probability of
the non-anchored observer.  The anchored observer's outcome is certain
given the hidden variable and consumes no randomness.  Trials can be
split into contiguous chunks and processed by any number of workers;
aggregation keeps exact integer histograms and derives all summary
statistics once from the final counts, so results are bit-identical to
sequential execution.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .rng import RngStream, chunk_bounds
from .spinmodel import (
    Description,
    Direction,
    HiddenVariable,
    angle_between,
    conditional_outcome_prob,
    quantum_correlation,
)

#: Outcome-pair histogram order: (+,+), (+,-), (-,+), (-,-).
HISTOGRAM_CELLS = ((1, 1), (1, -1), (-1, 1), (-1, -1))

CHSH_LOCAL_BOUND = 2.0
CHSH_SINGLET_BOUND = 2.0 * math.sqrt(2.0)

#: The CHSH combination is a derived demonstration built from the model's
#: pair correlations; it is not itself a primitive of the model.
CHSH_NOTE = (
    "derived demonstration: CHSH combination of four pair correlations, each "
    "evaluated in its own measurement context with its own hidden-variable set"
)


@dataclass(frozen=True, slots=True)
class ExperimentConfig:
    """Measurement setup plus trial count and stream identity."""

    axis1: Direction
    axis2: Direction
    trials: int
    description: Description = Description.ALICE
    seed: int = 0
    stream_id: int = 0

    def __post_init__(self) -> None:
        if not isinstance(self.trials, int) or self.trials < 1:
            raise ValidationError(f"trials must be a positive integer, got {self.trials!r}")
        if not isinstance(self.description, Description):
            raise ValidationError(f"description must be a Description, got {self.description!r}")

    def stream(self) -> RngStream:
        return RngStream(self.seed, self.stream_id)


@dataclass(frozen=True, slots=True)
class TrialRecord:
    """One simulated run: the sampled hidden-variable sign and both outcomes."""

    lambda_sign: int
    outcome1: int
    outcome2: int


@dataclass(frozen=True, slots=True)
class TrialArrays:
    """Column-oriented per-trial records (int8 arrays of equal length)."""

    lambda_sign: np.ndarray
    outcome1: np.ndarray
    outcome2: np.ndarray

    def __len__(self) -> int:
        return len(self.outcome1)

    def record(self, i: int) -> TrialRecord:
        return TrialRecord(
            int(self.lambda_sign[i]), int(self.outcome1[i]), int(self.outcome2[i])
        )


@dataclass(frozen=True, slots=True)
class EmpiricalStats:
    """Summary statistics derived from the exact outcome histogram."""

    trials: int
    counts: tuple[int, int, int, int]
    mean1: float
    mean2: float
    pair_mean: float
    covariance: float

    @classmethod
    def from_counts(cls, counts, trials: int) -> "EmpiricalStats":
        npp, npm, nmp, nmm = (int(c) for c in counts)
        if npp + npm + nmp + nmm != trials:
            raise ValidationError("histogram cells must sum to the trial count")
        n = float(trials)
        mean1 = (npp + npm - nmp - nmm) / n
        mean2 = (npp - npm + nmp - nmm) / n
        pair_mean = (npp - npm - nmp + nmm) / n
        covariance = pair_mean - mean1 * mean2
        # Sample covariance of +/-1 variables is bounded by the product of
        # their sample deviations, hence by 1.
        if abs(pair_mean) > 1.0 or abs(covariance) > 1.0 + 1e-9:
            raise ValidationError("pair mean and covariance must lie in [-1, 1]")
        return cls(
            trials=trials,
            counts=(npp, npm, nmp, nmm),
            mean1=mean1,
            mean2=mean2,
            pair_mean=pair_mean,
            covariance=covariance,
        )

    def standard_error(self) -> float:
        """Standard error of the pair mean of +/-1 products."""
        return math.sqrt(max(0.0, 1.0 - self.pair_mean**2) / self.trials)

    def to_json_dict(self) -> dict:
        glyph = {1: "+", -1: "-"}
        return {
            "trials": self.trials,
            "counts": {
                f"{glyph[a]}{glyph[b]}": n
                for (a, b), n in zip(HISTOGRAM_CELLS, self.counts)
            },
            "mean1": self.mean1,
            "mean2": self.mean2,
            "pair_mean": self.pair_mean,
            "covariance": self.covariance,
            "standard_error": self.standard_error(),
        }


def sample_hidden_variable(axis: Direction, rng: np.random.Generator) -> HiddenVariable:
    """Draw the hidden variable on ``axis``: both signs with probability 1/2."""
    sign = 1 if rng.random() < 0.5 else -1
    return HiddenVariable(axis, sign)


def simulate_trial(config: ExperimentConfig, rng: np.random.Generator) -> TrialRecord:
    """Run one trial, consuming two draws from ``rng``.

    The hidden variable is sampled on the anchored observer's axis;
    that observer's outcome is read off with certainty, the other
    outcome is drawn by comparing one uniform against its conditional
    probability.
    """
    if config.description is Description.ALICE:
        lam = sample_hidden_variable(config.axis1, rng)
        outcome1 = lam.first_particle
        p_plus = conditional_outcome_prob(lam, 2, config.axis2, 1)
        outcome2 = 1 if rng.random() < p_plus else -1
    else:
        lam = sample_hidden_variable(config.axis2, rng)
        outcome2 = lam.second_particle
        p_plus = conditional_outcome_prob(lam, 1, config.axis1, 1)
        outcome1 = 1 if rng.random() < p_plus else -1
    return TrialRecord(lam.first_particle, outcome1, outcome2)


def _simulate_chunk(config: ExperimentConfig, lo: int, hi: int) -> TrialArrays:
    """Vectorized trials [lo, hi); draw-for-draw identical to simulate_trial."""
    u = config.stream().trial_doubles(hi - lo, 2, start=lo)
    signs = np.where(u[:, 0] < 0.5, 1, -1).astype(np.int8)
    signs_f = signs.astype(np.float64)
    if config.description is Description.ALICE:
        # Particle 2's mean given the axis1-anchored hidden variable.
        cos_phi = math.cos(angle_between(config.axis1, config.axis2))
        p_plus = 0.5 * (1.0 + (-signs_f) * cos_phi)
        outcome2 = np.where(u[:, 1] < p_plus, 1, -1).astype(np.int8)
        outcome1 = signs
    else:
        cos_phi = math.cos(angle_between(config.axis2, config.axis1))
        p_plus = 0.5 * (1.0 + signs_f * cos_phi)
        outcome1 = np.where(u[:, 1] < p_plus, 1, -1).astype(np.int8)
        outcome2 = (-signs).astype(np.int8)
    return TrialArrays(signs, outcome1, outcome2)


def _histogram(arrays: TrialArrays) -> np.ndarray:
    o1 = arrays.outcome1.astype(np.int64)
    o2 = arrays.outcome2.astype(np.int64)
    idx = (1 - o1) + (1 - o2) // 2
    return np.bincount(idx, minlength=4)


def run_experiment(config: ExperimentConfig, workers: int = 1) -> EmpiricalStats:
    """Run all trials and summarize them.

    ``workers`` only controls how trials are chunked and dispatched;
    the histogram is a sum of per-chunk integer counts, so the result
    is identical for every worker count and for repeated runs.
    """
    bounds = [(lo, hi) for lo, hi in chunk_bounds(config.trials, workers) if hi > lo]
    if workers == 1 or len(bounds) <= 1:
        chunks = [_histogram(_simulate_chunk(config, lo, hi)) for lo, hi in bounds]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(lambda b: _histogram(_simulate_chunk(config, *b)), bounds))
    counts = np.sum(chunks, axis=0, dtype=np.int64) if chunks else np.zeros(4, dtype=np.int64)
    return EmpiricalStats.from_counts(counts, config.trials)


def run_experiment_records(config: ExperimentConfig) -> tuple[EmpiricalStats, TrialArrays]:
    """Like :func:`run_experiment` but also returns the per-trial records."""
    arrays = _simulate_chunk(config, 0, config.trials)
    stats = EmpiricalStats.from_counts(_histogram(arrays), config.trials)
    return stats, arrays


def write_trials_csv(path, arrays: TrialArrays) -> None:
    """Per-trial records as CSV: trial, lambda_sign, outcome1, outcome2."""
    table = np.column_stack(
        [np.arange(len(arrays)), arrays.lambda_sign, arrays.outcome1, arrays.outcome2]
    )
    np.savetxt(
        path, table, fmt="%d", delimiter=",",
        header="trial,lambda_sign,outcome1,outcome2", comments="",
    )


def covariance_tolerance(analytic: float, trials: int, sigmas: float = 3.0) -> float:
    """Acceptance band for an empirical covariance around its analytic value.

    ``sigmas`` standard errors of the +/-1 product mean, plus a 9/N
    guard for the sample marginal product: at certainty angles the
    product mean is exact and the entire deviation is mean1*mean2,
    which stays within 9/N at three standard errors.
    """
    return sigmas * math.sqrt(max(0.0, 1.0 - analytic * analytic) / trials) + 9.0 / trials


@dataclass(frozen=True, slots=True)
class DescriptionComparison:
    """Alice-anchored vs Bob-anchored runs of the same measurement setup."""

    axis1: Direction
    axis2: Direction
    trials: int
    seed: int
    analytic: float
    alice: EmpiricalStats
    bob: EmpiricalStats
    tolerance: float
    combined_tolerance: float

    @property
    def discrepancy(self) -> float:
        return abs(self.alice.covariance - self.bob.covariance)

    @property
    def passed(self) -> bool:
        return (
            abs(self.alice.covariance - self.analytic) <= self.tolerance
            and abs(self.bob.covariance - self.analytic) <= self.tolerance
            and self.discrepancy <= self.combined_tolerance
        )

    def to_json_dict(self) -> dict:
        return {
            "theta1": self.axis1.theta,
            "theta2": self.axis2.theta,
            "trials": self.trials,
            "seed": self.seed,
            "analytic": self.analytic,
            "alice": self.alice.to_json_dict(),
            "bob": self.bob.to_json_dict(),
            "discrepancy": self.discrepancy,
            "tolerance": self.tolerance,
            "combined_tolerance": self.combined_tolerance,
            "passed": self.passed,
        }


def description_equivalence(
    axis1: Direction,
    axis2: Direction,
    trials: int,
    seed: int = 0,
    workers: int = 1,
) -> DescriptionComparison:
    """Run both descriptions on independent streams and compare.

    Each empirical covariance must match -cos(phi) within the single
    tolerance and the two must match each other within the combined
    (sqrt(2) wider) tolerance.
    """
    analytic = quantum_correlation(axis1, axis2, Description.ALICE)
    alice = run_experiment(
        ExperimentConfig(axis1, axis2, trials, Description.ALICE, seed, stream_id=0), workers
    )
    bob = run_experiment(
        ExperimentConfig(axis1, axis2, trials, Description.BOB, seed, stream_id=1), workers
    )
    tol = covariance_tolerance(analytic, trials)
    return DescriptionComparison(
        axis1=axis1,
        axis2=axis2,
        trials=trials,
        seed=seed,
        analytic=analytic,
        alice=alice,
        bob=bob,
        tolerance=tol,
        combined_tolerance=math.sqrt(2.0) * tol,
    )


@dataclass(frozen=True, slots=True)
class ChshContext:
    """One of the four CHSH measurement contexts."""

    label: str
    axis1: Direction
    axis2: Direction
    sign: int
    expectation: float
    stats: EmpiricalStats | None = None

    def to_json_dict(self) -> dict:
        d = {
            "label": self.label,
            "theta1": self.axis1.theta,
            "theta2": self.axis2.theta,
            "sign": self.sign,
            "expectation": self.expectation,
        }
        if self.stats is not None:
            d["stats"] = self.stats.to_json_dict()
        return d


@dataclass(frozen=True, slots=True)
class ChshResult:
    """The CHSH combination E(a,b) - E(a,b') + E(a',b) + E(a',b')."""

    mode: str
    value: float
    contexts: tuple[ChshContext, ...]
    trials: int | None
    seed: int | None
    note: str = CHSH_NOTE
    local_bound: float = CHSH_LOCAL_BOUND
    singlet_bound: float = CHSH_SINGLET_BOUND

    def to_json_dict(self) -> dict:
        return {
            "mode": self.mode,
            "value": self.value,
            "abs_value": abs(self.value),
            "contexts": [c.to_json_dict() for c in self.contexts],
            "trials": self.trials,
            "seed": self.seed,
            "local_bound": self.local_bound,
            "singlet_bound": self.singlet_bound,
            "note": self.note,
        }


def chsh_details(
    a: Direction,
    a_prime: Direction,
    b: Direction,
    b_prime: Direction,
    mode: str = "analytic",
    trials: int = 1_000_000,
    seed: int = 0,
    workers: int = 1,
) -> ChshResult:
    """Evaluate the CHSH combination, each term in its own context.

    Analytic mode substitutes the model's -cos correlations; empirical
    mode runs four independent experiments, one stream per context.
    """
    if mode not in ("analytic", "empirical"):
        raise ValidationError(f"mode must be 'analytic' or 'empirical', got {mode!r}")
    pairs = (
        ("E(a,b)", a, b, 1),
        ("E(a,b')", a, b_prime, -1),
        ("E(a',b)", a_prime, b, 1),
        ("E(a',b')", a_prime, b_prime, 1),
    )
    contexts = []
    total = 0.0
    for i, (label, ax1, ax2, sign) in enumerate(pairs):
        if mode == "analytic":
            e = quantum_correlation(ax1, ax2)
            stats = None
        else:
            stats = run_experiment(
                ExperimentConfig(ax1, ax2, trials, Description.ALICE, seed, stream_id=i),
                workers,
            )
            e = stats.covariance
        contexts.append(ChshContext(label, ax1, ax2, sign, e, stats))
        total += sign * e
    return ChshResult(
        mode=mode,
        value=total,
        contexts=tuple(contexts),
        trials=trials if mode == "empirical" else None,
        seed=seed if mode == "empirical" else None,
    )


def chsh_value(
    a: Direction,
    a_prime: Direction,
    b: Direction,
    b_prime: Direction,
    mode: str = "analytic",
    trials: int = 1_000_000,
    seed: int = 0,
    workers: int = 1,
) -> float:
    """The CHSH value; see :func:`chsh_details` for the full breakdown."""
    return chsh_details(a, a_prime, b, b_prime, mode, trials, seed, workers).value
