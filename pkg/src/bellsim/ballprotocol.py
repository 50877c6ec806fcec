"""Colored-ball source/detector protocol with contextual correlations.

Three actors per trial: a source that sends each observer one ball of
each of the stage's two colors, and two observers whose single-color
detectors register a sign for at most one ball while counting every
ball that passes.  A remote aggregation step keeps only trials in
which both observers registered a result.

The source runs one of two complementary executive algorithms per
trial, chosen by a fair coin.  An algorithm fixes the signs of one
color deterministically and draws the other color's signs from a
biased coin, always honoring the anticorrelation rule: same-color
balls sent to the two observers carry opposite signs.  Held fixed,
either algorithm screens off the observed sign correlation; averaged
out, the correlation reappears.  Composing registered frequencies
across the three stages as if the per-stage algorithm pairs were one
conditioning variable yields an inequality that the actual frequencies
violate; the per-algorithm weighted decomposition shows where that
composition breaks.

Locality is structural: no operation here accepts both observers'
state, and the observers exchange no messages.  Trial randomness is
counter-based (one block per trial), so chunked execution reproduces
the sequential stream exactly.
"""

from __future__ import annotations

import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .errors import EmptyReportError, ValidationError
from .rng import RngStream, chunk_bounds

SIGN_PAIRS = ((1, 1), (1, -1), (-1, 1), (-1, -1))

_SIGN_GLYPH = {1: "+", -1: "-"}


class Color(str, enum.Enum):
    AMBER = "a"
    BLUE = "b"
    CHERRY = "c"


class Addressee(str, enum.Enum):
    ALICE = "alice"
    BOB = "bob"


#: Stage number -> (fixed-sign color, variable-sign color).  The fixed
#: color is the one whose signs the executive algorithms pin down; it is
#: also the canonical filter choice for Alice, the variable color for Bob.
STAGE_COLORS: dict[int, tuple[Color, Color]] = {
    1: (Color.AMBER, Color.BLUE),
    2: (Color.AMBER, Color.CHERRY),
    3: (Color.CHERRY, Color.BLUE),
}

ALGORITHM_IDS: dict[int, tuple[str, str]] = {
    1: ("A1", "A2"),
    2: ("A1'", "A2'"),
    3: ("A1''", "A2''"),
}

ALICE_FILTERS = (Color.AMBER, Color.CHERRY)
BOB_FILTERS = (Color.BLUE, Color.CHERRY)


def _require_sign(value: int, name: str) -> int:
    if isinstance(value, bool) or value not in (1, -1):
        raise ValidationError(f"{name} must be +1 or -1, got {value!r}")
    return int(value)


def _require_prob(value: float, name: str) -> float:
    v = float(value)
    if not math.isfinite(v) or not 0.0 <= v <= 1.0:
        raise ValidationError(f"{name} must be a probability in [0, 1], got {value!r}")
    return v


@dataclass(frozen=True, slots=True)
class SignedBall:
    color: Color
    sign: int
    addressee: Addressee

    def __post_init__(self) -> None:
        _require_sign(self.sign, "sign")

    def label(self) -> str:
        side = "A" if self.addressee is Addressee.ALICE else "B"
        return f"{self.color.value}_{side}{_SIGN_GLYPH[self.sign]}"


@dataclass(frozen=True, slots=True)
class AlgorithmTable:
    """One executive algorithm of a stage.

    The fixed color's signs are forced: ``fixed_alice_sign`` to Alice
    and its negation to Bob.  The variable color's signs are drawn
    once per trial: with probability ``correlated_prob`` Bob's
    variable-color ball carries the same sign as Alice's fixed-color
    ball (the "correlated" configuration), otherwise the opposite.
    Alice's variable-color ball is always the negation of Bob's.
    """

    algorithm_id: str
    stage: int
    fixed_color: Color
    variable_color: Color
    fixed_alice_sign: int
    correlated_prob: float

    def __post_init__(self) -> None:
        if self.stage not in STAGE_COLORS:
            raise ValidationError(f"stage must be 1, 2 or 3, got {self.stage!r}")
        if self.fixed_color is self.variable_color:
            raise ValidationError("fixed and variable colors must differ")
        _require_sign(self.fixed_alice_sign, "fixed_alice_sign")
        _require_prob(self.correlated_prob, "correlated_prob")

    def mirrored(self, algorithm_id: str) -> "AlgorithmTable":
        """The complementary algorithm: every sign flipped, same bias."""
        return replace(
            self, algorithm_id=algorithm_id, fixed_alice_sign=-self.fixed_alice_sign
        )

    def variable_bob_sign(self, correlated: bool) -> int:
        return self.fixed_alice_sign if correlated else -self.fixed_alice_sign

    def quadruple(self, correlated: bool) -> tuple[SignedBall, SignedBall, SignedBall, SignedBall]:
        """The four balls of one emission: (fixed_A, variable_A; variable_B, fixed_B)."""
        s = self.fixed_alice_sign
        v = self.variable_bob_sign(correlated)
        return (
            SignedBall(self.fixed_color, s, Addressee.ALICE),
            SignedBall(self.variable_color, -v, Addressee.ALICE),
            SignedBall(self.variable_color, v, Addressee.BOB),
            SignedBall(self.fixed_color, -s, Addressee.BOB),
        )

    def emission_table(self) -> dict[tuple[SignedBall, ...], float]:
        """The two possible quadruples with their probabilities."""
        return {
            self.quadruple(True): self.correlated_prob,
            self.quadruple(False): 1.0 - self.correlated_prob,
        }


def stage_algorithms(stage: int, correlated_prob: float) -> tuple[AlgorithmTable, AlgorithmTable]:
    """The stage's complementary algorithm pair, second mirrored from the first."""
    if stage not in STAGE_COLORS:
        raise ValidationError(f"stage must be 1, 2 or 3, got {stage!r}")
    fixed, variable = STAGE_COLORS[stage]
    id1, id2 = ALGORITHM_IDS[stage]
    first = AlgorithmTable(
        algorithm_id=id1,
        stage=stage,
        fixed_color=fixed,
        variable_color=variable,
        fixed_alice_sign=1,
        correlated_prob=_require_prob(correlated_prob, "correlated_prob"),
    )
    return first, first.mirrored(id2)


@dataclass(frozen=True, slots=True)
class StageConfig:
    """One stage of the experiment: colors, filters, bias, trials, stream.

    Filters default to the stage's canonical choice (Alice on the fixed
    color, Bob on the variable color).  Alice's device only accepts
    amber or cherry, Bob's only blue or cherry.  With probability
    ``filter_mismatch_prob`` an observer's device is set to their other
    admissible color for a trial, which can produce unregistered
    trials.
    """

    stage: int
    alice_filter: Color | None = None
    bob_filter: Color | None = None
    trials: int = 1_000_000
    seed: int = 0
    stream_id: int | None = None
    p_stage1: float = 0.15
    p_stage23: float = 0.04
    filter_mismatch_prob: float = 0.0

    def __post_init__(self) -> None:
        if self.stage not in STAGE_COLORS:
            raise ValidationError(f"stage must be 1, 2 or 3, got {self.stage!r}")
        fixed, variable = STAGE_COLORS[self.stage]
        alice = self.alice_filter if self.alice_filter is not None else fixed
        bob = self.bob_filter if self.bob_filter is not None else variable
        alice = Color(alice)
        bob = Color(bob)
        if alice not in ALICE_FILTERS:
            raise ValidationError(f"alice_filter must be amber or cherry, got {alice.value!r}")
        if bob not in BOB_FILTERS:
            raise ValidationError(f"bob_filter must be blue or cherry, got {bob.value!r}")
        object.__setattr__(self, "alice_filter", alice)
        object.__setattr__(self, "bob_filter", bob)
        if not isinstance(self.trials, int) or self.trials < 1:
            raise ValidationError(f"trials must be a positive integer, got {self.trials!r}")
        _require_prob(self.p_stage1, "p_stage1")
        _require_prob(self.p_stage23, "p_stage23")
        _require_prob(self.filter_mismatch_prob, "filter_mismatch_prob")

    @property
    def correlated_prob(self) -> float:
        return self.p_stage1 if self.stage == 1 else self.p_stage23

    def algorithms(self) -> tuple[AlgorithmTable, AlgorithmTable]:
        return stage_algorithms(self.stage, self.correlated_prob)

    def stream(self) -> RngStream:
        sid = self.stream_id if self.stream_id is not None else self.stage
        return RngStream(self.seed, sid)

    def to_json_dict(self) -> dict:
        return {
            "stage": self.stage,
            "alice_filter": self.alice_filter.value,
            "bob_filter": self.bob_filter.value,
            "trials": self.trials,
            "seed": self.seed,
            "stream_id": self.stream_id,
            "p_stage1": self.p_stage1,
            "p_stage23": self.p_stage23,
            "filter_mismatch_prob": self.filter_mismatch_prob,
        }


def stage_config_from_json_dict(data: dict) -> StageConfig:
    if not isinstance(data, dict):
        raise ValidationError("stage config must be a JSON object")
    allowed = {
        "stage", "alice_filter", "bob_filter", "trials", "seed",
        "stream_id", "p_stage1", "p_stage23", "filter_mismatch_prob",
    }
    unknown = set(data) - allowed
    if unknown:
        raise ValidationError(f"unknown stage config fields: {sorted(unknown)}")
    if "stage" not in data:
        raise ValidationError("stage config requires a 'stage' field")
    kwargs = dict(data)
    for key in ("alice_filter", "bob_filter"):
        if kwargs.get(key) is not None:
            try:
                kwargs[key] = Color(kwargs[key])
            except ValueError as exc:
                raise ValidationError(f"{key} must be one of 'a', 'b', 'c'") from exc
    return StageConfig(**kwargs)


def sam_emit(
    config: StageConfig, rng: np.random.Generator
) -> tuple[str, tuple[SignedBall, SignedBall, SignedBall, SignedBall]]:
    """Pick the stage's algorithm by a fair coin and emit its four balls.

    Consumes two draws: algorithm choice, then the variable-sign coin.
    Every emitted quadruple obeys the anticorrelation rule by
    construction.
    """
    first, second = config.algorithms()
    algorithm = first if rng.random() < 0.5 else second
    correlated = rng.random() < algorithm.correlated_prob
    return algorithm.algorithm_id, algorithm.quadruple(correlated)


@dataclass(frozen=True, slots=True)
class DetectionRecord:
    """What one observer's device did with one trial's pair of balls."""

    registered: bool
    color: Color | None
    sign: int | None
    passages: int


def observer_detect(
    balls: tuple[SignedBall, SignedBall], filter_color: Color
) -> DetectionRecord:
    """Scan one observer's pair of balls with a single-color detector.

    The device counts both passing balls regardless of color; it
    records (color, sign) only for a ball matching the filter color.
    If neither ball matches, no result is recorded.
    """
    if len(balls) != 2:
        raise ValidationError("an observer receives exactly two balls per trial")
    if balls[0].addressee is not balls[1].addressee:
        raise ValidationError("both balls must be addressed to the same observer")
    filter_color = Color(filter_color)
    for ball in balls:
        if ball.color is filter_color:
            return DetectionRecord(True, ball.color, ball.sign, passages=2)
    return DetectionRecord(False, None, None, passages=2)


@dataclass(frozen=True, slots=True)
class AlgorithmStats:
    """Registered-outcome statistics conditional on one algorithm."""

    algorithm_id: str
    weight: float
    registered: int | None
    joint_freq: dict[tuple[int, int], float]
    alice_mean: float
    bob_mean: float
    pair_mean: float
    correlation: float

    def to_json_dict(self) -> dict:
        return {
            "algorithm": self.algorithm_id,
            "weight": self.weight,
            "registered": self.registered,
            "joint_freq": {
                f"{_SIGN_GLYPH[a]}{_SIGN_GLYPH[b]}": f for (a, b), f in self.joint_freq.items()
            },
            "alice_mean": self.alice_mean,
            "bob_mean": self.bob_mean,
            "pair_mean": self.pair_mean,
            "correlation": self.correlation,
        }


@dataclass(frozen=True, slots=True)
class AggregateReport:
    """The remote computer's per-stage summary over registered trials."""

    stage: int
    alice_filter: Color
    bob_filter: Color
    mode: str
    trials: int | None
    passages_per_observer: int | None
    registered_trials: int | None
    registered_fraction: float
    joint_freq: dict[tuple[int, int], float]
    alice_mean: float
    bob_mean: float
    pair_mean: float
    correlation: float
    algorithms: tuple[AlgorithmStats, ...]

    def algorithm(self, algorithm_id: str) -> AlgorithmStats:
        for alg in self.algorithms:
            if alg.algorithm_id == algorithm_id:
                return alg
        known = [a.algorithm_id for a in self.algorithms]
        raise ValidationError(
            f"algorithm {algorithm_id!r} does not belong to this stage report (has {known})"
        )

    def to_json_dict(self) -> dict:
        return {
            "stage": self.stage,
            "alice_filter": self.alice_filter.value,
            "bob_filter": self.bob_filter.value,
            "mode": self.mode,
            "trials": self.trials,
            "passages_per_observer": self.passages_per_observer,
            "registered_trials": self.registered_trials,
            "registered_fraction": self.registered_fraction,
            "joint_freq": {
                f"{_SIGN_GLYPH[a]}{_SIGN_GLYPH[b]}": f for (a, b), f in self.joint_freq.items()
            },
            "alice_mean": self.alice_mean,
            "bob_mean": self.bob_mean,
            "pair_mean": self.pair_mean,
            "correlation": self.correlation,
            "algorithms": [alg.to_json_dict() for alg in self.algorithms],
        }


def conditional_correlation(report: AggregateReport, algorithm_id: str) -> float:
    """Sign correlation with the named algorithm held fixed.

    The algorithm must belong to the report's stage.  Analytically zero
    for every algorithm whenever Alice registers the algorithm's fixed
    color: her sign is then constant given the algorithm, so the
    covariance vanishes term by term.
    """
    return report.algorithm(algorithm_id).correlation


def _moments(freq: dict[tuple[int, int], float]) -> tuple[float, float, float, float]:
    alice = sum(a * f for (a, _), f in freq.items())
    bob = sum(b * f for (_, b), f in freq.items())
    pair = sum(a * b * f for (a, b), f in freq.items())
    return alice, bob, pair, pair - alice * bob


def _registered_sign(
    config: StageConfig, algorithm: AlgorithmTable, correlated: bool,
    observer: Addressee, filter_color: Color,
) -> int | None:
    """Sign the observer registers for one emission, or None."""
    s = algorithm.fixed_alice_sign
    v = algorithm.variable_bob_sign(correlated)
    if observer is Addressee.ALICE:
        if filter_color is algorithm.fixed_color:
            return s
        if filter_color is algorithm.variable_color:
            return -v
        return None
    if filter_color is algorithm.variable_color:
        return v
    if filter_color is algorithm.fixed_color:
        return -s
    return None


def _enumerate_worlds(config: StageConfig):
    """Yield (algorithm, probability, filters, alice_sign|None, bob_sign|None) atoms.

    Enumerates algorithm choice, the variable-sign coin and, when
    enabled, the two filter-mismatch coins; the per-observer registered
    sign is None when that observer's effective filter matches neither
    ball.
    """
    m = config.filter_mismatch_prob
    alice_alt = ALICE_FILTERS[1] if config.alice_filter is ALICE_FILTERS[0] else ALICE_FILTERS[0]
    bob_alt = BOB_FILTERS[1] if config.bob_filter is BOB_FILTERS[0] else BOB_FILTERS[0]
    filter_atoms = [(config.alice_filter, config.bob_filter, 1.0)]
    if m > 0.0:
        filter_atoms = [
            (af, bf, pa * pb)
            for af, pa in ((config.alice_filter, 1.0 - m), (alice_alt, m))
            for bf, pb in ((config.bob_filter, 1.0 - m), (bob_alt, m))
        ]
    for algorithm in config.algorithms():
        for correlated, p_corr in (
            (True, algorithm.correlated_prob),
            (False, 1.0 - algorithm.correlated_prob),
        ):
            for af, bf, p_filt in filter_atoms:
                prob = 0.5 * p_corr * p_filt
                a = _registered_sign(config, algorithm, correlated, Addressee.ALICE, af)
                b = _registered_sign(config, algorithm, correlated, Addressee.BOB, bf)
                yield algorithm, prob, af, bf, a, b


def analytic_stage_report(config: StageConfig) -> AggregateReport:
    """Exact registered-outcome distribution for a stage configuration."""
    first, second = config.algorithms()
    cells = {alg.algorithm_id: {pair: 0.0 for pair in SIGN_PAIRS} for alg in (first, second)}
    reg_prob = {alg.algorithm_id: 0.0 for alg in (first, second)}
    for algorithm, prob, _af, _bf, a, b in _enumerate_worlds(config):
        if a is None or b is None:
            continue
        cells[algorithm.algorithm_id][(a, b)] += prob
        reg_prob[algorithm.algorithm_id] += prob
    total_registered = sum(reg_prob.values())
    if total_registered <= 0.0:
        raise EmptyReportError(
            f"stage {config.stage} with filters "
            f"({config.alice_filter.value}, {config.bob_filter.value}) registers no joint trials"
        )
    alg_stats = []
    for alg in (first, second):
        aid = alg.algorithm_id
        if reg_prob[aid] > 0.0:
            freq = {pair: cells[aid][pair] / reg_prob[aid] for pair in SIGN_PAIRS}
        else:
            freq = {pair: 0.0 for pair in SIGN_PAIRS}
        am, bm, pm, corr = _moments(freq)
        alg_stats.append(
            AlgorithmStats(
                algorithm_id=aid,
                weight=reg_prob[aid] / total_registered,
                registered=None,
                joint_freq=freq,
                alice_mean=am,
                bob_mean=bm,
                pair_mean=pm,
                correlation=corr,
            )
        )
    joint = {
        pair: (cells[first.algorithm_id][pair] + cells[second.algorithm_id][pair])
        / total_registered
        for pair in SIGN_PAIRS
    }
    am, bm, pm, corr = _moments(joint)
    return AggregateReport(
        stage=config.stage,
        alice_filter=config.alice_filter,
        bob_filter=config.bob_filter,
        mode="analytic",
        trials=None,
        passages_per_observer=None,
        registered_trials=None,
        registered_fraction=total_registered,
        joint_freq=joint,
        alice_mean=am,
        bob_mean=bm,
        pair_mean=pm,
        correlation=corr,
        algorithms=tuple(alg_stats),
    )


@dataclass(frozen=True, slots=True)
class BallTrialArrays:
    """Column-oriented per-trial records of one simulated stage.

    ``alice_sign``/``bob_sign`` are 0 where the observer registered
    nothing; ``algorithm_index`` is 0 for the stage's first algorithm
    and 1 for its mirror.
    """

    algorithm_index: np.ndarray
    alice_color: np.ndarray
    alice_sign: np.ndarray
    bob_color: np.ndarray
    bob_sign: np.ndarray

    def __len__(self) -> int:
        return len(self.algorithm_index)

    @property
    def registered(self) -> np.ndarray:
        return (self.alice_sign != 0) & (self.bob_sign != 0)


def _signs_for_filter(
    config: StageConfig, observer: Addressee,
    s: np.ndarray, v: np.ndarray, filter_colors: np.ndarray,
) -> np.ndarray:
    """Registered sign per trial for one observer (0 = not registered)."""
    fixed, variable = STAGE_COLORS[config.stage]
    if observer is Addressee.ALICE:
        per_color = {fixed: s, variable: -v}
    else:
        per_color = {variable: v, fixed: -s}
    out = np.zeros(len(s), dtype=np.int8)
    for color, signs in per_color.items():
        out = np.where(filter_colors == ord(color.value), signs.astype(np.int8), out)
    return out


def _simulate_stage_chunk(config: StageConfig, lo: int, hi: int) -> BallTrialArrays:
    """Vectorized trials [lo, hi); draw-for-draw identical to the actor path."""
    n = hi - lo
    u = config.stream().trial_doubles(n, 4, start=lo)
    first, second = config.algorithms()
    alg_index = np.where(u[:, 0] < 0.5, 0, 1).astype(np.int8)
    s = np.where(alg_index == 0, first.fixed_alice_sign, second.fixed_alice_sign)
    correlated = u[:, 1] < first.correlated_prob
    v = np.where(correlated, s, -s)

    m = config.filter_mismatch_prob
    alice_filter = np.full(n, ord(config.alice_filter.value), dtype=np.uint8)
    bob_filter = np.full(n, ord(config.bob_filter.value), dtype=np.uint8)
    if m > 0.0:
        alice_alt = (
            ALICE_FILTERS[1] if config.alice_filter is ALICE_FILTERS[0] else ALICE_FILTERS[0]
        )
        bob_alt = BOB_FILTERS[1] if config.bob_filter is BOB_FILTERS[0] else BOB_FILTERS[0]
        alice_filter = np.where(u[:, 2] < m, ord(alice_alt.value), alice_filter).astype(np.uint8)
        bob_filter = np.where(u[:, 3] < m, ord(bob_alt.value), bob_filter).astype(np.uint8)

    alice_sign = _signs_for_filter(config, Addressee.ALICE, s, v, alice_filter)
    bob_sign = _signs_for_filter(config, Addressee.BOB, s, v, bob_filter)
    return BallTrialArrays(
        algorithm_index=alg_index,
        alice_color=alice_filter,
        alice_sign=alice_sign,
        bob_color=bob_filter,
        bob_sign=bob_sign,
    )


def _stage_counts(arrays: BallTrialArrays) -> np.ndarray:
    """8-cell integer histogram: algorithm (2) x registered sign pair (4)."""
    mask = arrays.registered
    alg = arrays.algorithm_index[mask].astype(np.int64)
    a = arrays.alice_sign[mask].astype(np.int64)
    b = arrays.bob_sign[mask].astype(np.int64)
    idx = alg * 4 + (1 - a) + (1 - b) // 2
    return np.bincount(idx, minlength=8)


def run_stage(config: StageConfig, workers: int = 1) -> AggregateReport:
    """Simulate a stage and aggregate the registered results.

    Trials where either observer registered nothing are excluded from
    the frequency denominators but still counted as passages.  The
    histogram is a sum of per-chunk integer counts, so the report is
    identical for every worker count.
    """
    bounds = [(lo, hi) for lo, hi in chunk_bounds(config.trials, workers) if hi > lo]
    if workers == 1 or len(bounds) <= 1:
        chunks = [_stage_counts(_simulate_stage_chunk(config, lo, hi)) for lo, hi in bounds]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            chunks = list(
                pool.map(lambda b: _stage_counts(_simulate_stage_chunk(config, *b)), bounds)
            )
    counts = np.sum(chunks, axis=0, dtype=np.int64)
    return _report_from_counts(config, counts)


def run_stage_records(config: StageConfig) -> tuple[AggregateReport, BallTrialArrays]:
    """Like :func:`run_stage` but also returns the per-trial records."""
    arrays = _simulate_stage_chunk(config, 0, config.trials)
    return _report_from_counts(config, _stage_counts(arrays)), arrays


def _report_from_counts(config: StageConfig, counts: np.ndarray) -> AggregateReport:
    first, second = config.algorithms()
    registered = int(counts.sum())
    if registered == 0:
        raise EmptyReportError(
            f"stage {config.stage} with filters "
            f"({config.alice_filter.value}, {config.bob_filter.value}) registered no joint "
            f"trials in {config.trials} emissions"
        )
    alg_stats = []
    for k, alg in enumerate((first, second)):
        sub = counts[4 * k : 4 * k + 4]
        n_alg = int(sub.sum())
        if n_alg > 0:
            freq = {pair: int(c) / n_alg for pair, c in zip(SIGN_PAIRS, sub)}
        else:
            freq = {pair: 0.0 for pair in SIGN_PAIRS}
        am, bm, pm, corr = _moments(freq)
        alg_stats.append(
            AlgorithmStats(
                algorithm_id=alg.algorithm_id,
                weight=n_alg / registered,
                registered=n_alg,
                joint_freq=freq,
                alice_mean=am,
                bob_mean=bm,
                pair_mean=pm,
                correlation=corr,
            )
        )
    joint = {
        pair: int(counts[i] + counts[4 + i]) / registered for i, pair in enumerate(SIGN_PAIRS)
    }
    am, bm, pm, corr = _moments(joint)
    return AggregateReport(
        stage=config.stage,
        alice_filter=config.alice_filter,
        bob_filter=config.bob_filter,
        mode="empirical",
        trials=config.trials,
        passages_per_observer=2 * config.trials,
        registered_trials=registered,
        registered_fraction=registered / config.trials,
        joint_freq=joint,
        alice_mean=am,
        bob_mean=bm,
        pair_mean=pm,
        correlation=corr,
        algorithms=tuple(alg_stats),
    )


def write_stage_csv(path, arrays: BallTrialArrays, config: StageConfig) -> None:
    """Per-trial CSV: trial, algorithm, alice_color, alice_sign, bob_color, bob_sign, registered."""
    ids = ALGORITHM_IDS[config.stage]
    registered = arrays.registered
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("trial,algorithm,alice_color,alice_sign,bob_color,bob_sign,registered\n")
        for i in range(len(arrays)):
            a_sign = int(arrays.alice_sign[i])
            b_sign = int(arrays.bob_sign[i])
            a_color = chr(int(arrays.alice_color[i])) if a_sign else ""
            b_color = chr(int(arrays.bob_color[i])) if b_sign else ""
            fh.write(
                f"{i},{ids[int(arrays.algorithm_index[i])]},"
                f"{a_color},{a_sign if a_sign else ''},"
                f"{b_color},{b_sign if b_sign else ''},"
                f"{int(registered[i])}\n"
            )


EXPECTED_FILTERS = {1: (Color.AMBER, Color.BLUE), 2: (Color.AMBER, Color.CHERRY),
                    3: (Color.CHERRY, Color.BLUE)}


@dataclass(frozen=True, slots=True)
class InequalityReport:
    """The cross-stage frequency inequality and whether it is violated.

    Compares the stage-1 both-positive frequency against the sum of the
    stage-2 and stage-3 both-positive frequencies.  Violation signals
    that composing frequencies across the three contexts as if they
    shared one conditioning variable is invalid, not that any stage's
    own statistics are inconsistent.
    """

    lhs: float
    rhs: float
    violated: bool
    mode: str
    terms: dict[str, float]

    @property
    def margin(self) -> float:
        return self.lhs - self.rhs

    def to_json_dict(self) -> dict:
        return {
            "lhs": self.lhs,
            "rhs": self.rhs,
            "margin": self.margin,
            "violated": self.violated,
            "mode": self.mode,
            "terms": dict(self.terms),
        }


def bell_inequality_check(reports: tuple[AggregateReport, ...]) -> InequalityReport:
    """Evaluate the cross-stage inequality from three stage reports.

    Requires reports for stages 1, 2, 3 (in order) with the canonical
    filter pairs (a,b), (a,c), (c,b); anything else is rejected.
    """
    if len(reports) != 3:
        raise ValidationError("expected exactly three stage reports")
    for report, stage in zip(reports, (1, 2, 3)):
        if report.stage != stage:
            raise ValidationError(f"expected stage {stage}, got stage {report.stage}")
        expected = EXPECTED_FILTERS[stage]
        if (report.alice_filter, report.bob_filter) != expected:
            raise ValidationError(
                f"stage {stage} requires filters ({expected[0].value}, {expected[1].value}), "
                f"got ({report.alice_filter.value}, {report.bob_filter.value})"
            )
    # Registered-trial frequencies, as the remote computer tabulates them.
    both_plus = [r.joint_freq[(1, 1)] for r in reports]
    modes = {r.mode for r in reports}
    lhs = both_plus[0]
    rhs = both_plus[1] + both_plus[2]
    return InequalityReport(
        lhs=lhs,
        rhs=rhs,
        violated=lhs > rhs,
        mode=modes.pop() if len(modes) == 1 else "mixed",
        terms={
            "stage1_plus_plus": both_plus[0],
            "stage2_plus_plus": both_plus[1],
            "stage3_plus_plus": both_plus[2],
        },
    )


@dataclass(frozen=True, slots=True)
class DecompositionRecord:
    """Weighted per-algorithm composition of one joint frequency.

    The only admissible way to combine the two algorithms' conditional
    frequencies is the equal-weight total-probability composition; this
    record carries that composition next to the directly evaluated
    frequency, which it must reproduce.
    """

    stage: int
    event: str
    conditionals: dict[str, float]
    weights: dict[str, float]
    composed: float
    direct: float

    @property
    def difference(self) -> float:
        return abs(self.composed - self.direct)

    def to_json_dict(self) -> dict:
        return {
            "stage": self.stage,
            "event": self.event,
            "conditionals": dict(self.conditionals),
            "weights": dict(self.weights),
            "composed": self.composed,
            "direct": self.direct,
            "difference": self.difference,
        }


def contextual_decomposition(
    config: StageConfig, alice_sign: int, bob_sign: int
) -> DecompositionRecord:
    """Decompose a registered joint frequency over the stage's algorithms.

    The event is "Alice registers ``alice_sign`` on her filter color
    and Bob registers ``bob_sign`` on his"; both the per-algorithm
    conditionals and the direct unconditional frequency are exact.
    """
    _require_sign(alice_sign, "alice_sign")
    _require_sign(bob_sign, "bob_sign")
    first, second = config.algorithms()
    # The event names the configured filter colors, so in mismatch worlds
    # (device flipped to the other color) it does not occur.
    matched = {first.algorithm_id: 0.0, second.algorithm_id: 0.0}
    direct = 0.0
    for algorithm, prob, af, bf, a, b in _enumerate_worlds(config):
        if (
            af is config.alice_filter
            and bf is config.bob_filter
            and a == alice_sign
            and b == bob_sign
        ):
            matched[algorithm.algorithm_id] += prob
            direct += prob
    conditionals = {aid: mass / 0.5 for aid, mass in matched.items()}
    weights = {first.algorithm_id: 0.5, second.algorithm_id: 0.5}
    composed = sum(weights[aid] * conditionals[aid] for aid in sorted(conditionals))
    event = (
        f"{config.alice_filter.value}_A{_SIGN_GLYPH[alice_sign]}; "
        f"{config.bob_filter.value}_B{_SIGN_GLYPH[bob_sign]}"
    )
    return DecompositionRecord(
        stage=config.stage,
        event=event,
        conditionals=conditionals,
        weights=weights,
        composed=composed,
        direct=direct,
    )
