"""Monte Carlo engine: sampling, determinism, analytic agreement, CHSH."""

import math

import numpy as np
import pytest

from bellsim import montecarlo as mc
from bellsim.errors import ValidationError
from bellsim.rng import RngStream
from bellsim.spinmodel import Description, Direction

A0 = Direction(0.0)


def config(phi, trials, description=Description.ALICE, seed=0, stream_id=0):
    return mc.ExperimentConfig(A0, Direction(phi), trials, description, seed, stream_id)


class TestSampleHiddenVariable:
    def test_balanced_at_default_seed(self):
        u = RngStream(0, 0).trial_doubles(1_000_000, 1)[:, 0]
        frac_plus = float(np.mean(u < 0.5))
        assert 0.499 <= frac_plus <= 0.501

    def test_deterministic_repeat(self):
        axis = Direction(0.3)
        first = [
            mc.sample_hidden_variable(axis, RngStream(5, 1).trial_generator(i)).first_particle
            for i in range(50)
        ]
        second = [
            mc.sample_hidden_variable(axis, RngStream(5, 1).trial_generator(i)).first_particle
            for i in range(50)
        ]
        assert first == second

    def test_anchored_to_requested_axis(self):
        axis = Direction(1.7)
        lam = mc.sample_hidden_variable(axis, RngStream(0).generator())
        assert lam.axis == axis
        assert lam.first_particle in (1, -1)


class TestSimulateTrial:
    def test_equal_axes_always_anticorrelated(self):
        cfg = config(0.0, 1)
        for i in range(500):
            rec = mc.simulate_trial(cfg, cfg.stream().trial_generator(i))
            assert rec.outcome2 == -rec.outcome1

    @pytest.mark.parametrize("description", [Description.ALICE, Description.BOB])
    def test_matches_vectorized_engine(self, description):
        cfg = config(1.1, 4096, description=description, seed=31)
        stats, arrays = mc.run_experiment_records(cfg)
        for i in range(len(arrays)):
            rec = mc.simulate_trial(cfg, cfg.stream().trial_generator(i))
            assert rec == arrays.record(i)

    def test_anchored_observer_reads_off_hidden_variable(self):
        cfg = config(0.9, 1, description=Description.BOB, seed=2)
        rec = mc.simulate_trial(cfg, cfg.stream().trial_generator(0))
        assert rec.outcome2 == -rec.lambda_sign


class TestRunExperiment:
    def test_sixty_degrees_matches_analytic(self):
        cfg = config(math.pi / 3, 1_000_000, seed=7)
        stats = mc.run_experiment(cfg)
        tol = mc.covariance_tolerance(-0.5, cfg.trials)
        assert abs(stats.covariance - (-0.5)) <= tol

    def test_equal_axes_exact_anticorrelation(self):
        for seed in (0, 1, 99):
            stats = mc.run_experiment(config(0.0, 100_000, seed=seed))
            assert stats.counts[0] == 0 and stats.counts[3] == 0
            assert stats.pair_mean == -1.0
            assert abs(stats.covariance + 1.0) <= 9.0 / stats.trials

    def test_orthogonal_axes_near_zero(self):
        stats = mc.run_experiment(config(math.pi / 2, 1_000_000, seed=3))
        assert abs(stats.covariance) < 0.004

    def test_marginals_vanish(self):
        stats = mc.run_experiment(config(1.234, 1_000_000, seed=17))
        bound = 4.0 / math.sqrt(stats.trials)
        assert abs(stats.mean1) < bound and abs(stats.mean2) < bound

    def test_histogram_sums_to_trials(self):
        stats = mc.run_experiment(config(0.77, 12345, seed=5))
        assert sum(stats.counts) == stats.trials

    @pytest.mark.parametrize("workers", [2, 3, 8])
    def test_worker_count_invariance(self, workers):
        cfg = config(0.6, 100_001, seed=13)
        assert mc.run_experiment(cfg, workers=workers) == mc.run_experiment(cfg)

    def test_repeat_runs_identical(self):
        cfg = config(0.6, 50_000, seed=13)
        assert mc.run_experiment(cfg) == mc.run_experiment(cfg)

    def test_plus_plus_frequency_at_sixty_degrees(self):
        # Oracle: half the trials anchor the hidden variable at +1, and only
        # those can produce (+,+), with probability (1 - cos(pi/3))/2.
        expected = 0.5 * 0.5 * (1.0 - math.cos(math.pi / 3))
        stats = mc.run_experiment(config(math.pi / 3, 1_000_000, seed=0))
        assert stats.counts[0] / stats.trials == pytest.approx(expected, abs=0.002)

    def test_conditional_frequency_at_right_angle(self):
        cfg = config(math.pi / 2, 1_000_000, seed=0)
        stats, arrays = mc.run_experiment_records(cfg)
        sel = arrays.outcome1 == 1
        freq = float(np.mean(arrays.outcome2[sel] == 1))
        assert 0.497 <= freq <= 0.503

    def test_per_lambda_conditional_matches_model(self):
        phi = 1.05
        cfg = config(phi, 400_000, seed=21)
        _, arrays = mc.run_experiment_records(cfg)
        for sign in (1, -1):
            sel = arrays.lambda_sign == sign
            n = int(np.sum(sel))
            freq = float(np.mean(arrays.outcome2[sel] == 1))
            expected = 0.5 * (1.0 - sign * math.cos(phi))
            assert abs(freq - expected) <= 5.0 / math.sqrt(n)

    def test_rejects_zero_trials(self):
        with pytest.raises(ValidationError):
            mc.ExperimentConfig(A0, A0, 0)


class TestDescriptionEquivalence:
    def test_quarter_pi(self):
        comp = mc.description_equivalence(A0, Direction(math.pi / 4), 1_000_000, seed=8)
        target = -math.cos(math.pi / 4)
        assert abs(comp.alice.covariance - target) < 0.006
        assert abs(comp.bob.covariance - target) < 0.006
        assert comp.discrepancy < 0.006
        assert comp.passed

    def test_equal_axes(self):
        comp = mc.description_equivalence(A0, A0, 100_000, seed=4)
        assert comp.alice.pair_mean == -1.0 and comp.bob.pair_mean == -1.0
        assert comp.passed

    def test_antiparallel_axes(self):
        comp = mc.description_equivalence(A0, Direction(math.pi), 100_000, seed=4)
        assert comp.alice.pair_mean == 1.0 and comp.bob.pair_mean == 1.0
        assert comp.analytic == pytest.approx(1.0, abs=1e-12)
        assert comp.passed

    def test_uses_independent_streams(self):
        comp = mc.description_equivalence(A0, Direction(0.5), 10_000, seed=8)
        assert comp.alice.counts != comp.bob.counts


OPTIMAL = (Direction(0.0), Direction(math.pi / 2), Direction(math.pi / 4),
           Direction(3 * math.pi / 4))


class TestChsh:
    def test_analytic_optimal_angles(self):
        # Oracle: direct cosine substitution into the CHSH combination.
        a, ap, b, bp = 0.0, math.pi / 2, math.pi / 4, 3 * math.pi / 4
        expected = (
            -math.cos(b - a) + math.cos(bp - a) - math.cos(b - ap) - math.cos(bp - ap)
        )
        value = mc.chsh_value(*OPTIMAL)
        assert value == pytest.approx(expected, abs=1e-12)
        assert value == pytest.approx(-2.0 * math.sqrt(2.0), abs=1e-12)

    def test_all_directions_equal(self):
        a = Direction(0.3)
        assert mc.chsh_value(a, a, a, a) == pytest.approx(-2.0, abs=1e-12)

    def test_empirical_optimal_angles(self):
        value = mc.chsh_value(*OPTIMAL, mode="empirical", trials=1_000_000, seed=20240901)
        assert value == pytest.approx(-2.0 * math.sqrt(2.0), abs=0.012)

    def test_exceeds_local_bound_in_both_modes(self):
        assert abs(mc.chsh_value(*OPTIMAL)) > 2.0
        emp = mc.chsh_value(*OPTIMAL, mode="empirical", trials=200_000, seed=6)
        assert abs(emp) > 2.0

    def test_contexts_use_distinct_streams(self):
        details = mc.chsh_details(*OPTIMAL, mode="empirical", trials=5_000, seed=1)
        histograms = [ctx.stats.counts for ctx in details.contexts]
        assert len(set(histograms)) == len(histograms)

    def test_labeled_as_derived(self):
        for mode in ("analytic", "empirical"):
            details = mc.chsh_details(*OPTIMAL, mode=mode, trials=1_000, seed=1)
            assert "derived demonstration" in details.note
            assert "derived demonstration" in details.to_json_dict()["note"]

    def test_rejects_unknown_mode(self):
        with pytest.raises(ValidationError):
            mc.chsh_value(*OPTIMAL, mode="exact")


class TestEmpiricalStats:
    def test_from_counts_consistency(self):
        stats = mc.EmpiricalStats.from_counts((10, 20, 30, 40), 100)
        assert stats.mean1 == pytest.approx((10 + 20 - 30 - 40) / 100)
        assert stats.mean2 == pytest.approx((10 - 20 + 30 - 40) / 100)
        assert stats.pair_mean == pytest.approx((10 - 20 - 30 + 40) / 100)
        assert stats.covariance == pytest.approx(stats.pair_mean - stats.mean1 * stats.mean2)

    def test_rejects_inconsistent_totals(self):
        with pytest.raises(ValidationError):
            mc.EmpiricalStats.from_counts((1, 2, 3, 4), 11)

    def test_json_round_trippable(self):
        import json

        stats = mc.run_experiment(config(0.3, 1000, seed=1))
        payload = json.dumps(stats.to_json_dict())
        assert json.loads(payload)["trials"] == 1000


def test_write_trials_csv(tmp_path):
    cfg = config(0.8, 200, seed=3)
    _, arrays = mc.run_experiment_records(cfg)
    path = tmp_path / "trials.csv"
    mc.write_trials_csv(path, arrays)
    lines = path.read_text().splitlines()
    assert lines[0] == "trial,lambda_sign,outcome1,outcome2"
    assert len(lines) == 201
    first = lines[1].split(",")
    assert first[0] == "0"
    assert all(v in ("1", "-1") for v in first[1:])
