import numpy as np
import pytest
import estimator.montecarlo as montecarlo
from estimator import (Ar1Spec, Innovation, consistency_experiment, coverage_experiment,
                       h_rule_of_thumb, normality_experiment, simulate_ar1)
from estimator.errors import InvalidAlpha, InvalidSpec
from estimator.montecarlo import replication_seed, true_conditional_cdf


class TestAr1Spec:
    @pytest.mark.parametrize("kwargs", [{"phi": 1.0}, {"phi": -1.2}, {"burn_in": 50}, {"n": 0},
                                        {"innovation": Innovation.student_t(0.0)},
                                        {"innovation": Innovation.gaussian(0.0)}])
    def test_invalid_specs(self, kwargs):
        with pytest.raises(InvalidSpec):
            Ar1Spec(**kwargs)

    def test_stationary_sd(self):
        assert Ar1Spec(phi=0.76).stationary_sd() ** 2 == pytest.approx(1.0 / (1.0 - 0.76 ** 2))


class TestSimulateAr1:
    def test_length_and_determinism(self):
        spec = Ar1Spec(n=300, seed=42)
        first, second = simulate_ar1(spec), simulate_ar1(spec)
        assert len(first) == 300
        np.testing.assert_array_equal(first.values, second.values)
        assert not np.array_equal(first.values, simulate_ar1(Ar1Spec(n=300, seed=43)).values)

    def test_white_noise_has_no_autocorrelation(self):
        n = 4000
        values = simulate_ar1(Ar1Spec(phi=0.0, n=n, seed=5)).values
        assert abs(np.corrcoef(values[:-1], values[1:])[0, 1]) <= 3.0 / np.sqrt(n)

    def test_stationary_variance(self):
        values = simulate_ar1(Ar1Spec(phi=0.76, n=20000, seed=9)).values
        assert np.var(values) == pytest.approx(1.0 / (1.0 - 0.76 ** 2), rel=0.10)

    def test_student_t_innovations(self):
        values = simulate_ar1(Ar1Spec(innovation=Innovation.student_t(2.5), n=1000, seed=2)).values
        assert np.all(np.isfinite(values))


class TestReplicationSeeds:
    def test_stable_and_distinct(self):
        seeds = [replication_seed(7, r) for r in range(100)]
        assert seeds == [replication_seed(7, r) for r in range(100)]
        assert len(set(seeds)) == 100
        assert replication_seed(7, 0, 1) != replication_seed(7, 1, 0)


class TestTrueConditionalCdf:
    def test_median_has_no_curvature(self):
        F, Fpp, f_y = true_conditional_cdf(Ar1Spec(), 1.0, 0.76)
        assert F == pytest.approx(0.5)
        assert Fpp == 0.0
        assert f_y > 0


class TestCoverageExperiment:
    def test_independent_of_worker_count(self):
        spec = Ar1Spec(n=150, seed=5)
        serial = coverage_experiment(spec, 0.1, holdout=2, replications=12, workers=1)
        threaded = coverage_experiment(spec, 0.1, holdout=2, replications=12, workers=4)
        assert serial.as_dict() == threaded.as_dict()

    def test_standard_error_matches_pooled_tallies(self):
        report = coverage_experiment(Ar1Spec(n=150, seed=6), 0.1, holdout=3, replications=10)
        assert report.trials + report.skipped == report.replications * 3
        c = report.empirical_coverage
        assert report.std_error == pytest.approx(np.sqrt(c * (1 - c) / report.trials))
        assert len(report.per_step_coverage) == 3
        assert 0.0 <= c <= 1.0

    def test_steps_without_local_data_are_widened_not_skipped(self):
        report = coverage_experiment(Ar1Spec(n=150, seed=6), 0.1, holdout=3, replications=5, h=1e-4)
        assert report.skipped == 0 and report.valid
        assert report.widened > 0 and report.trials == 15

    def test_interval_bandwidth_is_doubled_rule_of_thumb(self, monkeypatch):
        widths = []
        fit = montecarlo.fit_cdf_widening

        def recording(samples, y, spec):
            widths.append(spec.h / h_rule_of_thumb(samples).h)
            return fit(samples, y, spec)

        monkeypatch.setattr(montecarlo, "fit_cdf_widening", recording)
        coverage_experiment(Ar1Spec(n=150, seed=2), 0.05, holdout=2, replications=3)
        assert widths == pytest.approx([2.0] * 6)

    def test_alpha_near_one_collapses_intervals(self):
        report = coverage_experiment(Ar1Spec(n=200, seed=8), 0.99999, holdout=2, replications=20)
        assert report.empirical_coverage <= 0.1
        assert report.mean_width < 0.05

    def test_invalid_alpha(self):
        with pytest.raises(InvalidAlpha):
            coverage_experiment(Ar1Spec(n=150), 1.0, holdout=1, replications=1)

    def test_invalid_holdout(self):
        with pytest.raises(InvalidSpec):
            coverage_experiment(Ar1Spec(n=150), 0.05, holdout=0, replications=1)

    @pytest.mark.slow
    @pytest.mark.parametrize("seed", [2024, 1, 2, 3])
    def test_gaussian_coverage_near_nominal(self, seed):
        report = coverage_experiment(Ar1Spec(phi=0.76, n=495, seed=seed), 0.05, holdout=5, replications=400)
        assert report.valid
        assert 0.92 <= report.empirical_coverage <= 0.98

    @pytest.mark.slow
    @pytest.mark.parametrize("seed", [2025, 1, 2])
    def test_heavy_tailed_coverage_near_nominal(self, seed):
        spec = Ar1Spec(phi=0.76, innovation=Innovation.student_t(2.5), n=495, seed=seed)
        report = coverage_experiment(spec, 0.05, holdout=5, replications=400)
        assert report.valid
        assert 0.91 <= report.empirical_coverage <= 0.99


class TestNormalityExperiment:
    def test_requires_gaussian_innovations(self):
        with pytest.raises(InvalidSpec):
            normality_experiment(Ar1Spec(innovation=Innovation.student_t(3.0)), 0.0, 0.5, 10)

    def test_reproducible(self):
        spec = Ar1Spec(n=300, seed=4)
        first = normality_experiment(spec, 0.0, 0.5, 20)
        second = normality_experiment(spec, 0.0, 0.5, 20, workers=3)
        np.testing.assert_array_equal(first.standardized_errors, second.standardized_errors)

    @pytest.mark.slow
    def test_standardised_statistic_is_standard_normal(self):
        R = 500
        report = normality_experiment(Ar1Spec(n=2000, seed=31), y=0.0, z=0.5, replications=R)
        assert report.sample_count == R
        assert abs(report.mean) <= 3.0 / np.sqrt(R)
        assert 0.8 <= report.variance <= 1.25
        assert report.ks_statistic <= 0.08


class TestConsistencyExperiment:
    def test_median_target_at_zero(self):
        report = consistency_experiment(Ar1Spec(seed=1), 0.5, [100, 200], replications=3)
        assert report.target == 0.0

    def test_white_noise_target_ignores_conditioning_value(self):
        spec = Ar1Spec(phi=0.0, seed=1)
        high = consistency_experiment(spec, 0.8, [100, 200], replications=3, y=0.9)
        low = consistency_experiment(spec, 0.8, [100, 200], replications=3, y=-0.4)
        assert high.target == low.target

    def test_sample_sizes_must_increase(self):
        with pytest.raises(InvalidSpec):
            consistency_experiment(Ar1Spec(), 0.5, [800, 200], replications=3)

    @pytest.mark.slow
    def test_error_decreases_with_sample_size(self):
        report = consistency_experiment(Ar1Spec(seed=17), 0.5, [200, 800, 3200], replications=100)
        assert all(b < a for a, b in zip(report.errors, report.errors[1:]))
        assert report.nonincreasing
