import numpy as np
import pytest
from estimator import (LaggedSample, PredictionInterval, argmin_check, cdf_eval, fit_cdf, pinball_loss,
                       point_forecast, prediction_interval, quantile)
from estimator.errors import EmptyGrid, InvalidAlpha, InvalidTau


@pytest.fixture
def single_atom(epa):
    return fit_cdf(LaggedSample([0.0, 10.0], [5.0, 7.0]), 0.0, epa(1.0))


@pytest.fixture
def two_atoms(epa):
    return lambda z0, z1: fit_cdf(LaggedSample([-0.5, 0.5], [z0, z1]), 0.0, epa(1.0))


def random_fit(rng, epa, n=None):
    n = n or int(rng.integers(10, 200))
    Y = rng.normal(size=n)
    samples = LaggedSample(Y, 0.5 * Y + rng.standard_t(3, size=n))
    return fit_cdf(samples, float(rng.choice(Y)), epa(rng.uniform(0.3, 2.0)))


class TestQuantile:
    def test_single_atom(self, single_atom):
        assert quantile(single_atom, 0.999) == 5.0
        assert quantile(single_atom, 0.001) == 5.0

    def test_two_equal_atoms(self, two_atoms):
        f = two_atoms(0.0, 1.0)
        assert quantile(f, 0.5) == 0.0
        assert quantile(f, 0.5 + 1e-9) == 1.0
        assert point_forecast(f) == 0.0

    @pytest.mark.parametrize("tau", [0.0, 1.0, -0.1, 1.5])
    def test_invalid_tau(self, single_atom, tau):
        with pytest.raises(InvalidTau):
            quantile(single_atom, tau)

    def test_three_point_scan(self, epa):
        f = fit_cdf(LaggedSample([-0.5, 0.0, 0.4], [1.0, 2.0, 3.0]), 0.0, epa(1.0))
        for tau in (0.25, 0.5, 0.9):
            expected = f.sorted_z[next(i for i, c in enumerate(f.cum_w) if c >= tau)]
            assert quantile(f, tau) == expected

    def test_monotone_in_tau_and_inverts_cdf(self, rng, epa):
        taus = np.linspace(0.01, 0.99, 99)
        for _ in range(200):
            f = random_fit(rng, epa)
            qs = [quantile(f, tau) for tau in taus]
            assert all(b >= a for a, b in zip(qs, qs[1:]))
            for tau, q in zip(taus, qs):
                index = int(np.searchsorted(f.sorted_z, q))
                assert cdf_eval(f, q) < tau <= f.cum_w[index]

    def test_equivariant_under_shift_of_responses(self, rng, epa):
        Y = rng.normal(size=120)
        Z = rng.normal(size=120)
        base = fit_cdf(LaggedSample(Y, Z), 0.0, epa(0.8))
        shifted = fit_cdf(LaggedSample(Y, Z + 4.0), 0.0, epa(0.8))
        for tau in (0.1, 0.5, 0.9):
            assert quantile(shifted, tau) == pytest.approx(quantile(base, tau) + 4.0, abs=1e-12)


class TestPredictionInterval:
    def test_tiny_alpha_spans_support(self, two_atoms):
        interval = prediction_interval(two_atoms(-2.0, 3.0), 1e-9)
        assert (interval.lower, interval.upper) == (-2.0, 3.0)

    def test_symmetric_two_atoms(self, two_atoms):
        interval = prediction_interval(two_atoms(0.0, 1.0), 0.5)
        assert (interval.lower, interval.upper) == (0.0, 1.0)
        assert interval.level == 0.5

    def test_nested_in_alpha(self, rng, epa):
        for _ in range(50):
            f = random_fit(rng, epa)
            wide, narrow = prediction_interval(f, 0.05), prediction_interval(f, 0.2)
            assert wide.lower <= narrow.lower <= narrow.upper <= wide.upper

    @pytest.mark.parametrize("alpha", [0.0, 1.0, 2.0])
    def test_invalid_alpha(self, single_atom, alpha):
        with pytest.raises(InvalidAlpha):
            prediction_interval(single_atom, alpha)

    def test_contains_is_closed(self):
        interval = PredictionInterval(lower=1.0, upper=2.0, level=0.9, alpha=0.1)
        assert interval.contains(1.0) and interval.contains(2.0) and not interval.contains(2.5)
        assert interval.width == 1.0


class TestPinballLoss:
    @pytest.mark.parametrize("tau,z,g,expected", [(0.3, 3.0, 3.0, 0.0), (0.5, 1.0, 0.0, 0.5), (0.95, 0.0, 1.0, 0.05)])
    def test_values(self, tau, z, g, expected):
        assert pinball_loss(tau, z, g) == pytest.approx(expected, abs=1e-15)

    def test_vectorised_and_nonnegative(self, rng):
        z, g = rng.normal(size=100), rng.normal(size=100)
        losses = pinball_loss(0.2, z, g)
        assert losses.shape == (100,) and np.all(losses >= 0)


class TestArgminCheck:
    def test_single_atom(self, single_atom):
        for tau in (0.1, 0.5, 0.9):
            assert argmin_check(single_atom, tau, [4.0, 5.0, 6.0]) == 5.0

    def test_flat_objective_picks_smallest(self, two_atoms):
        assert argmin_check(two_atoms(0.0, 1.0), 0.5, [1.0, 0.5, 0.0, 0.25]) == 0.0

    def test_empty_candidates(self, single_atom):
        with pytest.raises(EmptyGrid):
            argmin_check(single_atom, 0.5, [])

    def test_matches_quantile_on_ten_atom_fits(self, rng, epa):
        taus = np.round(np.arange(0.1, 1.0, 0.1), 10)
        for _ in range(20):
            f = random_fit(rng, epa, n=10)
            grid = np.arange(f.sorted_z[0] - 0.5, f.sorted_z[-1] + 0.5, 1e-4)
            candidates = np.concatenate([grid, f.sorted_z])
            for tau in taus:
                # Candidates within rounding distance of the atom tie with it
                assert argmin_check(f, tau, candidates) == pytest.approx(quantile(f, tau), abs=1e-4)

    def test_rounding_neighbour_of_atom_ties_with_it(self, two_atoms):
        f = two_atoms(-1.4107272729189848, 2.0)
        chosen = argmin_check(f, 0.25, [-1.4107272729190399, -1.4107272729189848, 0.0])
        assert chosen == pytest.approx(quantile(f, 0.25), abs=1e-12)

    def test_pinball_duality_on_random_fits(self, rng, epa):
        for _ in range(200):
            f = random_fit(rng, epa)
            for tau in (0.05, 0.25, 0.5, 0.75, 0.95):
                assert argmin_check(f, tau, f.sorted_z) == quantile(f, tau)
