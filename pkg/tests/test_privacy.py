import math, itertools
import numpy as np
import pytest
from hypothesis import given, strategies as st
from src.models.decision import DpParams
from src.models.distribution import Bernoulli, FiniteDiscrete
from src.models.sample_set import SampleSet
from src.services.divergences import delta_max
from src.services.hypothesis_tests import hellinger_decide, hellinger_statistic
from src.services.privacy import dp_hellinger_decide, laplace_inverse_cdf, laplace_sample, laplace_samples
from src.utils.seeding import make_rng


class TestLaplace:
    def test_moments(self):
        draws = laplace_samples(1.0, 10 ** 6, 5)
        assert draws.mean() == pytest.approx(0.0, abs=0.005)
        assert draws.var() == pytest.approx(2.0, abs=0.02)

    def test_median_maps_to_zero(self):
        assert laplace_inverse_cdf(0.0, 3.0) == 0.0

    def test_quantile_formula(self):
        assert laplace_inverse_cdf(0.25, 2.0) == pytest.approx(-2.0 * math.log(0.5))
        assert laplace_inverse_cdf(-0.25, 2.0) == pytest.approx(2.0 * math.log(0.5))

    def test_vectorized(self):
        values = laplace_inverse_cdf(np.array([-0.25, 0.0, 0.25]), 1.0)
        np.testing.assert_allclose(values, [-math.log(2), 0.0, math.log(2)])

    def test_deterministic(self):
        assert laplace_sample(2.0, 17) == laplace_sample(2.0, 17)
        assert laplace_sample(2.0, 17) != laplace_sample(2.0, 18)

    def test_scale_must_be_positive(self):
        with pytest.raises(ValueError):
            laplace_samples(0.0, 10, 0)

    def test_dp_params_validation(self):
        with pytest.raises(ValueError):
            DpParams(0.0)
        with pytest.raises(ValueError):
            DpParams(1.0, delta_pq=1.5)
        assert DpParams(0.5).noise_scale == 4.0
        assert DpParams(2.0, delta_pq=0.5).noise_scale == 0.5


def random_full_support_pair(seed):
    rng = make_rng(seed)
    k = int(rng.integers(2, 6))
    atoms = tuple(float(a) for a in range(k))
    # floor keeps every atom charged under both laws
    p = 0.05 + 0.95 * rng.dirichlet(np.ones(k))
    q = 0.05 + 0.95 * rng.dirichlet(np.ones(k))
    return FiniteDiscrete(atoms, tuple(p / p.sum())), FiniteDiscrete(atoms, tuple(q / q.sum()))


class TestSensitivity:
    P = FiniteDiscrete((0.0, 1.0, 2.0), (0.5, 0.3, 0.2))
    Q = FiniteDiscrete((0.0, 1.0, 2.0), (0.2, 0.3, 0.5))

    @given(st.lists(st.sampled_from([0.0, 1.0, 2.0]), min_size=1, max_size=30),
           st.integers(min_value=0), st.sampled_from([0.0, 1.0, 2.0]))
    def test_single_swap_moves_statistic_by_at_most_two_delta_over_n(self, values, index, replacement):
        xs = SampleSet.of(values)
        swapped = xs.replace_at(index % xs.n, replacement)
        bound = 2 * delta_max(self.P, self.Q).value / xs.n
        gap = abs(hellinger_statistic(self.P, self.Q, xs) - hellinger_statistic(self.P, self.Q, swapped))
        assert gap <= bound + 1e-12

    @pytest.mark.parametrize("seed", range(12))
    def test_every_swap_on_small_samples(self, seed):
        p, q = random_full_support_pair(seed)
        delta = delta_max(p, q).value
        assert delta < 1.0
        for n in (1, 2, 3):
            worst = 0.0
            for values in itertools.product(p.atoms, repeat=n):
                xs = SampleSet.of(values)
                base = hellinger_statistic(p, q, xs)
                for index in range(n):
                    for replacement in p.atoms:
                        gap = abs(base - hellinger_statistic(p, q, xs.replace_at(index, replacement)))
                        worst = max(worst, gap)
            assert worst <= 2 * delta / n + 1e-12
            assert worst >= delta / n - 1e-12


class TestPrivateDecision:
    def test_zero_sensitivity_matches_plain_test(self):
        p, q = Bernoulli(0.2), Bernoulli(0.7)
        xs = SampleSet.of([0, 0, 1, 0])
        private = dp_hellinger_decide(p, q, xs, DpParams(1.0, delta_pq=0.0))
        plain = hellinger_decide(p, q, xs)
        assert private == plain

    def test_huge_budget_agrees_with_plain_test(self):
        p, q = Bernoulli(0.2), Bernoulli(0.7)
        xs = SampleSet.of([0, 0, 1, 0, 0])
        private = dp_hellinger_decide(p, q, xs, DpParams(1e12, noise_seed=3))
        assert private.verdict is hellinger_decide(p, q, xs).verdict
        assert private.statistic == pytest.approx(hellinger_statistic(p, q, xs), abs=1e-9)

    def test_noise_is_reproducible(self):
        p, q = Bernoulli(0.2), Bernoulli(0.7)
        xs = SampleSet.of([0, 1])
        dp = DpParams(0.5, noise_seed=21)
        assert dp_hellinger_decide(p, q, xs, dp) == dp_hellinger_decide(p, q, xs, dp)

    def test_noise_is_scaled_by_sample_size(self):
        p, q = Bernoulli(0.2), Bernoulli(0.7)
        xs = SampleSet.of([0] * 10)
        dp = DpParams(1.0, noise_seed=8)
        decision = dp_hellinger_decide(p, q, xs, dp)
        expected = hellinger_statistic(p, q, xs) + laplace_sample(dp.noise_scale, 8) / 10
        assert decision.statistic == pytest.approx(expected, abs=1e-15)
