import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from namefit.distributions import (
    RandomSource,
    binom_cdf,
    binom_pmf,
    chisq_cdf,
    chisq_quantile,
    chisq_sf,
    hypergeom_cdf,
    hypergeom_pmf,
    noncentral_chisq_sf,
    normal_cdf,
    normal_quantile,
)
from namefit.errors import NumericError


class TestChisqSf:
    def test_at_zero_is_one(self):
        for df in (1, 2, 5, 50):
            assert chisq_sf(0.0, df) == 1.0

    def test_df2_is_exponential(self):
        # df=2 chi-square is exponential with mean 2: sf(x) = exp(-x/2)
        assert chisq_sf(2.0, 2) == pytest.approx(math.exp(-1.0), abs=1e-13)
        assert chisq_sf(7.0, 2) == pytest.approx(math.exp(-3.5), abs=1e-13)

    def test_dice_example_statistic(self):
        assert chisq_sf(13.4, 5) == pytest.approx(0.0199052, abs=1e-6)

    def test_df1_via_normal(self):
        # chi-square(1) sf(x) = 2 * (1 - Phi(sqrt(x)))
        for x in (0.5, 1.0, 3.84, 9.0):
            expected = 2.0 * (1.0 - normal_cdf(math.sqrt(x)))
            assert chisq_sf(x, 1) == pytest.approx(expected, abs=1e-12)

    @given(
        x=st.floats(min_value=0.0, max_value=1000.0),
        df=st.integers(min_value=1, max_value=200),
    )
    def test_sf_plus_cdf_is_one(self, x, df):
        assert chisq_sf(x, df) + chisq_cdf(x, df) == pytest.approx(1.0, abs=1e-12)

    @given(df=st.integers(min_value=1, max_value=100))
    def test_monotone_nonincreasing(self, df):
        xs = [0.0, 0.5, 1.0, 2.0, 5.0, 10.0, 50.0, 200.0]
        values = [chisq_sf(x, df) for x in xs]
        assert all(a >= b for a, b in zip(values, values[1:]))

    def test_domain_errors(self):
        with pytest.raises(NumericError):
            chisq_sf(-1.0, 5)
        with pytest.raises(NumericError):
            chisq_sf(1.0, 0)


class TestNoncentral:
    def test_zero_lambda_reduces_to_central(self):
        rng = np.random.default_rng(42)
        for _ in range(100):
            x = float(rng.uniform(0.0, 100.0))
            df = int(rng.integers(1, 50))
            assert noncentral_chisq_sf(x, df, 0.0) == pytest.approx(
                chisq_sf(x, df), abs=1e-10
            )

    def test_published_power_anchors(self):
        critical = chisq_quantile(0.95, 5)
        assert noncentral_chisq_sf(critical, 5, 2.5) == pytest.approx(0.18898, abs=2e-4)
        assert noncentral_chisq_sf(critical, 5, 20.0) == pytest.approx(0.95234, abs=2e-4)

    def test_monotone_in_lambda(self):
        values = [noncentral_chisq_sf(11.07, 5, lam) for lam in (0.0, 1.0, 5.0, 20.0, 80.0)]
        assert all(a < b for a, b in zip(values, values[1:]))

    def test_against_monte_carlo(self):
        # Independent oracle: sample the noncentral distribution directly.
        rng = np.random.default_rng(7)
        df, lam, x = 5, 12.0, 20.0
        samples = rng.noncentral_chisquare(df, lam, size=1_000_000)
        estimate = (samples > x).mean()
        se = math.sqrt(estimate * (1.0 - estimate) / len(samples))
        assert abs(noncentral_chisq_sf(x, df, lam) - estimate) < 3.0 * se

    def test_large_lambda_converges(self):
        value = noncentral_chisq_sf(500.0, 5, 400.0)
        assert 0.0 < value < 1.0

    def test_negative_lambda_rejected(self):
        with pytest.raises(NumericError):
            noncentral_chisq_sf(1.0, 5, -0.1)


class TestChisqQuantile:
    def test_table_value(self):
        assert chisq_quantile(0.95, 5) == pytest.approx(11.0705, abs=1e-4)

    def test_median_df2_closed_form(self):
        assert chisq_quantile(0.5, 2) == pytest.approx(2.0 * math.log(2.0), abs=1e-10)

    @given(
        p=st.floats(min_value=1e-6, max_value=1.0 - 1e-6),
        df=st.integers(min_value=1, max_value=100),
    )
    @settings(max_examples=50)
    def test_round_trip(self, p, df):
        assert chisq_sf(chisq_quantile(p, df), df) == pytest.approx(1.0 - p, abs=1e-9)

    def test_domain(self):
        for bad in (0.0, 1.0, -0.5, 2.0):
            with pytest.raises(NumericError):
                chisq_quantile(bad, 3)


def _binom_cdf_enumeration(k, n, p):
    """Brute force: enumerate all outcome sequences."""
    total = 0.0
    for outcome in itertools.product((0, 1), repeat=n):
        successes = sum(outcome)
        if successes <= k:
            total += p ** successes * (1.0 - p) ** (n - successes)
    return total


class TestBinomial:
    def test_symmetric_coin_pmf(self):
        assert binom_pmf(1, 2, 0.5) == pytest.approx(0.5, abs=1e-15)

    def test_cdf_at_n_is_one(self):
        for n, p in ((1, 0.3), (10, 0.99), (100, 0.001)):
            assert binom_cdf(n, n, p) == pytest.approx(1.0, abs=1e-12)

    @given(
        n=st.integers(min_value=1, max_value=12),
        p=st.floats(min_value=0.0, max_value=1.0),
        data=st.data(),
    )
    @settings(max_examples=60, deadline=None)
    def test_matches_enumeration(self, n, p, data):
        k = data.draw(st.integers(min_value=0, max_value=n))
        assert binom_cdf(k, n, p) == pytest.approx(
            _binom_cdf_enumeration(k, n, p), abs=1e-12
        )

    def test_high_precision_large_n(self):
        mpmath = pytest.importorskip("mpmath")
        mpmath.mp.dps = 40
        for k, n, p in ((40, 1000, 0.05), (4980, 10000, 0.5), (4, 53, 0.2)):
            exact = sum(
                mpmath.binomial(n, i) * mpmath.mpf(p) ** i * (1 - mpmath.mpf(p)) ** (n - i)
                for i in range(k + 1)
            )
            assert abs(binom_cdf(k, n, p) - float(exact)) < 1e-12

    def test_monotone_in_k(self):
        values = [binom_cdf(k, 53, 0.2) for k in range(54)]
        assert all(a <= b for a, b in zip(values, values[1:]))

    def test_domain(self):
        with pytest.raises(NumericError):
            binom_cdf(5, 4, 0.5)
        with pytest.raises(NumericError):
            binom_cdf(1, 4, 1.5)


class TestHypergeometric:
    def test_tiny_case_by_enumeration(self):
        # N=4, K=2, n=2: C(4,2)=6 equally likely draws, one has no successes.
        assert hypergeom_cdf(0, 4, 2, 2) == pytest.approx(1.0 / 6.0, abs=1e-14)
        assert hypergeom_pmf(1, 4, 2, 2) == pytest.approx(4.0 / 6.0, abs=1e-14)

    def test_all_successes_edge(self):
        assert hypergeom_cdf(9, 50, 50, 10) == 0.0
        assert hypergeom_cdf(10, 50, 50, 10) == 1.0

    def test_binomial_approximation_bound(self):
        # Large pool, small draw: within 0.01 of the binomial at every k.
        population, successes, draws = 2582, 517, 53
        p = successes / population
        for k in range(draws + 1):
            diff = abs(
                hypergeom_cdf(k, population, successes, draws) - binom_cdf(k, draws, p)
            )
            assert diff < 0.01

    def test_pmf_sums_to_one(self):
        total = math.fsum(hypergeom_pmf(k, 30, 12, 9) for k in range(10))
        assert total == pytest.approx(1.0, abs=1e-12)

    def test_domain(self):
        with pytest.raises(NumericError):
            hypergeom_cdf(1, 10, 11, 5)
        with pytest.raises(NumericError):
            hypergeom_cdf(1, 10, 5, 11)


class TestNormalQuantile:
    def test_standard_constant(self):
        assert normal_quantile(0.975) == pytest.approx(1.959964, abs=1e-6)

    def test_median_is_zero(self):
        assert normal_quantile(0.5) == 0.0

    @given(p=st.floats(min_value=1e-4, max_value=1.0 - 1e-4))
    def test_antisymmetry(self, p):
        # representing the complement 1-p costs up to 1e-16 of probability,
        # which the inverse amplifies; stay where that stays below 1e-12
        assert normal_quantile(p) == pytest.approx(-normal_quantile(1.0 - p), abs=1e-12)

    @given(p=st.floats(min_value=1e-9, max_value=1.0 - 1e-9))
    @settings(max_examples=100)
    def test_round_trip_through_cdf(self, p):
        assert normal_cdf(normal_quantile(p)) == pytest.approx(p, abs=1e-12)

    def test_bisection_oracle(self):
        # Independent check: invert the erfc-based CDF by bisection.
        for p in (0.975, 0.2, 0.6, 0.999):
            lo, hi = -10.0, 10.0
            for _ in range(80):
                mid = 0.5 * (lo + hi)
                if normal_cdf(mid) < p:
                    lo = mid
                else:
                    hi = mid
            assert normal_quantile(p) == pytest.approx(0.5 * (lo + hi), abs=1e-9)

    def test_domain(self):
        for bad in (0.0, 1.0):
            with pytest.raises(NumericError):
                normal_quantile(bad)


class TestRandomSource:
    def test_same_seed_same_stream(self):
        a = RandomSource(123).generator().integers(0, 1 << 30, size=100)
        b = RandomSource(123).generator().integers(0, 1 << 30, size=100)
        assert (a == b).all()

    def test_children_are_stable_and_distinct(self):
        root = RandomSource(99)
        assert root.child(3) == root.child(3)
        assert root.child(3) != root.child(4)
        assert root.child(3).seed != root.seed

    def test_seed_validation(self):
        with pytest.raises(NumericError):
            RandomSource(-1)
        with pytest.raises(NumericError):
            RandomSource(1 << 64)

    def test_algorithm_validation(self):
        with pytest.raises(NumericError):
            RandomSource(0, algorithm="mt19937")
