import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from namefit.binning import (
    BinSpec,
    FrequencyClassProfile,
    bin_counts,
    check_conditions,
    compute_bins,
    conditions_from_expected,
    profile,
)
from namefit.corpus import FrequencyDistribution
from namefit.errors import DataError, NumericError

from conftest import synthetic_counts


def dist(counts: dict[str, int]) -> FrequencyDistribution:
    return FrequencyDistribution.from_counts(counts)


def enumerate_best_cuts(masses, k):
    """Oracle: try every contiguous partition, keep the first (lexicographic)
    one minimizing the sum of squared bin masses."""
    n = len(masses)
    prefix = [0]
    for m in masses:
        prefix.append(prefix[-1] + m)
    best_key = None
    best_cuts = None
    for cuts in itertools.combinations(range(1, n), k - 1):
        edges = [0, *cuts, n]
        key = sum((prefix[b] - prefix[a]) ** 2 for a, b in zip(edges, edges[1:]))
        if best_key is None or key < best_key:
            best_key = key
            best_cuts = cuts
    return best_cuts


def cuts_of(spec: BinSpec, profile_: FrequencyClassProfile) -> tuple[int, ...]:
    freqs = profile_.frequencies
    return tuple(freqs.index(b.lo) for b in spec.bins[1:])


class TestProfile:
    def test_direct_count(self):
        p = profile(dist({"A": 1, "B": 1, "C": 2}))
        assert p.classes == ((1, 2), (2, 2))
        assert p.total == 4

    def test_all_singletons(self):
        counts = {f"u{i}": 1 for i in range(457)}
        p = profile(dist(counts))
        assert p.classes == ((1, 457),)

    def test_synthetic_singleton_share(self):
        p = profile(dist(synthetic_counts()))
        singleton_mass = dict(p.classes)[1]
        assert singleton_mass == 160
        assert p.total == 3890

    def test_mass_accounting(self):
        p = profile(dist({"a": 3, "b": 3, "c": 7}))
        assert p.classes == ((3, 6), (7, 7))

    def test_empty_reference_rejected(self):
        with pytest.raises(DataError):
            profile(FrequencyDistribution({}, 0, 0))


class TestComputeBins:
    def test_perfectly_balanced(self):
        p = FrequencyClassProfile(((1, 6), (2, 6), (3, 6)), 18)
        spec = compute_bins(p, 3)
        assert [(b.lo, b.hi) for b in spec.bins] == [(1, 1), (2, 2), (3, None)]
        assert spec.rmse == 0.0

    def test_prefers_smaller_error_split(self):
        # masses (10, 2, 9): {1}|{2,3} gives (10, 11), {1,2}|{3} gives (12, 9)
        p = FrequencyClassProfile(((1, 10), (2, 2), (3, 9)), 21)
        spec = compute_bins(p, 2)
        assert [(b.lo, b.hi) for b in spec.bins] == [(1, 1), (2, None)]
        assert spec.rmse == pytest.approx(0.5)

    def test_synthetic_lowest_bin_is_singletons(self):
        p = profile(dist(synthetic_counts()))
        spec = compute_bins(p, 6)
        assert spec.bins[0].lo == 1
        assert sum(spec.masses()) == p.total

    def test_labels(self):
        p = FrequencyClassProfile(((1, 5), (2, 5), (3, 2), (5, 3), (9, 5)), 20)
        spec = compute_bins(p, 3)
        assert spec.bins[-1].label.endswith("+")
        for b in spec.bins[:-1]:
            assert b.hi is not None
            assert b.label == (str(b.lo) if b.lo == b.hi else f"{b.lo}-{b.hi}")

    def test_too_many_bins(self):
        p = FrequencyClassProfile(((1, 5), (2, 5)), 10)
        with pytest.raises(NumericError, match="too many bins"):
            compute_bins(p, 3)
        with pytest.raises(NumericError):
            compute_bins(p, 1)

    @given(
        counts=st.lists(st.integers(min_value=1, max_value=9), min_size=2, max_size=40),
        data=st.data(),
    )
    @settings(max_examples=80, deadline=None)
    def test_matches_enumeration(self, counts, data):
        counts_map = {f"x{i}": c for i, c in enumerate(counts)}
        p = profile(dist(counts_map))
        if len(p.classes) < 2:
            return
        k = data.draw(st.integers(min_value=2, max_value=min(len(p.classes), 12)))
        spec = compute_bins(p, k)
        assert cuts_of(spec, p) == enumerate_best_cuts(p.masses, k)

    def test_tie_break_prefers_narrow_low_bins(self):
        # masses (2, 2, 2, 2), k=2: splits give 4|36, 16|16, 36|4;
        # and (1, 2, 2, 1), k=2: 1|25 vs 9|9 vs 25|1 -> middle;
        # symmetric ties need the lexicographic rule:
        p = FrequencyClassProfile(((1, 3), (2, 1), (3, 1), (4, 3)), 8)
        # splits: 9|25, 16|16, 25|9 -> unique min 16|16
        assert cuts_of(compute_bins(p, 2), p) == (2,)
        p = FrequencyClassProfile(((1, 2), (2, 2)), 4)
        assert cuts_of(compute_bins(p, 2), p) == (1,)
        # genuine tie: masses (3, 2, 3) into k=2 -> 9+25 either way; the
        # lowest bin must be the narrow one
        p = FrequencyClassProfile(((1, 3), (2, 2), (3, 3)), 8)
        assert cuts_of(compute_bins(p, 2), p) == (1,)


class TestBinCounts:
    def test_top_frequency_routes_to_top_bin(self):
        counts = synthetic_counts()
        reference = dist(counts)
        spec = compute_bins(profile(reference), 6)
        heavy_name = max(counts, key=counts.get)
        binned = bin_counts(dist({heavy_name: 8}), reference, spec)
        assert binned.observed[-1] == 8
        assert sum(binned.observed) == 8

    def test_identical_sample_matches_expectation(self):
        reference = dist(synthetic_counts())
        spec = compute_bins(profile(reference), 6)
        binned = bin_counts(reference, reference, spec)
        for obs, exp in zip(binned.observed, binned.expected):
            assert obs == pytest.approx(exp, abs=1e-9)

    def test_absent_name_routes_to_rare_bin(self):
        reference = dist({"a": 1, "b": 1, "c": 4, "d": 4, "e": 9})
        spec = compute_bins(profile(reference), 3)
        binned = bin_counts(dist({"zenon": 1}), reference, spec)
        assert binned.observed[0] == 1
        # Oracle: adding the name to the reference at frequency 1 must leave
        # the routing unchanged.
        augmented = dist({"a": 1, "b": 1, "c": 4, "d": 4, "e": 9, "zenon": 1})
        spec2 = compute_bins(profile(augmented), 3)
        binned2 = bin_counts(dist({"zenon": 1}), augmented, spec2)
        assert binned2.observed[0] == 1

    def test_wrong_reference_rejected(self):
        reference = dist({"a": 1, "b": 2})
        other = dist({"a": 1, "b": 3})
        spec = compute_bins(profile(reference), 2)
        with pytest.raises(DataError):
            bin_counts(dist({"a": 1}), other, spec)

    @given(
        counts=st.dictionaries(
            st.text(alphabet="abcdefgh", min_size=1, max_size=3),
            st.integers(min_value=1, max_value=30),
            min_size=1,
            max_size=12,
        )
    )
    @settings(max_examples=60, deadline=None)
    def test_total_conserved(self, counts):
        reference = dist(synthetic_counts())
        spec = compute_bins(profile(reference), 6)
        binned = bin_counts(dist(counts), reference, spec)
        assert sum(binned.observed) == binned.n == sum(counts.values())
        assert math.fsum(binned.expected) == pytest.approx(binned.n, rel=1e-9)

    def test_bins_exhaustive_and_disjoint(self):
        reference = dist(synthetic_counts())
        spec = compute_bins(profile(reference), 6)
        indices = [spec.find_bin(f) for f in range(1, 400)]
        assert indices[0] == 0
        assert indices[-1] == spec.k - 1
        assert all(a <= b for a, b in zip(indices, indices[1:]))
        assert set(indices) == set(range(spec.k))

    def test_sampled_deviation_shrinks_with_n(self):
        reference = dist(synthetic_counts())
        spec = compute_bins(profile(reference), 6)
        names = sorted(reference.counts)
        probs = np.array([reference.counts[n] for n in names], dtype=float)
        probs /= probs.sum()
        bin_of = np.array([spec.find_bin(reference.counts[n]) for n in names])
        shares = np.array(spec.masses()) / spec.reference_total
        rng = np.random.default_rng(5)

        def mean_abs_deviation(n, sims=200):
            draws = rng.multinomial(n, probs, size=sims)
            matrix = np.zeros((len(names), spec.k))
            matrix[np.arange(len(names)), bin_of] = 1.0
            observed = draws @ matrix
            return np.abs(observed / n - shares).sum(axis=1).mean()

        assert mean_abs_deviation(20000) < mean_abs_deviation(200) / 3.0


class TestConditions:
    def test_healthy(self):
        report = conditions_from_expected([10.0] * 6)
        assert report.passed
        assert report.min_expected == 10.0
        assert report.share_below_five == 0.0

    def test_min_expected_failure(self):
        report = conditions_from_expected([0.5, 20, 20, 20, 20, 20])
        assert not report.min_expected_ok
        assert not report.passed

    def test_low_expected_share_failure(self):
        report = conditions_from_expected([3.0, 4.0, 10.0, 10.0, 10.0, 10.0])
        assert report.min_expected_ok
        assert report.share_below_five == pytest.approx(2.0 / 6.0)
        assert not report.share_below_five_ok

    def test_exact_twenty_percent_share_passes(self):
        report = conditions_from_expected([4.0, 10.0, 10.0, 10.0, 10.0])
        assert report.share_below_five == pytest.approx(0.2)
        assert report.passed

    def test_on_binned_counts(self):
        reference = dist(synthetic_counts())
        spec = compute_bins(profile(reference), 6)
        binned = bin_counts(reference, reference, spec)
        assert check_conditions(binned).passed


class TestExport:
    def test_json_dict_round_trips_shape(self):
        reference = dist(synthetic_counts())
        spec = compute_bins(profile(reference), 6)
        payload = spec.to_json_dict()
        assert payload["k"] == 6
        assert len(payload["bins"]) == 6
        assert payload["bins"][-1]["hi"] is None
        assert sum(b["reference_mass"] for b in payload["bins"]) == spec.reference_total
