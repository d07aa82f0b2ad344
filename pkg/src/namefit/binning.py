"""Equal-frequency binning of name-frequency classes.

The reference distribution alone determines the bins; any test sample is
then routed through them by each name's frequency *in the reference*. All
functions are pure over immutable inputs.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass
from typing import Sequence

from .corpus import FrequencyDistribution
from .errors import DataError, NumericError


@dataclass(frozen=True)
class FrequencyClassProfile:
    """Per-frequency mass accounting: for each observed frequency f, the
    total occurrences carried by names occurring exactly f times."""

    classes: tuple[tuple[int, int], ...]  # (frequency, mass), frequencies increasing
    total: int

    @property
    def frequencies(self) -> tuple[int, ...]:
        return tuple(f for f, _ in self.classes)

    @property
    def masses(self) -> tuple[int, ...]:
        return tuple(m for _, m in self.classes)


def profile(reference: FrequencyDistribution) -> FrequencyClassProfile:
    """Build the frequency-class profile of a reference distribution."""
    if reference.total == 0:
        raise DataError("cannot profile an empty reference distribution")
    names_per_frequency: dict[int, int] = {}
    for count in reference.counts.values():
        names_per_frequency[count] = names_per_frequency.get(count, 0) + 1
    classes = tuple(
        (f, f * names_per_frequency[f]) for f in sorted(names_per_frequency)
    )
    return FrequencyClassProfile(classes, reference.total)


@dataclass(frozen=True)
class Bin:
    lo: int
    hi: int | None  # None marks the unbounded top bin
    label: str
    reference_mass: int


@dataclass(frozen=True)
class BinSpec:
    """Contiguous, exhaustive partition of frequency classes into k bins.

    Routing thresholds are the lower edges of bins 2..k, so every frequency
    from 1 upward lands in exactly one bin; frequencies below the lowest
    observed class (including names absent from the reference, treated as
    frequency 1) fall into the first bin.
    """

    k: int
    bins: tuple[Bin, ...]
    reference_total: int
    rmse: float

    def find_bin(self, frequency: int) -> int:
        thresholds = [b.lo for b in self.bins[1:]]
        return bisect_right(thresholds, frequency)

    def labels(self) -> tuple[str, ...]:
        return tuple(b.label for b in self.bins)

    def masses(self) -> tuple[int, ...]:
        return tuple(b.reference_mass for b in self.bins)

    def to_json_dict(self) -> dict:
        return {
            "k": self.k,
            "reference_total": self.reference_total,
            "rmse": self.rmse,
            "bins": [
                {"lo": b.lo, "hi": b.hi, "label": b.label, "reference_mass": b.reference_mass}
                for b in self.bins
            ],
        }


def _label(lo: int, hi: int | None) -> str:
    if hi is None:
        return f"{lo}+"
    if lo == hi:
        return str(lo)
    return f"{lo}-{hi}"


def _spec_from_cuts(
    profile_: FrequencyClassProfile, cuts: Sequence[int], k: int
) -> BinSpec:
    freqs, masses = profile_.frequencies, profile_.masses
    edges = [0, *cuts, len(freqs)]
    bins = []
    for b in range(k):
        lo_idx, hi_idx = edges[b], edges[b + 1] - 1
        mass = sum(masses[lo_idx : hi_idx + 1])
        lo = freqs[lo_idx]
        hi = None if b == k - 1 else freqs[hi_idx]
        bins.append(Bin(lo, hi, _label(lo, hi), mass))
    ideal = profile_.total / k
    rmse = math.sqrt(sum((b.reference_mass - ideal) ** 2 for b in bins) / k)
    return BinSpec(k, tuple(bins), profile_.total, rmse)


def compute_bins(profile_: FrequencyClassProfile, k: int) -> BinSpec:
    """Optimal contiguous partition of the frequency classes into k bins.

    Minimizes the root mean square error of per-bin reference mass against
    the ideal share total/k. Because the masses sum to a fixed total, this
    is equivalent to minimizing the sum of squared bin masses, which keeps
    the search in exact integer arithmetic; ties are resolved toward the
    partition whose lowest bins are narrowest (lexicographically smallest
    cut positions).
    """
    n_classes = len(profile_.classes)
    if k < 2:
        raise NumericError(f"need at least 2 bins, got {k}")
    if k > n_classes:
        raise NumericError(
            f"too many bins: {k} requested but only {n_classes} frequency classes"
        )
    masses = profile_.masses
    prefix = [0]
    for m in masses:
        prefix.append(prefix[-1] + m)

    def seg(i: int, j: int) -> int:  # squared mass of classes i..j-1
        return (prefix[j] - prefix[i]) ** 2

    # best[t][i]: minimal sum of squared bin masses partitioning classes
    # i..end into t bins (infeasible entries stay None).
    best: list[list[int | None]] = [[None] * (n_classes + 1) for _ in range(k + 1)]
    for i in range(n_classes):
        best[1][i] = seg(i, n_classes)
    for t in range(2, k + 1):
        for i in range(n_classes - t + 1):
            candidates = (
                seg(i, c) + best[t - 1][c]  # type: ignore[operator]
                for c in range(i + 1, n_classes - t + 2)
            )
            best[t][i] = min(candidates)

    # Front-to-back reconstruction; scanning cut positions in increasing
    # order and keeping the first optimum yields the lexicographic tie-break.
    cuts = []
    i, t = 0, k
    while t > 1:
        target = best[t][i]
        for c in range(i + 1, n_classes - t + 2):
            if seg(i, c) + best[t - 1][c] == target:  # type: ignore[operator]
                cuts.append(c)
                i, t = c, t - 1
                break
    return _spec_from_cuts(profile_, cuts, k)


@dataclass(frozen=True)
class BinnedCounts:
    observed: tuple[int, ...]
    expected: tuple[float, ...]
    n: int
    labels: tuple[str, ...]


def bin_counts(
    test: FrequencyDistribution,
    reference: FrequencyDistribution,
    spec: BinSpec,
) -> BinnedCounts:
    """Route a test sample's occurrences through a reference's bins.

    Each test occurrence lands in the bin containing its name's frequency in
    the reference; names absent from the reference count as frequency-1
    (rare) names. Expected counts scale the reference bin masses to the test
    total.
    """
    if spec.reference_total != reference.total:
        raise DataError(
            f"bin spec was built from a reference totaling {spec.reference_total}, "
            f"but this reference totals {reference.total}"
        )
    observed = [0] * spec.k
    for name, count in test.counts.items():
        frequency = reference.frequency(name) or 1
        observed[spec.find_bin(frequency)] += count
    n = test.total
    expected = tuple(n * b.reference_mass / spec.reference_total for b in spec.bins)
    return BinnedCounts(tuple(observed), expected, n, spec.labels())


@dataclass(frozen=True)
class ConditionReport:
    """Applicability diagnostics for the chi-square approximation:
    (a) every expected count is at least 1, and (b) at most 20% of cells
    have an expected count below 5."""

    min_expected: float
    share_below_five: float
    min_expected_ok: bool
    share_below_five_ok: bool

    @property
    def passed(self) -> bool:
        return self.min_expected_ok and self.share_below_five_ok


def conditions_from_expected(expected: Sequence[float]) -> ConditionReport:
    if not expected:
        raise DataError("cannot evaluate conditions on an empty expected vector")
    min_expected = min(expected)
    share = sum(1 for e in expected if e < 5.0) / len(expected)
    return ConditionReport(
        min_expected=min_expected,
        share_below_five=share,
        min_expected_ok=min_expected >= 1.0,
        share_below_five_ok=share <= 0.20,
    )


def check_conditions(binned: BinnedCounts) -> ConditionReport:
    return conditions_from_expected(binned.expected)
