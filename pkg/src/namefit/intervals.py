"""Per-category 95% confidence intervals for the comparison figures.

These intervals are for visualization only: each is computed independently
per category, so reading several at once runs into the multiple-testing
problem. Fit is decided by the formal goodness-of-fit test, never by the
figures.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .binning import BinSpec, bin_counts
from .corpus import FrequencyDistribution, OriginDistribution, distribution_rows
from .distributions import RandomSource, normal_quantile
from .errors import DataError


@dataclass(frozen=True)
class ConfidenceInterval:
    center: float
    lower: float
    upper: float
    level: float = 0.95
    method: str = "wald"
    defined: bool = True


def wald_ci(count: int, n: int, level: float = 0.95) -> ConfidenceInterval:
    """Wald proportion interval, clipped to [0, 1].

    Degenerate at count 0 or n: the interval half-width collapses to zero
    there, so no interval can be calculated and `defined` is False.
    """
    if n < 1:
        raise DataError(f"sample size must be positive, got {n}")
    if not 0 <= count <= n:
        raise DataError(f"need 0 <= count <= n, got count={count}, n={n}")
    if not 0.0 < level < 1.0:
        raise DataError(f"level must lie in (0, 1), got {level}")
    p_hat = count / n
    if count == 0 or count == n:
        return ConfidenceInterval(p_hat, p_hat, p_hat, level, "wald", defined=False)
    half = normal_quantile((1.0 + level) / 2.0) * (p_hat * (1.0 - p_hat) / n) ** 0.5
    return ConfidenceInterval(
        center=p_hat,
        lower=max(p_hat - half, 0.0),
        upper=min(p_hat + half, 1.0),
        level=level,
        method="wald",
    )


def _bootstrap_proportions(
    bin_of_name: np.ndarray,
    k: int,
    draw_size: int,
    replicates: int,
    rng: RandomSource,
    jobs: int = 1,
) -> np.ndarray:
    """Replicate-by-bin proportion matrix for uniform without-replacement
    draws over the distinct names.

    Replicate r draws with the child source at index r, so the result is
    identical no matter how replicates are scheduled across workers.
    """
    n_names = len(bin_of_name)
    proportions = np.empty((replicates, k))

    def run_replicate(r: int) -> None:
        generator = rng.child(r).generator()
        picked = generator.choice(n_names, size=draw_size, replace=False)
        proportions[r] = np.bincount(bin_of_name[picked], minlength=k) / draw_size

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            list(pool.map(run_replicate, range(replicates)))
    else:
        for r in range(replicates):
            run_replicate(r)
    return proportions


def bootstrap_uniform_ci(
    reference: FrequencyDistribution,
    spec: BinSpec,
    draw_size: int,
    replicates: int,
    rng: RandomSource,
    level: float = 0.95,
    jobs: int = 1,
) -> list[ConfidenceInterval]:
    """Percentile bootstrap intervals for uniform sampling without
    replacement from the reference's distinct names.

    Each replicate draws `draw_size` distinct names (every name equally
    likely), bins each drawn name by its reference frequency, and records
    the bin proportions. Intervals are the (alpha/2, 1 - alpha/2) empirical
    quantiles across replicates; centers are the replicate means.
    Deterministic given the random source's seed.
    """
    if replicates < 1:
        raise DataError(f"need at least one replicate, got {replicates}")
    if not 0.0 < level < 1.0:
        raise DataError(f"level must lie in (0, 1), got {level}")
    names = sorted(reference.counts)
    if draw_size > len(names):
        raise DataError(
            f"draw size {draw_size} exceeds the {len(names)} distinct reference names"
        )
    if draw_size < 1:
        raise DataError(f"draw size must be positive, got {draw_size}")
    bin_of_name = np.array([spec.find_bin(reference.counts[name]) for name in names])
    proportions = _bootstrap_proportions(
        bin_of_name, spec.k, draw_size, replicates, rng, jobs
    )
    alpha = 1.0 - level
    lower = np.quantile(proportions, alpha / 2.0, axis=0)
    upper = np.quantile(proportions, 1.0 - alpha / 2.0, axis=0)
    centers = proportions.mean(axis=0)
    return [
        ConfidenceInterval(
            center=float(centers[b]),
            lower=float(lower[b]),
            upper=float(upper[b]),
            level=level,
            method="bootstrap_percentile",
        )
        for b in range(spec.k)
    ]


@dataclass(frozen=True)
class SeriesPoint:
    """One plotted value: a series' center and interval at one category."""

    series: str
    bin_label: str
    center: float
    lower: float
    upper: float
    defined: bool


def _reference_points(labels: Sequence[str], shares: Sequence[float]) -> list[SeriesPoint]:
    return [
        SeriesPoint("reference", label, share, share, share, True)
        for label, share in zip(labels, shares)
    ]


def _interval_points(
    series: str, labels: Sequence[str], intervals: Sequence[ConfidenceInterval]
) -> list[SeriesPoint]:
    return [
        SeriesPoint(series, label, ci.center, ci.lower, ci.upper, ci.defined)
        for label, ci in zip(labels, intervals)
    ]


def figure_series(
    tests: Mapping[str, FrequencyDistribution],
    reference: FrequencyDistribution,
    spec: BinSpec,
    level: float = 0.95,
) -> list[SeriesPoint]:
    """Frequency-bin comparison dataset: the reference's bin shares (the bar
    heights) plus a Wald interval per bin for every test distribution."""
    labels = spec.labels()
    shares = [mass / spec.reference_total for mass in spec.masses()]
    points = _reference_points(labels, shares)
    for series, test in tests.items():
        binned = bin_counts(test, reference, spec)
        intervals = [wald_ci(obs, binned.n, level) for obs in binned.observed]
        points.extend(_interval_points(series, labels, intervals))
    return points


def origin_figure_series(
    tests: Mapping[str, OriginDistribution],
    reference: OriginDistribution,
    level: float = 0.95,
) -> list[SeriesPoint]:
    """Origin-category comparison dataset, categories in reference order."""
    labels = reference.categories
    for series, test in tests.items():
        if test.merged != reference.merged:
            raise DataError(
                f"series {series!r} does not share the reference's Semitic merge setting"
            )
    shares = [reference.counts[c] / reference.total for c in labels]
    points = _reference_points(labels, shares)
    for series, test in tests.items():
        intervals = [
            wald_ci(test.counts.get(c, 0), test.total, level) for c in labels
        ]
        points.extend(_interval_points(series, labels, intervals))
    return points


def top_names_series(
    tests: Mapping[str, FrequencyDistribution],
    reference: FrequencyDistribution,
    top: int = 12,
    level: float = 0.95,
) -> list[SeriesPoint]:
    """Name-level comparison dataset: the reference's most frequent names
    plus a trailing column for the rare (frequency-1) share."""
    if top < 1:
        raise DataError(f"top must be positive, got {top}")
    top_names = [name for name, _ in distribution_rows(reference.counts)[:top]]
    labels = [*top_names, "rare"]
    singleton_mass = sum(1 for c in reference.counts.values() if c == 1)
    shares = [reference.counts[name] / reference.total for name in top_names]
    shares.append(singleton_mass / reference.total)
    points = _reference_points(labels, shares)
    for series, test in tests.items():
        counts = [test.counts.get(name, 0) for name in top_names]
        rare = sum(
            count
            for name, count in test.counts.items()
            if reference.frequency(name) <= 1
        )
        intervals = [wald_ci(c, test.total, level) for c in [*counts, rare]]
        points.extend(_interval_points(series, labels, intervals))
    return points


def bootstrap_series(
    series: str,
    reference: FrequencyDistribution,
    spec: BinSpec,
    draw_size: int,
    replicates: int,
    rng: RandomSource,
    level: float = 0.95,
    jobs: int = 1,
) -> list[SeriesPoint]:
    """Figure rows for a bootstrap-interval series (uniform draws)."""
    intervals = bootstrap_uniform_ci(
        reference, spec, draw_size, replicates, rng, level, jobs
    )
    return _interval_points(series, spec.labels(), intervals)
