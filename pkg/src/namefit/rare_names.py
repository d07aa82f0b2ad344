"""Rare-name tail analysis: how surprising is the number of rare names in a
sample of draws from a reference occurrence pool?

Two models are always computed side by side: the exact hypergeometric
(draws without replacement from the finite pool) and its binomial
approximation. Published summaries of such analyses often report only the
binomial parameters, and sometimes inconsistently; when the pool composition
is unreported, calibrate the rare share from a known anchor tail probability
instead of trusting a quoted parameter.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Sequence

from .corpus import FrequencyDistribution
from .distributions import binom_cdf, hypergeom_cdf
from .errors import DataError, NumericError


class RareDefinition(str, Enum):
    """Which reference frequencies count as rare."""

    ONCE = "once"
    ONCE_OR_TWICE = "once_or_twice"

    @property
    def threshold(self) -> int:
        return 1 if self is RareDefinition.ONCE else 2


def count_rare(
    test: FrequencyDistribution,
    reference: FrequencyDistribution,
    definition: RareDefinition,
) -> int:
    """Number of test occurrences whose name is rare in the reference.

    Names absent from the reference count as rare. Depends only on the
    occurrence sets, not on how often a text mentions anyone.
    """
    threshold = definition.threshold
    return sum(
        count
        for name, count in test.counts.items()
        if reference.frequency(name) <= threshold
    )


def rare_occurrences(
    reference: FrequencyDistribution, definition: RareDefinition
) -> int:
    """Occurrences in the reference pool that belong to rare names."""
    threshold = definition.threshold
    return sum(c for c in reference.counts.values() if c <= threshold)


@dataclass(frozen=True)
class RareSpec:
    """Pool parameters for the tail computation: N occurrences overall, K of
    them rare, n drawn."""

    definition: RareDefinition
    pool_occurrences: int
    rare_occurrences: int
    draw_size: int

    def __post_init__(self) -> None:
        if not 0 <= self.rare_occurrences <= self.pool_occurrences:
            raise DataError(
                f"rare occurrences {self.rare_occurrences} must lie in "
                f"[0, {self.pool_occurrences}]"
            )
        if not 0 < self.draw_size <= self.pool_occurrences:
            raise DataError(
                f"draw size {self.draw_size} must lie in (0, {self.pool_occurrences}]"
            )

    @property
    def rare_share(self) -> float:
        return self.rare_occurrences / self.pool_occurrences


@dataclass(frozen=True)
class TailRow:
    k: int
    tail_binomial: float
    tail_exact: float


# Approximation-quality flag threshold: the binomial stands in for the exact
# tail only while they stay this close.
DIVERGENCE_FLAG = 0.005


@dataclass(frozen=True)
class RareResult:
    observed_rare: int
    tail_binomial: float
    tail_exact: float
    table: tuple[TailRow, ...]

    @property
    def max_divergence(self) -> float:
        return max(abs(r.tail_binomial - r.tail_exact) for r in self.table)

    @property
    def approximation_flagged(self) -> bool:
        return self.max_divergence > DIVERGENCE_FLAG


def _tails(spec: RareSpec, k: int) -> TailRow:
    return TailRow(
        k=k,
        tail_binomial=binom_cdf(k, spec.draw_size, spec.rare_share),
        tail_exact=hypergeom_cdf(
            k, spec.pool_occurrences, spec.rare_occurrences, spec.draw_size
        ),
    )


def rare_tail(spec: RareSpec, k: int) -> RareResult:
    """Probability of observing k or fewer rare names among the draws, under
    both the binomial approximation and the exact without-replacement model."""
    if not 0 <= k <= spec.draw_size:
        raise DataError(f"k must lie in [0, {spec.draw_size}], got {k}")
    table = tuple(_tails(spec, i) for i in range(spec.draw_size + 1))
    anchor = table[k]
    return RareResult(
        observed_rare=k,
        tail_binomial=anchor.tail_binomial,
        tail_exact=anchor.tail_exact,
        table=table,
    )


def rare_sensitivity(spec: RareSpec, k_values: Sequence[int]) -> list[TailRow]:
    """Tail probabilities across candidate rare counts, for judging how much
    a conclusion depends on which names are deemed rare."""
    for k in k_values:
        if not 0 <= k <= spec.draw_size:
            raise DataError(f"k must lie in [0, {spec.draw_size}], got {k}")
    return [_tails(spec, k) for k in k_values]


def rare_share_from_anchor(
    draw_size: int, k: int, tail: float, max_iterations: int = 200
) -> float:
    """Solve for the binomial rare share p such that P(X <= k) equals a known
    anchor tail probability; the tail is strictly decreasing in p."""
    if not 0.0 < tail < 1.0:
        raise DataError(f"anchor tail must lie strictly in (0, 1), got {tail}")
    if not 0 <= k < draw_size:
        raise DataError(f"k must lie in [0, {draw_size}), got {k}")
    lo, hi = 0.0, 1.0
    for _ in range(max_iterations):
        mid = 0.5 * (lo + hi)
        if binom_cdf(k, draw_size, mid) > tail:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-14:
            return 0.5 * (lo + hi)
    raise NumericError("rare-share calibration failed to converge")


def rare_count_from_anchor(
    pool_occurrences: int, draw_size: int, k: int, tail: float
) -> int:
    """Integer rare-occurrence count K whose exact without-replacement tail
    P(X <= k) is closest to a known anchor tail probability."""
    if not 0.0 < tail < 1.0:
        raise DataError(f"anchor tail must lie strictly in (0, 1), got {tail}")
    if not 0 <= k < draw_size:
        raise DataError(f"k must lie in [0, {draw_size}), got {k}")
    # The tail is nonincreasing in K: bisect, then compare the neighbors.
    lo, hi = 0, pool_occurrences
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if hypergeom_cdf(k, pool_occurrences, mid, draw_size) > tail:
            lo = mid
        else:
            hi = mid
    candidates = {max(lo, 0), min(hi, pool_occurrences)}
    return min(
        candidates,
        key=lambda K: abs(hypergeom_cdf(k, pool_occurrences, K, draw_size) - tail),
    )
