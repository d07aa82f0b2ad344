"""Hypothesis-testing engine: Pearson goodness-of-fit, independence testing,
power, Bonferroni benchmarks, and the declarative multi-test suite runner.

The null hypothesis is always "the test sample fits the reference
distribution"; the tool never swaps the hypotheses. A small p-value is
evidence of misfit, a large one of fit.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Mapping, Sequence

from . import binning
from .binning import ConditionReport, conditions_from_expected
from .corpus import (
    FrequencyDistribution,
    OccurrenceRecord,
    OriginDistribution,
    build_frequency_distribution,
    build_origin_distribution,
    subtract_sample,
)
from .distributions import chisq_quantile, chisq_sf, noncentral_chisq_sf
from .errors import DataError, NumericError

logger = logging.getLogger(__name__)

# Reported p-values below this are indistinguishable from zero in double
# precision; they are floored rather than printed as exact zeros.
P_VALUE_FLOOR = 2.20e-16


@dataclass(frozen=True)
class GofResult:
    statistic: float
    df: int
    p_value: float
    bins_used: int
    conditions: ConditionReport
    reference_adjusted: bool = False


def gof_test(
    observed: Sequence[int],
    reference_probs: Sequence[float],
    n: int,
    reference_adjusted: bool = False,
) -> GofResult:
    """Pearson chi-square goodness-of-fit test, no continuity correction.

    `reference_probs` is the null: the reference distribution's cell
    probabilities. Expected counts are n * p_i.
    """
    k = len(observed)
    if k < 2:
        raise DataError("need at least two cells")
    if len(reference_probs) != k:
        raise DataError(
            f"observed has {k} cells but reference has {len(reference_probs)}"
        )
    if sum(observed) != n:
        raise DataError(f"observed counts sum to {sum(observed)}, not n={n}")
    if any(count < 0 for count in observed):
        raise DataError("observed counts must be nonnegative")
    prob_sum = math.fsum(reference_probs)
    if abs(prob_sum - 1.0) > 1e-9:
        raise DataError(f"reference probabilities sum to {prob_sum}, not 1")
    expected = [n * p for p in reference_probs]
    if any(e == 0.0 for e in expected):
        raise NumericError("empty expected cell; re-bin before testing")
    statistic = math.fsum(
        (obs - exp) ** 2 / exp for obs, exp in zip(observed, expected)
    )
    df = k - 1
    p_value = max(chisq_sf(statistic, df), P_VALUE_FLOOR)
    return GofResult(
        statistic=statistic,
        df=df,
        p_value=p_value,
        bins_used=k,
        conditions=conditions_from_expected(expected),
        reference_adjusted=reference_adjusted,
    )


def independence_test(table: Sequence[Sequence[int]]) -> GofResult:
    """Pearson chi-square test of independence on a 2 x K count table."""
    if len(table) != 2:
        raise DataError(f"independence test expects exactly 2 rows, got {len(table)}")
    k = len(table[0])
    if len(table[1]) != k:
        raise DataError("rows must have equal length")
    if k < 2:
        raise DataError("need at least two columns")
    if any(cell < 0 for row in table for cell in row):
        raise DataError("table counts must be nonnegative")
    row_totals = [sum(row) for row in table]
    col_totals = [table[0][j] + table[1][j] for j in range(k)]
    grand = sum(row_totals)
    if any(total == 0 for total in row_totals + col_totals):
        raise NumericError("zero marginal in independence table")
    expected = [
        [row_totals[i] * col_totals[j] / grand for j in range(k)] for i in range(2)
    ]
    statistic = math.fsum(
        (table[i][j] - expected[i][j]) ** 2 / expected[i][j]
        for i in range(2)
        for j in range(k)
    )
    df = k - 1
    p_value = max(chisq_sf(statistic, df), P_VALUE_FLOOR)
    return GofResult(
        statistic=statistic,
        df=df,
        p_value=p_value,
        bins_used=k,
        conditions=conditions_from_expected([e for row in expected for e in row]),
    )


@dataclass(frozen=True)
class PowerSpec:
    """Specification of a power question: probability of detecting that a
    sample of size n drawn from `alt_probs` does not fit `null_probs`."""

    null_probs: tuple[float, ...]
    alt_probs: tuple[float, ...]
    n: int
    alpha: float = 0.05

    def __post_init__(self) -> None:
        if len(self.null_probs) != len(self.alt_probs):
            raise DataError("null and alternative vectors must have equal length")
        if len(self.null_probs) < 2:
            raise DataError("need at least two cells")
        if self.n < 1:
            raise DataError(f"sample size must be positive, got {self.n}")
        if not 0.0 < self.alpha < 1.0:
            raise DataError(f"alpha must lie in (0, 1), got {self.alpha}")
        for label, probs in (("null", self.null_probs), ("alternative", self.alt_probs)):
            if any(p < 0 for p in probs):
                raise DataError(f"{label} probabilities must be nonnegative")
            total = math.fsum(probs)
            # Published vectors are often rounded (e.g. 0.133 thirds); accept
            # small slack and renormalize downstream.
            if abs(total - 1.0) > 5e-3:
                raise DataError(f"{label} probabilities sum to {total}, not 1")


def power(spec: PowerSpec) -> float:
    """Power of the chi-square goodness-of-fit test against a specific
    alternative.

    The noncentrality weights the squared divergence by the alternative's
    cell probabilities: lambda = n * sum((alt_i - null_i)^2 / alt_i), which
    diverges when the alternative empties a cell the null expects. Input
    vectors are renormalized to exact probability vectors first.
    """
    null_total = math.fsum(spec.null_probs)
    alt_total = math.fsum(spec.alt_probs)
    null = [p / null_total for p in spec.null_probs]
    alt = [p / alt_total for p in spec.alt_probs]
    lam = 0.0
    for p0, p1 in zip(null, alt):
        if p1 == 0.0:
            if p0 == 0.0:
                continue
            raise NumericError("infinite noncentrality: alternative empties a null cell")
        if p0 == 0.0:
            raise NumericError("infinite noncentrality: null empties an alternative cell")
        lam += (p1 - p0) ** 2 / p1
    lam *= spec.n
    df = len(null) - 1
    critical = chisq_quantile(1.0 - spec.alpha, df)
    return noncentral_chisq_sf(critical, df, lam)


@dataclass(frozen=True)
class Benchmark:
    """Family-wise benchmark: the base level split evenly across tests.

    Advisory, not a hard gate; results carry both the p-value and the
    benchmark so readers can apply their own threshold.
    """

    alpha: float
    num_tests: int
    adjusted: float

    @classmethod
    def bonferroni(cls, alpha: float, num_tests: int) -> "Benchmark":
        if num_tests < 1:
            raise DataError(f"number of tests must be positive, got {num_tests}")
        if not 0.0 < alpha < 1.0:
            raise DataError(f"alpha must lie in (0, 1), got {alpha}")
        return cls(alpha=alpha, num_tests=num_tests, adjusted=alpha / num_tests)


def bonferroni(alpha: float, num_tests: int) -> Benchmark:
    return Benchmark.bonferroni(alpha, num_tests)


class Variable(str, Enum):
    FREQUENCY = "frequency"
    ORIGIN = "origin"


class ExpectedFit(str, Enum):
    FIT = "fit"
    NOT_FIT = "not_fit"
    NA = "NA"


@dataclass(frozen=True)
class ScenarioConfig:
    """Declarative description of one goodness-of-fit test."""

    test_source: str
    reference_source: str
    variable: Variable
    expected_fit: ExpectedFit = ExpectedFit.NA
    subtract_from_reference: bool = False
    merge_semitic: bool = False
    k: int = 6

    @classmethod
    def from_dict(cls, raw: Mapping) -> "ScenarioConfig":
        try:
            return cls(
                test_source=raw["test_source"],
                reference_source=raw["reference_source"],
                variable=Variable(raw["variable"]),
                expected_fit=ExpectedFit(raw.get("expected_fit", "NA")),
                subtract_from_reference=bool(raw.get("subtract_from_reference", False)),
                merge_semitic=bool(raw.get("merge_semitic", False)),
                k=int(raw.get("k", 6)),
            )
        except KeyError as exc:
            raise DataError(f"scenario config missing field {exc.args[0]!r}")
        except ValueError as exc:
            raise DataError(f"invalid scenario config: {exc}")

    def to_dict(self) -> dict:
        return {
            "test_source": self.test_source,
            "reference_source": self.reference_source,
            "variable": self.variable.value,
            "expected_fit": self.expected_fit.value,
            "subtract_from_reference": self.subtract_from_reference,
            "merge_semitic": self.merge_semitic,
            "k": self.k,
        }


@dataclass(frozen=True)
class ScenarioResult:
    scenario: ScenarioConfig
    skipped: bool = False
    gof: GofResult | None = None
    verdict: str = "NA"  # "fit" | "not_fit" | "NA"
    matched: bool | None = None
    bin_spec: binning.BinSpec | None = None
    fallback_k: int | None = None  # set when conditions forced fewer bins
    dropped_categories: tuple[str, ...] = ()
    dropped_observed: int = 0
    subtraction_exact: bool = True

    @property
    def p_value(self) -> float | None:
        return self.gof.p_value if self.gof else None


@dataclass(frozen=True)
class SuiteResult:
    results: tuple[ScenarioResult, ...]
    benchmark: Benchmark
    match_count: int
    num_tests: int


def _subtract_categories(
    reference: OriginDistribution, test: OriginDistribution
) -> tuple[OriginDistribution, bool]:
    counts = dict(reference.counts)
    exact = True
    for category, test_count in test.counts.items():
        ref_count = counts.get(category, 0)
        if test_count > ref_count:
            exact = False
            logger.warning(
                "origin subtraction clamps %s at zero (test %d > reference %d)",
                category, test_count, ref_count,
            )
        counts[category] = max(ref_count - test_count, 0)
    return OriginDistribution(counts, sum(counts.values()), reference.merged), exact


def _run_frequency_scenario(
    scenario: ScenarioConfig,
    test_records: Sequence[OccurrenceRecord],
    reference_records: Sequence[OccurrenceRecord],
) -> ScenarioResult:
    test_dist = build_frequency_distribution(test_records)
    reference_dist = build_frequency_distribution(reference_records)
    subtraction_exact = True
    if scenario.subtract_from_reference:
        subtraction = subtract_sample(reference_dist, test_dist)
        reference_dist = subtraction.distribution
        subtraction_exact = subtraction.exact
    if test_dist.total == 0:
        raise DataError(f"test corpus {scenario.test_source!r} is empty after filtering")
    profile_ = binning.profile(reference_dist)
    k = min(scenario.k, len(profile_.classes))
    if k < 2:
        raise NumericError(
            f"reference {scenario.reference_source!r} has too few frequency classes to bin"
        )
    spec = None
    binned = None
    while True:
        spec = binning.compute_bins(profile_, k)
        binned = binning.bin_counts(test_dist, reference_dist, spec)
        if binning.check_conditions(binned).passed:
            break
        if k == 2:
            raise NumericError(
                f"condition fallback exhausted at k=2 for "
                f"{scenario.test_source!r} vs {scenario.reference_source!r}"
            )
        k -= 1
    probs = [b.reference_mass / spec.reference_total for b in spec.bins]
    gof = gof_test(
        binned.observed, probs, binned.n,
        reference_adjusted=scenario.subtract_from_reference,
    )
    return ScenarioResult(
        scenario=scenario,
        gof=gof,
        bin_spec=spec,
        fallback_k=k if k != min(scenario.k, len(profile_.classes)) else None,
        subtraction_exact=subtraction_exact,
    )


def _run_origin_scenario(
    scenario: ScenarioConfig,
    test_records: Sequence[OccurrenceRecord],
    reference_records: Sequence[OccurrenceRecord],
) -> ScenarioResult:
    test_origin = build_origin_distribution(test_records, scenario.merge_semitic)
    reference_origin = build_origin_distribution(reference_records, scenario.merge_semitic)
    subtraction_exact = True
    if scenario.subtract_from_reference:
        reference_origin, subtraction_exact = _subtract_categories(
            reference_origin, test_origin
        )
    # Pearson's statistic is undefined on zero expected cells: categories the
    # reference lacks are dropped from both vectors and the drop reported.
    dropped = tuple(
        category
        for category in reference_origin.categories
        if reference_origin.counts[category] == 0
    )
    kept = [c for c in reference_origin.categories if c not in dropped]
    if len(kept) < 2:
        raise NumericError(
            f"fewer than two origin categories remain for "
            f"{scenario.test_source!r} vs {scenario.reference_source!r}"
        )
    dropped_observed = sum(test_origin.counts.get(c, 0) for c in dropped)
    if dropped_observed:
        logger.warning(
            "dropping categories %s discards %d observed occurrences",
            ", ".join(dropped), dropped_observed,
        )
    observed = [test_origin.counts.get(c, 0) for c in kept]
    n = sum(observed)
    if n == 0:
        raise DataError(f"test corpus {scenario.test_source!r} has no origin occurrences")
    ref_total = sum(reference_origin.counts[c] for c in kept)
    probs = [reference_origin.counts[c] / ref_total for c in kept]
    gof = gof_test(observed, probs, n, reference_adjusted=scenario.subtract_from_reference)
    return ScenarioResult(
        scenario=scenario,
        gof=gof,
        dropped_categories=dropped,
        dropped_observed=dropped_observed,
        subtraction_exact=subtraction_exact,
    )


def _run_scenario(
    scenario: ScenarioConfig,
    corpora: Mapping[str, Sequence[OccurrenceRecord]],
) -> ScenarioResult:
    if scenario.expected_fit is ExpectedFit.NA:
        return ScenarioResult(scenario=scenario, skipped=True)
    for tag in (scenario.test_source, scenario.reference_source):
        if tag not in corpora:
            raise DataError(f"unknown corpus tag {tag!r}")
    test_records = corpora[scenario.test_source]
    reference_records = corpora[scenario.reference_source]
    if scenario.variable is Variable.FREQUENCY:
        return _run_frequency_scenario(scenario, test_records, reference_records)
    return _run_origin_scenario(scenario, test_records, reference_records)


def run_suite(
    scenarios: Sequence[ScenarioConfig],
    corpora: Mapping[str, Sequence[OccurrenceRecord]],
    alpha: float = 0.05,
    jobs: int = 1,
) -> SuiteResult:
    """Run every non-NA scenario and compare each p-value against the
    Bonferroni-adjusted benchmark.

    Scenario runs are independent; with jobs > 1 they execute in a thread
    pool, and results are assembled in scenario order either way.
    """
    num_tests = sum(1 for s in scenarios if s.expected_fit is not ExpectedFit.NA)
    if num_tests == 0:
        raise DataError("suite contains no runnable (non-NA) scenarios")
    benchmark = Benchmark.bonferroni(alpha, num_tests)
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            raw_results = list(pool.map(lambda s: _run_scenario(s, corpora), scenarios))
    else:
        raw_results = [_run_scenario(s, corpora) for s in scenarios]
    results = []
    match_count = 0
    for result in raw_results:
        if result.skipped:
            results.append(result)
            continue
        assert result.gof is not None
        verdict = "not_fit" if result.gof.p_value < benchmark.adjusted else "fit"
        matched = verdict == result.scenario.expected_fit.value
        match_count += matched
        results.append(
            ScenarioResult(
                scenario=result.scenario,
                gof=result.gof,
                verdict=verdict,
                matched=matched,
                bin_spec=result.bin_spec,
                fallback_k=result.fallback_k,
                dropped_categories=result.dropped_categories,
                dropped_observed=result.dropped_observed,
                subtraction_exact=result.subtraction_exact,
            )
        )
    return SuiteResult(tuple(results), benchmark, match_count, num_tests)


@dataclass(frozen=True)
class ResultMatrix:
    """Pivot of suite results: one row per (reference, variable) pair, one
    column per test distribution, p-values in the cells (None for NA)."""

    row_keys: tuple[tuple[str, str], ...]
    column_keys: tuple[str, ...]
    cells: tuple[tuple[float | None, ...], ...]


def to_matrix(suite: SuiteResult) -> ResultMatrix:
    row_keys: list[tuple[str, str]] = []
    column_keys: list[str] = []
    for result in suite.results:
        row = (result.scenario.reference_source, result.scenario.variable.value)
        if row not in row_keys:
            row_keys.append(row)
        if result.scenario.test_source not in column_keys:
            column_keys.append(result.scenario.test_source)
    cells: list[list[float | None]] = [
        [None] * len(column_keys) for _ in row_keys
    ]
    for result in suite.results:
        row = row_keys.index(
            (result.scenario.reference_source, result.scenario.variable.value)
        )
        col = column_keys.index(result.scenario.test_source)
        cells[row][col] = result.p_value
    return ResultMatrix(
        tuple(row_keys), tuple(column_keys), tuple(tuple(row) for row in cells)
    )
