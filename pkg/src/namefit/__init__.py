"""Goodness-of-fit testing for categorical name-occurrence samples against
reference population distributions: corpus filtering, equal-frequency
binning, chi-square testing with multiple-testing benchmarks and power,
confidence intervals for figures, and rare-name tail analysis.
"""

from .binning import (
    BinnedCounts,
    BinSpec,
    ConditionReport,
    FrequencyClassProfile,
    bin_counts,
    check_conditions,
    compute_bins,
    profile,
)
from .corpus import (
    DatePolicy,
    DateWindow,
    FrequencyDistribution,
    Gender,
    LoadResult,
    OccurrenceRecord,
    OriginCategory,
    OriginDistribution,
    Region,
    build_frequency_distribution,
    build_origin_distribution,
    filter_records,
    generate_uniform_sample,
    load_corpus,
    read_distribution_csv,
    subtract_sample,
    write_distribution_csv,
)
from .distributions import (
    RandomSource,
    binom_cdf,
    binom_pmf,
    chisq_quantile,
    chisq_sf,
    hypergeom_cdf,
    hypergeom_pmf,
    noncentral_chisq_sf,
    normal_quantile,
)
from .errors import DataError, NamefitError, NumericError
from .inference import (
    Benchmark,
    ExpectedFit,
    GofResult,
    PowerSpec,
    ScenarioConfig,
    ScenarioResult,
    SuiteResult,
    Variable,
    bonferroni,
    gof_test,
    independence_test,
    power,
    run_suite,
    to_matrix,
)
from .intervals import (
    ConfidenceInterval,
    SeriesPoint,
    bootstrap_uniform_ci,
    figure_series,
    origin_figure_series,
    top_names_series,
    wald_ci,
)
from .rare_names import (
    RareDefinition,
    RareResult,
    RareSpec,
    count_rare,
    rare_count_from_anchor,
    rare_share_from_anchor,
    rare_sensitivity,
    rare_tail,
)

__version__ = "0.1.0"
