"""Probability kernels: chi-square (central and noncentral), binomial,
hypergeometric, normal quantile, and a seedable random source.

Everything here is pure and reentrant except RandomSource, which hands out
independent child sources for concurrent consumers.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass

import numpy as np

from .errors import NumericError

_EPS = 1e-15
_MAX_ITER = 10_000


def _gamma_p_series(a: float, x: float) -> float:
    """Lower regularized incomplete gamma P(a, x) by power series (x < a + 1)."""
    if x == 0.0:
        return 0.0
    ap = a
    term = 1.0 / a
    total = term
    for _ in range(_MAX_ITER):
        ap += 1.0
        term *= x / ap
        total += term
        if abs(term) < abs(total) * _EPS:
            return total * math.exp(-x + a * math.log(x) - math.lgamma(a))
    raise NumericError(f"incomplete gamma series failed to converge (a={a}, x={x})")


def _gamma_q_contfrac(a: float, x: float) -> float:
    """Upper regularized incomplete gamma Q(a, x) by continued fraction (x >= a + 1).

    Modified Lentz evaluation of the standard continued fraction.
    """
    tiny = 1e-300
    b = x + 1.0 - a
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, _MAX_ITER):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            return h * math.exp(-x + a * math.log(x) - math.lgamma(a))
    raise NumericError(f"incomplete gamma fraction failed to converge (a={a}, x={x})")


def regularized_gamma_q(a: float, x: float) -> float:
    """Upper regularized incomplete gamma Q(a, x) = Gamma(a, x) / Gamma(a)."""
    if a <= 0:
        raise NumericError(f"shape parameter must be positive, got {a}")
    if x < 0:
        raise NumericError(f"argument must be nonnegative, got {x}")
    if x == 0.0:
        return 1.0
    if x < a + 1.0:
        return 1.0 - _gamma_p_series(a, x)
    return _gamma_q_contfrac(a, x)


def regularized_gamma_p(a: float, x: float) -> float:
    """Lower regularized incomplete gamma P(a, x)."""
    if a <= 0:
        raise NumericError(f"shape parameter must be positive, got {a}")
    if x < 0:
        raise NumericError(f"argument must be nonnegative, got {x}")
    if x == 0.0:
        return 0.0
    if x < a + 1.0:
        return _gamma_p_series(a, x)
    return 1.0 - _gamma_q_contfrac(a, x)


def _check_df(df: int) -> None:
    if not isinstance(df, (int, np.integer)) or df < 1:
        raise NumericError(f"degrees of freedom must be a positive integer, got {df!r}")


def chisq_sf(x: float, df: int) -> float:
    """Survival function P(X > x) of the central chi-square distribution."""
    _check_df(df)
    if x < 0:
        raise NumericError(f"chi-square statistic must be nonnegative, got {x}")
    return regularized_gamma_q(df / 2.0, x / 2.0)


def chisq_cdf(x: float, df: int) -> float:
    """CDF P(X <= x) of the central chi-square distribution."""
    _check_df(df)
    if x < 0:
        raise NumericError(f"chi-square statistic must be nonnegative, got {x}")
    return regularized_gamma_p(df / 2.0, x / 2.0)


def noncentral_chisq_sf(x: float, df: int, lam: float) -> float:
    """Survival function of the noncentral chi-square distribution.

    Evaluated as the Poisson(lam/2) mixture of central survival functions
    with df + 2j degrees of freedom. The series stops once the unaccumulated
    Poisson mass (an upper bound on the truncation error, since each central
    term is at most 1) drops below 1e-12. lam = 0 falls back to the central
    survival function exactly.
    """
    _check_df(df)
    if x < 0:
        raise NumericError(f"chi-square statistic must be nonnegative, got {x}")
    if lam < 0:
        raise NumericError(f"noncentrality must be nonnegative, got {lam}")
    if lam == 0.0:
        return chisq_sf(x, df)
    half = lam / 2.0
    log_weight = -half  # log Poisson pmf at j=0
    accumulated = 0.0
    total = 0.0
    max_terms = int(half + 60.0 * math.sqrt(half) + 200)
    for j in range(max_terms):
        if j > 0:
            log_weight += math.log(half) - math.log(j)
        weight = math.exp(log_weight)
        if weight > 0.0:
            total += weight * chisq_sf(x, df + 2 * j)
        accumulated += weight
        if 1.0 - accumulated < 1e-12:
            return min(total, 1.0)
    raise NumericError(f"noncentral series failed to converge (lambda={lam})")


def chisq_quantile(prob: float, df: int) -> float:
    """Inverse CDF of the central chi-square distribution.

    Bisection on the CDF; monotonicity makes this robust for any df.
    """
    _check_df(df)
    if not 0.0 < prob < 1.0:
        raise NumericError(f"probability must lie strictly in (0, 1), got {prob}")
    hi = df + 10.0 * math.sqrt(2.0 * df) + 10.0
    for _ in range(200):
        if chisq_cdf(hi, df) >= prob:
            break
        hi *= 2.0
    else:
        raise NumericError("quantile bracket expansion failed")
    lo = 0.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if chisq_cdf(mid, df) < prob:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-14 * max(1.0, hi):
            break
    return 0.5 * (lo + hi)


def _validate_binom(k: int, n: int, p: float) -> None:
    if not (isinstance(n, (int, np.integer)) and isinstance(k, (int, np.integer))):
        raise NumericError("k and n must be integers")
    if n < 0 or not 0 <= k <= n:
        raise NumericError(f"need 0 <= k <= n, got k={k}, n={n}")
    if not 0.0 <= p <= 1.0:
        raise NumericError(f"probability must lie in [0, 1], got {p}")


def binom_pmf(k: int, n: int, p: float) -> float:
    """Binomial point mass P(X = k) for X ~ Binomial(n, p)."""
    _validate_binom(k, n, p)
    if p == 0.0:
        return 1.0 if k == 0 else 0.0
    if p == 1.0:
        return 1.0 if k == n else 0.0
    log_pmf = (
        math.log(math.comb(n, k)) + k * math.log(p) + (n - k) * math.log1p(-p)
    )
    return math.exp(log_pmf)


def binom_cdf(k: int, n: int, p: float) -> float:
    """Binomial tail P(X <= k), summed term by term.

    Binomial coefficients are kept as exact integers via the multiplicative
    recurrence; terms are combined with exact (fsum) summation.
    """
    _validate_binom(k, n, p)
    if p == 0.0:
        return 1.0
    if p == 1.0:
        return 1.0 if k == n else 0.0
    log_p = math.log(p)
    log_q = math.log1p(-p)
    coeff = 1  # comb(n, 0)
    terms = []
    for i in range(k + 1):
        if i > 0:
            coeff = coeff * (n - i + 1) // i
        terms.append(math.exp(math.log(coeff) + i * log_p + (n - i) * log_q))
    terms.sort()
    return min(math.fsum(terms), 1.0)


def _log_choose(a: int, b: int) -> float:
    return math.lgamma(a + 1) - math.lgamma(b + 1) - math.lgamma(a - b + 1)


def hypergeom_pmf(k: int, population: int, successes: int, draws: int) -> float:
    """Hypergeometric point mass for k successes in `draws` draws without
    replacement from a population with `successes` marked items."""
    _validate_hypergeom(population, successes, draws)
    lo = max(0, draws - (population - successes))
    hi = min(draws, successes)
    if k < lo or k > hi:
        return 0.0
    log_pmf = (
        _log_choose(successes, k)
        + _log_choose(population - successes, draws - k)
        - _log_choose(population, draws)
    )
    return math.exp(log_pmf)


def hypergeom_cdf(k: int, population: int, successes: int, draws: int) -> float:
    """Hypergeometric tail P(X <= k) via log-gamma pmf accumulation."""
    _validate_hypergeom(population, successes, draws)
    lo = max(0, draws - (population - successes))
    hi = min(draws, successes)
    if k < lo:
        return 0.0
    if k >= hi:
        return 1.0
    terms = [hypergeom_pmf(i, population, successes, draws) for i in range(lo, k + 1)]
    terms.sort()
    return min(math.fsum(terms), 1.0)


def _validate_hypergeom(population: int, successes: int, draws: int) -> None:
    if population < 0 or not 0 <= successes <= population or not 0 <= draws <= population:
        raise NumericError(
            f"need 0 <= successes <= population and 0 <= draws <= population, "
            f"got population={population}, successes={successes}, draws={draws}"
        )


def normal_cdf(x: float) -> float:
    """Standard normal CDF."""
    return 0.5 * math.erfc(-x / math.sqrt(2.0))


# Acklam's rational approximation coefficients for the normal inverse CDF.
_ACKLAM_A = (-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
             1.383577518672690e+02, -3.066479806614716e+01, 2.506628277459239e+00)
_ACKLAM_B = (-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
             6.680131188771972e+01, -1.328068155288572e+01)
_ACKLAM_C = (-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
             -2.549732539343734e+00, 4.374664141464968e+00, 2.938163982698783e+00)
_ACKLAM_D = (7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
             3.754408661907416e+00)


def _normal_quantile_approx(p: float) -> float:
    a, b, c, d = _ACKLAM_A, _ACKLAM_B, _ACKLAM_C, _ACKLAM_D
    p_low = 0.02425
    if p < p_low:
        q = math.sqrt(-2.0 * math.log(p))
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) / \
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0)
    if p <= 1.0 - p_low:
        q = p - 0.5
        r = q * q
        return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q / \
               (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0)
    q = math.sqrt(-2.0 * math.log(1.0 - p))
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) / \
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0)


def normal_quantile(prob: float) -> float:
    """Standard normal inverse CDF.

    Rational approximation polished with one Halley step against the exact
    erfc-based CDF; antisymmetry quantile(p) = -quantile(1-p) holds exactly.
    """
    if not 0.0 < prob < 1.0:
        raise NumericError(f"probability must lie strictly in (0, 1), got {prob}")
    if prob == 0.5:
        return 0.0
    if prob > 0.5:
        return -normal_quantile(1.0 - prob)
    x = _normal_quantile_approx(prob)
    # Halley refinement: u = (cdf(x) - p) / pdf(x), x' = x - u / (1 + x*u/2)
    err = normal_cdf(x) - prob
    pdf = math.exp(-0.5 * x * x) / math.sqrt(2.0 * math.pi)
    u = err / pdf
    return x - u / (1.0 + 0.5 * x * u)


_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class RandomSource:
    """Deterministic random source: identical (seed, algorithm) gives an
    identical stream, and children derived at the same index are identical
    across runs and platforms."""

    seed: int
    algorithm: str = "pcg64"

    def __post_init__(self) -> None:
        if not 0 <= self.seed <= _MASK64:
            raise NumericError(f"seed must be an unsigned 64-bit integer, got {self.seed}")
        if self.algorithm != "pcg64":
            raise NumericError(f"unknown rng algorithm {self.algorithm!r}")

    def generator(self) -> np.random.Generator:
        """A fresh generator positioned at the start of this source's stream."""
        return np.random.default_rng(self.seed)

    def child(self, index: int) -> "RandomSource":
        """Derive an independent child source from (seed, index)."""
        if index < 0:
            raise NumericError(f"child index must be nonnegative, got {index}")
        digest = hashlib.sha256(
            self.seed.to_bytes(8, "little") + index.to_bytes(16, "little")
        ).digest()
        return RandomSource(int.from_bytes(digest[:8], "little"), self.algorithm)
