"""Spearman rank correlation with significance testing.

rho is the Pearson correlation of average ranks, which stays correct under
ties; the classic 6*sum(d^2) shortcut is deliberately not used (it is only
valid tie-free, and review scores repeat).  Two-tailed p-values come from
the Student-t approximation with n-2 degrees of freedom, evaluated through
a continued-fraction regularized incomplete beta.  A seeded permutation
test provides an independent cross-check of that approximation.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field

from .errors import (
    ConvergenceError,
    DegenerateInputError,
    DomainError,
    InsufficientDataError,
    LengthMismatchError,
    NonFiniteError,
)
from .ingest import RatingsTable
from .metrics import METRICS, EpisodeMetrics

_BETA_EPS = 1e-12
_BETA_FPMIN = 1e-300
_BETA_MAX_ITER = 300


@dataclass
class RankVector:
    """Input values paired with their 1-based average ranks."""

    values: list[float]
    ranks: list[float]


@dataclass
class CorrelationResult:
    """One metric column against the review column.

    rho and p_value are None when the column was degenerate (constant);
    note says why.  significance: '**' p < 0.01, '*' p < 0.05, else ''.
    """

    metric_name: str
    rho: float | None
    p_value: float | None
    n: int
    significance: str = ""
    note: str = ""
    permutation_p: float | None = None


@dataclass
class CorrelationReport:
    """All 12 metric correlations for one series, plus the config echo."""

    series: str
    results: list[CorrelationResult] = field(default_factory=list)
    n: int = 0
    excluded: int = 0
    efficiency_mode: str = "component-mean"
    std_convention: str = "population"
    dedup_dropped: int = 0


def significance_stars(p: float) -> str:
    if p < 0.01:
        return "**"
    if p < 0.05:
        return "*"
    return ""


def _check_finite(values, what: str) -> list[float]:
    out = [float(v) for v in values]
    if any(not math.isfinite(v) for v in out):
        raise NonFiniteError(f"{what} contains a non-finite value")
    return out


def rank_with_ties(values) -> RankVector:
    """Ascending 1-based ranks; tied values share the mean of their positions."""
    data = _check_finite(values, "rank input")
    if not data:
        raise DegenerateInputError("cannot rank an empty list")
    n = len(data)
    order = sorted(range(n), key=lambda i: data[i])
    ranks = [0.0] * n
    i = 0
    while i < n:
        j = i
        while j + 1 < n and data[order[j + 1]] == data[order[i]]:
            j += 1
        average = (i + j + 2) / 2.0  # mean of 1-based positions i..j
        for k in range(i, j + 1):
            ranks[order[k]] = average
        i = j + 1
    return RankVector(values=data, ranks=ranks)


def _centered_ranks(values, what: str) -> list[float]:
    ranks = rank_with_ties(values).ranks
    mean = sum(ranks) / len(ranks)
    centered = [r - mean for r in ranks]
    if all(c == 0.0 for c in centered):
        raise DegenerateInputError(f"{what} is constant")
    return centered


def spearman_rho(x, y) -> float:
    """Pearson correlation of the two average-rank vectors."""
    if len(x) != len(y):
        raise LengthMismatchError(f"length mismatch: {len(x)} vs {len(y)}")
    if len(x) < 3:
        raise DegenerateInputError(f"need at least 3 pairs, got {len(x)}")
    cx = _centered_ranks(x, "x")
    cy = _centered_ranks(y, "y")
    dot = sum(a * b for a, b in zip(cx, cy))
    rho = dot / math.sqrt(sum(a * a for a in cx) * sum(b * b for b in cy))
    return max(-1.0, min(1.0, rho))


def _betacf(a: float, b: float, x: float) -> float:
    """Continued fraction for the incomplete beta (modified Lentz scheme)."""
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _BETA_FPMIN:
        d = _BETA_FPMIN
    d = 1.0 / d
    h = d
    for m in range(1, _BETA_MAX_ITER + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _BETA_FPMIN:
            d = _BETA_FPMIN
        c = 1.0 + aa / c
        if abs(c) < _BETA_FPMIN:
            c = _BETA_FPMIN
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _BETA_FPMIN:
            d = _BETA_FPMIN
        c = 1.0 + aa / c
        if abs(c) < _BETA_FPMIN:
            c = _BETA_FPMIN
        d = 1.0 / d
        step = d * c
        h *= step
        if abs(step - 1.0) < _BETA_EPS:
            return h
    raise ConvergenceError(
        f"incomplete beta continued fraction stalled at a={a:g} b={b:g} x={x:g}"
    )


def regularized_incomplete_beta(a: float, b: float, x: float) -> float:
    """I_x(a, b) for a, b > 0 and x in [0, 1]."""
    if a <= 0 or b <= 0:
        raise DomainError(f"beta parameters must be positive, got a={a:g} b={b:g}")
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"beta argument x={x:g} outside [0, 1]")
    if x == 0.0 or x == 1.0:
        return x
    ln_front = (
        math.lgamma(a + b)
        - math.lgamma(a)
        - math.lgamma(b)
        + a * math.log(x)
        + b * math.log(1.0 - x)
    )
    front = math.exp(ln_front)
    # continued fraction converges fast only on one side of the mean
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _betacf(a, b, x) / a
    return 1.0 - front * _betacf(b, a, 1.0 - x) / b


def spearman_pvalue(rho: float, n: int) -> float:
    """Two-tailed p for an observed rho at sample size n.

    t = rho * sqrt((n-2) / (1-rho^2)) referred to the t-distribution with
    n-2 degrees of freedom: p = I_{df/(df+t^2)}(df/2, 1/2).
    """
    if n < 4:
        raise DomainError(f"p-value needs n >= 4, got {n}")
    if not math.isfinite(rho) or abs(rho) > 1.0:
        raise DomainError(f"rho must lie in [-1, 1], got {rho!r}")
    if abs(rho) == 1.0:
        return 0.0
    df = float(n - 2)
    t_squared = rho * rho * df / (1.0 - rho * rho)
    return regularized_incomplete_beta(df / 2.0, 0.5, df / (df + t_squared))


def permutation_pvalue(x, y, iterations: int, rng_seed: int) -> float:
    """Share of seeded permutations of y at least as extreme as observed.

    Add-one smoothing on both sides keeps the estimate away from 0.
    Permuting y permutes its rank vector, so only rank dot products are
    recomputed per iteration.
    """
    if iterations < 1000:
        raise DomainError(f"permutation test needs >= 1000 iterations, got {iterations}")
    if len(x) != len(y):
        raise LengthMismatchError(f"length mismatch: {len(x)} vs {len(y)}")
    if len(x) < 3:
        raise DegenerateInputError(f"need at least 3 pairs, got {len(x)}")
    cx = _centered_ranks(x, "x")
    cy = _centered_ranks(y, "y")
    observed = abs(sum(a * b for a, b in zip(cx, cy)))
    threshold = observed - 1e-9 * max(1.0, observed)
    rng = random.Random(rng_seed)
    shuffled = list(cy)
    hits = 0
    for _ in range(iterations):
        rng.shuffle(shuffled)
        dot = sum(a * b for a, b in zip(cx, shuffled))
        if abs(dot) >= threshold:
            hits += 1
    return (1 + hits) / (1 + iterations)


def correlate_all(
    rows: list[EpisodeMetrics],
    ratings: RatingsTable,
    efficiency_mode: str = "component-mean",
    dedup_dropped: int = 0,
    permutations: int | None = None,
    seed: int = 0,
) -> CorrelationReport:
    """Correlate every metric column of one series against its reviews.

    Episodes without a rating are dropped and counted.  A constant metric
    column yields a flagged row (rho and p empty, note set) instead of an
    error so the report always carries all 12 rows.  When `permutations`
    is set, each row also gets a seeded permutation p-value cross-check.
    """
    series_names = sorted({row.key.series for row in rows})
    if len(series_names) != 1:
        raise ValueError(f"expected rows from exactly one series, got {series_names}")

    paired = [(row, ratings.get(row.key)) for row in sorted(rows, key=lambda r: r.key)]
    usable = [(row, review) for row, review in paired if review is not None]
    excluded = len(paired) - len(usable)
    if len(usable) < 4:
        raise InsufficientDataError(
            f"need at least 4 rated episodes, got {len(usable)}"
        )

    reviews = [review for _, review in usable]
    report = CorrelationReport(
        series=series_names[0],
        n=len(usable),
        excluded=excluded,
        efficiency_mode=efficiency_mode,
        dedup_dropped=dedup_dropped,
    )
    for column in METRICS:
        values = [float(getattr(row, column.attr)) for row, _ in usable]
        try:
            rho = spearman_rho(values, reviews)
            p = spearman_pvalue(rho, len(usable))
        except DegenerateInputError as exc:
            report.results.append(
                CorrelationResult(
                    metric_name=column.label,
                    rho=None,
                    p_value=None,
                    n=len(usable),
                    note=str(exc),
                )
            )
            continue
        result = CorrelationResult(
            metric_name=column.label,
            rho=rho,
            p_value=p,
            n=len(usable),
            significance=significance_stars(p),
        )
        if permutations is not None:
            result.permutation_p = permutation_pvalue(values, reviews, permutations, seed)
        report.results.append(result)
    return report
