"""Rank correlation and significance machinery against quadrature and
exhaustive-enumeration oracles."""

from __future__ import annotations

import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from charnet.errors import (
    DegenerateInputError,
    DomainError,
    InsufficientDataError,
    LengthMismatchError,
    NonFiniteError,
)
from charnet.graph import EpisodeKey
from charnet.ingest import RatingsTable
from charnet.metrics import METRICS, EpisodeMetrics
from charnet.stats import (
    correlate_all,
    permutation_pvalue,
    rank_with_ties,
    regularized_incomplete_beta,
    significance_stars,
    spearman_pvalue,
    spearman_rho,
)

from oracles import (
    exhaustive_permutation_pvalue,
    spearman_shortcut,
    t_two_tailed_quadrature,
)


class TestSignificanceStars:
    @pytest.mark.parametrize(
        "p,expected",
        [
            (0.0, "**"),
            (0.0099, "**"),
            (0.01, "*"),
            (0.034, "*"),
            (0.0499, "*"),
            (0.05, ""),
            (0.051, ""),
            (0.9, ""),
        ],
    )
    def test_strict_boundaries(self, p, expected):
        assert significance_stars(p) == expected


class TestRankWithTies:
    def test_distinct(self):
        assert rank_with_ties([10.0, 30.0, 20.0]).ranks == [1.0, 3.0, 2.0]

    def test_pair_tie(self):
        assert rank_with_ties([1.0, 2.0, 2.0, 4.0]).ranks == [1.0, 2.5, 2.5, 4.0]

    def test_all_tied(self):
        assert rank_with_ties([7.0, 7.0, 7.0]).ranks == [2.0, 2.0, 2.0]

    def test_non_finite_rejected(self):
        with pytest.raises(NonFiniteError):
            rank_with_ties([1.0, math.nan])
        with pytest.raises(NonFiniteError):
            rank_with_ties([1.0, math.inf])

    def test_empty_rejected(self):
        with pytest.raises(DegenerateInputError):
            rank_with_ties([])

    @settings(max_examples=150, deadline=None)
    @given(st.lists(st.floats(-1e6, 1e6), min_size=1, max_size=40))
    def test_rank_sum_invariant(self, values):
        ranks = rank_with_ties(values).ranks
        n = len(values)
        assert sum(ranks) == pytest.approx(n * (n + 1) / 2.0, rel=1e-12)
        assert all(1.0 <= r <= n for r in ranks)

    @settings(max_examples=100, deadline=None)
    @given(st.lists(st.floats(-1e6, 1e6), min_size=2, max_size=30))
    def test_equal_values_share_rank(self, values):
        ranked = rank_with_ties(values)
        by_value: dict[float, set[float]] = {}
        for v, r in zip(ranked.values, ranked.ranks):
            by_value.setdefault(v, set()).add(r)
        assert all(len(rs) == 1 for rs in by_value.values())


class TestSpearmanRho:
    def test_monotone_is_one(self):
        assert spearman_rho([1, 2, 3, 4], [10, 20, 30, 40]) == 1.0

    def test_reversed_is_minus_one(self):
        assert spearman_rho([1, 2, 3, 4], [9, 7, 5, 3]) == -1.0

    def test_textbook_example(self):
        # d^2 sums to 4: rho = 1 - 6*4 / (5*24) = 0.8
        assert spearman_rho([1, 2, 3, 4, 5], [2, 1, 4, 3, 5]) == pytest.approx(0.8)

    def test_symmetry(self):
        x = [3.0, 1.0, 4.0, 1.5, 9.0]
        y = [2.0, 7.0, 1.0, 8.0, 2.5]
        assert spearman_rho(x, y) == pytest.approx(spearman_rho(y, x), abs=1e-15)

    def test_length_mismatch(self):
        with pytest.raises(LengthMismatchError):
            spearman_rho([1, 2, 3], [1, 2])

    def test_too_short(self):
        with pytest.raises(DegenerateInputError):
            spearman_rho([1, 2], [3, 4])

    def test_constant_column(self):
        with pytest.raises(DegenerateInputError, match="constant"):
            spearman_rho([5, 5, 5, 5], [1, 2, 3, 4])

    @settings(max_examples=100, deadline=None)
    @given(
        st.lists(
            st.tuples(st.floats(-1e3, 1e3), st.floats(-1e3, 1e3)),
            min_size=3,
            max_size=25,
        )
    )
    def test_bounded(self, pairs):
        x = [a for a, _ in pairs]
        y = [b for _, b in pairs]
        try:
            rho = spearman_rho(x, y)
        except DegenerateInputError:
            return
        assert -1.0 <= rho <= 1.0

    @settings(max_examples=100, deadline=None)
    @given(
        # integers, so the transforms below stay strictly increasing in
        # float arithmetic (nearly-equal floats can collide under exp)
        st.lists(st.integers(1, 500), min_size=4, max_size=15, unique=True),
        st.randoms(use_true_random=False),
    )
    def test_monotone_transform_invariance(self, x, rng):
        x = [float(v) for v in x]
        y = x[:]
        rng.shuffle(y)
        base = spearman_rho(x, y)
        assert spearman_rho([math.exp(v / 100.0) for v in x], y) == pytest.approx(
            base, abs=1e-12
        )
        assert spearman_rho([3.0 * v + 11.0 for v in x], y) == pytest.approx(
            base, abs=1e-12
        )
        assert spearman_rho(x, [v**3 for v in y]) == pytest.approx(base, abs=1e-12)

    @settings(max_examples=120, deadline=None)
    @given(
        st.lists(st.floats(-900.0, 900.0), min_size=4, max_size=12, unique=True),
        st.lists(st.floats(-900.0, 900.0), min_size=12, max_size=12, unique=True),
    )
    def test_tie_free_shortcut_agreement(self, x, y_pool):
        y = y_pool[: len(x)]
        assert spearman_rho(x, y) == pytest.approx(spearman_shortcut(x, y), abs=1e-12)


class TestRegularizedIncompleteBeta:
    def test_endpoints(self):
        assert regularized_incomplete_beta(2.0, 3.0, 0.0) == 0.0
        assert regularized_incomplete_beta(2.0, 3.0, 1.0) == 1.0

    def test_uniform_case_is_identity(self):
        for x in (0.1, 0.25, 0.5, 0.75, 0.9):
            assert regularized_incomplete_beta(1.0, 1.0, x) == pytest.approx(
                x, abs=1e-12
            )

    def test_arcsine_midpoint(self):
        assert regularized_incomplete_beta(0.5, 0.5, 0.5) == pytest.approx(
            0.5, abs=1e-12
        )

    def test_reflection_symmetry(self):
        for a, b, x in ((2.0, 5.0, 0.3), (11.0, 0.5, 0.62), (1.5, 1.5, 0.8)):
            left = regularized_incomplete_beta(a, b, x)
            right = 1.0 - regularized_incomplete_beta(b, a, 1.0 - x)
            assert left == pytest.approx(right, abs=1e-12)

    def test_monotone_in_x(self):
        values = [
            regularized_incomplete_beta(3.0, 2.0, x / 20.0) for x in range(21)
        ]
        assert values == sorted(values)

    @pytest.mark.parametrize("a,b,x", [(-1.0, 2.0, 0.5), (2.0, 0.0, 0.5), (2.0, 2.0, 1.5), (2.0, 2.0, -0.1)])
    def test_domain_errors(self, a, b, x):
        with pytest.raises(DomainError):
            regularized_incomplete_beta(a, b, x)


class TestSpearmanPvalue:
    # anchors from data/reference/reference_correlations.csv, rounded to 3
    # decimals there; the t approximation must land within 0.001 of each
    @pytest.mark.parametrize(
        "rho,n,expected",
        [
            (-0.49, 22, 0.021),
            (0.561, 22, 0.007),
            (0.418, 26, 0.034),
            (0.499, 26, 0.009),
            (-0.493, 26, 0.010),
            (0.448, 26, 0.022),
        ],
    )
    def test_reference_anchors(self, rho, n, expected):
        assert spearman_pvalue(rho, n) == pytest.approx(expected, abs=1e-3)

    def test_perfect_correlation(self):
        assert spearman_pvalue(1.0, 10) == 0.0
        assert spearman_pvalue(-1.0, 10) == 0.0

    def test_zero_rho(self):
        assert spearman_pvalue(0.0, 12) == pytest.approx(1.0, abs=1e-12)

    def test_sign_symmetry(self):
        for rho in (0.1, 0.37, 0.82):
            assert spearman_pvalue(rho, 17) == pytest.approx(
                spearman_pvalue(-rho, 17), abs=1e-15
            )

    def test_domain_errors(self):
        with pytest.raises(DomainError):
            spearman_pvalue(0.5, 3)
        with pytest.raises(DomainError):
            spearman_pvalue(1.2, 10)
        with pytest.raises(DomainError):
            spearman_pvalue(math.nan, 10)

    def test_matches_quadrature_oracle(self):
        for n in (5, 10, 24, 40):
            df = n - 2
            for rho in (0.05, 0.2, 0.45, 0.7):
                t = abs(rho) * math.sqrt(df / (1.0 - rho * rho))
                expected = t_two_tailed_quadrature(t, df)
                assert spearman_pvalue(rho, n) == pytest.approx(expected, abs=1e-8)

    def test_monotone_in_effect_size(self):
        ps = [spearman_pvalue(rho / 100.0, 20) for rho in range(0, 100, 5)]
        assert all(a > b for a, b in zip(ps, ps[1:]))

    def test_monotone_in_sample_size(self):
        ps = [spearman_pvalue(0.45, n) for n in range(5, 60, 5)]
        assert all(a > b for a, b in zip(ps, ps[1:]))


class TestPermutationPvalue:
    def test_iteration_floor(self):
        with pytest.raises(DomainError, match="1000"):
            permutation_pvalue([1, 2, 3, 4, 5], [5, 3, 4, 1, 2], 999, 0)

    def test_seed_determinism(self):
        x = [1, 2, 3, 4, 5, 6, 7, 8]
        y = [2, 1, 4, 3, 6, 5, 8, 7]
        first = permutation_pvalue(x, y, 2000, 42)
        second = permutation_pvalue(x, y, 2000, 42)
        assert first == second

    def test_perfect_monotone_is_extreme(self):
        x = list(range(1, 9))
        p = permutation_pvalue(x, x, 10000, 3)
        assert p <= 0.002

    def test_matches_exhaustive_enumeration(self):
        rng = random.Random(909)
        for _ in range(4):
            x = list(range(1, 7))
            y = list(range(1, 7))
            rng.shuffle(y)
            exact = exhaustive_permutation_pvalue(x, y)
            estimate = permutation_pvalue(x, y, 20000, rng.randrange(10**6))
            assert estimate == pytest.approx(exact, abs=0.02)

    def test_constant_side_rejected(self):
        with pytest.raises(DegenerateInputError):
            permutation_pvalue([1, 1, 1, 1], [1, 2, 3, 4], 1000, 0)


def _demo_rows() -> list[EpisodeMetrics]:
    rng = random.Random(11)
    rows = []
    for i in range(1, 9):
        rows.append(
            EpisodeMetrics(
                key=EpisodeKey("demo", 1, i),
                ordinal=i,
                active_nodes=5,  # constant on purpose: must be flagged
                density=i / 10.0,
                efficiency=rng.random(),
                transitivity=(9 - i) / 10.0,
                strength_max=rng.uniform(10, 400),
                strength_std=rng.uniform(0, 50),
                degree_max=rng.randrange(2, 9),
                degree_std=rng.uniform(0, 3),
                harmonic_max=rng.uniform(1, 8),
                harmonic_std=rng.uniform(0, 2),
                eigen_max=rng.uniform(0.3, 0.9),
                eigen_std=rng.uniform(0, 0.3),
            )
        )
    return rows


def _demo_ratings() -> RatingsTable:
    table = RatingsTable()
    for i in range(1, 9):
        table.ratings[EpisodeKey("demo", 1, i)] = float(i)
    return table


class TestCorrelateAll:
    def test_report_shape_and_order(self):
        report = correlate_all(_demo_rows(), _demo_ratings())
        assert report.series == "demo"
        assert report.n == 8
        assert report.excluded == 0
        assert [r.metric_name for r in report.results] == [c.label for c in METRICS]

    def test_perfectly_aligned_column(self):
        report = correlate_all(_demo_rows(), _demo_ratings())
        density = next(r for r in report.results if r.metric_name == "Density")
        assert density.rho == 1.0
        assert density.p_value == 0.0
        assert density.significance == "**"
        reversed_col = next(
            r for r in report.results if r.metric_name == "Transitivity"
        )
        assert reversed_col.rho == -1.0

    def test_constant_column_flagged_not_fatal(self):
        report = correlate_all(_demo_rows(), _demo_ratings())
        flagged = next(r for r in report.results if r.metric_name == "Active Nodes")
        assert flagged.rho is None
        assert flagged.p_value is None
        assert flagged.significance == ""
        assert "constant" in flagged.note

    def test_unrated_episodes_excluded_and_counted(self):
        rows = _demo_rows()
        rows.append(EpisodeMetrics(key=EpisodeKey("demo", 1, 99), density=0.5))
        rows.append(EpisodeMetrics(key=EpisodeKey("demo", 2, 1), density=0.6))
        report = correlate_all(rows, _demo_ratings())
        assert report.n == 8
        assert report.excluded == 2

    def test_permutation_column(self):
        report = correlate_all(
            _demo_rows(), _demo_ratings(), permutations=1000, seed=7
        )
        for result in report.results:
            if result.rho is None:
                assert result.permutation_p is None
            else:
                assert 0.0 < result.permutation_p <= 1.0
        again = correlate_all(
            _demo_rows(), _demo_ratings(), permutations=1000, seed=7
        )
        assert report == again

    def test_mixed_series_rejected(self):
        rows = _demo_rows()
        rows.append(EpisodeMetrics(key=EpisodeKey("other", 1, 1)))
        with pytest.raises(ValueError, match="one series"):
            correlate_all(rows, _demo_ratings())

    def test_insufficient_rated_episodes(self):
        rows = _demo_rows()[:3]
        with pytest.raises(InsufficientDataError):
            correlate_all(rows, _demo_ratings())

    def test_echo_fields_carried(self):
        report = correlate_all(
            _demo_rows(), _demo_ratings(), efficiency_mode="neighborhood", dedup_dropped=3
        )
        assert report.efficiency_mode == "neighborhood"
        assert report.std_convention == "population"
        assert report.dedup_dropped == 3
