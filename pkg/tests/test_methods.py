import math

import pytest

from f1_interval.core import (
    BOUNDED_METHODS,
    CLOPPER_PEARSON,
    METHODS,
    WALD,
    WILSON_DIRECT,
    WILSON_INDIRECT,
    ConfusionCounts,
    estimates_from_counts,
    f1_from_fstar,
    f1_variance,
)
from f1_interval.errors import DomainError, UndefinedEstimateError, ValidityError
from f1_interval.methods import (
    clopper_pearson,
    compute_all,
    compute_interval,
    critical_value,
    parse_methods,
    wald,
    wilson_direct,
    wilson_direct_min_nu,
    wilson_indirect,
    wilson_score_bounds,
)
from f1_interval.numerics import Quartic, beta_quantile

ALPHAS = (0.01, 0.05, 0.10)


def all_counts(nu_max=60, nu_min=1):
    for nu in range(nu_min, nu_max + 1):
        for tp in range(nu + 1):
            yield ConfusionCounts.from_relevant(tp, nu)


class TestWorkedExample:
    """95% intervals for tp=77, fp=44, fn=10."""

    @pytest.mark.parametrize("method,lower,upper,length", [
        (CLOPPER_PEARSON, 0.665, 0.805, 0.139),
        (WALD, 0.674, 0.807, 0.134),
        (WILSON_DIRECT, 0.664, 0.799, 0.135),
        (WILSON_INDIRECT, 0.669, 0.801, 0.133),
    ])
    def test_interval(self, example_counts, method, lower, upper, length):
        interval = compute_interval(method, example_counts, 0.05)
        assert round(interval.lower, 3) == lower
        assert round(interval.upper, 3) == upper
        assert round(interval.length, 3) == length

    def test_point_estimate(self, example_counts):
        assert round(estimates_from_counts(example_counts).f1_hat, 3) == 0.740

    def test_compute_all_order(self, example_counts):
        results = compute_all(example_counts, 0.05)
        assert [r.method for r in results] == list(METHODS)
        assert all(r.ok for r in results)


class TestCriticalValues:

    def test_five_percent(self):
        assert critical_value(0.05) == pytest.approx(1.959964, abs=1e-6)

    @pytest.mark.parametrize("alpha,expected", [(0.01, 5), (0.05, 3), (0.10, 2)])
    def test_wilson_direct_min_nu(self, alpha, expected):
        assert wilson_direct_min_nu(alpha) == expected

    @pytest.mark.parametrize("alpha", [0.0, 1.0, -0.5, 2.0])
    def test_alpha_domain(self, alpha, example_counts):
        with pytest.raises(DomainError):
            critical_value(alpha)
        with pytest.raises(DomainError):
            clopper_pearson(example_counts, alpha)


class TestClopperPearson:

    def test_no_true_positives(self):
        interval = clopper_pearson(ConfusionCounts(0, 3, 2), 0.05)
        assert interval.lower == 0.0
        assert interval.upper > 0.0

    def test_all_relevant_are_true_positives(self):
        interval = clopper_pearson(ConfusionCounts(5, 0, 0), 0.05)
        assert interval.upper == 1.0
        assert interval.lower < 1.0

    def test_single_relevant_document(self):
        miss = clopper_pearson(ConfusionCounts.from_relevant(0, 1), 0.05)
        hit = clopper_pearson(ConfusionCounts.from_relevant(1, 1), 0.05)
        assert miss.lower == 0.0 and hit.upper == 1.0
        assert miss.upper == pytest.approx(f1_from_fstar(0.975), abs=1e-12)
        assert hit.lower == pytest.approx(f1_from_fstar(0.025), abs=1e-12)

    def test_endpoints_are_transformed_beta_quantiles(self):
        counts = ConfusionCounts.from_relevant(12, 40)
        interval = clopper_pearson(counts, 0.05)
        assert interval.lower == f1_from_fstar(beta_quantile(0.025, 12, 29))
        assert interval.upper == f1_from_fstar(beta_quantile(0.975, 13, 28))


class TestWald:

    def test_degenerate_at_zero(self):
        interval = wald(ConfusionCounts(0, 3, 2), 0.05)
        assert (interval.lower, interval.upper) == (0.0, 0.0)
        assert interval.is_degenerate

    def test_degenerate_at_one(self):
        interval = wald(ConfusionCounts(5, 0, 0), 0.05)
        assert (interval.lower, interval.upper) == (1.0, 1.0)

    def test_symmetric_about_estimate(self):
        for counts in all_counts(nu_max=25):
            interval = wald(counts, 0.05)
            estimates = estimates_from_counts(counts)
            half_width = critical_value(0.05) * math.sqrt(f1_variance(estimates.f1_hat, estimates.nu))
            assert (interval.lower + interval.upper) / 2 == pytest.approx(estimates.f1_hat, abs=1e-12)
            assert interval.upper - estimates.f1_hat == pytest.approx(half_width, abs=1e-12)

    def test_overshoots_near_perfect_score(self):
        interval = wald(ConfusionCounts.from_relevant(23, 24), 0.05)
        assert interval.upper > 1.0
        assert interval.overshoots


class TestWilsonDirect:

    def test_rejects_small_nu(self):
        with pytest.raises(ValidityError) as excinfo:
            wilson_direct(ConfusionCounts(1, 0, 1), 0.05)
        assert excinfo.value.min_nu == 3
        assert "3" in str(excinfo.value)

    def test_no_true_positives(self):
        interval = wilson_direct(ConfusionCounts(0, 4, 6), 0.05)
        assert interval.lower == 0.0
        assert 0.0 < interval.upper < 1.0

    def test_perfect_score(self):
        interval = wilson_direct(ConfusionCounts(10, 0, 0), 0.05)
        assert interval.upper == 1.0
        assert 0.0 < interval.lower < 1.0

    def test_smallest_valid_nu(self):
        for tp in range(4):
            interval = wilson_direct(ConfusionCounts.from_relevant(tp, 3), 0.05)
            assert interval.lower < interval.upper

    @pytest.mark.parametrize("alpha", ALPHAS)
    def test_roots_solve_quartic(self, alpha):
        z = critical_value(alpha)
        for counts in all_counts(nu_min=wilson_direct_min_nu(alpha)):
            estimates = estimates_from_counts(counts)
            quartic = Quartic.wilson_direct(z * z / estimates.nu, estimates.f1_hat)
            interval = wilson_direct(counts, alpha)
            assert abs(quartic(interval.lower)) <= 1e-9
            assert abs(quartic(interval.upper)) <= 1e-9
            assert interval.lower <= estimates.f1_hat <= interval.upper


class TestWilsonIndirect:

    def test_no_true_positives(self):
        k = critical_value(0.05) ** 2 / 10
        interval = wilson_indirect(ConfusionCounts.from_relevant(0, 10), 0.05)
        assert interval.lower == 0.0
        assert interval.upper == pytest.approx(2 * k / (1 + 2 * k), abs=1e-12)

    def test_score_bounds_solve_quadratic(self):
        k = 0.2
        for fstar_hat in (0.0, 0.1, 0.5, 0.9, 1.0):
            for root in wilson_score_bounds(fstar_hat, k):
                residual = (1 + k) * root ** 2 - (2 * fstar_hat + k) * root + fstar_hat ** 2
                assert abs(residual) <= 1e-12

    def test_endpoints_are_transformed_score_bounds(self):
        counts = ConfusionCounts.from_relevant(30, 50)
        z = critical_value(0.05)
        lower, upper = wilson_score_bounds(0.6, z * z / 50)
        interval = wilson_indirect(counts, 0.05)
        assert interval.lower == f1_from_fstar(lower)
        assert interval.upper == f1_from_fstar(upper)


class TestExhaustiveGrid:
    """Every count vector with nu up to 60, at three confidence levels."""

    @pytest.mark.parametrize("alpha", ALPHAS)
    @pytest.mark.parametrize("method", sorted(BOUNDED_METHODS))
    def test_bounded_methods_never_overshoot_or_degenerate(self, method, alpha):
        nu_min = wilson_direct_min_nu(alpha) if method == WILSON_DIRECT else 1
        for counts in all_counts(nu_min=nu_min):
            interval = compute_interval(method, counts, alpha)
            assert 0.0 <= interval.lower < interval.upper <= 1.0

    @pytest.mark.parametrize("method", METHODS)
    def test_nested_in_confidence_level(self, method):
        nu_min = wilson_direct_min_nu(0.01) if method == WILSON_DIRECT else 1
        for counts in all_counts(nu_min=nu_min):
            wide, middle, narrow = (compute_interval(method, counts, alpha) for alpha in ALPHAS)
            assert wide.lower <= middle.lower + 1e-9 and middle.upper <= wide.upper + 1e-9
            assert middle.lower <= narrow.lower + 1e-9 and narrow.upper <= middle.upper + 1e-9

    @pytest.mark.parametrize("method", METHODS)
    def test_depends_only_on_tp_and_nu(self, method):
        for tp, fp, fn in [(3, 4, 5), (10, 0, 7), (0, 6, 2)]:
            reference = compute_interval(method, ConfusionCounts(tp, fp, fn), 0.05)
            for other in (ConfusionCounts(tp, fn, fp), ConfusionCounts(tp, fp + fn, 0, 50)):
                assert compute_interval(method, other, 0.05) == reference


class TestComputeAll:

    def test_wilson_direct_reported_as_failure(self):
        results = compute_all(ConfusionCounts(1, 0, 1), 0.05)
        by_method = {r.method: r for r in results}
        assert not by_method[WILSON_DIRECT].ok
        assert isinstance(by_method[WILSON_DIRECT].error, ValidityError)
        assert all(by_method[m].ok for m in (CLOPPER_PEARSON, WALD, WILSON_INDIRECT))

    def test_undefined_estimate_aborts(self):
        with pytest.raises(UndefinedEstimateError):
            compute_all(ConfusionCounts(0, 0, 0, 10), 0.05)

    def test_selected_methods(self, example_counts):
        results = compute_all(example_counts, 0.05, [WILSON_INDIRECT, WALD])
        assert [r.method for r in results] == [WALD, WILSON_INDIRECT]

    def test_unknown_method(self, example_counts):
        with pytest.raises(DomainError):
            compute_interval("bootstrap", example_counts, 0.05)


class TestParseMethods:

    def test_all(self):
        assert parse_methods("all") == list(METHODS)

    def test_comma_separated_string(self):
        assert parse_methods("wilson-indirect, Wald") == [WALD, WILSON_INDIRECT]

    def test_duplicates_collapse(self):
        assert parse_methods([WALD, WALD]) == [WALD]

    @pytest.mark.parametrize("tags", ["", "wald,bogus", [" "]])
    def test_rejects(self, tags):
        with pytest.raises(DomainError):
            parse_methods(tags)
