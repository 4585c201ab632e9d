import numpy as np
import pytest

from f1_interval.core import (
    CLOPPER_PEARSON,
    WALD,
    ConfidenceInterval,
    ConfusionCounts,
    estimates_from_counts,
    f1_from_fstar,
    f1_variance,
    fstar_from_f1,
    fstar_variance,
    true_f1_from_probs,
)
from f1_interval.errors import DomainError, UndefinedEstimateError


class TestConfusionCounts:

    def test_derived_sizes(self, example_counts):
        assert example_counts.nu == 131
        assert example_counts.n == 833
        assert example_counts.prevalence == pytest.approx(87 / 833)

    def test_from_relevant(self):
        counts = ConfusionCounts.from_relevant(tp=4, nu=9)
        assert (counts.tp, counts.nu) == (4, 9)

    @pytest.mark.parametrize("cells", [(-1, 0, 0, 0), (1.5, 0, 0, 0), (0, 0, 0, 0)])
    def test_rejects_invalid_cells(self, cells):
        with pytest.raises(DomainError):
            ConfusionCounts(*cells)

    def test_str(self):
        assert str(ConfusionCounts(1, 2, 3, 4)) == "tp=1 fp=2 fn=3 tn=4"


class TestEstimates:

    def test_worked_example(self, example_counts):
        estimates = estimates_from_counts(example_counts)
        assert estimates.nu == 131
        assert estimates.fstar_hat == pytest.approx(0.587786, abs=1e-6)
        assert estimates.f1_hat == pytest.approx(0.740385, abs=1e-6)

    def test_perfect_classifier(self):
        estimates = estimates_from_counts(ConfusionCounts(5, 0, 0, 3))
        assert estimates.fstar_hat == 1.0
        assert estimates.f1_hat == 1.0

    def test_no_true_positives(self):
        estimates = estimates_from_counts(ConfusionCounts(0, 3, 2, 0))
        assert estimates.nu == 5
        assert estimates.fstar_hat == 0.0
        assert estimates.f1_hat == 0.0

    def test_undefined_without_relevant_documents(self):
        with pytest.raises(UndefinedEstimateError):
            estimates_from_counts(ConfusionCounts(0, 0, 0, 10))

    def test_invariant_to_error_split_and_true_negatives(self):
        reference = estimates_from_counts(ConfusionCounts(7, 5, 1, 0))
        for fp, fn, tn in [(1, 5, 0), (3, 3, 100), (6, 0, 9)]:
            assert estimates_from_counts(ConfusionCounts(7, fp, fn, tn)) == reference

    def test_f1_is_transform_of_fstar(self):
        rng = np.random.default_rng(3)
        for tp, fp, fn in rng.integers(0, 50, size=(200, 3)):
            if tp + fp + fn == 0:
                continue
            estimates = estimates_from_counts(ConfusionCounts(int(tp), int(fp), int(fn)))
            assert estimates.f1_hat == pytest.approx(f1_from_fstar(estimates.fstar_hat), abs=1e-15)


class TestTransforms:

    def test_fixed_points(self):
        assert f1_from_fstar(0.0) == 0.0
        assert f1_from_fstar(1.0) == 1.0
        assert f1_from_fstar(0.5) == pytest.approx(2 / 3)

    def test_inverse(self):
        for fstar in np.linspace(0.0, 1.0, 101):
            assert fstar_from_f1(f1_from_fstar(float(fstar))) == pytest.approx(float(fstar), abs=1e-15)

    def test_strictly_increasing(self):
        values = [f1_from_fstar(float(x)) for x in np.linspace(0.0, 1.0, 101)]
        assert all(later > earlier for earlier, later in zip(values, values[1:]))

    @pytest.mark.parametrize("value", [-0.01, 1.01])
    def test_domain(self, value):
        with pytest.raises(DomainError):
            f1_from_fstar(value)
        with pytest.raises(DomainError):
            fstar_from_f1(value)


class TestVariance:

    def test_worked_example(self):
        assert f1_variance(0.740385, 131) == pytest.approx(0.00116418, abs=5e-7)

    def test_zero_at_boundaries(self):
        assert f1_variance(0.0, 10) == 0.0
        assert f1_variance(1.0, 10) == 0.0

    def test_matches_delta_method_on_fstar(self):
        rng = np.random.default_rng(5)
        for fstar, nu in zip(rng.uniform(0, 1, 300), rng.integers(1, 5000, 300)):
            fstar, nu = float(fstar), int(nu)
            derivative = 2.0 / (1.0 + fstar) ** 2
            expected = derivative ** 2 * fstar_variance(fstar, nu)
            assert f1_variance(f1_from_fstar(fstar), nu) == pytest.approx(expected, rel=1e-12, abs=1e-15)

    def test_decreasing_in_nu(self):
        variances = [f1_variance(0.6, nu) for nu in (1, 2, 10, 100, 1000)]
        assert all(later < earlier for earlier, later in zip(variances, variances[1:]))

    def test_rejects_empty_sample(self):
        with pytest.raises(DomainError):
            f1_variance(0.5, 0)
        with pytest.raises(DomainError):
            fstar_variance(0.5, 0)


class TestTrueF1:

    @pytest.mark.parametrize("probs,expected", [
        ((0.4, 0.1, 0.1, 0.4), 0.8),
        ((0.64, 0.16, 0.16, 0.04), 0.8),
        ((0.16, 0.04, 0.64, 0.16), 0.32),
    ])
    def test_scenarios(self, probs, expected):
        assert true_f1_from_probs(*probs) == pytest.approx(expected, abs=1e-12)

    def test_no_relevant_mass(self):
        with pytest.raises(DomainError):
            true_f1_from_probs(0.0, 0.0, 0.0, 1.0)

    @pytest.mark.parametrize("probs", [(0.5, 0.5, 0.5, 0.0), (-0.1, 0.6, 0.3, 0.2), (0.25, 0.25, 0.25, 0.2)])
    def test_invalid_probabilities(self, probs):
        with pytest.raises(DomainError):
            true_f1_from_probs(*probs)


class TestConfidenceInterval:

    def test_properties(self):
        interval = ConfidenceInterval(WALD, 0.05, 0.6, 0.9)
        assert interval.length == pytest.approx(0.3)
        assert not interval.is_degenerate
        assert not interval.overshoots
        assert interval.contains(0.6)
        assert not interval.contains(0.95)

    def test_wald_may_overshoot(self):
        interval = ConfidenceInterval(WALD, 0.05, 0.95, 1.02)
        assert interval.overshoots

    def test_bounded_methods_stay_in_unit_interval(self):
        with pytest.raises(DomainError):
            ConfidenceInterval(CLOPPER_PEARSON, 0.05, 0.95, 1.02)

    def test_rejects_reversed_endpoints(self):
        with pytest.raises(DomainError):
            ConfidenceInterval(WALD, 0.05, 0.5, 0.4)
