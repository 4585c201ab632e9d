"""F1 Interval - confidence intervals for the population F1 score."""

__version__ = "1.0.0"
__author__ = "Max Schramp"

from .core import ConfidenceInterval, ConfusionCounts, PointEstimates, estimates_from_counts
from .methods import clopper_pearson, compute_all, wald, wilson_direct, wilson_indirect
from .simulation import Scenario, SimulationConfig, builtin_scenarios, run_condition

__all__ = [
    "ConfidenceInterval",
    "ConfusionCounts",
    "PointEstimates",
    "Scenario",
    "SimulationConfig",
    "builtin_scenarios",
    "clopper_pearson",
    "compute_all",
    "estimates_from_counts",
    "run_condition",
    "wald",
    "wilson_direct",
    "wilson_indirect",
]
