"""Confusion-matrix data model, F1/F* point estimates and their variances."""

import math
from dataclasses import dataclass
from typing import Tuple

from .errors import DomainError, UndefinedEstimateError

CLOPPER_PEARSON = "clopper-pearson"
WALD = "wald"
WILSON_DIRECT = "wilson-direct"
WILSON_INDIRECT = "wilson-indirect"

# Fixed reporting order for every table this package produces.
METHODS: Tuple[str, ...] = (CLOPPER_PEARSON, WALD, WILSON_DIRECT, WILSON_INDIRECT)

# Methods whose endpoints are guaranteed to stay inside [0, 1].
BOUNDED_METHODS = frozenset({CLOPPER_PEARSON, WILSON_DIRECT, WILSON_INDIRECT})

PROBABILITY_SUM_TOL = 1e-12


@dataclass(frozen=True)
class ConfusionCounts:
    """Cell counts of a binary confusion matrix.

    ``tp``, ``fp``, ``fn`` and ``tn`` are the true positives, false positives,
    false negatives and true negatives. ``tn`` never enters an F1 formula.
    """

    tp: int
    fp: int
    fn: int
    tn: int = 0

    def __post_init__(self):
        for name in ("tp", "fp", "fn", "tn"):
            value = getattr(self, name)
            if int(value) != value or value < 0:
                raise DomainError(f"{name} must be a non-negative integer, got {value!r}")
            object.__setattr__(self, name, int(value))
        if self.n < 1:
            raise DomainError("a confusion matrix needs at least one observation")

    @property
    def nu(self) -> int:
        """Number of relevant documents, tp + fp + fn."""
        return self.tp + self.fp + self.fn

    @property
    def n(self) -> int:
        return self.tp + self.fp + self.fn + self.tn

    @property
    def prevalence(self) -> float:
        """Share of actual positives among all documents."""
        return (self.tp + self.fn) / self.n

    @classmethod
    def from_relevant(cls, tp: int, nu: int) -> 'ConfusionCounts':
        """Counts with the given tp and nu; every interval depends on nothing else."""
        return cls(tp=tp, fp=nu - tp, fn=0, tn=0)

    def __str__(self) -> str:
        return f"tp={self.tp} fp={self.fp} fn={self.fn} tn={self.tn}"


@dataclass(frozen=True)
class PointEstimates:
    """Sample F* and F1 scores for one confusion matrix."""

    nu: int
    fstar_hat: float
    f1_hat: float


@dataclass(frozen=True)
class ConfidenceInterval:
    """A (1 - alpha) confidence interval for the population F1 score."""

    method: str
    alpha: float
    lower: float
    upper: float

    def __post_init__(self):
        if not self.lower <= self.upper:
            raise DomainError(f"{self.method}: lower endpoint {self.lower!r} exceeds upper {self.upper!r}")
        if self.method in BOUNDED_METHODS and not (0.0 <= self.lower and self.upper <= 1.0):
            raise DomainError(f"{self.method}: endpoints [{self.lower!r}, {self.upper!r}] leave [0, 1]")

    @property
    def length(self) -> float:
        return self.upper - self.lower

    @property
    def is_degenerate(self) -> bool:
        return self.upper == self.lower

    @property
    def overshoots(self) -> bool:
        return self.lower < 0.0 or self.upper > 1.0

    def contains(self, value: float) -> bool:
        return self.lower <= value <= self.upper

    def __str__(self) -> str:
        return f"{self.method} [{self.lower:.3f}, {self.upper:.3f}]"


def _check_probability(name: str, value: float):
    if not (0.0 <= value <= 1.0):
        raise DomainError(f"{name} must lie in [0, 1], got {value!r}")


def estimates_from_counts(counts: ConfusionCounts) -> PointEstimates:
    """Sample F* = tp / nu and sample F1 = 2 tp / (2 tp + fp + fn)."""
    nu = counts.nu
    if nu == 0:
        raise UndefinedEstimateError()
    return PointEstimates(
        nu=nu,
        fstar_hat=counts.tp / nu,
        f1_hat=2.0 * counts.tp / (2 * counts.tp + counts.fp + counts.fn),
    )


def f1_from_fstar(fstar: float) -> float:
    """F1 = 2 F* / (1 + F*), strictly increasing on [0, 1]."""
    _check_probability("fstar", fstar)
    return 2.0 * fstar / (1.0 + fstar)


def fstar_from_f1(f1: float) -> float:
    """Inverse of :func:`f1_from_fstar`: F* = F1 / (2 - F1)."""
    _check_probability("f1", f1)
    return f1 / (2.0 - f1)


def fstar_variance(fstar: float, nu: int) -> float:
    """Binomial variance of the sample F* score, F*(1 - F*) / nu."""
    _check_probability("fstar", fstar)
    if nu < 1:
        raise DomainError(f"nu must be at least 1, got {nu!r}")
    return fstar * (1.0 - fstar) / nu


def f1_variance(f1: float, nu: int) -> float:
    """Delta-method variance of the sample F1 score, F1(1 - F1)(2 - F1)^2 / (2 nu).

    Equal to [2 / (1 + F*)^2]^2 * F*(1 - F*) / nu, with nu divided out once.
    """
    _check_probability("f1", f1)
    if nu < 1:
        raise DomainError(f"nu must be at least 1, got {nu!r}")
    return f1 * (1.0 - f1) * (2.0 - f1) ** 2 / (2.0 * nu)


def true_f1_from_probs(p11: float, p10: float, p01: float, p00: float) -> float:
    """Population F1 = 2 p11 / (2 p11 + p10 + p01) from cell probabilities."""
    probs = (p11, p10, p01, p00)
    for name, value in zip(("p11", "p10", "p01", "p00"), probs):
        if not (math.isfinite(value) and value >= 0.0):
            raise DomainError(f"{name} must be a non-negative probability, got {value!r}")
    if abs(math.fsum(probs) - 1.0) > PROBABILITY_SUM_TOL:
        raise DomainError(f"cell probabilities must sum to 1, got {math.fsum(probs)!r}")
    relevant = p11 + p10 + p01
    if relevant <= 0.0:
        raise DomainError("F1 is undefined when p11 + p10 + p01 = 0")
    return 2.0 * p11 / (2.0 * p11 + p10 + p01)
