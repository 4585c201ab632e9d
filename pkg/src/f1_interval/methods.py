"""Confidence intervals for the population F1 score.

Four constructors are provided, all of them functions of (tp, nu, alpha) only:

* ``clopper-pearson`` - exact binomial interval for F*, mapped to the F1 scale.
* ``wald`` - F1 estimate plus/minus z standard errors; may overshoot [0, 1]
  and may be degenerate.
* ``wilson-direct`` - inverts the score test for F1; endpoints are the two
  roots in [0, 1] of a quartic, which are guaranteed distinct while
  k = z^2 / nu < 16 / 11.
* ``wilson-indirect`` - Wilson score interval for F*, mapped to the F1 scale.
"""

import logging
import math
from dataclasses import dataclass
from typing import Iterable, List, Optional, Tuple, Union

from .core import (
    CLOPPER_PEARSON,
    METHODS,
    WALD,
    WILSON_DIRECT,
    WILSON_INDIRECT,
    ConfidenceInterval,
    ConfusionCounts,
    estimates_from_counts,
    f1_from_fstar,
    f1_variance,
)
from .errors import ConvergenceError, DomainError, ValidityError
from .numerics import Quartic, beta_quantile, find_bracketed_root, normal_quantile

# Wilson-direct roots are unique and distinct while k stays below this bound.
WILSON_DIRECT_K_LIMIT = 16.0 / 11.0
RESIDUAL_TOL = 1e-9


@dataclass(frozen=True)
class MethodResult:
    """Outcome of one method: an interval, or the error that prevented it."""

    method: str
    interval: Optional[ConfidenceInterval] = None
    error: Optional[Exception] = None

    @property
    def ok(self) -> bool:
        return self.interval is not None


def _check_alpha(alpha: float):
    if not (0.0 < alpha < 1.0):
        raise DomainError(f"alpha must lie in (0, 1), got {alpha!r}")


def critical_value(alpha: float) -> float:
    """Two-sided standard normal critical value z_{alpha/2}."""
    _check_alpha(alpha)
    return -normal_quantile(alpha / 2.0)


def wilson_direct_min_nu(alpha: float) -> int:
    """Smallest nu for which the Wilson-direct quartic has two roots in [0, 1]."""
    z = critical_value(alpha)
    return math.floor(11.0 * z * z / 16.0) + 1


def clopper_pearson(counts: ConfusionCounts, alpha: float) -> ConfidenceInterval:
    """Clopper-Pearson interval for F*, transformed to the F1 scale.

    The lower F* endpoint is 0 when tp = 0 and the upper is 1 when tp = nu.
    """
    _check_alpha(alpha)
    estimates = estimates_from_counts(counts)
    tp, nu = counts.tp, estimates.nu
    lower = 0.0 if tp == 0 else beta_quantile(alpha / 2.0, tp, nu - tp + 1)
    upper = 1.0 if tp == nu else beta_quantile(1.0 - alpha / 2.0, tp + 1, nu - tp)
    return ConfidenceInterval(CLOPPER_PEARSON, alpha, f1_from_fstar(lower), f1_from_fstar(upper))


def wald(counts: ConfusionCounts, alpha: float) -> ConfidenceInterval:
    """Wald interval around the sample F1 score, left unclipped."""
    z = critical_value(alpha)
    estimates = estimates_from_counts(counts)
    half_width = z * math.sqrt(f1_variance(estimates.f1_hat, estimates.nu))
    return ConfidenceInterval(WALD, alpha, estimates.f1_hat - half_width, estimates.f1_hat + half_width)


def wilson_direct(counts: ConfusionCounts, alpha: float) -> ConfidenceInterval:
    """Score interval for F1 from the roots of the Wilson quartic.

    With f(F) = k F (F - 1)(F - 2)^2 + 2 (F - F1_hat)^2 we have f(0) >= 0,
    f(F1_hat) <= 0 and f(1) >= 0, so [0, F1_hat] and [F1_hat, 1] each bracket
    one root. At F1_hat in {0, 1} the boundary is itself a root and the other
    root is found on the deflated polynomial.
    """
    z = critical_value(alpha)
    estimates = estimates_from_counts(counts)
    nu, f1_hat = estimates.nu, estimates.f1_hat
    threshold = 11.0 * z * z / 16.0
    if nu <= threshold:
        raise ValidityError(nu, alpha, math.floor(threshold) + 1)
    k = z * z / nu

    def factored(f1: float) -> float:
        return k * f1 * (f1 - 1.0) * (f1 - 2.0) ** 2 + 2.0 * (f1 - f1_hat) ** 2

    if f1_hat == 0.0:
        lower = 0.0
        upper = find_bracketed_root(lambda f1: k * (f1 - 1.0) * (f1 - 2.0) ** 2 + 2.0 * f1, 0.0, 1.0)
    elif f1_hat == 1.0:
        lower = find_bracketed_root(lambda f1: k * f1 * (f1 - 2.0) ** 2 + 2.0 * (f1 - 1.0), 0.0, 1.0)
        upper = 1.0
    else:
        lower = find_bracketed_root(factored, 0.0, f1_hat)
        upper = find_bracketed_root(factored, f1_hat, 1.0)

    quartic = Quartic.wilson_direct(k, f1_hat)
    for root in (lower, upper):
        residual = abs(quartic(root))
        if residual > RESIDUAL_TOL:
            raise ConvergenceError(f"wilson-direct root {root!r} has residual {residual:.3e} (tp={counts.tp}, nu={nu})")
    if not lower < upper:
        raise ConvergenceError(f"wilson-direct roots did not separate: {lower!r}, {upper!r} (tp={counts.tp}, nu={nu})")
    return ConfidenceInterval(WILSON_DIRECT, alpha, lower, upper)


def wilson_score_bounds(fstar_hat: float, k: float) -> Tuple[float, float]:
    """Roots of (1 + k) F*^2 - (2 F*_hat + k) F* + F*_hat^2 = 0, lower first."""
    centre = 2.0 * fstar_hat + k
    spread = math.sqrt(k * k + 4.0 * k * fstar_hat * (1.0 - fstar_hat))
    denominator = 2.0 * (1.0 + k)
    return max(0.0, (centre - spread) / denominator), min(1.0, (centre + spread) / denominator)


def wilson_indirect(counts: ConfusionCounts, alpha: float) -> ConfidenceInterval:
    """Wilson score interval for F*, transformed to the F1 scale."""
    z = critical_value(alpha)
    estimates = estimates_from_counts(counts)
    lower, upper = wilson_score_bounds(estimates.fstar_hat, z * z / estimates.nu)
    return ConfidenceInterval(WILSON_INDIRECT, alpha, f1_from_fstar(lower), f1_from_fstar(upper))


_CONSTRUCTORS = {
    CLOPPER_PEARSON: clopper_pearson,
    WALD: wald,
    WILSON_DIRECT: wilson_direct,
    WILSON_INDIRECT: wilson_indirect,
}


def parse_methods(tags: Union[str, Iterable[str]]) -> List[str]:
    """Normalise method tags into the fixed reporting order.

    Accepts an iterable of tags or a comma-separated string; ``all`` selects
    every method.
    """
    if isinstance(tags, str):
        tags = tags.split(',')
    requested = {tag.strip().lower() for tag in tags if tag.strip()}
    if not requested:
        raise DomainError("no methods requested")
    if 'all' in requested:
        return list(METHODS)
    unknown = requested.difference(METHODS)
    if unknown:
        raise DomainError(f"unknown method(s) {', '.join(sorted(unknown))}; choose from {', '.join(METHODS)} or all")
    return [method for method in METHODS if method in requested]


def compute_interval(method: str, counts: ConfusionCounts, alpha: float) -> ConfidenceInterval:
    """Build the interval named by ``method``."""
    try:
        constructor = _CONSTRUCTORS[method]
    except KeyError:
        raise DomainError(f"unknown method {method!r}; choose from {', '.join(METHODS)}") from None
    return constructor(counts, alpha)


def compute_all(counts: ConfusionCounts, alpha: float,
                methods: Iterable[str] = METHODS) -> List[MethodResult]:
    """Every requested interval, in the fixed order.

    A method that cannot produce an interval for these counts is reported as a
    failed entry; only an undefined estimate (nu = 0) or a bad alpha aborts.
    """
    _check_alpha(alpha)
    estimates_from_counts(counts)
    results = []
    for method in parse_methods(methods):
        try:
            results.append(MethodResult(method, interval=compute_interval(method, counts, alpha)))
        except (ValidityError, ConvergenceError) as e:
            logging.debug(f"{method} failed for {counts}: {e}")
            results.append(MethodResult(method, error=e))
    return results
