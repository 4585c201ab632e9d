"""Monte Carlo coverage study and exact-enumeration coverage oracle.

Replicates are drawn in fixed blocks of ``BLOCK_SIZE``; block ``b`` uses its
own Philox stream keyed by ``SeedSequence(seed, spawn_key=(b,))``, so a
replicate's counts depend only on the master seed and its index. Each block is
reduced to an integer histogram of (tp, nu) pairs, and intervals are built once
per distinct pair. Metrics are combined from the merged histogram in sorted
pair order, which makes results identical for any number of workers.
"""

import logging
import math
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, Iterable, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from .core import (
    METHODS,
    WILSON_DIRECT,
    ConfidenceInterval,
    ConfusionCounts,
    estimates_from_counts,
    f1_from_fstar,
    true_f1_from_probs,
)
from .errors import DomainError, ValidityError
from .methods import compute_interval, parse_methods, wilson_direct_min_nu, wilson_indirect

BLOCK_SIZE = 10_000
DEFAULT_SEED = 20240101
DEFAULT_REPLICATES = 100_000
ENUMERATION_CAP = 10_000
INTERVAL_CACHE_SIZE = 1 << 18


@dataclass(frozen=True)
class Scenario:
    """Population cell probabilities (p11, p10, p01, p00) and their F1."""

    id: str
    p11: float
    p10: float
    p01: float
    p00: float
    true_f1: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, 'true_f1', true_f1_from_probs(self.p11, self.p10, self.p01, self.p00))

    @property
    def probabilities(self) -> Tuple[float, float, float, float]:
        return (self.p11, self.p10, self.p01, self.p00)

    @classmethod
    def from_probabilities(cls, probabilities: Sequence[float], id: str = "custom") -> 'Scenario':
        if len(probabilities) != 4:
            raise DomainError(f"a scenario needs 4 cell probabilities, got {len(probabilities)}")
        return cls(str(id), *(float(p) for p in probabilities))

    def __str__(self) -> str:
        return f"scenario {self.id} (F1={self.true_f1:g})"


def builtin_scenarios() -> List[Scenario]:
    """Built-in populations, ids "1" to "3"."""
    return [
        # prevalence 50%, precision 80%, recall 80%
        Scenario("1", 0.4, 0.1, 0.1, 0.4),
        # prevalence 80%, precision 80%, recall 80%
        Scenario("2", 0.64, 0.16, 0.16, 0.04),
        # prevalence 80%, precision 80%, recall 20%
        Scenario("3", 0.16, 0.04, 0.64, 0.16),
    ]


def get_scenario(tag: str) -> Scenario:
    for scenario in builtin_scenarios():
        if scenario.id == str(tag):
            return scenario
    raise DomainError(f"unknown scenario {tag!r}; built-in scenarios are 1, 2 and 3")


@dataclass(frozen=True)
class SimulationConfig:
    """One simulation condition: a scenario crossed with a sample size."""

    scenario: Scenario
    n: int
    replicates: int = DEFAULT_REPLICATES
    alpha: float = 0.05
    seed: int = DEFAULT_SEED
    methods: Tuple[str, ...] = METHODS

    def __post_init__(self):
        if self.n < 1:
            raise DomainError(f"n must be at least 1, got {self.n!r}")
        if self.replicates < 1:
            raise DomainError(f"replicates must be at least 1, got {self.replicates!r}")
        if not (0.0 < self.alpha < 1.0):
            raise DomainError(f"alpha must lie in (0, 1), got {self.alpha!r}")
        if not (0 <= self.seed < 2 ** 64):
            raise DomainError(f"seed must be an unsigned 64-bit integer, got {self.seed!r}")
        object.__setattr__(self, 'methods', tuple(parse_methods(self.methods)))


@dataclass(frozen=True)
class MethodMetrics:
    """Evaluation criteria of one method in one condition."""

    method: str
    coverage: float
    expected_length: float
    overshoot_prob: float
    degeneracy_prob: float
    evaluated: int
    skipped_invalid: int = 0


@dataclass(frozen=True)
class ConditionMetrics:
    config: SimulationConfig
    methods: Dict[str, MethodMetrics]
    skipped_nu_zero: int
    mean_tp: float
    mean_nu: float


class IntervalEvaluation(NamedTuple):
    covered: bool
    length: float
    overshoot: bool
    degenerate: bool


class CoverageEstimate(NamedTuple):
    coverage: float
    expected_length: float
    standard_error: float


class ExactCoverageRow(NamedTuple):
    fstar: float
    f1: float
    coverage: float
    expected_length: float


class LengthComparison(NamedTuple):
    nu: int
    tp: int
    f1_hat: float
    direct_length: float
    indirect_length: float
    difference: float


def evaluate_interval(interval: ConfidenceInterval, true_f1: float) -> IntervalEvaluation:
    """Coverage, length, overshoot and degeneracy of one interval.

    Coverage uses the closed interval, so a zero-width interval sitting on the
    true value counts as covering it.
    """
    length = interval.upper - interval.lower
    return IntervalEvaluation(
        covered=interval.lower <= true_f1 <= interval.upper,
        length=length,
        overshoot=interval.upper > 1.0 or interval.lower < 0.0,
        degenerate=length == 0.0,
    )


# -- sampling -----------------------------------------------------------------

def replicate_generator(seed: int, block: int) -> np.random.Generator:
    """Independent Philox stream for one block of replicates."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(block,))))


def multinomial_sample(rng: np.random.Generator, n: int, p: Sequence[float]) -> ConfusionCounts:
    """One confusion matrix of n documents drawn from cell probabilities p."""
    tp, fp, fn, tn = rng.multinomial(n, p)
    return ConfusionCounts(int(tp), int(fp), int(fn), int(tn))


def sample_block(seed: int, block: int, size: int, n: int, p: Sequence[float]) -> np.ndarray:
    """``size`` replicates of block ``block`` as an array of (tp, fp, fn, tn) rows.

    Row j does not depend on ``size``, only on (seed, block, j).
    """
    return replicate_generator(seed, block).multinomial(n, p, size=size)


def replicate_counts(seed: int, index: int, n: int, p: Sequence[float]) -> ConfusionCounts:
    """Counts of replicate ``index``, regenerated from its block stream."""
    block, offset = divmod(index, BLOCK_SIZE)
    tp, fp, fn, tn = sample_block(seed, block, offset + 1, n, p)[-1]
    return ConfusionCounts(int(tp), int(fp), int(fn), int(tn))


def _tally_block(task: Tuple[int, int, int, int, Tuple[float, ...]]) -> List[Tuple[int, int, int]]:
    seed, block, size, n, p = task
    counts = sample_block(seed, block, size, n, p)
    tp = counts[:, 0].astype(np.int64)
    nu = counts[:, :3].sum(axis=1).astype(np.int64)
    keys, freq = np.unique(tp * (n + 1) + nu, return_counts=True)
    logging.debug(f"block {block}: {size} replicate(s), {len(keys)} distinct (tp, nu) pair(s)")
    return [(int(key) // (n + 1), int(key) % (n + 1), int(count)) for key, count in zip(keys, freq)]


def count_histogram(seed: int, n: int, p: Sequence[float], replicates: int,
                    executor: Optional[ProcessPoolExecutor] = None) -> Counter:
    """Histogram of (tp, nu) over all replicates of one condition."""
    tasks = []
    for block, start in enumerate(range(0, replicates, BLOCK_SIZE)):
        tasks.append((seed, block, min(BLOCK_SIZE, replicates - start), n, tuple(p)))
    mapper = executor.map if executor is not None else map
    histogram = Counter()
    for tally in mapper(_tally_block, tasks):
        for tp, nu, count in tally:
            histogram[(tp, nu)] += count
    return histogram


# -- memoised intervals -------------------------------------------------------

@lru_cache(maxsize=INTERVAL_CACHE_SIZE)
def cached_interval(method: str, tp: int, nu: int, alpha: float) -> Optional[ConfidenceInterval]:
    """Interval for (tp, nu, alpha), or None where Wilson-direct is invalid."""
    try:
        return compute_interval(method, ConfusionCounts.from_relevant(tp, nu), alpha)
    except ValidityError:
        return None


def _evaluate_pairs(task: Tuple[str, float, List[Tuple[int, int]]]) -> List[Optional[Tuple[float, float]]]:
    method, alpha, pairs = task
    endpoints = []
    for tp, nu in pairs:
        interval = cached_interval(method, tp, nu, alpha)
        endpoints.append(None if interval is None else (interval.lower, interval.upper))
    return endpoints


def _pair_intervals(method: str, alpha: float, pairs: List[Tuple[int, int]],
                    executor: Optional[ProcessPoolExecutor], chunks: int) -> List[Optional[ConfidenceInterval]]:
    if executor is None or chunks <= 1:
        return [cached_interval(method, tp, nu, alpha) for tp, nu in pairs]
    size = max(1, math.ceil(len(pairs) / chunks))
    tasks = [(method, alpha, pairs[i:i + size]) for i in range(0, len(pairs), size)]
    intervals = []
    for endpoints in executor.map(_evaluate_pairs, tasks):
        for bounds in endpoints:
            intervals.append(None if bounds is None else ConfidenceInterval(method, alpha, *bounds))
    return intervals


def _aggregate(method: str, intervals: List[Optional[ConfidenceInterval]],
               weights: List[int], true_f1: float) -> MethodMetrics:
    evaluated = covered = overshoot = degenerate = skipped = 0
    weighted_lengths = []
    for interval, weight in zip(intervals, weights):
        if interval is None:
            skipped += weight
            continue
        result = evaluate_interval(interval, true_f1)
        evaluated += weight
        covered += weight * result.covered
        overshoot += weight * result.overshoot
        degenerate += weight * result.degenerate
        weighted_lengths.append(weight * result.length)

    if evaluated == 0:
        logging.warning(f"{method}: no replicate produced an interval")
        return MethodMetrics(method, math.nan, math.nan, math.nan, math.nan, 0, skipped)
    return MethodMetrics(
        method=method,
        coverage=covered / evaluated,
        expected_length=math.fsum(weighted_lengths) / evaluated,
        overshoot_prob=overshoot / evaluated,
        degeneracy_prob=degenerate / evaluated,
        evaluated=evaluated,
        skipped_invalid=skipped,
    )


def run_condition(config: SimulationConfig, workers: int = 1) -> ConditionMetrics:
    """Monte Carlo evaluation of every configured method in one condition.

    Replicates with nu = 0 are excluded from all metrics and counted in
    ``skipped_nu_zero``; replicates where Wilson-direct is invalid are excluded
    from that method only.
    """
    scenario = config.scenario
    logging.info(f"Simulating {scenario}, n={config.n}, {config.replicates} replicate(s)")

    executor = ProcessPoolExecutor(max_workers=workers) if workers > 1 else None
    try:
        histogram = count_histogram(config.seed, config.n, scenario.probabilities, config.replicates, executor)
        pairs = sorted(pair for pair in histogram if pair[1] > 0)
        weights = [histogram[pair] for pair in pairs]
        skipped_nu_zero = config.replicates - sum(weights)
        logging.debug(f"{len(pairs)} distinct (tp, nu) pair(s)")

        metrics = {}
        for method in config.methods:
            intervals = _pair_intervals(method, config.alpha, pairs, executor, workers)
            metrics[method] = _aggregate(method, intervals, weights, scenario.true_f1)
    finally:
        if executor is not None:
            executor.shutdown()

    if skipped_nu_zero:
        logging.warning(f"{skipped_nu_zero} replicate(s) with nu=0 excluded from all metrics")
    for result in metrics.values():
        if result.skipped_invalid:
            logging.warning(f"{result.skipped_invalid} replicate(s) excluded from {result.method}: interval undefined")

    return ConditionMetrics(
        config=config,
        methods=metrics,
        skipped_nu_zero=skipped_nu_zero,
        mean_tp=sum(tp * count for (tp, _), count in histogram.items()) / config.replicates,
        mean_nu=sum(nu * count for (_, nu), count in histogram.items()) / config.replicates,
    )


def coverage_given_nu(config: SimulationConfig, nu: int) -> Dict[str, MethodMetrics]:
    """Monte Carlo metrics of one condition restricted to replicates that observed ``nu``.

    Given nu, tp is Binomial(nu, p11 / (p11 + p10 + p01)), so coverage here
    estimates what :func:`exact_conditional_coverage` computes exactly.
    """
    if not (1 <= nu <= config.n):
        raise DomainError(f"nu must lie in [1, {config.n}] for n={config.n}, got {nu!r}")
    scenario = config.scenario
    histogram = count_histogram(config.seed, config.n, scenario.probabilities, config.replicates)
    pairs = sorted(pair for pair in histogram if pair[1] == nu)
    weights = [histogram[pair] for pair in pairs]
    logging.debug(f"{sum(weights)} of {config.replicates} replicate(s) observed nu={nu}")

    return {
        method: _aggregate(method, [cached_interval(method, tp, nu, config.alpha) for tp, _ in pairs],
                           weights, scenario.true_f1)
        for method in config.methods
    }


# -- exact oracle -------------------------------------------------------------

def _check_nu(nu: int):
    if not (1 <= nu <= ENUMERATION_CAP):
        raise DomainError(f"nu must lie in [1, {ENUMERATION_CAP}] for enumeration, got {nu!r}")


def binomial_pmf(nu: int, fstar: float) -> np.ndarray:
    """Binomial(nu, fstar) probabilities of 0..nu, computed in log space."""
    if not (0.0 <= fstar <= 1.0):
        raise DomainError(f"fstar must lie in [0, 1], got {fstar!r}")
    pmf = np.zeros(nu + 1)
    if fstar == 0.0:
        pmf[0] = 1.0
        return pmf
    if fstar == 1.0:
        pmf[nu] = 1.0
        return pmf
    log_factorial = np.array([math.lgamma(i + 1.0) for i in range(nu + 1)])
    successes = np.arange(nu + 1)
    log_pmf = (log_factorial[nu] - log_factorial - log_factorial[::-1]
               + successes * math.log(fstar) + (nu - successes) * math.log1p(-fstar))
    return np.exp(log_pmf)


def interval_table(method: str, nu: int, alpha: float) -> List[ConfidenceInterval]:
    """Intervals for tp = 0..nu; raises ValidityError where the method is undefined."""
    if method == WILSON_DIRECT and nu < wilson_direct_min_nu(alpha):
        raise ValidityError(nu, alpha, wilson_direct_min_nu(alpha))
    table = [cached_interval(method, tp, nu, alpha) for tp in range(nu + 1)]
    if any(interval is None for interval in table):
        raise ValidityError(nu, alpha, wilson_direct_min_nu(alpha))
    return table


def _coverage_from_table(table: List[ConfidenceInterval], pmf: np.ndarray, true_f1: float) -> Tuple[float, float]:
    covered = np.array([interval.lower <= true_f1 <= interval.upper for interval in table], dtype=float)
    lengths = np.array([interval.upper - interval.lower for interval in table])
    return float(pmf @ covered), float(pmf @ lengths)


def exact_conditional_coverage(nu: int, method: str, alpha: float, fstar: float) -> Tuple[float, float]:
    """Exact coverage and expected length given nu, with tp ~ Binomial(nu, fstar)."""
    _check_nu(nu)
    table = interval_table(parse_methods([method])[0], nu, alpha)
    return _coverage_from_table(table, binomial_pmf(nu, fstar), f1_from_fstar(fstar))


def fstar_grid(points: int) -> List[float]:
    """``points`` equally spaced interior values i / (points + 1)."""
    if points < 1:
        raise DomainError(f"grid needs at least one point, got {points!r}")
    return [i / (points + 1) for i in range(1, points + 1)]


def exact_coverage_curve(nu: int, method: str, alpha: float, grid: int) -> List[ExactCoverageRow]:
    """Exact conditional coverage over an F* grid; intervals are built once."""
    _check_nu(nu)
    table = interval_table(parse_methods([method])[0], nu, alpha)
    rows = []
    for fstar in fstar_grid(grid):
        f1 = f1_from_fstar(fstar)
        coverage, expected_length = _coverage_from_table(table, binomial_pmf(nu, fstar), f1)
        rows.append(ExactCoverageRow(fstar, f1, coverage, expected_length))
    return rows


def conditional_monte_carlo(nu: int, method: str, alpha: float, fstar: float,
                            replicates: int, seed: int = DEFAULT_SEED) -> CoverageEstimate:
    """Monte Carlo counterpart of :func:`exact_conditional_coverage`."""
    _check_nu(nu)
    if replicates < 1:
        raise DomainError(f"replicates must be at least 1, got {replicates!r}")
    table = interval_table(parse_methods([method])[0], nu, alpha)
    true_f1 = f1_from_fstar(fstar)
    covered = np.array([interval.lower <= true_f1 <= interval.upper for interval in table])
    lengths = np.array([interval.upper - interval.lower for interval in table])

    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))
    draws = rng.binomial(nu, fstar, size=replicates)
    coverage = float(covered[draws].mean())
    return CoverageEstimate(
        coverage=coverage,
        expected_length=float(lengths[draws].mean()),
        standard_error=math.sqrt(coverage * (1.0 - coverage) / replicates),
    )


def wilson_length_comparison(nu_values: Iterable[int], alpha: float) -> List[LengthComparison]:
    """Wilson-direct versus Wilson-indirect interval lengths across nu and tp.

    Values of nu for which Wilson-direct is undefined are left out.
    """
    min_nu = wilson_direct_min_nu(alpha)
    rows = []
    for nu in nu_values:
        if nu < min_nu:
            logging.debug(f"nu={nu} below wilson-direct minimum {min_nu}, skipped")
            continue
        for tp in range(nu + 1):
            counts = ConfusionCounts.from_relevant(tp, nu)
            direct = cached_interval(WILSON_DIRECT, tp, nu, alpha)
            indirect = wilson_indirect(counts, alpha)
            rows.append(LengthComparison(
                nu=nu,
                tp=tp,
                f1_hat=estimates_from_counts(counts).f1_hat,
                direct_length=direct.length,
                indirect_length=indirect.length,
                difference=direct.length - indirect.length,
            ))
    return rows
