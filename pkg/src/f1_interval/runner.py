"""Sweep driver: runs every condition of a sweep configuration."""

import logging
from dataclasses import dataclass
from typing import Iterator, List, Tuple

try:
    from tqdm import tqdm
except ImportError:
    tqdm = None

from .core import METHODS
from .simulation import DEFAULT_REPLICATES, DEFAULT_SEED, ConditionMetrics, Scenario, SimulationConfig, run_condition


@dataclass(frozen=True)
class SweepConfig:
    """Scenarios crossed with sample sizes, sharing replicates, alpha and seed."""

    scenarios: Tuple[Scenario, ...]
    n_values: Tuple[int, ...]
    replicates: int = DEFAULT_REPLICATES
    alpha: float = 0.05
    seed: int = DEFAULT_SEED
    methods: Tuple[str, ...] = METHODS

    def conditions(self) -> Iterator[SimulationConfig]:
        """Conditions scenario by scenario, sample sizes in configured order.

        Every condition reuses the master seed, so a single row can be
        reproduced with the ``simulate`` command alone.
        """
        for scenario in self.scenarios:
            for n in self.n_values:
                yield SimulationConfig(
                    scenario=scenario,
                    n=n,
                    replicates=self.replicates,
                    alpha=self.alpha,
                    seed=self.seed,
                    methods=self.methods,
                )

    def __len__(self) -> int:
        return len(self.scenarios) * len(self.n_values)


class SweepRunner:
    """Runs simulation conditions one after another."""

    def __init__(self, workers: int = 1, show_progress: bool = True):
        self.workers = workers
        self.show_progress = show_progress

    def run(self, sweep: SweepConfig) -> List[ConditionMetrics]:
        logging.info(f"Running {len(sweep)} condition(s) with {self.workers} worker(s)")
        conditions = sweep.conditions()
        if tqdm and self.show_progress:
            conditions = tqdm(conditions, total=len(sweep), desc="Simulating conditions", unit="cond")

        results = []
        for config in conditions:
            results.append(run_condition(config, workers=self.workers))
        logging.info("✓ Sweep complete")
        return results
