"""Interactive selection of sweep conditions."""

import logging
import sys
from dataclasses import replace

try:
    import inquirer
except ImportError:
    inquirer = None

from .runner import SweepConfig


def select_conditions(sweep: SweepConfig) -> SweepConfig:
    """Let the user narrow a sweep to chosen scenarios and sample sizes."""
    if not inquirer:
        logging.error("inquirer package not available, running every condition")
        return sweep

    scenario_labels = {f"Scenario {s.id}: p={list(s.probabilities)} F1={s.true_f1:g}": s for s in sweep.scenarios}
    n_labels = {f"n={n}": n for n in sweep.n_values}

    answers = inquirer.prompt([
        inquirer.Checkbox('scenarios',
                          message='Select scenarios to simulate',
                          choices=list(scenario_labels),
                          default=list(scenario_labels)),
        inquirer.Checkbox('n_values',
                          message='Select sample sizes',
                          choices=list(n_labels),
                          default=list(n_labels)),
    ])

    if not answers or not answers['scenarios'] or not answers['n_values']:
        logging.error("No conditions selected")
        sys.exit(0)

    return replace(
        sweep,
        scenarios=tuple(scenario_labels[label] for label in answers['scenarios']),
        n_values=tuple(n_labels[label] for label in answers['n_values']),
    )
