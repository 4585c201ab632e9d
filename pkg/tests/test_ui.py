from types import SimpleNamespace

import pytest

from f1_interval import ui
from f1_interval.filesystem import load_sweep_config


def fake_inquirer(pick):
    """Stand-in for the inquirer module whose prompt answers with ``pick(name, choices)``."""
    def checkbox(name, message, choices, default):
        return name, choices

    def prompt(questions):
        return {name: pick(name, choices) for name, choices in questions}

    return SimpleNamespace(Checkbox=checkbox, prompt=prompt)


def test_narrows_sweep(monkeypatch):
    picks = {'scenarios': lambda c: [c[2]], 'n_values': lambda c: [c[0], c[-1]]}
    monkeypatch.setattr(ui, 'inquirer', fake_inquirer(lambda name, choices: picks[name](choices)))

    sweep = ui.select_conditions(load_sweep_config())
    assert [s.id for s in sweep.scenarios] == ["3"]
    assert sweep.n_values == (25, 5000)
    assert len(sweep) == 2


def test_nothing_selected_exits_cleanly(monkeypatch):
    monkeypatch.setattr(ui, 'inquirer', fake_inquirer(lambda name, choices: []))
    with pytest.raises(SystemExit) as excinfo:
        ui.select_conditions(load_sweep_config())
    assert excinfo.value.code == 0


def test_without_inquirer_runs_everything(monkeypatch):
    monkeypatch.setattr(ui, 'inquirer', None)
    sweep = load_sweep_config()
    assert ui.select_conditions(sweep) is sweep
