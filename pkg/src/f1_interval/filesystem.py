"""Filesystem operations: sweep configuration files and output paths."""

import json
import logging
import re
import sys
from contextlib import contextmanager
from pathlib import Path
from typing import Iterator, List, Optional, TextIO

from .errors import ConfigError, DomainError
from .methods import parse_methods
from .runner import SweepConfig
from .simulation import Scenario, get_scenario

DEFAULT_CONFIG = Path(__file__).parent / "data" / "default_sweep.json"

_REQUIRED_KEYS = ('scenarios', 'n', 'replicates', 'alpha', 'seed')
_OPTIONAL_KEYS = ('methods',)


def _line_of(text: str, key: str) -> Optional[int]:
    """Line number of the first occurrence of ``"key"`` in the raw config text."""
    match = re.search(r'"' + re.escape(key) + r'"', text)
    if not match:
        return None
    return text.count('\n', 0, match.start()) + 1


def _parse_scenarios(entries, text: str, path: str) -> List[Scenario]:
    line = _line_of(text, 'scenarios')
    if not isinstance(entries, list) or not entries:
        raise ConfigError("'scenarios' must be a non-empty list", path, line)
    scenarios = []
    for position, entry in enumerate(entries):
        try:
            if isinstance(entry, dict):
                unknown = set(entry).difference({'id', 'p'})
                if unknown or 'p' not in entry:
                    raise DomainError(f"custom scenario needs keys 'p' and optional 'id', got {sorted(entry)}")
                scenarios.append(Scenario.from_probabilities(entry['p'], entry.get('id', f"custom{position + 1}")))
            elif isinstance(entry, (int, str)) and not isinstance(entry, bool):
                scenarios.append(get_scenario(str(entry)))
            else:
                raise DomainError(f"scenario entry must be 1, 2, 3 or an object, got {entry!r}")
        except (ValueError, TypeError) as e:
            raise ConfigError(f"scenarios[{position}]: {e}", path, line) from e
    return scenarios


def _positive_int(value, key: str, text: str, path: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int) or value < 1:
        raise ConfigError(f"'{key}' must be a positive integer, got {value!r}", path, _line_of(text, key))
    return value


def parse_sweep_config(text: str, path: str = "<config>") -> SweepConfig:
    """Build a SweepConfig from JSON text, reporting errors with line numbers."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(f"invalid JSON at column {e.colno}: {e.msg}", path, e.lineno) from e
    if not isinstance(data, dict):
        raise ConfigError("top level must be a JSON object", path, 1)

    missing = [key for key in _REQUIRED_KEYS if key not in data]
    if missing:
        raise ConfigError(f"missing key(s): {', '.join(missing)}", path)
    unknown = set(data).difference(_REQUIRED_KEYS + _OPTIONAL_KEYS)
    if unknown:
        key = sorted(unknown)[0]
        raise ConfigError(f"unknown key(s): {', '.join(sorted(unknown))}", path, _line_of(text, key))

    scenarios = _parse_scenarios(data['scenarios'], text, path)
    if not isinstance(data['n'], list) or not data['n']:
        raise ConfigError("'n' must be a non-empty list of sample sizes", path, _line_of(text, 'n'))
    n_values = [_positive_int(n, 'n', text, path) for n in data['n']]
    replicates = _positive_int(data['replicates'], 'replicates', text, path)

    alpha = data['alpha']
    if isinstance(alpha, bool) or not isinstance(alpha, (int, float)) or not (0.0 < alpha < 1.0):
        raise ConfigError(f"'alpha' must lie in (0, 1), got {alpha!r}", path, _line_of(text, 'alpha'))
    seed = data['seed']
    if isinstance(seed, bool) or not isinstance(seed, int) or not (0 <= seed < 2 ** 64):
        raise ConfigError(f"'seed' must be an unsigned 64-bit integer, got {seed!r}", path, _line_of(text, 'seed'))
    try:
        methods = parse_methods(data.get('methods', ['all']))
    except (DomainError, AttributeError, TypeError) as e:
        raise ConfigError(f"'methods': {e}", path, _line_of(text, 'methods')) from e

    return SweepConfig(
        scenarios=tuple(scenarios),
        n_values=tuple(n_values),
        replicates=replicates,
        alpha=float(alpha),
        seed=seed,
        methods=tuple(methods),
    )


def load_sweep_config(config_path: Optional[str] = None) -> SweepConfig:
    """Read a sweep configuration file; the bundled 18-condition grid by default."""
    path = Path(config_path) if config_path else DEFAULT_CONFIG
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError(f"cannot read config: {e.strerror or e}", str(path)) from e
    sweep = parse_sweep_config(text, str(path))
    logging.info(f"Loaded {len(sweep)} condition(s) from {path}")
    return sweep


@contextmanager
def open_output(output_path: Optional[str]) -> Iterator[TextIO]:
    """Yield a UTF-8 text stream for ``output_path``, or stdout for None/'-'."""
    if not output_path or output_path == '-':
        yield sys.stdout
        return
    path = Path(output_path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open('w', encoding='utf-8', newline='') as stream:
        yield stream
    logging.info(f"Wrote {path}")
