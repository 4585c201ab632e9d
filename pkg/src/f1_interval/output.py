"""Flat output records and their csv, json and table serializations.

Column order is fixed per command:

ci         tp, fp, fn, tn, nu, prevalence, f1_hat, method, alpha, lower,
           upper, length, degenerate, overshoot, error
simulate   scenario, p11, p10, p01, p00, true_f1, n, method, alpha, seed,
sweep      replicates, coverage, expected_length, overshoot_prob,
           degeneracy_prob, evaluated, skipped_nu_zero, skipped_invalid,
           mean_tp, mean_nu
exact      nu, method, alpha, fstar, f1, coverage, expected_length
compare    nu, alpha, tp, f1_hat, wilson_direct_length,
           wilson_indirect_length, difference

Floats are written with 15 significant digits in csv and carry the same
values in json, so both round-trip without loss at that precision.
"""

import csv
import json
import math
from typing import Dict, Iterable, List, Optional, Sequence, TextIO

from .core import ConfusionCounts, estimates_from_counts
from .methods import MethodResult
from .simulation import ConditionMetrics, ExactCoverageRow, LengthComparison

FORMATS = ('table', 'csv', 'json')

CI_COLUMNS = ('tp', 'fp', 'fn', 'tn', 'nu', 'prevalence', 'f1_hat', 'method', 'alpha', 'lower', 'upper', 'length',
              'degenerate', 'overshoot', 'error')
SIMULATION_COLUMNS = ('scenario', 'p11', 'p10', 'p01', 'p00', 'true_f1', 'n', 'method', 'alpha', 'seed',
                      'replicates', 'coverage', 'expected_length', 'overshoot_prob', 'degeneracy_prob',
                      'evaluated', 'skipped_nu_zero', 'skipped_invalid', 'mean_tp', 'mean_nu')
EXACT_COLUMNS = ('nu', 'method', 'alpha', 'fstar', 'f1', 'coverage', 'expected_length')
COMPARE_COLUMNS = ('nu', 'alpha', 'tp', 'f1_hat', 'wilson_direct_length', 'wilson_indirect_length', 'difference')

OutputRecord = Dict[str, object]


class RecordTable:
    """Rows sharing one fixed column order."""

    def __init__(self, columns: Sequence[str], rows: Optional[List[OutputRecord]] = None):
        self.columns = tuple(columns)
        self.rows = rows if rows is not None else []

    def append(self, record: OutputRecord):
        missing = set(self.columns).difference(record)
        if missing:
            raise KeyError(f"record is missing column(s): {', '.join(sorted(missing))}")
        self.rows.append(record)

    def extend(self, records: Iterable[OutputRecord]):
        for record in records:
            self.append(record)

    def __len__(self) -> int:
        return len(self.rows)


def ci_records(counts: ConfusionCounts, results: Iterable[MethodResult]) -> RecordTable:
    """One row per method for a single confusion matrix; failed methods keep their error."""
    estimates = estimates_from_counts(counts)
    table = RecordTable(CI_COLUMNS)
    for result in results:
        interval = result.interval
        table.append({
            'tp': counts.tp, 'fp': counts.fp, 'fn': counts.fn, 'tn': counts.tn,
            'nu': estimates.nu,
            'prevalence': counts.prevalence,
            'f1_hat': estimates.f1_hat,
            'method': result.method,
            'alpha': interval.alpha if interval else None,
            'lower': interval.lower if interval else None,
            'upper': interval.upper if interval else None,
            'length': interval.length if interval else None,
            'degenerate': interval.is_degenerate if interval else None,
            'overshoot': interval.overshoots if interval else None,
            'error': str(result.error) if result.error else None,
        })
    return table


def condition_records(metrics: ConditionMetrics) -> List[OutputRecord]:
    """One row per configured method of a simulated condition."""
    config = metrics.config
    scenario = config.scenario
    records = []
    for method in config.methods:
        result = metrics.methods[method]
        records.append({
            'scenario': scenario.id,
            'p11': scenario.p11, 'p10': scenario.p10, 'p01': scenario.p01, 'p00': scenario.p00,
            'true_f1': scenario.true_f1,
            'n': config.n,
            'method': method,
            'alpha': config.alpha,
            'seed': config.seed,
            'replicates': config.replicates,
            'coverage': result.coverage,
            'expected_length': result.expected_length,
            'overshoot_prob': result.overshoot_prob,
            'degeneracy_prob': result.degeneracy_prob,
            'evaluated': result.evaluated,
            'skipped_nu_zero': metrics.skipped_nu_zero,
            'skipped_invalid': result.skipped_invalid,
            'mean_tp': metrics.mean_tp,
            'mean_nu': metrics.mean_nu,
        })
    return records


def simulation_records(conditions: Iterable[ConditionMetrics]) -> RecordTable:
    """Rows for every condition of a simulate or sweep run."""
    table = RecordTable(SIMULATION_COLUMNS)
    for metrics in conditions:
        table.extend(condition_records(metrics))
    return table


def exact_records(nu: int, method: str, alpha: float, rows: Iterable[ExactCoverageRow]) -> RecordTable:
    """Exact coverage rows, one per F* grid point."""
    table = RecordTable(EXACT_COLUMNS)
    for row in rows:
        table.append({'nu': nu, 'method': method, 'alpha': alpha, **row._asdict()})
    return table


def compare_records(alpha: float, rows: Iterable[LengthComparison]) -> RecordTable:
    """Wilson-direct versus Wilson-indirect lengths, one row per (nu, tp)."""
    table = RecordTable(COMPARE_COLUMNS)
    for row in rows:
        table.append({
            'nu': row.nu,
            'alpha': alpha,
            'tp': row.tp,
            'f1_hat': row.f1_hat,
            'wilson_direct_length': row.direct_length,
            'wilson_indirect_length': row.indirect_length,
            'difference': row.difference,
        })
    return table


def _csv_value(value: object) -> str:
    if value is None:
        return ''
    if isinstance(value, bool):
        return 'true' if value else 'false'
    if isinstance(value, float):
        return 'nan' if math.isnan(value) else format(value, '#.15g')
    return str(value)


def _json_value(value: object) -> object:
    if isinstance(value, float):
        return None if math.isnan(value) else float(format(value, '.15g'))
    return value


def _table_value(value: object) -> str:
    if value is None:
        return '-'
    if isinstance(value, bool):
        return 'yes' if value else 'no'
    if isinstance(value, float):
        return f"{value:.6f}"
    return str(value)


def write_csv(table: RecordTable, stream: TextIO):
    """Write a header row then one csv line per record."""
    writer = csv.writer(stream, lineterminator='\n')
    writer.writerow(table.columns)
    for row in table.rows:
        writer.writerow([_csv_value(row[column]) for column in table.columns])


def write_json(table: RecordTable, stream: TextIO):
    """Write the records as a json array of objects."""
    records = [{column: _json_value(row[column]) for column in table.columns} for row in table.rows]
    json.dump(records, stream, indent=2)
    stream.write('\n')


def write_table(table: RecordTable, stream: TextIO):
    """Write left-aligned columns for reading in a terminal."""
    cells = [[_table_value(row[column]) for column in table.columns] for row in table.rows]
    widths = [max([len(column)] + [len(line[i]) for line in cells]) for i, column in enumerate(table.columns)]
    stream.write('  '.join(column.ljust(width) for column, width in zip(table.columns, widths)).rstrip() + '\n')
    for line in cells:
        stream.write('  '.join(cell.ljust(width) for cell, width in zip(line, widths)).rstrip() + '\n')


_WRITERS = {'table': write_table, 'csv': write_csv, 'json': write_json}


def write_records(table: RecordTable, fmt: str, stream: TextIO):
    """Write ``table`` to ``stream`` in one of FORMATS."""
    try:
        writer = _WRITERS[fmt]
    except KeyError:
        raise ValueError(f"unknown output format {fmt!r}; choose from {', '.join(FORMATS)}") from None
    writer(table, stream)
