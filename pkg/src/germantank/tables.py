"""CSV serialization shared by the CLI and the experiment recipes.

Floats are written with ``repr`` (shortest round-trip form) and exact
rationals as ``p/q`` strings, so reading a file back reproduces the
in-memory values bit for bit.
"""
from __future__ import annotations

import csv
import io
from fractions import Fraction
from pathlib import Path
from typing import Dict, Iterable, List, Sequence, Union

from .simulator import TrialRecord

TRIAL_COLUMNS = (
    "trial_index",
    "n_true",
    "k",
    "m_min",
    "m_max",
    "spread",
    "est_known",
    "est_unknown",
    "n1",
)

INT_COLUMNS = {"trial_index", "n_true", "k", "m_min", "m_max", "spread", "n1", "d", "n"}


def format_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


def to_csv(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_cell(v) for v in row])
    return buf.getvalue()


def trial_rows(records: Iterable[TrialRecord]):
    for r in records:
        s = r.sample
        yield (r.trial_index, r.n_true, r.k, s.m_min, s.m_max, s.spread, r.est_known, r.est_unknown, r.n1)


def records_to_csv(records: Iterable[TrialRecord]) -> str:
    return to_csv(TRIAL_COLUMNS, trial_rows(records))


def _parse(name: str, text: str):
    if text == "":
        return None
    if name == "split":
        return text
    if name in INT_COLUMNS:
        return int(text)
    if name.startswith("est_"):
        return Fraction(text)
    return float(text)


def read_columns(source: Union[str, Path, io.TextIOBase]) -> Dict[str, List]:
    """Read a CSV written by this package into a column-name -> values mapping."""
    if isinstance(source, (str, Path)):
        with open(source, newline="") as fh:
            return read_columns(fh)
    reader = csv.reader(source)
    header = next(reader)
    cols: Dict[str, List] = {h: [] for h in header}
    for row in reader:
        for name, cell in zip(header, row):
            cols[name].append(_parse(name, cell))
    return cols


def normalized_max(cols: Dict[str, List]) -> List[int]:
    n1 = cols.get("n1") or [1] * len(cols["m_max"])
    return [hi - start + 1 for hi, start in zip(cols["m_max"], n1)]
