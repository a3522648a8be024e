# SPDX-FileCopyrightText: 2025 Cake AI Technologies, Inc.
#
# SPDX-License-Identifier: Apache-2.0

"""Experiment records and their CSV/JSON serialisation."""

import csv
import io
import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

from cake_tmlod.core.rationals import DyadicRational, format_rational

BASE_COLUMNS = ("experiment",)
TAIL_COLUMNS = ("value", "exact", "seed", "status")


@dataclass
class ExperimentRecord:
    """One evaluated parameter point.

    Args:
        experiment: Registry name of the experiment
        params: Ordered parameters, enough to replay the point in isolation
        value: Serialised statistic ("num/den", "num/2^k", integer or decimal)
        exact: Whether value is an exact rational
        wall_time_ms: Evaluation time, written only when timings are requested
        seed: Seed used by randomized experiments
        status: "ok", "skipped" (refused by the budget) or "excluded:<count>"
            (value computed with <count> uncertified indices left out)
    """

    experiment: str
    params: Dict[str, str]
    value: str
    exact: bool
    wall_time_ms: int = 0
    seed: Optional[int] = None
    status: str = "ok"

    @classmethod
    def of(
        cls,
        experiment: str,
        params: Dict[str, Any],
        value: Any,
        seed: Optional[int] = None,
        status: str = "ok",
    ) -> "ExperimentRecord":
        """Build a record from a raw statistic; parameters are stringified in order."""
        text, exact = format_value(value)
        return cls(
            experiment, {key: str(v) for key, v in params.items()}, text, exact, 0, seed, status
        )

    def row(self, timings: bool = False) -> Dict[str, str]:
        row = {"experiment": self.experiment}
        row.update(self.params)
        row.update(
            {
                "value": self.value,
                "exact": "true" if self.exact else "false",
                "seed": "" if self.seed is None else str(self.seed),
                "status": self.status,
            }
        )
        if timings:
            row["wall_time_ms"] = str(self.wall_time_ms)
        return row


def excluded_status(count: int) -> str:
    """Record status of a statistic computed with `count` indices left out."""
    return "ok" if count == 0 else f"excluded:{count}"


def format_value(value: Any) -> Tuple[str, bool]:
    """Serialise a statistic; exact rationals keep their exact form."""
    if value is None:
        return "", False
    if isinstance(value, bool):
        return str(value).lower(), True
    if isinstance(value, DyadicRational):
        return str(value), True
    if isinstance(value, int):
        return str(value), True
    if isinstance(value, Fraction):
        return format_rational(value), True
    return repr(float(value)), False


def parse_value(text: str, exact: bool):
    """Inverse of format_value for exact values; floats for the rest."""
    if not text:
        return None
    if exact:
        if text in ("true", "false"):
            return text == "true"
        if "^" in text:
            return DyadicRational.parse(text)
        return Fraction(text)
    return float(text)


def _columns(records: Sequence[ExperimentRecord], timings: bool) -> List[str]:
    params: List[str] = []
    for record in records:
        for key in record.params:
            if key not in params:
                params.append(key)
    columns = list(BASE_COLUMNS) + params + list(TAIL_COLUMNS)
    if timings:
        columns.append("wall_time_ms")
    return columns


def records_to_csv(records: Sequence[ExperimentRecord], timings: bool = False) -> str:
    """CSV with a header row and parameters flattened into columns (LF line endings)."""
    buffer = io.StringIO()
    writer = csv.DictWriter(
        buffer, fieldnames=_columns(records, timings), restval="", lineterminator="\n"
    )
    writer.writeheader()
    for record in records:
        writer.writerow(record.row(timings))
    return buffer.getvalue()


def records_to_json(records: Sequence[ExperimentRecord], timings: bool = False) -> str:
    """JSON list mirroring the CSV rows."""
    columns = _columns(records, timings)
    rows = []
    for record in records:
        row = record.row(timings)
        rows.append({column: row.get(column, "") for column in columns})
    return json.dumps(rows, indent=2, ensure_ascii=False) + "\n"


def write_records(
    records: Sequence[ExperimentRecord],
    path: Optional[Path],
    output_format: str = "csv",
    timings: bool = False,
) -> str:
    """Serialise records and write them to path (if given). Returns the text."""
    if output_format == "json":
        text = records_to_json(records, timings)
    else:
        text = records_to_csv(records, timings)
    if path is not None:
        Path(path).write_text(text, encoding="utf-8", newline="\n")
    return text


def read_records(path: Path) -> List[ExperimentRecord]:
    """Load records written by write_records (CSV or JSON, by suffix)."""
    text = Path(path).read_text(encoding="utf-8")
    if Path(path).suffix == ".json":
        rows = json.loads(text)
    else:
        rows = list(csv.DictReader(io.StringIO(text)))
    records = []
    for row in rows:
        params = {
            key: value
            for key, value in row.items()
            if key not in BASE_COLUMNS + TAIL_COLUMNS + ("wall_time_ms",) and value != ""
        }
        records.append(
            ExperimentRecord(
                experiment=row["experiment"],
                params=params,
                value=row["value"],
                exact=row["exact"] == "true",
                wall_time_ms=int(row.get("wall_time_ms") or 0),
                seed=int(row["seed"]) if row.get("seed") else None,
                status=row.get("status", "ok"),
            )
        )
    return records
