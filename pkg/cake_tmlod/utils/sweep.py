# SPDX-FileCopyrightText: 2025 Cake AI Technologies, Inc.
#
# SPDX-License-Identifier: Apache-2.0

"""Parameter sweeps over the experiment registry."""

import itertools
import re
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

from cake_tmlod.core.experiments import get_experiment
from cake_tmlod.core.lod import slope_fit
from cake_tmlod.utils.config import FORMATS, parse_int, read_key_value_file
from cake_tmlod.utils.errors import (
    BudgetExceededError,
    InvalidArgumentError,
)
from cake_tmlod.utils.records import ExperimentRecord, format_value, parse_value

_GEOMETRIC_RE = re.compile(r"^(\d+)\^(\d+)\.\.(\d+)\^(\d+)(?::(\d+))?$")
_RANGE_RE = re.compile(r"^(-?\d+)\.\.(-?\d+)(?::(\d+))?$")

# keys of a sweep file that configure the run rather than the grid
RUN_KEYS = ("experiment", "output", "format", "threads", "budget", "seed", "timings")


@dataclass
class SweepConfig:
    """A cartesian parameter grid for one experiment.

    Args:
        experiment: Registry name
        grids: Parameter name to the list of values (declaration order kept)
        output: Optional path to write the records to
        output_format: csv or json
        threads: Worker processes
        budget: Per-point operation budget
        seed: Seed handed to seeded experiments
        geometric: Names of the grids given as geometric ranges
        timings: Write wall_time_ms columns (breaks byte-identical output)
    """

    experiment: str
    grids: Dict[str, List[str]]
    output: Optional[Path] = None
    output_format: str = "csv"
    threads: int = 1
    budget: int = 2**34
    seed: Optional[int] = None
    geometric: Tuple[str, ...] = field(default_factory=tuple)
    timings: bool = False

    def __post_init__(self):
        for name, values in self.grids.items():
            if not values:
                raise InvalidArgumentError(f"grid for {name!r} is empty")
        if self.budget <= 0:
            raise InvalidArgumentError(f"budget must be positive, got {self.budget}")
        if self.output_format not in FORMATS:
            raise InvalidArgumentError(f"unknown format {self.output_format!r}")

    def points(self) -> List[Dict[str, str]]:
        """Grid points in lexicographic grid order."""
        names = list(self.grids)
        return [dict(zip(names, values)) for values in itertools.product(*self.grids.values())]


def parse_grid(text: str) -> Tuple[List[str], bool]:
    """Expand a grid spec: "v1,v2,...", "a..b[:step]" or geometric "B^i..B^j[:step]".

    Returns the values and whether the grid is geometric.
    """
    text = text.strip()
    match = _GEOMETRIC_RE.match(text)
    if match:
        base, lo, base_hi, hi, step = match.groups()
        if base != base_hi:
            raise InvalidArgumentError(f"geometric range needs one base: {text!r}")
        return [f"{base}^{k}" for k in range(int(lo), int(hi) + 1, int(step or 1))], True
    match = _RANGE_RE.match(text)
    if match:
        lo, hi, step = match.groups()
        return [str(v) for v in range(int(lo), int(hi) + 1, int(step or 1))], False
    values = [value.strip() for value in text.split(",") if value.strip()]
    return values, False


def config_from_grids(
    experiment: str,
    grid_specs: Sequence[str],
    **options,
) -> SweepConfig:
    """Build a SweepConfig from "name=spec" strings."""
    grids: Dict[str, List[str]] = {}
    geometric: List[str] = []
    for spec in grid_specs:
        if "=" not in spec:
            raise InvalidArgumentError(f"grid must look like name=values, got {spec!r}")
        name, values = spec.split("=", 1)
        grids[name.strip()], is_geometric = parse_grid(values)
        if is_geometric:
            geometric.append(name.strip())
    return SweepConfig(experiment, grids, geometric=tuple(geometric), **options)


def config_from_file(path: Path, defaults: Optional[Dict] = None, **overrides) -> SweepConfig:
    """Read a key=value sweep file; run keys configure the sweep, the rest are grids.

    Precedence is defaults < file < overrides (None overrides are ignored).
    """
    values = read_key_value_file(path)
    if "experiment" not in values:
        raise InvalidArgumentError(f"{path}: missing 'experiment' key")
    options = dict(defaults or {})
    if values.get("output"):
        options["output"] = Path(values["output"])
    if values.get("format"):
        options["output_format"] = values["format"].strip().lower()
    for key in ("threads", "budget", "seed"):
        if values.get(key):
            options[key] = parse_int(values[key])
    if values.get("timings"):
        options["timings"] = values["timings"].strip().lower() in ("1", "true", "yes")
    options.update({key: value for key, value in overrides.items() if value is not None})
    specs = [f"{key}={value}" for key, value in values.items() if key not in RUN_KEYS]
    return config_from_grids(values["experiment"], specs, **options)


def run_point(
    experiment: str, params: Dict[str, str], budget: int, seed: Optional[int]
) -> ExperimentRecord:
    """Evaluate one grid point.

    Budget refusals become skipped records; an experiment may set its own
    status, e.g. excluded indices.
    """
    spec = get_experiment(experiment)
    resolved = spec.resolve(params)
    used_seed = seed if spec.seeded else None
    started = time.perf_counter()
    try:
        outcome = spec.evaluate(resolved, budget=budget, threads=1, seed=used_seed)
    except BudgetExceededError:
        return ExperimentRecord(experiment, resolved, "", False, 0, used_seed, "skipped")
    elapsed = int((time.perf_counter() - started) * 1000)
    text, exact = format_value(outcome.value)
    return ExperimentRecord(
        experiment, resolved, text, exact, elapsed, used_seed, outcome.status
    )


def _slope_rows(config: SweepConfig, records: List[ExperimentRecord]) -> List[ExperimentRecord]:
    """One slope_fit row per geometric variable, when it is the only varying one."""
    varying = [name for name, values in config.grids.items() if len(values) > 1]
    if len(varying) != 1 or varying[0] not in config.geometric:
        return []
    name = varying[0]
    points = []
    for record in records:
        if record.status != "ok":
            continue
        y = parse_value(record.value, record.exact)
        x = get_experiment(config.experiment).params[name](record.params[name])
        if y is not None and float(y) > 0:
            points.append((float(x), float(y)))
    if len(points) < 2:
        return []
    slope, intercept, residual = slope_fit(points)
    params = {key: values[0] for key, values in config.grids.items() if key != name}
    params.update({"over": name, "intercept": repr(intercept), "residual": repr(residual)})
    text, exact = format_value(slope)
    return [ExperimentRecord(f"{config.experiment}:slope", params, text, exact, 0, config.seed)]


def sweep(config: SweepConfig) -> List[ExperimentRecord]:
    """Evaluate every grid point, in grid order, and append slope rows."""
    get_experiment(config.experiment)
    points = config.points()
    arguments = (
        [config.experiment] * len(points),
        points,
        [config.budget] * len(points),
        [config.seed] * len(points),
    )
    if config.threads > 1 and len(points) > 1:
        with ProcessPoolExecutor(max_workers=config.threads) as pool:
            records = list(pool.map(run_point, *arguments))
    else:
        records = list(map(run_point, *arguments))
    return records + _slope_rows(config, records)
