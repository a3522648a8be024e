# SPDX-FileCopyrightText: 2025 Cake AI Technologies, Inc.
#
# SPDX-License-Identifier: Apache-2.0

"""Parameter sweep command, registered on the root app."""

from pathlib import Path
from typing import List, Optional

import typer
from rich.table import Table

from cake_tmlod.core.experiments import EXPERIMENTS
from cake_tmlod.utils.config import get_config
from cake_tmlod.utils.console import console, debug
from cake_tmlod.utils.errors import InvalidArgumentError
from cake_tmlod.utils.output import emit_records, fail
from cake_tmlod.utils.sweep import config_from_file, config_from_grids, sweep


def list_experiments() -> None:
    """Print the experiment registry with parameters and defaults."""
    table = Table(title="Experiments")
    table.add_column("Name", style="cyan")
    table.add_column("Parameters", style="green")
    table.add_column("Description", style="yellow")
    for name, experiment in EXPERIMENTS.items():
        params = ", ".join(
            f"{key}={experiment.defaults[key]}" if key in experiment.defaults else key
            for key in experiment.params
        )
        table.add_row(name, params, experiment.description)
    console.print(table)


def sweep_command(
    experiment: Optional[str] = typer.Option(None, "--experiment", "-e", help="Registry name"),
    grid: Optional[List[str]] = typer.Option(
        None, "--grid", "-g", help="name=v1,v2 | name=a..b[:s] | name=2^14..2^22[:s] (repeatable)"
    ),
    config_file: Optional[Path] = typer.Option(
        None, "--config", "-c", help="key=value sweep file (grids plus run keys)"
    ),
    out: Optional[Path] = typer.Option(None, "--out", "-o", help="Write records to this file"),
    timings: bool = typer.Option(False, "--timings", help="Add wall_time_ms columns"),
    list_all: bool = typer.Option(False, "--list", help="List the available experiments"),
):
    """Evaluate an experiment over a cartesian parameter grid."""
    if list_all:
        list_experiments()
        return

    settings = get_config()
    try:
        defaults = {
            "output_format": settings["format"],
            "threads": settings["threads"],
            "budget": settings["budget"],
            "seed": settings["seed"],
        }
        if config_file is not None:
            if grid:
                raise InvalidArgumentError("pass grids either in --config or with --grid, not both")
            run = config_from_file(
                config_file, defaults, output=out, timings=True if timings else None
            )
        else:
            if experiment is None:
                raise InvalidArgumentError("pass --experiment (or --config, or --list)")
            run = config_from_grids(
                experiment, grid or [], output=out, timings=timings, **defaults
            )

        points = run.points()
        console.print(
            f"🔍 Sweeping [bold]{run.experiment}[/bold] over {len(points)} point(s) "
            f"with {run.threads} worker(s), seed {run.seed}..."
        )
        debug(f"grids: {run.grids}")
        records = sweep(run)
        skipped = sum(1 for record in records if record.status == "skipped")
        if skipped:
            console.print(f"ℹ️ {skipped} point(s) skipped by the budget")
        emit_records(records, run.output, run.timings, run.output_format)
    except Exception as e:
        fail("running the sweep", e)
