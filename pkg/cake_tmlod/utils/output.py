# SPDX-FileCopyrightText: 2025 Cake AI Technologies, Inc.
#
# SPDX-License-Identifier: Apache-2.0

"""Command-side helpers: error reporting with exit codes and record output."""

from pathlib import Path
from typing import NoReturn, Optional, Sequence

import typer

from cake_tmlod.utils.config import get_config
from cake_tmlod.utils.console import console
from cake_tmlod.utils.errors import BudgetExceededError, InvalidArgumentError
from cake_tmlod.utils.records import ExperimentRecord, write_records


def exit_code_for(error: Exception) -> int:
    """2 for bad arguments, 1 for everything else."""
    return 2 if isinstance(error, InvalidArgumentError) else 1


def fail(action: str, error: Exception) -> NoReturn:
    """Print a red error line and leave the command with the matching exit code."""
    if isinstance(error, typer.Exit):
        raise error
    if isinstance(error, BudgetExceededError):
        console.print(f"❌ Refused {action}: [bold red]{str(error)}[/bold red]")
    else:
        console.print(f"❌ Error {action}: [bold red]{str(error)}[/bold red]")
    raise typer.Exit(code=exit_code_for(error))


def emit_records(
    records: Sequence[ExperimentRecord],
    out: Optional[Path],
    timings: bool = False,
    output_format: Optional[str] = None,
) -> None:
    """Write records to out (configured format by default); print them to stdout when out is None."""
    output_format = output_format or get_config().get("format", "csv")
    if out is None:
        console.print(
            write_records(records, None, output_format, timings),
            end="",
            markup=False,
            highlight=False,
            soft_wrap=True,
        )
        return
    write_records(records, out, output_format, timings)
    console.print(f"✅ Wrote [bold]{len(records)}[/bold] record(s) to [bold]{out}[/bold]")
