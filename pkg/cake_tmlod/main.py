# SPDX-FileCopyrightText: 2025 Cake AI Technologies, Inc.
#
# SPDX-License-Identifier: Apache-2.0

"""Main entry point for the Cake TMLoD CLI."""

from typing import Optional, Sequence

import click
import typer
from rich.console import Console

from cake_tmlod.commands import digits, farey, gowers, lod, metrics, pshapiro, sweep
from cake_tmlod.utils.config import load_config, parse_int

# Create the main app
app = typer.Typer(
    name="tmlod",
    help="Thue–Morse level-of-distribution experiments",
    add_completion=False,
)

# Create console for rich output
console = Console()

# Register command groups
app.add_typer(digits.app, name="digits", help="Digit sums and the Thue–Morse sequence")
app.add_typer(
    farey.app, name="farey", help="Farey dissections, the construction and the exceptions census"
)
app.add_typer(lod.app, name="lod", help="Counts along progressions and Beatty sequences")
app.add_typer(gowers.app, name="gowers", help="Gowers uniformity sums and their recursion graph")

# Single-verb commands
app.command("discrepancy")(metrics.discrepancy)
app.command("box")(metrics.box)
app.command("carry")(metrics.carry)
app.command("vdc")(metrics.vdc)
app.command("mean-discrepancy")(metrics.mean_discrepancy)
app.command("pshapiro")(pshapiro.pshapiro)
app.command("sweep")(sweep.sweep_command)


@app.callback()
def callback(
    threads: Optional[int] = typer.Option(
        None, "--threads", "-t", help="Worker threads/processes (overrides .env)"
    ),
    budget: Optional[str] = typer.Option(
        None, "--budget", help="Operation budget, e.g. 2^34 (overrides .env)"
    ),
    seed: Optional[int] = typer.Option(
        None, "--seed", help="Default seed for randomized checks (overrides .env)"
    ),
    output_format: Optional[str] = typer.Option(
        None, "--format", "-f", help="Record format: csv or json (overrides .env)"
    ),
    verbose: bool = typer.Option(
        False, "--verbose", "-v", help="Print debug output to stderr"
    ),
) -> None:
    """Initialize the CLI with configuration."""
    # Load configuration from .env file and environment variables
    try:
        parsed_budget = parse_int(budget) if budget else None
    except ValueError:
        raise typer.BadParameter(f"not an integer or 2^k: {budget!r}", param_hint="--budget")
    if output_format and output_format.lower() not in ("csv", "json"):
        raise typer.BadParameter(f"unknown format {output_format!r}", param_hint="--format")
    load_config(threads, parsed_budget, seed, output_format, verbose or None)


@app.command()
def version():
    """Show the CLI version."""
    from cake_tmlod import __version__

    console.print(f"✨ Cake TMLoD CLI v{__version__}")


def run_subcommand(argv: Sequence[str]) -> int:
    """Run one CLI invocation and return its exit code.

    0 on success, 1 on invariant violations or refused budgets, 2 on usage
    errors and invalid arguments.
    """
    try:
        result = app(args=list(argv), prog_name="tmlod", standalone_mode=False)
    except click.UsageError as e:
        e.show()
        return 2
    except click.ClickException as e:
        e.show()
        return e.exit_code
    except click.exceptions.Abort:
        return 1
    return result if isinstance(result, int) else 0


if __name__ == "__main__":
    app()
