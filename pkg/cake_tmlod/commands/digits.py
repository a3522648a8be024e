# SPDX-FileCopyrightText: 2025 Cake AI Technologies, Inc.
#
# SPDX-License-Identifier: Apache-2.0

"""Digit-sum commands for the cake-tmlod CLI."""

from pathlib import Path
from typing import Optional

import typer
from rich.table import Table

from cake_tmlod.core.digitcore import (
    TruncationWindow,
    fractional_part_facts_check,
    sum_of_digits,
    thue_morse_word,
    tm_balance,
    tm_sign,
    truncated_digit_sum,
    twofold_digit_sum,
)
from cake_tmlod.core.rationals import parse_rational
from cake_tmlod.utils.console import console
from cake_tmlod.utils.output import emit_records, fail
from cake_tmlod.utils.records import ExperimentRecord

app = typer.Typer(help="Digit sums and the Thue–Morse sequence")


@app.callback(invoke_without_command=True)
def digits(ctx: typer.Context):
    """Digit sums and the Thue–Morse sequence."""
    if ctx.invoked_subcommand is not None:
        return

    console.print(
        "Please specify a subcommand. Use [bold]tmlod digits --help[/bold] for more information."
    )


@app.command("sum")
def digit_sum(
    n: int = typer.Option(..., "--n", help="Nonnegative integer"),
    base: int = typer.Option(2, "--base", "-b", help="Digit base q >= 2"),
    lam: Optional[int] = typer.Option(None, "--lam", help="Truncation lambda for s_lambda"),
    mu: Optional[int] = typer.Option(None, "--mu", help="Lower truncation mu for s_{mu,lambda}"),
):
    """Show s_q(n), the truncated sums and the Thue–Morse sign."""
    try:
        table = Table(title=f"Digit sums of {n}")
        table.add_column("Quantity", style="cyan")
        table.add_column("Value", style="green")
        table.add_row(f"s_{base}(n)", str(sum_of_digits(n, base)))
        table.add_row("t(n)", str(n.bit_count() & 1) if n >= 0 else "-")
        table.add_row("(-1)^s(n)", f"{tm_sign(n):+d}")
        if lam is not None:
            table.add_row(f"s_{lam}(n)", str(truncated_digit_sum(n, lam)))
            if mu is not None:
                window = TruncationWindow(mu, lam)
                table.add_row(f"s_{{{mu},{lam}}}(n)", str(twofold_digit_sum(n, window)))
        console.print(table)
    except Exception as e:
        fail("computing digit sums", e)


@app.command("table")
def digit_table(
    length: int = typer.Option(32, "--length", "-n", help="Number of terms"),
    out: Optional[Path] = typer.Option(None, "--out", "-o", help="Write records to this file"),
):
    """Print t(0..length-1) and check |sum (-1)^s(n)| <= 1 on every prefix."""
    try:
        console.print(f"🔍 Thue–Morse prefix of length [bold]{length}[/bold]")
        if length <= 256:
            console.print(thue_morse_word(length))
        worst = tm_balance(length)
        if worst > 1:
            console.print(f"❌ Balance fails: max |prefix sum| = {worst}")
            raise typer.Exit(code=1)
        console.print(f"✅ Balance holds: max |prefix sum| = [bold]{worst}[/bold]")
        if out is not None:
            emit_records([ExperimentRecord.of("tm-balance", {"length": length}, worst)], out)
    except Exception as e:
        fail("building the Thue–Morse prefix", e)


@app.command("facts")
def facts(
    a: str = typer.Option(..., "--a", help="Rational a"),
    b: str = typer.Option("0", "--b", help="Rational b"),
    n: int = typer.Option(1, "--n", help="Nonnegative integer n"),
    eps: str = typer.Option("1/10", "--eps", help="Rational epsilon"),
):
    """Check the three fractional-part facts on exact inputs."""
    try:
        flags = fractional_part_facts_check(
            parse_rational(a), parse_rational(b), n, parse_rational(eps)
        )
        labels = (
            "floor(a+b) = <a> + floor(b)",
            "||n a|| <= n ||a||",
            "<n a> = n <a>",
        )
        for label, ok in zip(labels, flags):
            console.print(f"{'✅' if ok else '❌'} {label}")
        if not all(flags):
            raise typer.Exit(code=1)
    except Exception as e:
        fail("checking fractional-part facts", e)
