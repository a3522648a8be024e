# SPDX-FileCopyrightText: 2025 Cake AI Technologies, Inc.
#
# SPDX-License-Identifier: Apache-2.0

"""Farey approximation commands for the cake-tmlod CLI."""

from pathlib import Path
from typing import List, Optional

import typer
from rich.table import Table

from cake_tmlod.core.farey import (
    build_farey_construction,
    exceptions_census,
    farey_approx,
    farey_neighbors,
    q_divisibility_measure,
    spaced_points_divisibility_count,
)
from cake_tmlod.core.rationals import format_rational, parse_rational
from cake_tmlod.utils.config import get_config, parse_int
from cake_tmlod.utils.console import console
from cake_tmlod.utils.output import emit_records, fail
from cake_tmlod.utils.records import ExperimentRecord

app = typer.Typer(help="Farey dissections, the K_i/M_i construction and the exceptions census")


@app.callback(invoke_without_command=True)
def farey(ctx: typer.Context):
    """Farey dissections and the exceptions census."""
    if ctx.invoked_subcommand is not None:
        return

    console.print(
        "Please specify a subcommand. Use [bold]tmlod farey --help[/bold] for more information."
    )


@app.command()
def approx(
    alpha: str = typer.Option(..., "--alpha", "-a", help="Rational argument, e.g. 2/5 or 3/2^7"),
    order: str = typer.Option(..., "--order", "-Q", help="Farey order Q (2^k accepted)"),
    out: Optional[Path] = typer.Option(None, "--out", "-o", help="Write records to this file"),
):
    """Show p_Q(alpha)/q_Q(alpha) with the error |q alpha - p|."""
    try:
        x = parse_rational(alpha)
        Q = parse_int(order)
        result = farey_approx(x, Q)
        error = abs(result.q * x - result.p)
        console.print(
            f"✅ p_Q/q_Q = [bold]{result.p}/{result.q}[/bold] "
            f"(|q alpha - p| = {format_rational(error)} < 1/{Q})"
        )
        if out is not None:
            params = {"alpha": alpha, "Q": Q}
            emit_records(
                [
                    ExperimentRecord.of("farey-p", params, result.p),
                    ExperimentRecord.of("farey-q", params, result.q),
                ],
                out,
            )
    except Exception as e:
        fail("computing the Farey approximation", e)


@app.command()
def neighbors(
    x: str = typer.Option(..., "--x", help="Element of F_n"),
    n: int = typer.Option(..., "--n", help="Farey order"),
):
    """Show the left and right neighbours of x in F_n."""
    try:
        value = parse_rational(x)
        left, right = farey_neighbors(value, n)
        console.print(
            f"✅ {format_rational(left)} < [bold]{format_rational(value)}[/bold] < {format_rational(right)}"
        )
    except Exception as e:
        fail("finding Farey neighbours", e)


@app.command()
def construct(
    alpha: str = typer.Option(..., "--alpha", "-a", help="Rational alpha"),
    m: int = typer.Option(2, "--m", help="Number of factors m >= 2"),
    mu: int = typer.Option(..., "--mu", help="Digit block length mu"),
    sigma: int = typer.Option(..., "--sigma", help="Precision sigma"),
):
    """Compute K_i, M_i and p_i for one alpha and check the approximation bounds."""
    try:
        result = build_farey_construction(parse_rational(alpha), m, mu, sigma)
        table = Table(title=f"Construction for alpha = {alpha}")
        table.add_column("i", style="cyan")
        table.add_column("K_i", style="green")
        table.add_column("M_i", style="green")
        table.add_column("p_i", style="green")
        table.add_column("error", style="yellow")
        for i in range(m):
            table.add_row(
                str(i + 1),
                str(result.K[i]),
                str(result.M[i]),
                str(result.p_frak[i]),
                format_rational(result.errors[i]),
            )
        console.print(table)
        console.print(f"✅ All errors below [bold]2^-{sigma}[/bold]")
    except Exception as e:
        fail("building the construction", e)


@app.command()
def census(
    K: str = typer.Option(..., "--K", help="Farey order K (2^k accepted)"),
    gamma: int = typer.Option(..., "--gamma", help="Divisibility exponent gamma"),
    grid: int = typer.Option(4096, "--grid", help="Midpoint cells of the cross-check"),
    out: Optional[Path] = typer.Option(None, "--out", "-o", help="Write records to this file"),
):
    """Measure of x in [0, 1] with 2^gamma | q_K(x)."""
    try:
        order = parse_int(K)
        measure = q_divisibility_measure(order, gamma, grid)
        console.print(
            f"📊 meas{{x : 2^{gamma} | q_K(x)}} = [bold]{format_rational(measure)}[/bold] "
            f"(x 2^gamma = {float(measure * 2**gamma):.4f})"
        )
        if out is not None:
            emit_records(
                [ExperimentRecord.of("q-measure", {"K": order, "gamma": gamma, "grid": grid}, measure)],
                out,
            )
    except Exception as e:
        fail("measuring the divisibility set", e)


@app.command()
def spaced(
    points: List[str] = typer.Option(..., "--point", "-p", help="Point in [0, 1] (repeatable)"),
    delta: str = typer.Option(..., "--delta", help="Minimal spacing modulo 1"),
    K: str = typer.Option(..., "--K", help="Farey order K"),
    gamma: int = typer.Option(..., "--gamma", help="Divisibility exponent gamma"),
):
    """Count delta-spaced points x with 2^gamma | q_K(x)."""
    try:
        xs = [parse_rational(p) for p in points]
        count = spaced_points_divisibility_count(xs, parse_rational(delta), parse_int(K), gamma)
        console.print(f"📊 [bold]{count}[/bold] of {len(xs)} point(s) have 2^{gamma} | q_K(x)")
    except Exception as e:
        fail("counting spaced points", e)


@app.command()
def exceptions(
    lam: int = typer.Option(..., "--lam", help="lambda: alpha ranges over [0, 2^lambda)"),
    mu: int = typer.Option(..., "--mu", help="mu"),
    sigma: int = typer.Option(..., "--sigma", help="sigma"),
    gamma: int = typer.Option(..., "--gamma", help="gamma"),
    m: int = typer.Option(2, "--m", help="m >= 2"),
    mode: str = typer.Option("discrete", "--mode", help="discrete or continuous"),
    grid_bits: Optional[int] = typer.Option(None, "--grid-bits", help="Fractional bits of the continuous grid"),
    out: Optional[Path] = typer.Option(None, "--out", "-o", help="Write records to this file"),
):
    """Census of alpha with 2^{3 gamma} | p_i for some i."""
    config = get_config()
    try:
        console.print(
            f"🔍 Census lambda={lam} mu={mu} sigma={sigma} gamma={gamma} m={m} ({mode})..."
        )
        result = exceptions_census(
            lam,
            mu,
            sigma,
            gamma,
            m,
            mode,
            grid_bits=grid_bits,
            threads=config["threads"],
            budget=config["budget"],
        )
        console.print(
            f"📊 |A| = [bold]{format_rational(result.measure)}[/bold], "
            f"|A| 2^(gamma-lambda) = [bold]{float(result.ratio):.6f}[/bold]"
        )
        if out is not None:
            params = {"lam": lam, "mu": mu, "sigma": sigma, "gamma": gamma, "m": m, "mode": mode}
            emit_records([ExperimentRecord.of("exceptions", params, result.ratio)], out)
    except Exception as e:
        fail("running the exceptions census", e)
