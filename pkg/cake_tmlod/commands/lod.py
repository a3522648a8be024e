# SPDX-FileCopyrightText: 2025 Cake AI Technologies, Inc.
#
# SPDX-License-Identifier: Apache-2.0

"""Level-of-distribution commands for the cake-tmlod CLI."""

from fractions import Fraction
from pathlib import Path
from typing import Optional

import typer
from rich.table import Table

from cake_tmlod.core.experiments import scale_from
from cake_tmlod.core.lod import (
    ap_signed_prefix_extremes,
    beatty_lod_total,
    beatty_window_extremes,
    lod_error_total,
    s0_beatty,
    s0_discrete,
)
from cake_tmlod.core.rationals import format_rational, parse_rational
from cake_tmlod.utils.config import get_config, parse_int
from cake_tmlod.utils.console import console, debug
from cake_tmlod.utils.errors import InvalidArgumentError
from cake_tmlod.utils.output import emit_records, fail
from cake_tmlod.utils.records import ExperimentRecord

app = typer.Typer(help="Thue–Morse counts along progressions and Beatty sequences")

# rows shown by `lod total --show`
SHOW_ROWS = 10


@app.callback(invoke_without_command=True)
def lod(ctx: typer.Context):
    """Thue–Morse counts along progressions and Beatty sequences."""
    if ctx.invoked_subcommand is not None:
        return

    console.print(
        "Please specify a subcommand. Use [bold]tmlod lod --help[/bold] for more information."
    )


@app.command()
def total(
    x: str = typer.Option(..., "--x", help="Window length x (2^k accepted)"),
    theta: float = typer.Option(0.5, "--theta", help="Moduli d <= x^theta"),
    offset: int = typer.Option(0, "--offset", help="Windows lie in [offset, offset + x]"),
    per_d: bool = typer.Option(False, "--per-d", help="Also write one lod-window record per modulus"),
    show: bool = typer.Option(False, "--show", help="Print the largest per-modulus deviations"),
    out: Optional[Path] = typer.Option(None, "--out", "-o", help="Write records to this file"),
):
    """Sum over d <= x^theta of max_a max_{y,z} |A(y, z; d, a) - (z - y)/(2d)|."""
    config = get_config()
    try:
        length = parse_int(x)
        console.print(f"🔍 LoD error total for x=[bold]{length}[/bold], theta={theta}...")
        summary = lod_error_total(
            length, theta, offset, threads=config["threads"], budget=config["budget"]
        )
        console.print(
            f"📊 D = {summary.D}, total = [bold]{format_rational(summary.total)}[/bold] "
            f"(~{float(summary.total):.3f}, total / x = {float(summary.total) / length:.6f})"
        )
        if show:
            table = Table(title="Largest deviations")
            table.add_column("d", style="cyan")
            table.add_column("a", style="cyan")
            table.add_column("max deviation", style="green")
            table.add_column("window", style="yellow")
            worst = sorted(summary.per_d, key=lambda s: s.max_dev, reverse=True)[:SHOW_ROWS]
            for stat in worst:
                table.add_row(
                    str(stat.d),
                    str(stat.a),
                    format_rational(stat.max_dev),
                    f"[{stat.arg_y + offset}, {stat.arg_z + offset})",
                )
            console.print(table)
        if out is not None:
            records = [
                ExperimentRecord.of(
                    "lod-total", {"x": length, "theta": theta, "offset": offset}, summary.total
                )
            ]
            if per_d:
                records.extend(
                    ExperimentRecord.of(
                        "lod-window",
                        {"d": stat.d, "a": stat.a, "x": length, "offset": offset},
                        stat.max_dev,
                    )
                    for stat in summary.per_d
                )
            emit_records(records, out)
    except Exception as e:
        fail("computing the LoD error total", e)


@app.command()
def window(
    d: int = typer.Option(..., "--d", help="Modulus d >= 1"),
    a: int = typer.Option(..., "--a", help="Residue 0 <= a < d"),
    x: str = typer.Option(..., "--x", help="Window length x"),
    offset: int = typer.Option(0, "--offset", help="Windows lie in [offset, offset + x]"),
):
    """Maximal centred deviation of A(y, z; d, a) with an attaining window."""
    try:
        stat = ap_signed_prefix_extremes(d, a, parse_int(x), offset)
        console.print(
            f"📊 max |A(y,z;{d},{a}) - (z-y)/(2d)| = [bold]{format_rational(stat.max_dev)}[/bold] "
            f"at y={stat.arg_y + offset}, z={stat.arg_z + offset}"
        )
    except Exception as e:
        fail("computing the window deviation", e)


@app.command()
def beatty(
    x: str = typer.Option(..., "--x", help="Window length x"),
    D: Optional[str] = typer.Option(None, "--D", help="Integrate alpha over [D, 2D]"),
    alpha_grid: int = typer.Option(16, "--alpha-grid", help="Midpoint cells in [D, 2D]"),
    alpha: Optional[str] = typer.Option(None, "--alpha", "-a", help="Single Beatty alpha >= 1"),
    beta: str = typer.Option("0", "--beta", help="Beatty beta (with --alpha)"),
    out: Optional[Path] = typer.Option(None, "--out", "-o", help="Write records to this file"),
):
    """Beatty analogue: the window deviation for one (alpha, beta), or its integral over [D, 2D]."""
    config = get_config()
    try:
        length = parse_int(x)
        if alpha is not None:
            stat = beatty_window_extremes(length, parse_rational(alpha), parse_rational(beta))
            console.print(
                f"📊 max deviation = [bold]{format_rational(stat.max_dev)}[/bold] "
                f"at y={stat.arg_y}, z={stat.arg_z}"
            )
            return
        if D is None:
            raise InvalidArgumentError("pass --D for the integral or --alpha for one sequence")
        scale = parse_rational(D)
        value = beatty_lod_total(length, scale, alpha_grid, budget=config["budget"])
        console.print(
            f"📊 integral over alpha in [{D}, 2{D}] = [bold]{float(value):.6f}[/bold]"
        )
        if out is not None:
            params = {"x": length, "D": D, "alpha_grid": alpha_grid}
            emit_records([ExperimentRecord.of("lod-beatty", params, value)], out)
    except Exception as e:
        fail("computing the Beatty deviation", e)


@app.command()
def s0(
    N: str = typer.Option(..., "--N", help="Sum length N"),
    D: str = typer.Option("N", "--D", help="Moduli D <= d < 2D; N or N^e ties D to N"),
    xi: float = typer.Option(0.0, "--xi", help="Frequency xi"),
    strategy: str = typer.Option("structured", "--strategy", help="structured (exact) or capped"),
    cap: int = typer.Option(4096, "--cap", help="Shift cap of the capped strategy"),
    out: Optional[Path] = typer.Option(None, "--out", "-o", help="Write records to this file"),
):
    """S_0(N, D, xi) = sum_d max_a |sum_n e(s(nd + a)/2) e(n xi)|, normalised by N D."""
    config = get_config()
    try:
        length = parse_int(N)
        scale = scale_from(D, length)
        result = s0_discrete(
            length,
            scale,
            2 * scale,
            xi,
            strategy,
            cap,
            threads=config["threads"],
            budget=config["budget"],
        )
        if isinstance(result.value, int):
            normalised = Fraction(result.value, length * scale)
        else:
            normalised = result.value / (length * scale)
        debug(f"per-d maxima: {result.per_item[:SHOW_ROWS]}")
        kind = "exact" if result.exact else "lower bound" if strategy == "capped" else "float"
        console.print(
            f"📊 S_0 = [bold]{result.value}[/bold] ({kind}), S_0/(N D) = "
            f"[bold]{float(normalised):.6f}[/bold]"
        )
        if out is not None:
            params = {"N": length, "D": scale, "xi": xi, "strategy": strategy, "cap": cap}
            emit_records([ExperimentRecord.of("s0-discrete", params, normalised)], out)
    except Exception as e:
        fail("computing S_0", e)


@app.command("beatty-s0")
def beatty_s0(
    N: str = typer.Option(..., "--N", help="Sum length N"),
    D: str = typer.Option("N^1/2", "--D", help="alpha ranges over [D, 2D]; N or N^e ties D to N"),
    xi: float = typer.Option(0.0, "--xi", help="Frequency xi"),
    alpha_grid: int = typer.Option(8, "--alpha-grid", help="Midpoint cells in [D, 2D]"),
    strategy: str = typer.Option("breakpoints", "--strategy", help="breakpoints (exact) or grid"),
    beta_grid: int = typer.Option(64, "--beta-grid", help="Fractional beta cells of the grid strategy"),
    out: Optional[Path] = typer.Option(None, "--out", "-o", help="Write records to this file"),
):
    """Continuous S_0: integral over alpha in [D, 2D] of sup_beta |sum_n e(s(floor(n alpha + beta))/2) e(n xi)|."""
    config = get_config()
    try:
        length = parse_int(N)
        scale = Fraction(scale_from(D, length, parse_rational))
        result = s0_beatty(
            length, scale, xi, alpha_grid, strategy, beta_grid, budget=config["budget"]
        )
        normalised = result.value / (length * scale)
        console.print(
            f"📊 S_0 ~ [bold]{float(result.value):.6f}[/bold], S_0/(N D) = "
            f"[bold]{float(normalised):.6f}[/bold]"
        )
        if out is not None:
            params = {
                "N": length,
                "D": D,
                "xi": xi,
                "alpha_grid": alpha_grid,
                "strategy": strategy,
                "beta_grid": beta_grid,
            }
            emit_records([ExperimentRecord.of("s0-beatty", params, normalised)], out)
    except Exception as e:
        fail("computing the Beatty S_0", e)
