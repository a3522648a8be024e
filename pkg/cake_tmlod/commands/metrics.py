# SPDX-FileCopyrightText: 2025 Cake AI Technologies, Inc.
#
# SPDX-License-Identifier: Apache-2.0

"""Top-level equidistribution commands: discrepancy, box counts, carries and van der Corput.

These are registered directly on the root app in main.py.
"""

from pathlib import Path
from typing import List, Optional

import numpy as np
import typer
from rich.table import Table

from cake_tmlod.core.rationals import format_rational, parse_rational
from cake_tmlod.core.sequences import (
    BoxQuery,
    box_count,
    carry_census,
    discrepancy_bruteforce,
    discrepancy as extreme_discrepancy,
    mean_discrepancy_bound,
    mean_discrepancy_sum,
    vdc_check,
)
from cake_tmlod.utils.config import get_config, parse_int
from cake_tmlod.utils.console import console
from cake_tmlod.utils.errors import InvariantViolation
from cake_tmlod.utils.output import emit_records, fail
from cake_tmlod.utils.records import ExperimentRecord


def discrepancy(
    alpha: str = typer.Option(..., "--alpha", "-a", help="Rational alpha"),
    N: str = typer.Option(..., "--N", help="Number of points (2^k accepted)"),
    check: bool = typer.Option(False, "--check", help="Compare with the quadratic oracle"),
    out: Optional[Path] = typer.Option(None, "--out", "-o", help="Write records to this file"),
):
    """Exact extreme discrepancy D_N(alpha) of {n alpha mod 1 : n < N}."""
    try:
        x = parse_rational(alpha)
        count = parse_int(N)
        value = extreme_discrepancy(x, count)
        console.print(
            f"📊 D_{count}({format_rational(x)}) = [bold]{format_rational(value)}[/bold] "
            f"(N D_N = {float(value * count):.4f})"
        )
        if check:
            oracle = discrepancy_bruteforce(x, count)
            if oracle != value:
                raise InvariantViolation(
                    f"sorted discrepancy {value} differs from the oracle {oracle}"
                )
            console.print("✅ Quadratic oracle agrees")
        if out is not None:
            emit_records(
                [ExperimentRecord.of("discrepancy", {"alpha": alpha, "N": count}, value)], out
            )
    except Exception as e:
        fail("computing the discrepancy", e)


def box(
    start: int = typer.Option(0, "--start", help="First n"),
    N: str = typer.Option(..., "--N", help="Number of n"),
    alpha: str = typer.Option(..., "--alpha", "-a", help="Rational alpha"),
    beta: str = typer.Option("0", "--beta", help="Rational beta"),
    t: int = typer.Option(..., "--t", help="Box index 0 <= t < T"),
    T: int = typer.Option(..., "--T", help="Number of boxes"),
    k: int = typer.Option(0, "--k", help="Residue class of floor(n alpha + beta)"),
    K: int = typer.Option(1, "--K", help="Modulus of the residue class"),
):
    """Count n with {n alpha + beta} in [t/T, (t+1)/T) and floor(n alpha + beta) = k mod K."""
    try:
        stop = start + parse_int(N)
        query = BoxQuery(start, stop, parse_rational(alpha), parse_rational(beta), t, T, k, K)
        result = box_count(query)
        table = Table(title="Box count")
        table.add_column("count", style="green")
        table.add_column("N/(KT)", style="cyan")
        table.add_column("|residual|", style="yellow")
        table.add_column("N D_N(alpha/K)", style="cyan")
        table.add_row(
            str(result.count),
            format_rational(result.predicted),
            format_rational(result.residual),
            format_rational(result.scale),
        )
        console.print(table)
    except Exception as e:
        fail("counting the box", e)


def carry(
    N: str = typer.Option(..., "--N", help="Interval length"),
    r: int = typer.Option(..., "--r", help="Shift r"),
    alpha: str = typer.Option(..., "--alpha", "-a", help="Rational alpha > 0"),
    beta: str = typer.Option("0", "--beta", help="Rational beta >= 0"),
    lam: int = typer.Option(..., "--lam", help="Truncation lambda"),
    start: int = typer.Option(0, "--start", help="First n"),
    out: Optional[Path] = typer.Option(None, "--out", "-o", help="Write records to this file"),
):
    """Count n where s and s_lambda disagree on the shift by r."""
    try:
        length = parse_int(N)
        result = carry_census(
            start, start + length, r, parse_rational(alpha), parse_rational(beta), lam
        )
        console.print(
            f"✅ carry count [bold]{result.count}[/bold] <= r(N alpha/2^lambda + 2) = "
            f"{format_rational(result.bound)}"
        )
        if out is not None and start == 0:
            params = {"N": length, "r": r, "alpha": alpha, "beta": beta, "lam": lam}
            emit_records([ExperimentRecord.of("carry", params, result.count)], out)
    except Exception as e:
        fail("counting carries", e)


def vdc(
    z: Optional[List[str]] = typer.Option(None, "--z", help="Rational entry (repeatable); exact check"),
    K: int = typer.Option(..., "--K", help="Shift step K"),
    R: int = typer.Option(..., "--R", help="Number of shifts R"),
    random: int = typer.Option(0, "--random", help="Also check this many random complex instances"),
    length: int = typer.Option(64, "--length", help="Maximal length of the random instances"),
    seed: Optional[int] = typer.Option(None, "--seed", help="Seed for random instances"),
):
    """Check the generalized van der Corput inequality."""
    try:
        if z:
            result = vdc_check([parse_rational(v) for v in z], K, R)
            mark = "✅" if result.ok else "❌"
            console.print(
                f"{mark} |sum z|^2 = {format_rational(result.lhs)} <= {format_rational(result.rhs)}"
            )
            if not result.ok:
                raise InvariantViolation("van der Corput inequality fails on exact input")
        if random:
            used_seed = get_config()["seed"] if seed is None else seed
            console.print(f"🔍 {random} random instance(s), seed [bold]{used_seed}[/bold]")
            rng = np.random.default_rng(used_seed)
            failures = 0
            for _ in range(random):
                size = int(rng.integers(1, length + 1))
                values = rng.uniform(0, 1, size) * np.exp(2j * np.pi * rng.uniform(0, 1, size))
                failures += not vdc_check(list(values), K, R).ok
            if failures:
                raise InvariantViolation(f"{failures} random instance(s) violate the inequality")
            console.print("✅ All random instances satisfy the inequality")
        if not z and not random:
            console.print("ℹ️ Nothing to check: pass --z entries or --random COUNT")
    except Exception as e:
        fail("checking van der Corput", e)


def mean_discrepancy(
    mu: int = typer.Option(..., "--mu", help="Denominator exponent mu"),
    N: str = typer.Option(..., "--N", help="Number of points"),
    mode: str = typer.Option("discrete", "--mode", help="discrete (d/2^mu) or continuous (integral)"),
    grid: int = typer.Option(1024, "--grid", help="Midpoint samples of the continuous mode"),
    out: Optional[Path] = typer.Option(None, "--out", "-o", help="Write records to this file"),
):
    """Sum of D_N(d/2^mu) over d < 2^mu compared with (N + 2^mu)/N (log+ N)^2."""
    try:
        count = parse_int(N)
        total = mean_discrepancy_sum(mu, count, mode, grid)
        bound = mean_discrepancy_bound(mu, count, mode)
        console.print(
            f"📊 sum = [bold]{float(total):.6f}[/bold], bound shape = {bound:.6f}, "
            f"ratio = [bold]{float(total) / bound:.6f}[/bold]"
        )
        if out is not None:
            params = {"mu": mu, "N": count, "mode": mode, "grid": grid}
            emit_records(
                [ExperimentRecord.of("mean-discrepancy", params, float(total) / bound)], out
            )
    except Exception as e:
        fail("computing the mean discrepancy", e)
