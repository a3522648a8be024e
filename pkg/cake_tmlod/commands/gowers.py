# SPDX-FileCopyrightText: 2025 Cake AI Technologies, Inc.
#
# SPDX-License-Identifier: Apache-2.0

"""Gowers uniformity commands for the cake-tmlod CLI."""

from pathlib import Path
from typing import Optional

import typer
from rich.panel import Panel
from rich.table import Table

from cake_tmlod.core.gowers import (
    OffsetFamily,
    build_graph,
    contraction_check,
    decay_rate,
    export_graph,
    gowers_bruteforce,
    path_weight,
    recursion_table,
    recursion_value,
    staircase_path,
)
from cake_tmlod.utils.config import get_config
from cake_tmlod.utils.console import console
from cake_tmlod.utils.errors import InvalidArgumentError, InvariantViolation
from cake_tmlod.utils.output import emit_records, fail
from cake_tmlod.utils.records import ExperimentRecord

app = typer.Typer(help="Gowers uniformity sums and their recursion graph")


@app.callback(invoke_without_command=True)
def gowers(ctx: typer.Context):
    """Gowers uniformity sums and their recursion graph."""
    if ctx.invoked_subcommand is not None:
        return

    console.print(
        "Please specify a subcommand. Use [bold]tmlod gowers --help[/bold] for more information."
    )


def parse_family(text: Optional[str], m: int) -> OffsetFamily:
    """Parse "a_0,a_1,..." (2^m entries, eps_1 is the lowest index bit); empty means 0."""
    if not text:
        return OffsetFamily.zero(m)
    try:
        entries = tuple(int(v) for v in text.replace("(", "").replace(")", "").split(","))
    except ValueError as e:
        raise InvalidArgumentError(f"offset family must be comma-separated integers: {text!r}") from e
    return OffsetFamily(m, entries)


@app.command()
def brute(
    m: int = typer.Option(2, "--m", help="Cube dimension m >= 2"),
    rho: int = typer.Option(..., "--rho", help="Digit length rho"),
    a: Optional[str] = typer.Option(None, "--a", help="Offset family a_0,...,a_{2^m-1} (default 0)"),
    out: Optional[Path] = typer.Option(None, "--out", "-o", help="Write records to this file"),
):
    """A_rho(a) by direct summation."""
    config = get_config()
    try:
        family = parse_family(a, m)
        value = gowers_bruteforce(m, rho, family, config["threads"], config["budget"])
        console.print(f"📊 A_{rho}{family} = [bold]{value}[/bold] (~{float(value):.6g})")
        if out is not None and family.is_zero():
            emit_records([ExperimentRecord.of("gowers-brute", {"m": m, "rho": rho}, value)], out)
    except Exception as e:
        fail("summing A_rho by brute force", e)


@app.command()
def recursion(
    m: int = typer.Option(2, "--m", help="Cube dimension m >= 2"),
    rho: int = typer.Option(..., "--rho", help="Digit length rho"),
    a: Optional[str] = typer.Option(None, "--a", help="Offset family (default 0)"),
    table: bool = typer.Option(False, "--table", help="Print A_rho on every vertex"),
    out: Optional[Path] = typer.Option(None, "--out", "-o", help="Write records to this file"),
):
    """A_rho(a) from the recursion over the graph."""
    config = get_config()
    try:
        graph = build_graph(m, config["budget"])
        family = parse_family(a, m)
        value = recursion_value(m, rho, family, graph)
        console.print(f"📊 A_{rho}{family} = [bold]{value}[/bold] (~{float(value):.6g})")
        if table:
            listing = Table(title=f"A_{rho} on the graph for m={m}")
            listing.add_column("vertex", style="cyan")
            listing.add_column("A_rho", style="green")
            for vertex, entry in recursion_table(graph, rho).items():
                listing.add_row(str(vertex), str(entry))
            console.print(listing)
        if out is not None and family.is_zero():
            emit_records(
                [ExperimentRecord.of("gowers-recursion", {"m": m, "rho": rho}, value)], out
            )
    except Exception as e:
        fail("running the recursion", e)


@app.command()
def graph(
    m: int = typer.Option(2, "--m", help="Cube dimension m >= 2"),
    export: Optional[Path] = typer.Option(None, "--export", help="Write the adjacency listing to this file"),
):
    """Build the recursion graph and check its structural invariants."""
    config = get_config()
    try:
        console.print(f"🔍 Building the recursion graph for m=[bold]{m}[/bold]...")
        built = build_graph(m, config["budget"])
        console.print(
            f"✅ {len(built)} vertices, {built.edge_count()} edges; row sums 1, "
            f"strongly connected, heights below {m + 1}"
        )
        if export is not None:
            export.write_text("\n".join(export_graph(built)) + "\n", encoding="utf-8", newline="\n")
            console.print(f"✅ Wrote adjacency listing to [bold]{export}[/bold]")
    except Exception as e:
        fail("building the graph", e)


@app.command()
def contract(
    m: int = typer.Option(2, "--m", help="Cube dimension m >= 2"),
    k_max: int = typer.Option(20, "--k-max", help="Largest path length tried"),
    out: Optional[Path] = typer.Option(None, "--out", "-o", help="Write records to this file"),
):
    """Find k* with max_a sum_b |w_k*(a, b)| = c* < 1 and the decay rate eta."""
    config = get_config()
    try:
        built = build_graph(m, config["budget"])
        result = contraction_check(built, k_max)
        if result.k_star is None:
            console.print(
                f"❌ No contraction up to k={k_max}; smallest row maximum {result.c_star}"
            )
            raise typer.Exit(code=1)
        eta = decay_rate(built, result.k_star, result.c_star)
        console.print(
            f"✅ k* = [bold]{result.k_star}[/bold], c* = [bold]{result.c_star}[/bold] "
            f"(~{float(result.c_star):.6f}), eta = [bold]{eta:.6f}[/bold]"
        )
        if out is not None:
            params = {"m": m, "k_max": k_max}
            emit_records(
                [
                    ExperimentRecord.of("gowers-k-star", params, result.k_star),
                    ExperimentRecord.of("gowers-contract", params, result.c_star),
                    ExperimentRecord.of("gowers-eta", params, eta),
                ],
                out,
            )
    except Exception as e:
        fail("checking the contraction", e)


@app.command()
def verify(
    m: int = typer.Option(2, "--m", help="Cube dimension m >= 2"),
    rho_max: int = typer.Option(4, "--rho-max", help="Compare brute force and recursion up to this rho"),
    k_max: int = typer.Option(20, "--k-max", help="Largest path length tried"),
):
    """Cross-check the recursion against brute force and verify the graph properties."""
    config = get_config()
    try:
        built = build_graph(m, config["budget"])
        console.print(f"✅ Graph invariants hold ({len(built)} vertices)")

        for rho in range(rho_max + 1):
            table = recursion_table(built, rho)
            for vertex in built.vertices:
                brute_value = gowers_bruteforce(m, rho, vertex, config["threads"], config["budget"])
                if brute_value != table[vertex]:
                    raise InvariantViolation(
                        f"A_{rho}{vertex}: recursion {table[vertex]} != brute force {brute_value}"
                    )
        console.print(f"✅ Recursion equals brute force on every vertex for rho <= {rho_max}")

        loop = built.weight(built.zero, built.zero)
        if not loop > 0:
            raise InvariantViolation(f"trivial loop weight {loop} is not positive")
        path = staircase_path(m)
        edges = [built.weight(a, b) for a, b in zip(path, path[1:])]
        if any(not w for w in edges) or not edges[-1] < 0:
            raise InvariantViolation("the staircase path is missing an edge or ends positive")
        console.print(
            f"✅ w(0, 0) = {loop}; staircase path weight {path_weight(built, path)}, last edge {edges[-1]}"
        )

        result = contraction_check(built, k_max)
        if result.k_star is None:
            raise InvariantViolation(f"no contraction up to k={k_max}")
        eta = decay_rate(built, result.k_star, result.c_star)
        console.print(
            Panel(
                f"k* = {result.k_star}\nc* = {result.c_star}\neta = {eta:.6f}",
                title=f"Contraction for m={m}",
                border_style="green",
            )
        )
    except Exception as e:
        fail("verifying the Gowers recursion", e)
