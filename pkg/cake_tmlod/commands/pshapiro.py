# SPDX-FileCopyrightText: 2025 Cake AI Technologies, Inc.
#
# SPDX-License-Identifier: Apache-2.0

"""Piatetski-Shapiro frequency command, registered on the root app."""

from pathlib import Path
from typing import Optional

import typer

from cake_tmlod.core.lod import ps_frequency
from cake_tmlod.core.rationals import format_rational
from cake_tmlod.utils.config import parse_int
from cake_tmlod.utils.console import console
from cake_tmlod.utils.output import emit_records, fail
from cake_tmlod.utils.records import ExperimentRecord, excluded_status


def pshapiro(
    c: str = typer.Option(..., "--c", help="Exponent 1 < c < 2, e.g. 3/2 or 1.2"),
    N: str = typer.Option(..., "--N", help="Number of terms (10^k and 2^k accepted)"),
    method: str = typer.Option("auto", "--method", help="auto, exact or real"),
    out: Optional[Path] = typer.Option(None, "--out", "-o", help="Write records to this file"),
):
    """Frequency of t(floor(n^c)) = 0 over n < N and its distance to 1/2."""
    try:
        count = parse_int(N)
        console.print(f"🔍 Thue–Morse along floor(n^{c}) for n < [bold]{count}[/bold]...")
        result = ps_frequency(c, count, method)
        console.print(
            f"📊 freq0 = [bold]{format_rational(result.freq0)}[/bold] "
            f"(|freq0 - 1/2| = {float(result.deviation):.3e}, method {result.method})"
        )
        if result.excluded:
            console.print(
                f"ℹ️ {result.excluded} floor(s) could not be certified and were excluded"
            )
        if out is not None:
            params = {"c": c, "N": count, "method": method}
            status = excluded_status(result.excluded)
            record = ExperimentRecord.of("pshapiro", params, result.deviation, status=status)
            emit_records([record], out)
    except Exception as e:
        fail("computing the Piatetski-Shapiro frequency", e)
