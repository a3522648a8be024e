# SPDX-FileCopyrightText: 2025 Cake AI Technologies, Inc.
#
# SPDX-License-Identifier: Apache-2.0

"""Shared rich consoles and debug output."""

from rich.console import Console

from cake_tmlod.utils.config import get_config

console = Console()
err_console = Console(stderr=True)


def debug(message: str) -> None:
    """Print a dim DEBUG line to stderr when verbose output is enabled."""
    if get_config().get("verbose"):
        err_console.print(f"[dim]DEBUG: {message}[/dim]")
