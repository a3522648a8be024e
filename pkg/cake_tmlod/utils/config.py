# SPDX-FileCopyrightText: 2025 Cake AI Technologies, Inc.
#
# SPDX-License-Identifier: Apache-2.0

"""Configuration management for the cake-tmlod CLI."""

import os
from pathlib import Path
from typing import Dict, Optional

from dotenv import dotenv_values, load_dotenv

# Default values
DEFAULT_THREADS = max(1, os.cpu_count() or 1)
DEFAULT_BUDGET = 2**34
DEFAULT_SEED = 20240521
DEFAULT_FORMAT = "csv"

FORMATS = ("csv", "json")

# Global configuration
config = {
    "threads": DEFAULT_THREADS,
    "budget": DEFAULT_BUDGET,
    "seed": DEFAULT_SEED,
    "format": DEFAULT_FORMAT,
    "verbose": False,
}


def _parse_bool(value: str) -> bool:
    return value.strip().lower() in ("1", "true", "yes", "on")


def parse_int(value: str) -> int:
    """Parse an integer, accepting the power notation 2^k."""
    value = value.strip()
    if "^" in value:
        base, exponent = value.split("^", 1)
        return int(base) ** int(exponent)
    return int(value)


def load_config(
    threads: Optional[int] = None,
    budget: Optional[int] = None,
    seed: Optional[int] = None,
    output_format: Optional[str] = None,
    verbose: Optional[bool] = None,
) -> dict:
    """Load configuration from .env file and environment variables.

    Args:
        threads: Optional worker count to override the one in .env
        budget: Optional operation budget to override the one in .env
        seed: Optional default seed for randomized checks
        output_format: Optional output format (csv or json)
        verbose: Optional flag enabling debug output

    Returns:
        dict: Configuration dictionary
    """
    # Load from .env file if it exists
    load_dotenv(override=True)

    env_threads = os.getenv("TMLOD_THREADS")
    env_budget = os.getenv("TMLOD_BUDGET")
    env_seed = os.getenv("TMLOD_SEED")
    env_format = os.getenv("TMLOD_FORMAT")
    env_verbose = os.getenv("TMLOD_VERBOSE")

    if env_threads:
        config["threads"] = max(1, parse_int(env_threads))
    if env_budget:
        config["budget"] = parse_int(env_budget)
    if env_seed:
        config["seed"] = parse_int(env_seed)
    if env_format:
        config["format"] = env_format.strip().lower()
    if env_verbose:
        config["verbose"] = _parse_bool(env_verbose)

    # Override with command line arguments if provided
    if threads:
        config["threads"] = max(1, threads)
    if budget:
        config["budget"] = budget
    if seed is not None:
        config["seed"] = seed
    if output_format:
        config["format"] = output_format.lower()
    if verbose is not None:
        config["verbose"] = verbose

    if config["format"] not in FORMATS:
        config["format"] = DEFAULT_FORMAT

    return config


def get_config() -> dict:
    """Get the current configuration.

    Returns:
        dict: Configuration dictionary
    """
    return config


def read_key_value_file(path: Path) -> Dict[str, str]:
    """Read a sweep configuration file in simple key=value format.

    Lines starting with '#' are comments. Keys without a value are dropped.
    """
    values = dotenv_values(path)
    return {key: value for key, value in values.items() if value is not None}
