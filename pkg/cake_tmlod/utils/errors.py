# SPDX-FileCopyrightText: 2025 Cake AI Technologies, Inc.
#
# SPDX-License-Identifier: Apache-2.0

"""Exception types shared by the library and the CLI."""

from typing import Optional


class TmlodError(Exception):
    """Base class for all errors raised by cake-tmlod."""


class InvalidArgumentError(TmlodError, ValueError):
    """An argument violates the documented precondition of an operation."""


class InvariantViolation(TmlodError, AssertionError):
    """A proven bound or structural invariant failed to hold.

    This always indicates a bug in the implementation, never bad input.
    """


class BudgetExceededError(TmlodError):
    """The projected cost of a computation is above the configured budget."""

    def __init__(self, what: str, estimate: int, budget: Optional[int] = None):
        self.what = what
        self.estimate = estimate
        self.budget = budget
        message = f"{what}: projected cost {estimate:,} operations"
        if budget is not None:
            message += f" exceeds budget {budget:,}"
        super().__init__(message)


def check_budget(what: str, estimate: int, budget: Optional[int]) -> None:
    """Raise BudgetExceededError if estimate is above budget (None = unlimited)."""
    if budget is not None and estimate > budget:
        raise BudgetExceededError(what, estimate, budget)
