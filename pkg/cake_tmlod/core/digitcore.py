# SPDX-FileCopyrightText: 2025 Cake AI Technologies, Inc.
#
# SPDX-License-Identifier: Apache-2.0

"""Digit-sum and Thue–Morse kernels plus real-number notation helpers.

Binary digit sums use population count (`int.bit_count` for scalars,
`numpy.bitwise_count` for arrays). Prefix tables over [0, 2^k) are built
with the block recurrence s(2n) = s(n), s(2n+1) = s(n) + 1.

The real-number helpers accept exact `Fraction`s as well as floats; every
decision that matters for correctness is taken on exact values.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple, Union

import numpy as np

from cake_tmlod.utils.errors import InvalidArgumentError

Real = Union[int, float, Fraction]


@dataclass(frozen=True)
class DigitKernel:
    """Sum-of-digits function s_q in a fixed base."""

    base: int = 2

    def __post_init__(self):
        if self.base < 2:
            raise InvalidArgumentError(f"base must be at least 2, got {self.base}")

    def __call__(self, n: int) -> int:
        return sum_of_digits(n, self.base)


@dataclass(frozen=True)
class TruncationWindow:
    """Digit window mu <= lambda of the two-fold restricted digit sum."""

    mu: int
    lam: int

    def __post_init__(self):
        if not 0 <= self.mu <= self.lam:
            raise InvalidArgumentError(
                f"truncation window needs 0 <= mu <= lambda, got mu={self.mu}, lambda={self.lam}"
            )


def sum_of_digits(n: int, base: int = 2) -> int:
    """Return the sum of the base-q digits of n >= 0."""
    if base < 2:
        raise InvalidArgumentError(f"base must be at least 2, got {base}")
    if n < 0:
        raise InvalidArgumentError(f"digit sums are defined for n >= 0, got {n}")
    if base == 2:
        return n.bit_count()
    total = 0
    while n:
        n, digit = divmod(n, base)
        total += digit
    return total


def truncated_digit_sum(n: int, lam: int) -> int:
    """s_lambda(n) = s(n mod 2^lambda)."""
    if lam < 0:
        raise InvalidArgumentError(f"lambda must be nonnegative, got {lam}")
    return (n & ((1 << lam) - 1)).bit_count()


def twofold_digit_sum(n: int, window: TruncationWindow) -> int:
    """s_{mu,lambda}(n) = s_lambda(n) - s_mu(n), the digits in positions mu..lambda-1."""
    return truncated_digit_sum(n, window.lam) - truncated_digit_sum(n, window.mu)


def tm_sign(n: int) -> int:
    """(-1)^{s(n)}; +1 exactly when t(n) = 0."""
    if n < 0:
        raise InvalidArgumentError(f"tm_sign is defined for n >= 0, got {n}")
    return -1 if n.bit_count() & 1 else 1


def thue_morse_word(length: int) -> str:
    """The prefix t(0) t(1) ... t(length-1) as a string of 0/1."""
    return "".join(str(n.bit_count() & 1) for n in range(length))


def digit_sum_table(k: int) -> np.ndarray:
    """s(n) for 0 <= n < 2^k, by doubling blocks: s on [2^j, 2^{j+1}) is s on [0, 2^j) plus one."""
    if k < 0:
        raise InvalidArgumentError(f"table size exponent must be nonnegative, got {k}")
    table = np.zeros(1, dtype=np.int64)
    for _ in range(k):
        table = np.concatenate((table, table + 1))
    return table


def digit_sums(values) -> np.ndarray:
    """Vectorised binary digit sums of a nonnegative integer array."""
    array = np.asarray(values)
    return np.bitwise_count(array.astype(np.uint64)).astype(np.int64)


def tm_signs(values) -> np.ndarray:
    """Vectorised (-1)^{s(n)} as an int64 array of +-1."""
    return 1 - 2 * (digit_sums(values) & 1)


def tm_prefix(length: int) -> np.ndarray:
    """t(n) for 0 <= n < length as an int64 array of 0/1."""
    k = max(0, (length - 1).bit_length()) if length > 0 else 0
    return (digit_sum_table(k)[:length] & 1).astype(np.int64)


def tm_balance(length: int) -> int:
    """max |sum_{n<m} (-1)^{s(n)}| over prefixes m <= length; at most 1."""
    if length < 0:
        raise InvalidArgumentError(f"length must be nonnegative, got {length}")
    if length == 0:
        return 0
    signs = 1 - 2 * tm_prefix(length)
    return int(np.abs(signs.cumsum()).max())


def nearest_integer(x: Real) -> int:
    """<x> = floor(x + 1/2)."""
    if isinstance(x, float):
        return math.floor(x + 0.5)
    return math.floor(Fraction(x) + Fraction(1, 2))


def dist_to_integer(x: Real) -> Real:
    """||x|| = min_n |x - n|, in [0, 1/2]."""
    return abs(x - nearest_integer(x))


def frac(x: Real) -> Real:
    """{x} = x - floor(x), in [0, 1)."""
    return x - math.floor(x)


def log_plus(x: float) -> float:
    """log+ x = max{1, log x}."""
    if x <= 0:
        return 1.0
    return max(1.0, math.log(x))


def two_adic_valuation(n: int) -> Optional[int]:
    """nu_2(n); None stands for +infinity at n = 0."""
    if n == 0:
        return None
    return (n & -n).bit_length() - 1


def fractional_part_facts_check(
    a: Fraction, b: Fraction, n: int, eps: Fraction
) -> Tuple[bool, bool, bool]:
    """Check the three elementary fractional-part facts on exact inputs.

    Returns one flag per fact; a fact whose hypothesis fails counts as holding.

    1. ||a|| < eps and ||b|| >= eps imply floor(a+b) = <a> + floor(b).
    2. ||n a|| <= n ||a||.
    3. ||a|| < eps and 2 n eps < 1 imply <n a> = n <a>.
    """
    a, b, eps = Fraction(a), Fraction(b), Fraction(eps)
    if n < 0:
        raise InvalidArgumentError(f"n must be nonnegative, got {n}")

    near_a = dist_to_integer(a) < eps
    first = True
    if near_a and dist_to_integer(b) >= eps:
        first = math.floor(a + b) == nearest_integer(a) + math.floor(b)

    second = dist_to_integer(n * a) <= n * dist_to_integer(a)

    third = True
    if near_a and 2 * n * eps < 1:
        third = nearest_integer(n * a) == n * nearest_integer(a)

    return first, second, third


def integer_root(value: int, k: int) -> int:
    """floor(value^(1/k)) for value >= 0, exact."""
    if k < 1:
        raise InvalidArgumentError(f"root degree must be positive, got {k}")
    if value < 0:
        raise InvalidArgumentError(f"integer_root needs value >= 0, got {value}")
    if value < 2 or k == 1:
        return value
    if k == 2:
        return math.isqrt(value)
    if value.bit_length() < 1000:
        root = int(round(value ** (1.0 / k)))
    else:
        # Newton from above
        root = 1 << -(-value.bit_length() // k)
        while True:
            better = ((k - 1) * root + value // root ** (k - 1)) // k
            if better >= root:
                break
            root = better
    while root**k > value:
        root -= 1
    while (root + 1) ** k <= value:
        root += 1
    return root
