# SPDX-FileCopyrightText: 2025 Cake AI Technologies, Inc.
#
# SPDX-License-Identifier: Apache-2.0

"""Farey series, the Farey dissection p_Q/q_Q, and the digit-reduction constructions.

All branch decisions are taken on exact rationals. The scalar dissection uses
Stern–Brocot descent with continued-fraction jumps (O(log Q) steps) on the
fractional part and translates by the integer part. The vectorised variant
`farey_approx_dyadic` evaluates p_Q/q_Q on many arguments n/2^k at once by
locating each argument among the mediants of F_Q with exact integer
thresholds; it backs the exceptions census.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple

import numpy as np

from cake_tmlod.core.digitcore import dist_to_integer
from cake_tmlod.utils.console import debug
from cake_tmlod.utils.errors import (
    InvalidArgumentError,
    InvariantViolation,
    check_budget,
)

Pair = Tuple[int, int]

_INT64_SAFE = 1 << 62


@dataclass(frozen=True)
class FareyApprox:
    """p_Q(alpha)/q_Q(alpha) for one argument."""

    p: int
    q: int
    order: int

    def as_fraction(self) -> Fraction:
        return Fraction(self.p, self.q)


@dataclass(frozen=True)
class FareyConstruction:
    """The multiples K_i, the integers M_i and the reduced numerators p_i for one alpha."""

    alpha: Fraction
    m: int
    mu: int
    sigma: int
    K: Tuple[int, ...]
    M: Tuple[int, ...]
    p_frak: Tuple[int, ...]
    errors: Tuple[Fraction, ...] = field(default=())


@dataclass(frozen=True)
class CensusResult:
    """Outcome of the exceptions census."""

    count: int
    total: int
    measure: Fraction
    ratio: Fraction
    mode: str
    grid_bits: Optional[int] = None


def mediant(left: Fraction, right: Fraction) -> Fraction:
    """(a+c)/(b+d) of a/b < c/d; lies strictly between them."""
    left, right = Fraction(left), Fraction(right)
    if left >= right:
        raise InvalidArgumentError(f"mediant needs left < right, got {left} >= {right}")
    return Fraction(
        left.numerator + right.numerator, left.denominator + right.denominator
    )


def _bracket_unit(P: int, R: int, Q: int) -> Tuple[Pair, Pair]:
    """Neighbours a/b <= P/R < c/d in F_Q, for 0 <= P/R < 1."""
    a, b, c, d = 0, 1, 1, 1
    while b + d <= Q:
        left_gap = P * b - R * a  # >= 0, R*b*(x - a/b)
        right_gap = R * c - P * d  # > 0,  R*d*(c/d - x)
        if R * (a + c) <= P * (b + d):
            # the mediant is <= x: slide the left end towards c/d
            k = min((Q - b) // d, left_gap // right_gap)
            a, b = a + k * c, b + k * d
        else:
            k = (Q - d) // b
            if left_gap:
                k = min(k, (right_gap - 1) // left_gap)
            c, d = c + k * a, d + k * b
    return (a, b), (c, d)


def farey_bracket(x: Fraction, Q: int) -> Tuple[Fraction, Fraction]:
    """Neighbours a/b <= x < c/d in the Farey series of order Q."""
    if Q < 1:
        raise InvalidArgumentError(f"Farey order must be positive, got {Q}")
    x = Fraction(x)
    whole = math.floor(x)
    rest = x - whole
    (a, b), (c, d) = _bracket_unit(rest.numerator, rest.denominator, Q)
    return Fraction(a, b) + whole, Fraction(c, d) + whole


def farey_approx(alpha: Fraction, Q: int) -> FareyApprox:
    """The Farey dissection p_Q(alpha)/q_Q(alpha).

    With a/b <= alpha < c/d neighbours in F_Q, take a/b if alpha lies below the
    mediant and c/d otherwise. Guarantees |q alpha - p| < 1/Q.
    """
    if Q < 1:
        raise InvalidArgumentError(f"Farey order must be positive, got {Q}")
    alpha = Fraction(alpha)
    whole = math.floor(alpha)
    rest = alpha - whole
    P, R = rest.numerator, rest.denominator
    (a, b), (c, d) = _bracket_unit(P, R, Q)
    if R * (a + c) > P * (b + d):
        p, q = a, b
    else:
        p, q = c, d
    p += whole * q
    if abs(q * alpha - p) * Q >= 1:
        raise InvariantViolation(
            f"Farey approximation {p}/{q} of {alpha} at order {Q} misses |q*alpha - p| < 1/Q"
        )
    return FareyApprox(p, q, Q)


def farey_neighbors(x: Fraction, n: int) -> Tuple[Fraction, Fraction]:
    """Left and right neighbours of x in F_n (x must have denominator <= n)."""
    x = Fraction(x)
    if n < 1:
        raise InvalidArgumentError(f"Farey order must be positive, got {n}")
    if x.denominator > n:
        raise InvalidArgumentError(
            f"{x} is not in the Farey series of order {n} (denominator {x.denominator} > {n})"
        )
    _, right = farey_bracket(x, n)
    _, reflected = farey_bracket(-x, n)
    return -reflected, right


def farey_sequence(n: int) -> List[Pair]:
    """F_n restricted to [0, 1] as increasing (p, q) pairs."""
    numerators, denominators = _farey_arrays(n)
    return list(zip(numerators.tolist(), denominators.tolist()))


def _farey_length(n: int) -> int:
    phi = np.arange(n + 1, dtype=np.int64)
    for i in range(2, n + 1):
        if phi[i] == i:
            phi[i::i] -= phi[i::i] // i
    return 1 + int(phi[1:].sum())


@lru_cache(maxsize=8)
def _farey_arrays(n: int) -> Tuple[np.ndarray, np.ndarray]:
    if n < 1:
        raise InvalidArgumentError(f"Farey order must be positive, got {n}")
    size = _farey_length(n)
    numerators = np.empty(size, dtype=np.int64)
    denominators = np.empty(size, dtype=np.int64)
    a, b, c, d = 0, 1, 1, n
    numerators[0], denominators[0] = 0, 1
    i = 1
    while c <= n:
        k = (n + b) // d
        a, b, c, d = c, d, k * c - a, k * d - b
        numerators[i], denominators[i] = a, b
        i += 1
    return numerators, denominators


def _ceil_thresholds(num: np.ndarray, den: np.ndarray, k: int) -> np.ndarray:
    """ceil(num * 2^k / den), clipped to 2^62."""
    if k < 62 and int(num.max(initial=0)) < (_INT64_SAFE >> k):
        return -((-(num << k)) // den)
    values = [
        min(-((-(int(x) << k)) // int(y)), _INT64_SAFE)
        for x, y in zip(num.tolist(), den.tolist())
    ]
    return np.array(values, dtype=np.int64)


@lru_cache(maxsize=16)
def _mediant_thresholds(Q: int, k: int) -> np.ndarray:
    numerators, denominators = _farey_arrays(Q)
    return _ceil_thresholds(
        numerators[:-1] + numerators[1:], denominators[:-1] + denominators[1:], k
    )


def farey_approx_dyadic(
    numerators: np.ndarray, k: int, Q: int
) -> Tuple[np.ndarray, np.ndarray]:
    """Vectorised (p_Q(x), q_Q(x)) for x = n / 2^k, n >= 0 an int64 array."""
    n = np.asarray(numerators, dtype=np.int64)
    if n.size and int(n.min()) < 0:
        raise InvalidArgumentError("farey_approx_dyadic needs nonnegative numerators")
    if (1 << k) <= Q:
        # n/2^k is itself an element of F_Q: reduce it
        shift = np.minimum(np.bitwise_count((n & -n) - 1).astype(np.int64), k)
        shift = np.where(n == 0, k, shift)
        return n >> shift, np.left_shift(np.int64(1), k - shift)
    if k >= 63:
        low, high = n, np.zeros_like(n)
    else:
        low, high = n & ((1 << k) - 1), n >> k
    fractions_p, fractions_q = _farey_arrays(Q)
    index = np.searchsorted(_mediant_thresholds(Q, k), low, side="right")
    q = fractions_q[index]
    return fractions_p[index] + q * high, q


def _p(alpha: Fraction, Q: int) -> int:
    return farey_approx(alpha, Q).p


def _q(alpha: Fraction, Q: int) -> int:
    return farey_approx(alpha, Q).q


def build_farey_construction(
    alpha: Fraction, m: int, mu: int, sigma: int
) -> FareyConstruction:
    """Compute K_1..K_m, M_1..M_m and p_1..p_m for one alpha and check the approximation bounds.

    For 1 <= i < m the outer order is 2^{2mu+2sigma} (i = 1) or 2^{mu+2sigma},
    applied to alpha / 2^{(i+1)mu}; the inner order 2^sigma is applied to the
    resulting numerator divided by 2^{(m-i)mu}. K_m and M_m come directly from
    the order 2^{mu+sigma} approximation of alpha / 2^{(m+1)mu}.
    """
    alpha = Fraction(alpha)
    if m < 2:
        raise InvalidArgumentError(f"m must be at least 2, got {m}")
    if mu < 0 or sigma < 0:
        raise InvalidArgumentError(f"mu and sigma must be nonnegative, got {mu}, {sigma}")

    K: List[int] = []
    M: List[int] = []
    p_frak: List[int] = []
    for i in range(1, m):
        order = 2 ** (2 * mu + 2 * sigma) if i == 1 else 2 ** (mu + 2 * sigma)
        outer = farey_approx(alpha / 2 ** ((i + 1) * mu), order)
        inner = farey_approx(Fraction(outer.p, 2 ** ((m - i) * mu)), 2**sigma)
        K.append(outer.q * inner.q)
        M.append(outer.p * inner.q)
        p_frak.append(inner.p)
    last = farey_approx(alpha / 2 ** ((m + 1) * mu), 2 ** (mu + sigma))
    K.append(last.q)
    M.append(last.p)
    p_frak.append(last.p)

    bound = Fraction(1, 2**sigma)
    errors = [abs(K[0] * alpha - 2 ** (2 * mu) * M[0])]
    for i in range(2, m + 1):
        errors.append(abs(K[i - 1] * alpha / 2 ** (i * mu) - 2**mu * M[i - 1]))
    for i, error in enumerate(errors, start=1):
        if K[i - 1] < 1 or error >= bound:
            raise InvariantViolation(
                f"approximation bound fails for i={i}: error {error} >= 2^-{sigma} (alpha={alpha})"
            )
    return FareyConstruction(
        alpha, m, mu, sigma, tuple(K), tuple(M), tuple(p_frak), tuple(errors)
    )


def q_divisibility_measure(K: int, gamma: int, grid: int = 1) -> Fraction:
    """Exact length of {x in [0,1] : 2^gamma | q_K(x)}.

    Sums the Farey intervals of order K around p/q with 2^gamma | q. The value
    is cross-checked against a midpoint sample with `grid` cells: each of the
    interval boundaries can misplace at most one cell.
    """
    if gamma < 0:
        raise InvalidArgumentError(f"gamma must be nonnegative, got {gamma}")
    if grid < 1:
        raise InvalidArgumentError(f"grid must be positive, got {grid}")
    numerators, denominators = _farey_arrays(K)
    modulus = 1 << gamma
    total = Fraction(0)
    lower = Fraction(0)
    count = len(numerators)
    for j in range(count):
        if j + 1 < count:
            upper = Fraction(
                int(numerators[j] + numerators[j + 1]),
                int(denominators[j] + denominators[j + 1]),
            )
        else:
            upper = Fraction(1)
        if int(denominators[j]) % modulus == 0:
            total += upper - lower
        lower = upper

    # midpoints (2i+1)/(2 grid) against the mediant thresholds
    med_num = numerators[:-1] + numerators[1:]
    med_den = denominators[:-1] + denominators[1:]
    thresholds = -((med_den - med_num * 2 * grid) // (2 * med_den))
    cells = np.arange(grid, dtype=np.int64)
    index = np.searchsorted(thresholds, cells, side="right")
    sampled = Fraction(int(np.count_nonzero(denominators[index] % modulus == 0)), grid)
    if abs(sampled - total) > Fraction(count + 1, grid):
        raise InvariantViolation(
            f"divisibility measure {total} disagrees with sampled {sampled} beyond grid resolution"
        )
    debug(f"q_divisibility_measure K={K} gamma={gamma}: exact={total} sampled={sampled}")
    return total


def spaced_points_divisibility_count(
    points: Sequence[Fraction], delta: Fraction, K: int, gamma: int
) -> int:
    """Count points x_i with 2^gamma | q_K(x_i); the points must be delta-spaced modulo 1."""
    xs = sorted(Fraction(x) for x in points)
    delta = Fraction(delta)
    if gamma < 0:
        raise InvalidArgumentError(f"gamma must be nonnegative, got {gamma}")
    if any(x < 0 or x > 1 for x in xs):
        raise InvalidArgumentError("points must lie in [0, 1]")
    if len(xs) > 1:
        gaps = [dist_to_integer(y - x) for x, y in zip(xs, xs[1:])]
        gaps.append(dist_to_integer(xs[-1] - xs[0]))
        if min(gaps) < delta:
            raise InvalidArgumentError(
                f"points are not {delta}-spaced: minimal distance {min(gaps)}"
            )
    modulus = 1 << gamma
    return sum(1 for x in xs if farey_approx(x, K).q % modulus == 0)


def check_gamma_conditions(lam: int, mu: int, sigma: int, gamma: int, m: int) -> None:
    """Validate the admissible parameter system of the exceptions census."""
    conditions = [
        (m >= 2, f"m >= 2 (m={m})"),
        (lam >= (m + 1) * mu, f"lambda >= (m+1)*mu ({lam} < {(m + 1) * mu})"),
        (gamma <= lam - (m + 1) * mu, f"gamma <= lambda - (m+1)*mu ({gamma} > {lam - (m + 1) * mu})"),
        (mu >= 4 * sigma, f"mu >= 4*sigma ({mu} < {4 * sigma})"),
        (sigma >= gamma, f"sigma >= gamma ({sigma} < {gamma})"),
        (gamma >= 1, f"gamma >= 1 (gamma={gamma})"),
    ]
    for holds, text in conditions:
        if not holds:
            raise InvalidArgumentError(f"parameter constraint violated: {text}")


def _p_frak_arrays(
    numerators: np.ndarray, k0: int, m: int, mu: int, sigma: int
) -> List[np.ndarray]:
    """p_1..p_m for alpha = numerators / 2^k0, vectorised."""
    values = []
    for i in range(1, m):
        order = 2 ** (2 * mu + 2 * sigma) if i == 1 else 2 ** (mu + 2 * sigma)
        outer_p, _ = farey_approx_dyadic(numerators, k0 + (i + 1) * mu, order)
        inner_p, _ = farey_approx_dyadic(outer_p, (m - i) * mu, 2**sigma)
        values.append(inner_p)
    last_p, _ = farey_approx_dyadic(numerators, k0 + (m + 1) * mu, 2 ** (mu + sigma))
    values.append(last_p)
    return values


def exceptions_census(
    lam: int,
    mu: int,
    sigma: int,
    gamma: int,
    m: int,
    mode: str = "discrete",
    grid_bits: Optional[int] = None,
    threads: int = 1,
    budget: Optional[int] = None,
    chunk_bits: int = 20,
) -> CensusResult:
    """Size of the set of alpha < 2^lambda with 2^{3 gamma} | p_i for some i.

    "discrete" enumerates alpha in {0, ..., 2^lambda - 1} exactly. "continuous"
    samples the cell midpoints alpha = (j + 1/2)/2^g of a dyadic grid with g
    fractional bits (default lambda + 2 sigma + 1) and reports count / 2^g as
    the measure estimate.
    """
    check_gamma_conditions(lam, mu, sigma, gamma, m)
    if mode == "discrete":
        k0, total, g = 0, 1 << lam, None
    elif mode == "continuous":
        g = lam + 2 * sigma + 1 if grid_bits is None else grid_bits
        if g < 0:
            raise InvalidArgumentError(f"grid_bits must be nonnegative, got {g}")
        k0, total = g + 1, 1 << (lam + g)
    else:
        raise InvalidArgumentError(f"unknown census mode {mode!r}")

    orders = [2 ** (mu + 2 * sigma)] * (m - 2) + [2 ** (mu + sigma)]
    if mode == "continuous" and k0 + 2 * mu > 2 * mu + 2 * sigma:
        orders.append(2 ** (2 * mu + 2 * sigma))
    table_cost = sum(order * order for order in orders)
    check_budget("exceptions census", total * (m + 1) + table_cost, budget)

    modulus = 1 << (3 * gamma)
    step = 1 << chunk_bits

    def count_chunk(start: int) -> int:
        j = np.arange(start, min(start + step, total), dtype=np.int64)
        numerators = j if mode == "discrete" else 2 * j + 1
        hit = np.zeros(j.shape, dtype=bool)
        for p_i in _p_frak_arrays(numerators, k0, m, mu, sigma):
            hit |= p_i % modulus == 0
        return int(np.count_nonzero(hit))

    starts = range(0, total, step)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            count = sum(pool.map(count_chunk, starts))
    else:
        count = sum(map(count_chunk, starts))

    measure = Fraction(count) if g is None else Fraction(count, 1 << g)
    ratio = measure * Fraction(2**gamma, 2**lam)
    debug(
        f"exceptions_census lambda={lam} mu={mu} sigma={sigma} gamma={gamma} m={m} "
        f"mode={mode}: |A|={count} of {total}, ratio={float(ratio):.4f}"
    )
    return CensusResult(count, total, measure, ratio, mode, g)
