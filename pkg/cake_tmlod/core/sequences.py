# SPDX-FileCopyrightText: 2025 Cake AI Technologies, Inc.
#
# SPDX-License-Identifier: Apache-2.0

"""Discrepancy of n*alpha sequences, box counts, carry propagation and van der Corput.

Every count here is an exact integer computation on rational inputs.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Sequence, Tuple, Union

import numpy as np

from cake_tmlod.core.digitcore import digit_sums, log_plus
from cake_tmlod.utils.console import debug
from cake_tmlod.utils.errors import InvalidArgumentError, InvariantViolation

_INT64_SAFE = 1 << 62


@dataclass(frozen=True)
class PointSet:
    """The residues {n alpha} for 0 <= n < N."""

    points: Tuple[Fraction, ...]
    N: int

    def __post_init__(self):
        if len(self.points) != self.N:
            raise InvalidArgumentError("PointSet size does not match its points")
        if any(not 0 <= x < 1 for x in self.points):
            raise InvalidArgumentError("PointSet residues must lie in [0, 1)")


@dataclass(frozen=True)
class BoxQuery:
    """n in [start, stop) with t/T <= {n alpha + beta} < (t+1)/T and floor(n alpha + beta) = k mod K."""

    start: int
    stop: int
    alpha: Fraction
    beta: Fraction
    t: int
    T: int
    k: int
    K: int

    def __post_init__(self):
        if self.stop < self.start:
            raise InvalidArgumentError(f"empty interval [{self.start}, {self.stop})")
        if self.T < 1 or not 0 <= self.t < self.T:
            raise InvalidArgumentError(f"need 0 <= t < T, got t={self.t}, T={self.T}")
        if self.K < 1 or not 0 <= self.k < self.K:
            raise InvalidArgumentError(f"need 0 <= k < K, got k={self.k}, K={self.K}")

    @property
    def N(self) -> int:
        return self.stop - self.start


@dataclass(frozen=True)
class BoxCount:
    count: int
    predicted: Fraction
    residual: Fraction
    scale: Fraction  # N * D_N(alpha / K)


@dataclass(frozen=True)
class CarryCount:
    count: int
    bound: Fraction


@dataclass(frozen=True)
class VdcResult:
    lhs: Union[Fraction, float]
    rhs: Union[Fraction, float]
    ok: bool


def floor_linear(ns: np.ndarray, alpha: Fraction, beta: Fraction) -> Tuple[np.ndarray, np.ndarray, int]:
    """Exact floor(n alpha + beta) and the remainder numerator over the common denominator.

    Returns (floors, remainders, den) with n alpha + beta = floors + remainders/den.
    Falls back to Python integers (object arrays) when int64 could overflow.
    """
    alpha, beta = Fraction(alpha), Fraction(beta)
    den = alpha.denominator * beta.denominator
    step = alpha.numerator * beta.denominator
    shift = beta.numerator * alpha.denominator
    ns = np.asarray(ns, dtype=np.int64)
    largest = int(np.abs(ns).max(initial=0)) * abs(step) + abs(shift)
    if largest < _INT64_SAFE:
        values = ns * step + shift
    else:
        values = ns.astype(object) * step + shift
    floors, remainders = np.divmod(values, den)
    return floors, remainders, den


def point_set(alpha: Fraction, N: int) -> PointSet:
    """Build {n alpha mod 1 : 0 <= n < N}."""
    if N < 1:
        raise InvalidArgumentError(f"N must be positive, got {N}")
    alpha = Fraction(alpha)
    _, remainders, den = floor_linear(np.arange(N), alpha, Fraction(0))
    return PointSet(tuple(Fraction(int(r), den) for r in remainders), N)


def _sorted_residues(alpha: Fraction, N: int) -> Tuple[np.ndarray, int]:
    """Sorted integer residues r_n = n P mod Q for alpha = P/Q, and Q."""
    alpha = Fraction(alpha)
    P, Q = alpha.numerator % alpha.denominator, alpha.denominator
    ns = np.arange(N, dtype=np.int64)
    if N * Q < _INT64_SAFE:
        residues = (ns * P) % Q
    else:
        residues = np.array([(n * P) % Q for n in range(N)], dtype=object)
    return np.sort(residues), Q


def discrepancy(alpha: Fraction, N: int) -> Fraction:
    """Exact extreme discrepancy D_N(alpha) of {n alpha mod 1 : n < N}.

    With sorted residues x_1 <= ... <= x_N and g_i = i/N - x_i the supremum over
    all arcs [y, y+x) of the torus equals 1/N + max g - min g: closed arcs
    between residues give the positive deviations, open arcs the negative ones.
    """
    if N < 1:
        raise InvalidArgumentError(f"N must be positive, got {N}")
    residues, Q = _sorted_residues(alpha, N)
    index = np.arange(1, N + 1, dtype=residues.dtype)
    gaps = index * Q - residues * N
    return Fraction(int(gaps.max()) - int(gaps.min()) + Q, N * Q)


def discrepancy_bruteforce(alpha: Fraction, N: int) -> Fraction:
    """Quadratic oracle for `discrepancy`: every closed and open arc between residues."""
    if N < 1:
        raise InvalidArgumentError(f"N must be positive, got {N}")
    residues, Q = _sorted_residues(alpha, N)
    values: List[int] = []
    counts: List[int] = []
    for r in residues.tolist():
        if values and values[-1] == r:
            counts[-1] += 1
        else:
            values.append(r)
            counts.append(1)
    cumulative = [0]
    for c in counts:
        cumulative.append(cumulative[-1] + c)

    best = 0
    V = len(values)
    for i in range(V):
        for j in range(V):
            if j >= i:
                closed_count = cumulative[j + 1] - cumulative[i]
                closed_length = values[j] - values[i]
            else:
                closed_count = N - (cumulative[i] - cumulative[j + 1])
                closed_length = Q - (values[i] - values[j])
            if j > i:
                open_count = cumulative[j] - cumulative[i + 1]
                open_length = values[j] - values[i]
            elif j < i:
                open_count = N - (cumulative[i + 1] - cumulative[j])
                open_length = Q - (values[i] - values[j])
            else:
                open_count = N - counts[i]
                open_length = Q
            best = max(
                best,
                abs(closed_count * Q - closed_length * N),
                abs(open_count * Q - open_length * N),
            )
    return Fraction(best, N * Q)


def box_count(query: BoxQuery) -> BoxCount:
    """Exact count for a box query, with the main term N/(KT) and the residual."""
    ns = np.arange(query.start, query.stop, dtype=np.int64)
    floors, remainders, den = floor_linear(ns, query.alpha, query.beta)
    in_box = (remainders * query.T >= query.t * den) & (
        remainders * query.T < (query.t + 1) * den
    )
    in_class = floors % query.K == query.k
    count = int(np.count_nonzero(in_box & in_class))
    predicted = Fraction(query.N, query.K * query.T)
    scale = (
        query.N * discrepancy(Fraction(query.alpha) / query.K, query.N)
        if query.N
        else Fraction(0)
    )
    return BoxCount(count, predicted, abs(count - predicted), scale)


def _high_digit_sums(values: np.ndarray, lam: int) -> np.ndarray:
    if values.dtype == object:
        return np.array([(int(v) >> lam).bit_count() for v in values], dtype=np.int64)
    return digit_sums(values >> lam)


def carry_census(
    start: int, stop: int, r: int, alpha: Fraction, beta: Fraction, lam: int
) -> CarryCount:
    """Count n in [start, stop) where a shift by r changes s and s_lambda differently.

    s(v) - s_lambda(v) = s(v >> lambda), so the condition is that the digits
    above lambda of floor(n alpha + beta) and floor((n+r) alpha + beta) have
    different digit sums. The count is at most r (N alpha / 2^lambda + 2).
    """
    alpha, beta = Fraction(alpha), Fraction(beta)
    if alpha <= 0 or beta < 0:
        raise InvalidArgumentError(f"need alpha > 0 and beta >= 0, got {alpha}, {beta}")
    if r < 0 or lam < 0 or start < 0 or stop < start:
        raise InvalidArgumentError("need r >= 0, lambda >= 0 and 0 <= start <= stop")
    N = stop - start
    ns = np.arange(start, stop, dtype=np.int64)
    here, _, _ = floor_linear(ns, alpha, beta)
    there, _, _ = floor_linear(ns + r, alpha, beta)
    count = int(np.count_nonzero(_high_digit_sums(here, lam) != _high_digit_sums(there, lam)))
    bound = r * (N * alpha / 2**lam + 2)
    if count > bound:
        raise InvariantViolation(
            f"carry count {count} exceeds r(N alpha/2^lambda + 2) = {bound}"
        )
    return CarryCount(count, bound)


def vdc_check(z: Sequence, K: int, R: int, rel_tol: float = 1e-9) -> VdcResult:
    """Evaluate both sides of the generalized van der Corput inequality.

    |sum z_n|^2 <= (N + K(R-1))/R * sum_{|r|<R} (1 - |r|/R) sum_n z_{n+Kr} conj(z_n)

    Integer or Fraction entries are evaluated exactly; anything else in double precision.
    """
    if K < 1 or R < 1:
        raise InvalidArgumentError(f"K and R must be positive, got K={K}, R={R}")
    N = len(z)
    factor = Fraction(N + K * (R - 1), R)
    if all(isinstance(v, (int, Fraction)) for v in z):
        values = [Fraction(v) for v in z]
        lhs = sum(values, Fraction(0)) ** 2
        inner = sum(v * v for v in values)
        for r in range(1, R):
            shift = K * r
            correlation = sum(
                (values[n + shift] * values[n] for n in range(N - shift)), Fraction(0)
            )
            inner += 2 * (1 - Fraction(r, R)) * correlation
        rhs = factor * inner
        return VdcResult(lhs, rhs, lhs <= rhs)

    array = np.asarray(z, dtype=np.complex128)
    lhs = abs(array.sum()) ** 2
    terms = [float(np.vdot(array, array).real)]
    for r in range(1, R):
        shift = K * r
        if shift >= N:
            break
        correlation = np.vdot(array[: N - shift], array[shift:])
        terms.append(2 * (1 - r / R) * float(correlation.real))
    rhs = float(factor) * math.fsum(terms)
    ok = lhs <= rhs + rel_tol * max(1.0, abs(rhs), lhs)
    return VdcResult(lhs, rhs, ok)


def mean_discrepancy_sum(mu: int, N: int, mode: str = "discrete", grid: int = 1024) -> Fraction:
    """Sum of D_N(d / 2^mu) over d < 2^mu, or a midpoint estimate of the integral of D_N over [0, 1]."""
    if mu < 0 or N < 1:
        raise InvalidArgumentError(f"need mu >= 0 and N >= 1, got mu={mu}, N={N}")
    if mode == "discrete":
        return sum((discrepancy(Fraction(d, 2**mu), N) for d in range(2**mu)), Fraction(0))
    if mode == "continuous":
        if grid < 1:
            raise InvalidArgumentError(f"grid must be positive, got {grid}")
        total = sum(
            (discrepancy(Fraction(2 * j + 1, 2 * grid), N) for j in range(grid)),
            Fraction(0),
        )
        debug(f"mean discrepancy N={N}: {grid} midpoint samples")
        return total / grid
    raise InvalidArgumentError(f"unknown mode {mode!r}")


def mean_discrepancy_bound(mu: int, N: int, mode: str = "discrete") -> float:
    """(N + 2^mu)/N (log+ N)^2, or (log+ N)^2 / N for the integral."""
    if mode == "discrete":
        return (N + 2**mu) / N * log_plus(N) ** 2
    return log_plus(N) ** 2 / N
