# SPDX-FileCopyrightText: 2025 Cake AI Technologies, Inc.
#
# SPDX-License-Identifier: Apache-2.0

"""Level-of-distribution experiments for the Thue–Morse sequence.

Counts along arithmetic progressions and Beatty sequences, the maximal
centred window deviation, the S_0 exponential sums with their maxima over
shifts, and Piatetski-Shapiro frequencies.

Window deviations are computed on the integer scale U(y) = 2 d A(0, y) - y,
so that A(y, z) - (z - y)/(2d) = (U(z) - U(y)) / (2d) stays exact.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple, Union

import mpmath
import numpy as np

from cake_tmlod.core.digitcore import integer_root, tm_signs, two_adic_valuation
from cake_tmlod.core.rationals import parse_rational
from cake_tmlod.core.sequences import floor_linear
from cake_tmlod.utils.console import debug
from cake_tmlod.utils.errors import (
    InvalidArgumentError,
    InvariantViolation,
    check_budget,
)

Number = Union[int, float, Fraction]


@dataclass(frozen=True)
class APWindowStat:
    """Maximal centred deviation over windows [y, z) for one residue class (or Beatty parameter)."""

    d: Number
    a: Number
    max_dev: Fraction
    arg_y: int
    arg_z: int

    def __post_init__(self):
        if self.max_dev < 0 or not 0 <= self.arg_y <= self.arg_z:
            raise InvalidArgumentError("invalid window statistic")


@dataclass
class LoDSummary:
    """Sum over moduli d <= D of the per-d maximal deviations."""

    x: int
    D: int
    total: Fraction
    per_d: List[APWindowStat] = field(default_factory=list)
    theta: Optional[float] = None
    offset: int = 0

    def check(self) -> None:
        if self.total != sum((s.max_dev for s in self.per_d), Fraction(0)):
            raise InvariantViolation("LoD total differs from the sum of per-d maxima")


@dataclass(frozen=True)
class PSExperiment:
    """Frequency of t(floor(n^c)) = 0 for n < N."""

    c: str
    N: int
    freq0: Fraction
    deviation: Fraction
    excluded: int = 0
    method: str = "exact"

    def __post_init__(self):
        if not 0 <= self.freq0 <= 1:
            raise InvalidArgumentError(f"frequency out of range: {self.freq0}")


@dataclass(frozen=True)
class S0Result:
    value: Union[int, float, Fraction]
    strategy: str
    exact: bool
    per_item: Tuple = ()


def _tm_zero(values: np.ndarray) -> np.ndarray:
    return tm_signs(values) == 1


def ap_count(y: int, z: int, d: int, a: int) -> int:
    """A(y, z; d, a) = #{y <= m < z : t(m) = 0, m = a mod d}."""
    if d < 1:
        raise InvalidArgumentError(f"modulus must be positive, got {d}")
    if y < 0 or z < y:
        raise InvalidArgumentError(f"need 0 <= y <= z, got y={y}, z={z}")
    first = y + (a - y) % d
    return int(np.count_nonzero(_tm_zero(np.arange(first, z, d, dtype=np.int64))))


def beatty_member(m: int, alpha: Fraction, beta: Fraction) -> bool:
    """Whether m = floor(n alpha + beta) for some integer n (alpha >= 1)."""
    alpha, beta = Fraction(alpha), Fraction(beta)
    n = math.ceil((m - beta) / alpha)
    return math.floor(n * alpha + beta) == m


def beatty_values(y: int, z: int, alpha: Fraction, beta: Fraction) -> np.ndarray:
    """The increasing values floor(n alpha + beta) lying in [y, z)."""
    alpha, beta = Fraction(alpha), Fraction(beta)
    if alpha < 1:
        raise InvalidArgumentError(f"Beatty sequences need alpha >= 1, got {alpha}")
    if y < 0 or z < y:
        raise InvalidArgumentError(f"need 0 <= y <= z, got y={y}, z={z}")
    n_lo = math.ceil((y - beta) / alpha)
    n_hi = math.ceil((z - beta) / alpha)
    floors, _, _ = floor_linear(np.arange(n_lo, max(n_lo, n_hi), dtype=np.int64), alpha, beta)
    floors = floors.astype(np.int64)
    if floors.size > 1 and not np.all(np.diff(floors) > 0):
        raise InvariantViolation(f"Beatty values for alpha={alpha} are not strictly increasing")
    return floors


def beatty_count(y: int, z: int, alpha: Fraction, beta: Fraction) -> int:
    """A(y, z; alpha, beta): m in [y, z) with t(m) = 0 on the Beatty sequence floor(n alpha + beta)."""
    return int(np.count_nonzero(_tm_zero(beatty_values(y, z, alpha, beta))))


def _window_extremes(
    members: np.ndarray, counted: np.ndarray, x: int, offset: int, scale: int, step: int
) -> Tuple[int, int, int, int]:
    """Extremes of U(y) = scale * A(offset, offset+y) - step * y over 0 <= y <= x.

    U jumps only at counted members, so its maximum sits at y = 0 or just after
    a counted member and its minimum at y = x or just before one.
    """
    after = np.cumsum(counted, dtype=np.int64)
    before = after - counted
    position = members - offset
    highs = scale * after - step * (position + 1)
    lows = scale * before - step * position
    total = int(after[-1]) if after.size else 0

    best_hi, arg_hi = 0, 0
    if highs.size:
        i = int(np.argmax(highs))
        if highs[i] > best_hi:
            best_hi, arg_hi = int(highs[i]), int(position[i] + 1)
    best_lo, arg_lo = scale * total - step * x, x
    if lows.size:
        i = int(np.argmin(lows))
        if lows[i] < best_lo:
            best_lo, arg_lo = int(lows[i]), int(position[i])
    if best_lo > 0:
        best_lo, arg_lo = 0, 0
    if best_hi < scale * total - step * x:
        best_hi, arg_hi = scale * total - step * x, x
    return best_hi, arg_hi, best_lo, arg_lo


def ap_signed_prefix_extremes(d: int, a: int, x: int, offset: int = 0) -> APWindowStat:
    """max over offset <= y <= z <= offset + x of |A(y, z; d, a) - (z - y)/(2d)|.

    Returns the deviation with a window (arg_y, arg_z) attaining it, relative
    to the offset.
    """
    if d < 1 or not 0 <= a < d:
        raise InvalidArgumentError(f"need d >= 1 and 0 <= a < d, got d={d}, a={a}")
    if x < 0 or offset < 0:
        raise InvalidArgumentError(f"need x >= 0 and offset >= 0, got x={x}, offset={offset}")
    if x == 0:
        return APWindowStat(d, a, Fraction(0), 0, 0)
    first = offset + (a - offset) % d
    members = np.arange(first, offset + x, d, dtype=np.int64)
    hi, arg_hi, lo, arg_lo = _window_extremes(
        members, _tm_zero(members).astype(np.int64), x, offset, 2 * d, 1
    )
    return APWindowStat(d, a, Fraction(hi - lo, 2 * d), min(arg_hi, arg_lo), max(arg_hi, arg_lo))


def _max_deviation_for_modulus(d: int, x: int, offset: int, zero: np.ndarray, base: int) -> APWindowStat:
    """Best residue class for one modulus, all classes handled as columns of one matrix."""
    start = offset - offset % d
    rows = -(-(offset + x - start) // d)
    lo_index = start - base
    block = np.zeros(rows * d, dtype=np.int64)
    available = min(rows * d, zero.size - lo_index)
    block[:available] = zero[lo_index : lo_index + available]
    m = start + np.arange(rows * d, dtype=np.int64)
    valid = (m >= offset) & (m < offset + x)
    counted = (block * valid).reshape(rows, d)
    m = m.reshape(rows, d)
    valid = valid.reshape(rows, d)

    after = np.cumsum(counted, axis=0)
    before = after - counted
    position = m - offset
    highs = np.where(valid, 2 * d * after - (position + 1), 0)
    lows = np.where(valid, 2 * d * before - position, 0)
    totals = after[-1]
    end = 2 * d * totals - x
    column_max = np.maximum(np.maximum(highs.max(axis=0), 0), end)
    column_min = np.minimum(np.minimum(lows.min(axis=0), 0), end)
    spread = column_max - column_min
    a_best = int(np.argmax(spread))
    residue = (start + a_best) % d
    # recover the attaining window for the winning class
    stat = ap_signed_prefix_extremes(d, residue, x, offset)
    if stat.max_dev != Fraction(int(spread[a_best]), 2 * d):
        raise InvariantViolation(f"matrix and scalar window extremes disagree for d={d}")
    return stat


def lod_bound_D(x: int, theta: float) -> int:
    """D = floor(x^theta), computed exactly when theta is a simple rational."""
    if x < 1 or not 0 < theta <= 1:
        raise InvalidArgumentError(f"need x >= 1 and 0 < theta <= 1, got x={x}, theta={theta}")
    exponent = Fraction(theta).limit_denominator(1000)
    if abs(float(exponent) - theta) < 1e-12:
        return integer_root(x**exponent.numerator, exponent.denominator)
    return int(math.floor(x**theta))


def lod_error_total(
    x: int,
    theta: float,
    offset: int = 0,
    threads: int = 1,
    budget: Optional[int] = None,
) -> LoDSummary:
    """Sum over 1 <= d <= D = floor(x^theta) of max_a max_{y,z} |A(y,z;d,a) - (z-y)/(2d)|."""
    D = lod_bound_D(x, theta)
    check_budget("lod_error_total", x * D + D * D, budget)
    base = max(0, offset - D)
    zero = _tm_zero(np.arange(base, offset + x + D, dtype=np.int64)).astype(np.int64)

    def per_modulus(d: int) -> APWindowStat:
        return _max_deviation_for_modulus(d, x, offset, zero, base)

    moduli = range(1, D + 1)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            per_d = list(pool.map(per_modulus, moduli))
    else:
        per_d = [per_modulus(d) for d in moduli]
    total = sum((stat.max_dev for stat in per_d), Fraction(0))
    summary = LoDSummary(x, D, total, per_d, theta, offset)
    summary.check()
    debug(f"lod_error_total x={x} theta={theta} D={D}: total={float(total):.3f}")
    return summary


def _alpha_nodes(D: Fraction, alpha_grid: int) -> List[Fraction]:
    """Midpoints of alpha_grid equal cells of [D, 2D]."""
    D = Fraction(D)
    return [D + D * Fraction(2 * j + 1, 2 * alpha_grid) for j in range(alpha_grid)]


def _beta_breakpoints(alpha: Fraction, count: int) -> List[Fraction]:
    """The points of [0, 1) where floor(n alpha + beta), n < count, changes."""
    return sorted({(-n * alpha) % 1 for n in range(count)} | {Fraction(0)})


def beatty_window_extremes(x: int, alpha: Fraction, beta: Fraction) -> APWindowStat:
    """max over 0 <= y <= z <= x of |A(y, z; alpha, beta) - (z - y)/(2 alpha)|."""
    alpha, beta = Fraction(alpha), Fraction(beta)
    members = beatty_values(0, x, alpha, beta)
    P, R = alpha.numerator, alpha.denominator
    hi, arg_hi, lo, arg_lo = _window_extremes(
        members, _tm_zero(members).astype(np.int64), x, 0, 2 * P, R
    )
    return APWindowStat(alpha, beta, Fraction(hi - lo, 2 * P), min(arg_hi, arg_lo), max(arg_hi, arg_lo))


def beatty_lod_total(
    x: int, D: Fraction, alpha_grid: int = 16, budget: Optional[int] = None
) -> Fraction:
    """Midpoint quadrature of the integral over alpha in [D, 2D] of max_beta max_window deviation.

    beta runs over the breakpoints in [0, 1), where the Beatty set is piecewise constant.
    """
    D = Fraction(D)
    if D < 1 or alpha_grid < 1 or x < 1:
        raise InvalidArgumentError("need D >= 1, alpha_grid >= 1 and x >= 1")
    per_beta = x / D + 2
    check_budget("beatty_lod_total", int(alpha_grid * per_beta * per_beta), budget)
    total = Fraction(0)
    for alpha in _alpha_nodes(D, alpha_grid):
        count = math.ceil(x / alpha) + 1
        total += max(
            beatty_window_extremes(x, alpha, beta).max_dev
            for beta in _beta_breakpoints(alpha, count)
        )
    return total * D / alpha_grid


@lru_cache(maxsize=2)
def _sign_spectrum(L: int, real: bool) -> np.ndarray:
    """FFT of g(v) = (-1)^{s(v)} on [0, 2^L), zero on [2^L, 2^{L+1})."""
    g = np.zeros(1 << (L + 1), dtype=np.float64)
    g[: 1 << L] = tm_signs(np.arange(1 << L, dtype=np.int64))
    return np.fft.rfft(g) if real else np.fft.fft(g)


def max_over_shifts(positions: np.ndarray, weights: np.ndarray) -> Union[int, float]:
    """max over b >= 0 of |sum_n w_n (-1)^{s(pos_n + b)}| for nonnegative positions.

    With L one more than the bit length of max(pos), write b = b0 + 2^L b1.
    pos + b0 carries at most once into bit L, so only the parities of s(b1) and
    s(b1 + 1) matter, and b1 in {0, 1, 2, 5} realises all four patterns. The
    correlation over b0 < 2^L is one FFT per parity part; the high half of
    the sign pattern is the low half shifted, i.e. the spectrum times (-1)^k.
    """
    positions = np.asarray(positions, dtype=np.int64)
    weights = np.asarray(weights)
    L = max(1, int(positions.max(initial=0)).bit_length()) + 1
    size = 1 << (L + 1)
    real = not np.iscomplexobj(weights)
    H = np.zeros(size, dtype=weights.dtype if not real else np.float64)
    np.add.at(H, positions, weights)
    spectrum = _sign_spectrum(L, real)
    if real:
        left = np.conj(np.fft.rfft(H))
        twist = np.where(np.arange(spectrum.size) % 2 == 0, 1.0, -1.0)
        low = np.fft.irfft(left * spectrum, n=size)[: 1 << L]
        high = np.fft.irfft(left * spectrum * twist, n=size)[: 1 << L]
        best = np.maximum(np.abs(low + high), np.abs(low - high)).max()
        return int(np.rint(best))
    left = np.conj(np.fft.fft(np.conj(H)))
    twist = np.where(np.arange(size) % 2 == 0, 1.0, -1.0)
    low = np.fft.ifft(left * spectrum)[: 1 << L]
    high = np.fft.ifft(left * spectrum * twist)[: 1 << L]
    return float(np.maximum(np.abs(low + high), np.abs(low - high)).max())


def _phases(N: int, xi: float) -> np.ndarray:
    if xi == 0:
        return np.ones(N, dtype=np.int64)
    return np.exp(2j * np.pi * xi * np.arange(N))


def _capped_max(positions: np.ndarray, weights: np.ndarray, cap: int) -> Union[int, float]:
    best = 0
    chunk = 4096
    for lo in range(0, cap, chunk):
        shifts = np.arange(lo, min(cap, lo + chunk), dtype=np.int64)
        signs = tm_signs(positions[:, None] + shifts[None, :])
        sums = weights @ signs
        best = max(best, np.abs(sums).max())
    return int(best) if not np.iscomplexobj(weights) else float(best)


def _shift_fft_cost(max_position: int) -> int:
    """Element operations of one max_over_shifts call: transform size times passes."""
    L = max(1, max_position.bit_length()) + 1
    return (1 << (L + 1)) * (L + 2)


def s0_discrete(
    N: int,
    d_lo: int,
    d_hi: int,
    xi: float = 0.0,
    a_strategy: str = "structured",
    cap: int = 1 << 12,
    threads: int = 1,
    budget: Optional[int] = None,
) -> S0Result:
    """sum over d_lo <= d < d_hi of max_{a >= 0} |sum_{n<N} e(s(nd + a)/2) e(n xi)|.

    "structured" is the exact maximum over all a >= 0; "capped" searches a < cap
    only and is a lower bound. The structured maximum for d = 2^v o equals the
    one for its odd part o, since the low v bits of a split off as s(a mod 2^v);
    each distinct odd part is evaluated once.
    """
    if N < 1 or not 1 <= d_lo <= d_hi:
        raise InvalidArgumentError(f"need N >= 1 and 1 <= d_lo <= d_hi, got N={N}, d=[{d_lo}, {d_hi})")
    if a_strategy not in ("structured", "capped"):
        raise InvalidArgumentError(f"unknown a-strategy {a_strategy!r}")
    weights = _phases(N, xi)
    ns = np.arange(N, dtype=np.int64)
    moduli = range(d_lo, d_hi)
    if a_strategy == "structured":
        keys = [d >> two_adic_valuation(d) for d in moduli]
        distinct = sorted(set(keys))
        estimate = sum(_shift_fft_cost((N - 1) * o) for o in distinct)
    else:
        keys = list(moduli)
        distinct = keys
        estimate = (d_hi - d_lo) * N * cap
    check_budget("s0_discrete", estimate, budget)

    def inner(d: int):
        if a_strategy == "structured":
            return max_over_shifts(ns * d, weights)
        return _capped_max(ns * d, weights, cap)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            maxima = dict(zip(distinct, pool.map(inner, distinct)))
    else:
        maxima = {d: inner(d) for d in distinct}
    per_d = tuple(maxima[key] for key in keys)
    total = sum(per_d) if xi == 0 else math.fsum(per_d)
    debug(f"s0_discrete N={N} d=[{d_lo},{d_hi}) {a_strategy}: {total}")
    return S0Result(total, a_strategy, xi == 0 and a_strategy == "structured", per_d)


def s0_beatty(
    N: int,
    D: Fraction,
    xi: float = 0.0,
    alpha_grid: int = 8,
    beta_strategy: str = "breakpoints",
    beta_grid: int = 64,
    budget: Optional[int] = None,
) -> S0Result:
    """Midpoint quadrature of the integral over alpha in [D, 2D] of sup_beta |sum_{n<N} e(s(floor(n alpha + beta))/2) e(n xi)|.

    beta = B + f with B a nonnegative integer and f in [0, 1); the sup over B is
    exact (see max_over_shifts). f runs over the breakpoints {-n alpha mod 1},
    which is exact, or over a uniform grid, which is a lower bound.
    """
    D = Fraction(D)
    if N < 1 or D < 1 or alpha_grid < 1:
        raise InvalidArgumentError("need N >= 1, D >= 1 and alpha_grid >= 1")
    if beta_strategy not in ("breakpoints", "grid"):
        raise InvalidArgumentError(f"unknown beta-strategy {beta_strategy!r}")
    per_alpha = N if beta_strategy == "breakpoints" else beta_grid
    check_budget(
        "s0_beatty",
        int(alpha_grid * per_alpha * 16 * N * (2 * D + 1) * math.log2(N * 2 * D + 2)),
        budget,
    )
    weights = _phases(N, xi)
    ns = np.arange(N, dtype=np.int64)
    per_node = []
    for alpha in _alpha_nodes(D, alpha_grid):
        if beta_strategy == "breakpoints":
            offsets = _beta_breakpoints(alpha, N)
        else:
            offsets = [Fraction(j, beta_grid) for j in range(beta_grid)]
        best = 0
        for f in offsets:
            positions, _, _ = floor_linear(ns, alpha, f)
            best = max(best, max_over_shifts(positions.astype(np.int64), weights))
        per_node.append(best)
    if xi == 0:
        value = Fraction(sum(per_node)) * D / alpha_grid
    else:
        value = math.fsum(per_node) * float(D) / alpha_grid
    return S0Result(value, beta_strategy, False, tuple(per_node))


def _ps_exact(p: int, q: int, N: int) -> int:
    zeros = 0
    for n in range(N):
        if not integer_root(n**p, q).bit_count() & 1:
            zeros += 1
    return zeros


def _certified_floor(n: int, c, exact: Optional[Fraction], start_prec: int, max_prec: int) -> Optional[int]:
    """floor(n^c) via mpmath with doubling precision; None if it cannot be certified."""
    if n == 0:
        return 0
    prec = start_prec
    while prec <= max_prec:
        with mpmath.workprec(prec):
            exponent = mpmath.mpf(exact.numerator) / exact.denominator if exact is not None else c
            value = mpmath.power(n, exponent)
            nearest = mpmath.nint(value)
            gap = abs(value - nearest)
            # relative error of a few ulps at this precision
            slack = abs(value) * mpmath.ldexp(1, 8 - prec)
            if gap > mpmath.ldexp(1, -20) and gap > slack:
                return int(mpmath.floor(value))
        prec *= 2
    if exact is not None:
        root = integer_root(n**exact.numerator, exact.denominator)
        if root**exact.denominator == n**exact.numerator:
            return root
    return None


def ps_frequency(
    c: Union[str, Fraction, float],
    N: int,
    method: str = "auto",
    start_prec: int = 64,
    max_prec: int = 1024,
) -> PSExperiment:
    """Frequency of t(floor(n^c)) = 0 over n < N, with certified floors.

    A rational c = p/q (string or Fraction) uses exact integer roots
    floor((n^p)^{1/q}). A float c, or method="real", evaluates n^c in mpmath
    with doubling precision until the value is at least 2^-20 away from an
    integer; indices that stay uncertified are excluded and counted.
    """
    exact: Optional[Fraction] = None
    if isinstance(c, float):
        label = repr(c)
        real_c = mpmath.mpf(c)
    else:
        exact = parse_rational(c) if isinstance(c, str) else Fraction(c)
        label = str(c)
        real_c = None
    value = float(exact) if exact is not None else c
    if not 1 < value < 2:
        raise InvalidArgumentError(f"exponent c must lie in (1, 2), got {label}")
    if N < 1:
        raise InvalidArgumentError(f"N must be positive, got {N}")
    if method not in ("auto", "exact", "real"):
        raise InvalidArgumentError(f"unknown method {method!r}")
    if method == "exact" and exact is None:
        raise InvalidArgumentError("the exact method needs a rational exponent")

    if exact is not None and method != "real":
        zeros = _ps_exact(exact.numerator, exact.denominator, N)
        freq0 = Fraction(zeros, N)
        return PSExperiment(label, N, freq0, abs(freq0 - Fraction(1, 2)), 0, "exact")

    zeros = excluded = 0
    for n in range(N):
        floor_value = _certified_floor(n, real_c, exact, start_prec, max_prec)
        if floor_value is None:
            excluded += 1
            debug(f"ps_frequency: floor of {n}^{label} not certified")
            continue
        if not floor_value.bit_count() & 1:
            zeros += 1
    counted = N - excluded
    freq0 = Fraction(zeros, counted) if counted else Fraction(0)
    return PSExperiment(label, N, freq0, abs(freq0 - Fraction(1, 2)), excluded, "real")


def slope_fit(points: Sequence[Tuple[float, float]]) -> Tuple[float, float, float]:
    """Least-squares line through (log x, log y): (slope, intercept, rms residual)."""
    if len(points) < 2:
        raise InvalidArgumentError(f"slope_fit needs at least 2 points, got {len(points)}")
    xs = np.array([float(x) for x, _ in points])
    ys = np.array([float(y) for _, y in points])
    if np.any(xs <= 0) or np.any(ys <= 0):
        raise InvalidArgumentError("slope_fit needs positive coordinates")
    if np.unique(xs).size < 2:
        raise InvalidArgumentError("slope_fit needs at least two distinct x values")
    log_x, log_y = np.log(xs), np.log(ys)
    slope, intercept = np.polyfit(log_x, log_y, 1)
    residual = float(np.sqrt(np.mean((log_y - (slope * log_x + intercept)) ** 2)))
    return float(slope), float(intercept), residual
