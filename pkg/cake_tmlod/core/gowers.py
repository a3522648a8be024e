# SPDX-FileCopyrightText: 2025 Cake AI Technologies, Inc.
#
# SPDX-License-Identifier: Apache-2.0

"""Gowers uniformity sums of the Thue–Morse sequence and their recursion graph.

A_rho(a) is the normalised sum over n, r_1..r_m < 2^rho of
(-1)^{sum_eps s_rho(n + eps.r + a_eps)}. It satisfies

    A_{rho+1}(a) = (-1)^{|a|} / 2^{m+1} * sum_{e in {0,1}^{m+1}} A_rho(delta(a, e))

with delta(a, e)_eps = floor((a_eps + e_0 + sum_i eps_i e_i) / 2). The families
reachable from 0 form a finite strongly connected weighted digraph; a k with
max_a sum_b |w_k(a, b)| < 1 gives exponential decay of A_rho(0).

Everything in this module is exact: values are DyadicRational, and integer
numerators over a known power of two are used internally.
"""

import itertools
import math
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np

from cake_tmlod.core.rationals import DyadicRational
from cake_tmlod.utils.console import debug
from cake_tmlod.utils.errors import (
    InvalidArgumentError,
    InvariantViolation,
    check_budget,
)

# Row of integer edge multiplicities: target -> #{e : delta(a, e) = target}
Row = Dict["OffsetFamily", int]


@dataclass(frozen=True, order=True)
class OffsetFamily:
    """Integer family (a_eps) indexed by eps in {0,1}^m; bit i-1 of the index is eps_i."""

    m: int
    entries: Tuple[int, ...]

    def __post_init__(self):
        if self.m < 2:
            raise InvalidArgumentError(f"m must be at least 2, got {self.m}")
        if len(self.entries) != 1 << self.m:
            raise InvalidArgumentError(
                f"an offset family for m={self.m} has {1 << self.m} entries, got {len(self.entries)}"
            )

    @classmethod
    def zero(cls, m: int) -> "OffsetFamily":
        return cls(m, (0,) * (1 << m))

    @classmethod
    def from_predicate(cls, m: int, predicate) -> "OffsetFamily":
        """Family with a_eps = predicate(eps) for eps given as a tuple (eps_1, ..., eps_m)."""
        return cls(m, tuple(int(predicate(_eps_bits(index, m))) for index in range(1 << m)))

    @property
    def weight(self) -> int:
        """|a| = sum of the entries."""
        return sum(self.entries)

    @property
    def height(self) -> int:
        return max(abs(v) for v in self.entries)

    def is_zero(self) -> bool:
        return not any(self.entries)

    def __str__(self) -> str:
        return "(" + ",".join(str(v) for v in self.entries) + ")"


def _eps_bits(index: int, m: int) -> Tuple[int, ...]:
    return tuple((index >> i) & 1 for i in range(m))


def delta(a: OffsetFamily, e: Sequence[int]) -> OffsetFamily:
    """b_eps = floor((a_eps + e_0 + sum_i eps_i e_i) / 2)."""
    if len(e) != a.m + 1 or any(bit not in (0, 1) for bit in e):
        raise InvalidArgumentError(f"e must be a 0/1 vector of length {a.m + 1}, got {tuple(e)}")
    entries = []
    for index, value in enumerate(a.entries):
        carry = e[0] + sum(e[i + 1] for i in range(a.m) if (index >> i) & 1)
        entries.append((value + carry) // 2)
    return OffsetFamily(a.m, tuple(entries))


def _moves(m: int) -> Iterable[Tuple[int, ...]]:
    return itertools.product((0, 1), repeat=m + 1)


def _row(a: OffsetFamily) -> Row:
    row: Row = {}
    for e in _moves(a.m):
        b = delta(a, e)
        row[b] = row.get(b, 0) + 1
    return row


def _sign(a: OffsetFamily) -> int:
    return -1 if a.weight & 1 else 1


def edge_weight(a: OffsetFamily, b: OffsetFamily) -> DyadicRational:
    """w(a, b) = (-1)^{|a|} / 2^{m+1} * #{e : delta(a, e) = b}."""
    if a.m != b.m:
        raise InvalidArgumentError(f"families have different m: {a.m} and {b.m}")
    count = _row(a).get(b, 0)
    return DyadicRational(_sign(a) * count, a.m + 1)


@dataclass
class GowersGraph:
    """The weighted digraph on offset families reachable from 0.

    Weights are kept as integer multiplicities; w(a, b) = sign(a) * rows[a][b] / 2^{m+1}.
    """

    m: int
    vertices: List[OffsetFamily]
    rows: Dict[OffsetFamily, Row]
    index: Dict[OffsetFamily, int] = field(default_factory=dict)

    def __post_init__(self):
        if not self.index:
            self.index = {v: i for i, v in enumerate(self.vertices)}

    def __contains__(self, family: OffsetFamily) -> bool:
        return family in self.index

    def __len__(self) -> int:
        return len(self.vertices)

    @property
    def zero(self) -> OffsetFamily:
        return OffsetFamily.zero(self.m)

    def weight(self, a: OffsetFamily, b: OffsetFamily) -> DyadicRational:
        if a not in self.index:
            raise InvalidArgumentError(f"{a} is not a vertex of the graph")
        return DyadicRational(_sign(a) * self.rows[a].get(b, 0), self.m + 1)

    @property
    def weights(self) -> Dict[Tuple[OffsetFamily, OffsetFamily], DyadicRational]:
        return {
            (a, b): DyadicRational(_sign(a) * count, self.m + 1)
            for a in self.vertices
            for b, count in sorted(self.rows[a].items())
        }

    def edge_count(self) -> int:
        return sum(len(row) for row in self.rows.values())


def build_graph(m: int, budget: Optional[int] = None) -> GowersGraph:
    """Breadth-first closure of {0} under all moves delta(., e), with invariant checks."""
    if m < 2:
        raise InvalidArgumentError(f"m must be at least 2, got {m}")
    # entries stay in [0, m], so (m+1)^{2^m} bounds the vertex count
    check_budget("build_graph", min((m + 1) ** (1 << m), 1 << 40) * (1 << (m + 1)), budget)

    zero = OffsetFamily.zero(m)
    rows: Dict[OffsetFamily, Row] = {}
    queue = deque([zero])
    seen = {zero}
    while queue:
        a = queue.popleft()
        rows[a] = _row(a)
        for b in rows[a]:
            if b not in seen:
                seen.add(b)
                queue.append(b)

    vertices = sorted(rows)
    graph = GowersGraph(m, vertices, rows)
    _check_graph(graph)
    debug(f"build_graph m={m}: {len(vertices)} vertices, {graph.edge_count()} edges")
    return graph


def _check_graph(graph: GowersGraph) -> None:
    m = graph.m
    for a in graph.vertices:
        if a.height >= m + 1:
            raise InvariantViolation(f"vertex {a} violates max|a_eps| < m+1")
        if sum(graph.rows[a].values()) != 1 << (m + 1):
            raise InvariantViolation(f"absolute row sum of {a} differs from 1")

    digraph = nx.DiGraph()
    digraph.add_nodes_from(graph.vertices)
    digraph.add_edges_from((a, b) for a in graph.vertices for b in graph.rows[a])
    if not nx.is_strongly_connected(digraph):
        raise InvariantViolation(f"graph for m={m} is not strongly connected")

    stay = (0,) * (m + 1)
    for a in graph.vertices:
        current, steps = a, 0
        while not current.is_zero():
            current = delta(current, stay)
            steps += 1
            if steps > 2 * (m + 2):
                raise InvariantViolation(f"zero moves from {a} do not reach 0")


def gowers_bruteforce(
    m: int,
    rho: int,
    a: OffsetFamily,
    threads: int = 1,
    budget: Optional[int] = None,
) -> DyadicRational:
    """A_rho(a) by direct summation over all 2^{(m+1) rho} terms."""
    if a.m != m:
        raise InvalidArgumentError(f"family has m={a.m}, expected {m}")
    if rho < 0:
        raise InvalidArgumentError(f"rho must be nonnegative, got {rho}")
    bits = (m + 1) * rho
    total_terms = 1 << bits
    check_budget("gowers_bruteforce", total_terms * (1 << m), budget)
    mask = (1 << rho) - 1
    offsets = np.array(a.entries, dtype=np.int64)
    corners = [_eps_bits(index, m) for index in range(1 << m)]
    step = 1 << min(bits, 20)

    def partial(start: int) -> int:
        t = np.arange(start, min(start + step, total_terms), dtype=np.int64)
        n = t & mask
        r = [(t >> (rho * (i + 1))) & mask for i in range(m)]
        parity = np.zeros(t.shape, dtype=np.int64)
        for index, eps in enumerate(corners):
            value = n + offsets[index]
            for i in range(m):
                if eps[i]:
                    value = value + r[i]
            parity ^= np.bitwise_count((value & mask).astype(np.uint64)).astype(np.int64) & 1
        return int(t.size - 2 * int(parity.sum()))

    starts = range(0, total_terms, step)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            total = sum(pool.map(partial, starts))
    else:
        total = sum(map(partial, starts))
    return DyadicRational(total, bits)


def _numerator_table(graph: GowersGraph, rho: int) -> Dict[OffsetFamily, int]:
    """N_rho(v) with A_rho(v) = N_rho(v) / 2^{rho (m+1)}."""
    values = {v: 1 for v in graph.vertices}
    for _ in range(rho):
        values = {
            v: _sign(v) * sum(count * values[b] for b, count in graph.rows[v].items())
            for v in graph.vertices
        }
    return values


def recursion_table(graph: GowersGraph, rho: int) -> Dict[OffsetFamily, DyadicRational]:
    """A_rho on every vertex, by rho applications of the recursion from A_0 = 1."""
    if rho < 0:
        raise InvalidArgumentError(f"rho must be nonnegative, got {rho}")
    exponent = rho * (graph.m + 1)
    return {v: DyadicRational(n, exponent) for v, n in _numerator_table(graph, rho).items()}


def recursion_value(m: int, rho: int, a: OffsetFamily, graph: GowersGraph) -> DyadicRational:
    """A_rho(a) from the recursion; a must be a vertex of the graph."""
    if graph.m != m or a not in graph:
        raise InvalidArgumentError(f"{a} is not a vertex of the graph for m={m}")
    return recursion_table(graph, rho)[a]


def _power_rows(graph: GowersGraph, k: int) -> Iterable[Dict[OffsetFamily, Dict[OffsetFamily, int]]]:
    """Integer numerators W_1, W_2, ..., W_k with w_j = W_j / 2^{j (m+1)}."""
    signed = {
        a: {b: _sign(a) * count for b, count in graph.rows[a].items()} for a in graph.vertices
    }
    current = signed
    yield current
    for _ in range(k - 1):
        following = {}
        for a, row in current.items():
            acc: Dict[OffsetFamily, int] = {}
            for c, value in row.items():
                for b, step in signed[c].items():
                    acc[b] = acc.get(b, 0) + value * step
            following[a] = {b: v for b, v in acc.items() if v}
        current = following
        yield current


def path_weight_powers(graph: GowersGraph, k: int) -> Dict[Tuple[OffsetFamily, OffsetFamily], DyadicRational]:
    """w_k(a, b): the total weight of paths of length k, nonzero entries only."""
    if k < 1:
        raise InvalidArgumentError(f"k must be positive, got {k}")
    *_, last = _power_rows(graph, k)
    exponent = k * (graph.m + 1)
    return {
        (a, b): DyadicRational(value, exponent)
        for a in graph.vertices
        for b, value in sorted(last[a].items())
    }


@dataclass(frozen=True)
class ContractionResult:
    k_star: Optional[int]
    c_star: DyadicRational
    row_maxima: Tuple[DyadicRational, ...]


def row_maxima(graph: GowersGraph, k_max: int) -> Iterator[DyadicRational]:
    """max_a sum_b |w_k(a, b)| for k = 1, 2, ..., k_max, lazily."""
    if k_max < 1:
        raise InvalidArgumentError(f"k_max must be positive, got {k_max}")
    for k, rows in enumerate(_power_rows(graph, k_max), start=1):
        largest = max(sum(abs(v) for v in row.values()) for row in rows.values())
        yield DyadicRational(largest, k * (graph.m + 1))


def contraction_check(graph: GowersGraph, k_max: int = 20) -> ContractionResult:
    """Smallest k <= k_max with max_a sum_b |w_k(a, b)| < 1, and that maximum."""
    maxima: List[DyadicRational] = []
    for k, value in enumerate(row_maxima(graph, k_max), start=1):
        if value > 1:
            raise InvariantViolation(f"row absolute sum of w_{k} exceeds 1")
        maxima.append(value)
        if value < 1:
            debug(f"contraction m={graph.m}: k*={k}, c*={value}")
            return ContractionResult(k, value, tuple(maxima))
    return ContractionResult(None, maxima[-1], tuple(maxima))


def decay_rate(
    graph: GowersGraph,
    k_star: int,
    c_star: DyadicRational,
    rho_max: Optional[int] = None,
) -> float:
    """eta = -log2(c*) / k*, after checking |A_rho(0)| <= c*^{floor(rho/k*)} for rho <= rho_max."""
    if not c_star < 1:
        raise InvalidArgumentError(f"c* must be below 1, got {c_star}")
    if k_star < 1:
        raise InvalidArgumentError(f"k* must be positive, got {k_star}")
    if c_star.numerator <= 0:
        raise InvalidArgumentError(f"c* must be positive, got {c_star}")
    eta = -(math.log2(c_star.numerator) - c_star.exponent) / k_star
    rho_max = 3 * k_star if rho_max is None else rho_max
    zero = graph.zero
    for rho in range(rho_max + 1):
        value = abs(recursion_table(graph, rho)[zero])
        if value > c_star ** (rho // k_star):
            raise InvariantViolation(
                f"|A_{rho}(0)| = {value} exceeds c*^{rho // k_star} for c* = {c_star}"
            )
    return eta


def staircase_path(m: int) -> List[OffsetFamily]:
    """a^(0), ..., a^(m+1): a^(0) = a^(m+1) = 0 and a^(j)_eps = [eps_1 = ... = eps_j = 1]."""
    path = [OffsetFamily.zero(m)]
    for j in range(1, m + 1):
        path.append(OffsetFamily.from_predicate(m, lambda eps, j=j: all(eps[:j])))
    path.append(OffsetFamily.zero(m))
    return path


def path_weight(graph: GowersGraph, path: Sequence[OffsetFamily]) -> DyadicRational:
    """Product of the edge weights along a vertex path (0 if an edge is missing)."""
    weight = DyadicRational(1)
    for a, b in zip(path, path[1:]):
        weight = weight * graph.weight(a, b)
    return weight


def export_graph(graph: GowersGraph) -> List[str]:
    """Deterministic adjacency listing, one edge per line as 'a -> b : num/2^k'."""
    return [f"{a} -> {b} : {w}" for (a, b), w in graph.weights.items()]
