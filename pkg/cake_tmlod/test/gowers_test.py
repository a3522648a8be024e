# SPDX-FileCopyrightText: 2025 Cake AI Technologies, Inc.
#
# SPDX-License-Identifier: Apache-2.0

"""Tests for the Gowers recursion graph, brute-force sums and the contraction check."""

import networkx as nx
import pytest

from cake_tmlod.core.gowers import (
    OffsetFamily,
    build_graph,
    contraction_check,
    decay_rate,
    delta,
    edge_weight,
    export_graph,
    gowers_bruteforce,
    path_weight,
    path_weight_powers,
    recursion_table,
    recursion_value,
    row_maxima,
    staircase_path,
)
from cake_tmlod.core.rationals import DyadicRational
from cake_tmlod.utils.errors import BudgetExceededError, InvalidArgumentError


@pytest.fixture(scope="module")
def graph_m2():
    return build_graph(2)


@pytest.fixture(scope="module")
def graph_m3():
    return build_graph(3)


def test_offset_family_validation():
    assert str(OffsetFamily.zero(2)) == "(0,0,0,0)"
    with pytest.raises(InvalidArgumentError):
        OffsetFamily(1, (0, 0))
    with pytest.raises(InvalidArgumentError):
        OffsetFamily(2, (0, 0, 0))


def test_delta_example():
    assert delta(OffsetFamily.zero(2), (1, 1, 1)) == OffsetFamily(2, (0, 1, 1, 1))
    assert delta(OffsetFamily.zero(2), (0, 0, 0)).is_zero()
    with pytest.raises(InvalidArgumentError):
        delta(OffsetFamily.zero(2), (1, 1))


def test_first_level_sum_is_a_sign(graph_m2):
    for vertex in graph_m2.vertices:
        expected = -1 if vertex.weight % 2 else 1
        assert gowers_bruteforce(2, 1, vertex) == expected


@pytest.mark.parametrize("rho", range(8))
def test_recursion_matches_bruteforce_m2(graph_m2, rho):
    table = recursion_table(graph_m2, rho)
    for vertex in graph_m2.vertices:
        assert table[vertex] == gowers_bruteforce(2, rho, vertex)


@pytest.mark.parametrize("rho", range(5))
def test_recursion_matches_bruteforce_m3(graph_m3, rho):
    table = recursion_table(graph_m3, rho)
    for vertex in graph_m3.vertices:
        assert table[vertex] == gowers_bruteforce(3, rho, vertex)


def test_bruteforce_threads_agree():
    family = OffsetFamily(2, (0, 1, 1, 2))
    assert gowers_bruteforce(2, 7, family, threads=4) == gowers_bruteforce(2, 7, family)


def test_graph_structure(graph_m2, graph_m3):
    for graph in (graph_m2, graph_m3):
        m = graph.m
        assert graph.vertices == sorted(graph.vertices)
        for a in graph.vertices:
            assert a.height < m + 1
            assert sum(abs(graph.weight(a, b)) for b in graph.rows[a]) == 1
        digraph = nx.DiGraph()
        digraph.add_edges_from(graph.weights)
        assert nx.is_strongly_connected(digraph)
        assert graph.weight(graph.zero, graph.zero) == DyadicRational(m + 2, m + 1)


def test_trivial_loop_weight_m2(graph_m2):
    assert graph_m2.weight(graph_m2.zero, graph_m2.zero) == DyadicRational(1, 1)
    assert edge_weight(graph_m2.zero, graph_m2.zero) == DyadicRational(1, 1)


def test_recursion_value_rejects_unknown_vertex(graph_m2):
    outside = OffsetFamily(2, (5, 5, 5, 5))
    with pytest.raises(InvalidArgumentError):
        recursion_value(2, 3, outside, graph_m2)
    assert recursion_value(2, 0, graph_m2.zero, graph_m2) == 1


@pytest.mark.parametrize("m", [2, 3])
def test_staircase_path(m):
    graph = build_graph(m)
    path = staircase_path(m)
    assert path[0].is_zero() and path[-1].is_zero()
    assert len(path) == m + 2
    edges = [graph.weight(a, b) for a, b in zip(path, path[1:])]
    assert all(w > 0 for w in edges[:m])
    assert edges[m] < 0
    assert path_weight(graph, path) < 0


@pytest.mark.parametrize("m", [2, 3])
def test_contraction_and_decay(m):
    graph = build_graph(m)
    result = contraction_check(graph, 20)
    assert result.k_star is not None and result.k_star <= 20
    assert 0 < result.c_star < 1
    assert len(result.row_maxima) == result.k_star
    assert all(value == 1 for value in result.row_maxima[:-1])
    assert decay_rate(graph, result.k_star, result.c_star) > 0


def test_decay_rate_rejects_non_contraction(graph_m2):
    with pytest.raises(InvalidArgumentError):
        decay_rate(graph_m2, 1, DyadicRational(1))


def test_path_weight_powers(graph_m2):
    assert path_weight_powers(graph_m2, 1) == graph_m2.weights
    two_step = path_weight_powers(graph_m2, 2)
    zero = graph_m2.zero
    expected = sum(
        (graph_m2.weight(zero, c) * graph_m2.weight(c, zero) for c in graph_m2.vertices),
        DyadicRational(0),
    )
    assert two_step.get((zero, zero), DyadicRational(0)) == expected


def test_export_graph_is_deterministic(graph_m2):
    lines = export_graph(graph_m2)
    assert lines[0].startswith("(0,0,0,0) -> ")
    assert lines == export_graph(build_graph(2))
    assert len(lines) == graph_m2.edge_count()


def test_budget_refuses_large_enumeration():
    with pytest.raises(BudgetExceededError):
        gowers_bruteforce(3, 8, OffsetFamily.zero(3), budget=1 << 20)


@pytest.mark.parametrize("m, rho_max", [(2, 7), (3, 4)])
def test_recursion_values_are_bounded_by_one(m, rho_max):
    graph = build_graph(m)
    for rho in range(rho_max + 1):
        assert all(abs(value) <= 1 for value in recursion_table(graph, rho).values())


def test_path_weight_powers_compose(graph_m2):
    zero = graph_m2.zero
    one = path_weight_powers(graph_m2, 1)
    two = path_weight_powers(graph_m2, 2)
    three = path_weight_powers(graph_m2, 3)
    nothing = DyadicRational(0)
    for b in graph_m2.vertices:
        left = sum(
            (one.get((zero, c), nothing) * two.get((c, b), nothing) for c in graph_m2.vertices),
            nothing,
        )
        right = sum(
            (two.get((zero, c), nothing) * one.get((c, b), nothing) for c in graph_m2.vertices),
            nothing,
        )
        assert three.get((zero, b), nothing) == left == right


@pytest.mark.parametrize("m", [2, 3])
def test_row_sums_never_exceed_one(m):
    graph = build_graph(m)
    for k in range(1, 5):
        powers = path_weight_powers(graph, k)
        sums = {}
        for (a, _), value in powers.items():
            sums[a] = sums.get(a, DyadicRational(0)) + abs(value)
        assert all(total <= 1 for total in sums.values())


@pytest.mark.parametrize("m", [2, 3])
def test_row_maxima_do_not_increase(m):
    graph = build_graph(m)
    k_star = contraction_check(graph, 20).k_star
    maxima = list(row_maxima(graph, 2 * k_star))
    assert len(maxima) == 2 * k_star
    assert all(later <= earlier for earlier, later in zip(maxima, maxima[1:]))
    assert maxima[k_star - 1] < 1


def test_row_maxima_rejects_empty_range(graph_m2):
    with pytest.raises(InvalidArgumentError):
        next(row_maxima(graph_m2, 0))


def test_decay_rate_of_a_halving_contraction(graph_m2):
    assert decay_rate(graph_m2, 1, DyadicRational(1, 1), rho_max=0) == 1.0
