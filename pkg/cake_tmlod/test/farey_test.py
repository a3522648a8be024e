# SPDX-FileCopyrightText: 2025 Cake AI Technologies, Inc.
#
# SPDX-License-Identifier: Apache-2.0

"""Tests for Farey dissections, the construction and the exceptions census."""

from fractions import Fraction

import numpy as np
import pytest

from cake_tmlod.core.farey import (
    build_farey_construction,
    check_gamma_conditions,
    exceptions_census,
    farey_approx,
    farey_approx_dyadic,
    farey_bracket,
    farey_neighbors,
    farey_sequence,
    mediant,
    q_divisibility_measure,
    spaced_points_divisibility_count,
)
from cake_tmlod.utils.errors import BudgetExceededError, InvalidArgumentError


def test_mediant_lies_between():
    assert mediant(Fraction(1, 3), Fraction(1, 2)) == Fraction(2, 5)
    with pytest.raises(InvalidArgumentError):
        mediant(Fraction(1, 2), Fraction(1, 3))


def test_farey_sequence_and_neighbour_identities():
    assert farey_sequence(3) == [(0, 1), (1, 3), (1, 2), (2, 3), (1, 1)]
    for n in range(1, 25):
        terms = farey_sequence(n)
        for (a, b), (c, d) in zip(terms, terms[1:]):
            assert b * c - a * d == 1
            assert b + d > n


def test_farey_neighbors():
    assert farey_neighbors(Fraction(1, 3), 5) == (Fraction(1, 4), Fraction(2, 5))
    assert farey_neighbors(Fraction(0), 3) == (Fraction(-1, 3), Fraction(1, 3))
    with pytest.raises(InvalidArgumentError):
        farey_neighbors(Fraction(1, 7), 5)


def test_farey_approx_examples():
    assert (farey_approx(Fraction(2, 5), 2).p, farey_approx(Fraction(2, 5), 2).q) == (1, 2)
    assert farey_approx(Fraction(3, 2), 2).as_fraction() == Fraction(3, 2)
    assert farey_bracket(Fraction(3, 2), 2) == (Fraction(3, 2), Fraction(2))
    # -1/3 is the mediant of -1/2 and 0; ties go to the right neighbour
    assert farey_approx(Fraction(-1, 3), 2).as_fraction() == Fraction(0)
    with pytest.raises(InvalidArgumentError):
        farey_approx(Fraction(1, 2), 0)


def test_farey_approx_exhaustive_dyadic_grid():
    """|q alpha - p| < 1/Q and q <= Q for alpha = j/2^12 and every Q <= 64."""
    for Q in range(1, 65):
        for j in range(1 << 12):
            alpha = Fraction(j, 1 << 12)
            result = farey_approx(alpha, Q)
            assert 1 <= result.q <= Q
            assert abs(result.q * alpha - result.p) * Q < 1


def test_farey_approx_translates_by_integers():
    for Q in range(1, 65):
        for j in range(1 << 10):
            alpha = Fraction(j, 1 << 10)
            base = farey_approx(alpha, Q)
            shifted = farey_approx(alpha + 1, Q)
            assert (shifted.p, shifted.q) == (base.p + base.q, base.q)


def test_farey_approx_lies_in_its_own_interval():
    for Q in range(1, 33):
        for j in range(1 << 8):
            alpha = Fraction(j, 1 << 8)
            chosen = farey_approx(alpha, Q).as_fraction()
            left, right = farey_neighbors(chosen, Q)
            assert mediant(left, chosen) <= alpha < mediant(chosen, right)


def test_farey_interval_lengths():
    """The interval of F_Q around p/q is shorter than 2/(Q q)."""
    for Q in range(1, 41):
        for p, q in farey_sequence(Q):
            x = Fraction(p, q)
            left, right = farey_neighbors(x, Q)
            assert mediant(x, right) - mediant(left, x) < Fraction(2, Q * q)


@pytest.mark.parametrize("k, Q", [(4, 20), (10, 50), (14, 7)])
def test_vectorised_dissection_matches_scalar(k, Q):
    numerators = np.arange(0, 3 << k, 5, dtype=np.int64)
    p, q = farey_approx_dyadic(numerators, k, Q)
    for n, p_n, q_n in zip(numerators.tolist(), p.tolist(), q.tolist()):
        scalar = farey_approx(Fraction(n, 1 << k), Q)
        assert Fraction(p_n, q_n) == scalar.as_fraction()
        assert q_n == scalar.q


def test_construction_small_example():
    result = build_farey_construction(Fraction(5), m=2, mu=1, sigma=1)
    assert result.K == (8, 3)
    assert result.M == (10, 2)
    assert result.p_frak == (5, 2)
    assert result.errors == (Fraction(0), Fraction(1, 4))


def test_construction_bounds_on_random_alphas():
    rng = np.random.default_rng(7)
    for _ in range(50):
        alpha = Fraction(int(rng.integers(0, 1 << 20)), 1 << int(rng.integers(0, 12)))
        result = build_farey_construction(alpha, m=3, mu=4, sigma=1)
        assert all(error < Fraction(1, 2) for error in result.errors)
        assert all(k >= 1 for k in result.K)


def test_q_divisibility_measure():
    assert q_divisibility_measure(1, 0) == 1
    assert q_divisibility_measure(2, 1, grid=4096) == Fraction(1, 3)
    assert q_divisibility_measure(5, 0, grid=64) == 1
    measure = q_divisibility_measure(64, 2, grid=4096)
    assert 0 < measure < Fraction(1, 2)


def test_spaced_points_count():
    points = [Fraction(0), Fraction(1, 2)]
    assert spaced_points_divisibility_count(points, Fraction(1, 2), 2, 1) == 1
    with pytest.raises(InvalidArgumentError):
        spaced_points_divisibility_count([Fraction(0), Fraction(1, 8)], Fraction(1, 4), 2, 1)


def test_gamma_conditions_are_named():
    check_gamma_conditions(13, 4, 1, 1, 2)
    with pytest.raises(InvalidArgumentError, match="mu >= 4"):
        check_gamma_conditions(13, 3, 1, 1, 2)
    with pytest.raises(InvalidArgumentError, match="gamma >= 1"):
        check_gamma_conditions(13, 4, 1, 0, 2)


def test_exceptions_census_matches_scalar_construction():
    lam, mu, sigma, gamma, m = 13, 4, 1, 1, 2
    result = exceptions_census(lam, mu, sigma, gamma, m)
    modulus = 1 << (3 * gamma)
    expected = sum(
        1
        for alpha in range(1 << lam)
        if any(
            p % modulus == 0
            for p in build_farey_construction(Fraction(alpha), m, mu, sigma).p_frak
        )
    )
    assert result.count == expected
    assert result.total == 1 << lam
    assert result.ratio == Fraction(expected * 2**gamma, 2**lam)


def test_exceptions_census_threads_agree():
    single = exceptions_census(13, 4, 1, 1, 2, chunk_bits=10)
    pooled = exceptions_census(13, 4, 1, 1, 2, threads=4, chunk_bits=10)
    assert single == pooled


def test_exceptions_census_continuous_mode():
    result = exceptions_census(13, 4, 1, 1, 2, mode="continuous", grid_bits=1)
    assert result.grid_bits == 1
    assert result.total == 1 << 14
    assert result.measure == Fraction(result.count, 2)


def test_exceptions_census_respects_budget():
    with pytest.raises(BudgetExceededError):
        exceptions_census(13, 4, 1, 1, 2, budget=1000)
