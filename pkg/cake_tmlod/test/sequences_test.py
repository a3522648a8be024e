# SPDX-FileCopyrightText: 2025 Cake AI Technologies, Inc.
#
# SPDX-License-Identifier: Apache-2.0

"""Tests for discrepancy, box counts, carries and the van der Corput check."""

from fractions import Fraction

import numpy as np
import pytest

from cake_tmlod.core.digitcore import sum_of_digits
from cake_tmlod.core.sequences import (
    BoxQuery,
    box_count,
    carry_census,
    discrepancy,
    discrepancy_bruteforce,
    floor_linear,
    mean_discrepancy_bound,
    mean_discrepancy_sum,
    point_set,
    vdc_check,
)
from cake_tmlod.utils.errors import InvalidArgumentError


def test_floor_linear_is_exact():
    floors, remainders, den = floor_linear(np.arange(5), Fraction(3, 2), Fraction(1, 2))
    assert floors.tolist() == [0, 2, 3, 5, 6]
    assert remainders.tolist() == [2, 0, 2, 0, 2]
    assert den == 4


def test_floor_linear_falls_back_to_python_integers():
    alpha = Fraction(2**61 + 1, 3)
    floors, remainders, den = floor_linear(np.arange(4), alpha, Fraction(0))
    for n in range(4):
        assert Fraction(int(floors[n])) + Fraction(int(remainders[n]), den) == n * alpha


def test_point_set():
    assert point_set(Fraction(1, 3), 4).points == (0, Fraction(1, 3), Fraction(2, 3), 0)
    assert point_set(Fraction(7, 2), 2).points == (0, Fraction(1, 2))
    with pytest.raises(InvalidArgumentError):
        point_set(Fraction(1, 3), 0)


def test_discrepancy_examples():
    assert discrepancy(Fraction(1, 2), 2) == Fraction(1, 2)
    assert discrepancy(Fraction(1, 3), 4) == Fraction(1, 2)
    assert discrepancy(Fraction(1, 2), 4) == Fraction(1, 2)
    for N in range(1, 20):
        assert discrepancy(Fraction(1, N), N) == Fraction(1, N)


def test_discrepancy_matches_bruteforce_oracle():
    rng = np.random.default_rng(11)
    for _ in range(100):
        q = int(rng.integers(1, 50))
        alpha = Fraction(int(rng.integers(0, 4 * q)), q)
        N = int(rng.integers(1, 201))
        assert discrepancy(alpha, N) == discrepancy_bruteforce(alpha, N)


def test_discrepancy_is_invariant_under_translation_and_reflection():
    rng = np.random.default_rng(12)
    for _ in range(200):
        q = int(rng.integers(1, 400))
        alpha = Fraction(int(rng.integers(0, q + 1)), q)
        N = int(rng.integers(1, 300))
        value = discrepancy(alpha, N)
        assert Fraction(1, N) <= value <= 1
        assert discrepancy(alpha + 1, N) == value
        assert discrepancy(1 - alpha, N) == value


def test_discrepancy_lies_in_unit_interval():
    for alpha in (Fraction(0), Fraction(5, 7), Fraction(355, 113)):
        for N in (1, 10, 100):
            assert 0 < discrepancy(alpha, N) <= 1


def test_box_count_even_integers():
    result = box_count(BoxQuery(0, 8, Fraction(1, 2), Fraction(0), t=0, T=2, k=0, K=1))
    assert result.count == 4
    assert result.predicted == 4
    assert result.residual == 0


def test_box_count_matches_direct_loop():
    alpha, beta = Fraction(7, 5), Fraction(1, 3)
    query = BoxQuery(3, 90, alpha, beta, t=1, T=3, k=2, K=4)
    expected = 0
    for n in range(3, 90):
        value = n * alpha + beta
        whole = value.numerator // value.denominator
        if Fraction(1, 3) <= value - whole < Fraction(2, 3) and whole % 4 == 2:
            expected += 1
    result = box_count(query)
    assert result.count == expected
    assert result.residual == abs(expected - Fraction(87, 12))


def test_box_query_validation():
    with pytest.raises(InvalidArgumentError):
        BoxQuery(5, 4, Fraction(1), Fraction(0), 0, 1, 0, 1)
    with pytest.raises(InvalidArgumentError):
        BoxQuery(0, 4, Fraction(1), Fraction(0), 2, 2, 0, 1)
    with pytest.raises(InvalidArgumentError):
        BoxQuery(0, 4, Fraction(1), Fraction(0), 0, 1, 3, 3)


def test_carry_census_small_example():
    result = carry_census(0, 8, 1, Fraction(1), Fraction(0), 1)
    assert result.count == 3
    assert result.bound == 6


def test_carry_census_grid():
    for alpha in (Fraction(1, 3), Fraction(5, 2), Fraction(17, 7)):
        for beta in (Fraction(0), Fraction(2, 5)):
            for r in (1, 3, 8):
                for lam in (0, 2, 5):
                    result = carry_census(0, 120, r, alpha, beta, lam)
                    expected = 0
                    for n in range(120):
                        a = int(n * alpha + beta)
                        b = int((n + r) * alpha + beta)
                        if sum_of_digits(a >> lam) != sum_of_digits(b >> lam):
                            expected += 1
                    assert result.count == expected
                    assert result.count <= result.bound


def test_carry_census_bound_on_random_parameters():
    rng = np.random.default_rng(13)
    for _ in range(50):
        alpha = Fraction(int(rng.integers(1, 257)), int(rng.integers(1, 33)))
        beta = Fraction(int(rng.integers(0, 65)), int(rng.integers(1, 17)))
        for r in range(9):
            for lam in range(11):
                for N in (1, 17, 100, 257, 512):
                    result = carry_census(0, N, r, alpha, beta, lam)
                    assert result.count <= result.bound
                    if r == 0:
                        assert result.count == 0


def test_carry_census_rejects_bad_arguments():
    with pytest.raises(InvalidArgumentError):
        carry_census(0, 8, 1, Fraction(0), Fraction(0), 1)
    with pytest.raises(InvalidArgumentError):
        carry_census(0, 8, -1, Fraction(1), Fraction(0), 1)


def test_vdc_exact_example():
    result = vdc_check([1, 1, 1, 1], K=1, R=2)
    assert result.lhs == 16
    assert result.rhs == Fraction(35, 2)
    assert result.ok


def test_vdc_holds_on_random_sequences():
    rng = np.random.default_rng(20240521)
    for _ in range(10_000):
        N = int(rng.integers(1, 65))
        z = rng.uniform(-1, 1, N) + 1j * rng.uniform(-1, 1, N)
        K = int(rng.integers(1, 9))
        R = int(rng.integers(1, 9))
        assert vdc_check(z.tolist(), K, R).ok


def test_vdc_holds_exactly_on_random_rationals():
    rng = np.random.default_rng(14)
    for _ in range(500):
        N = int(rng.integers(1, 33))
        numerators, denominators = rng.integers(-9, 10, N), rng.integers(1, 5, N)
        z = [Fraction(int(p), int(q)) for p, q in zip(numerators, denominators)]
        for K in range(1, 9):
            result = vdc_check(z, K, int(rng.integers(1, 9)))
            assert result.ok
            assert isinstance(result.lhs, Fraction)


def test_vdc_rejects_bad_parameters():
    with pytest.raises(InvalidArgumentError):
        vdc_check([1, 2], K=0, R=1)


def test_mean_discrepancy():
    assert mean_discrepancy_sum(0, 1) == 1
    total = mean_discrepancy_sum(3, 16)
    assert total == sum(discrepancy(Fraction(d, 8), 16) for d in range(8))
    assert float(total) <= mean_discrepancy_bound(3, 16)
    estimate = mean_discrepancy_sum(0, 32, mode="continuous", grid=64)
    assert 0 < estimate <= 1
    with pytest.raises(InvalidArgumentError):
        mean_discrepancy_sum(2, 4, mode="sideways")
