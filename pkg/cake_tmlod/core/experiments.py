# SPDX-FileCopyrightText: 2025 Cake AI Technologies, Inc.
#
# SPDX-License-Identifier: Apache-2.0

"""Registry of sweepable experiments.

Each experiment maps string parameters to one statistic. Records carry every
parameter (defaults included), so any row can be replayed on its own.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Dict, Optional

import numpy as np

from cake_tmlod.core import farey, gowers, lod, sequences
from cake_tmlod.core.digitcore import integer_root, tm_balance
from cake_tmlod.core.rationals import parse_rational
from cake_tmlod.utils.config import parse_int
from cake_tmlod.utils.errors import InvalidArgumentError
from cake_tmlod.utils.records import excluded_status


def _float(text: str) -> float:
    return float(parse_rational(text)) if "/" in str(text) else float(text)


def scale_from(text: str, N: int, parse: Callable[[str], Any] = parse_int):
    """A scale given outright or tied to N as "N" or "N^e" (floor of N^e, e >= 0 rational)."""
    text = str(text).strip()
    if text == "N":
        return N
    if text.startswith("N^"):
        exponent = parse_rational(text[2:])
        if exponent < 0:
            raise InvalidArgumentError(f"exponent of {text!r} must be nonnegative")
        return integer_root(N**exponent.numerator, exponent.denominator)
    return parse(text)


@dataclass(frozen=True)
class Outcome:
    """A statistic together with the status its record carries."""

    value: Any
    status: str = "ok"


@dataclass(frozen=True)
class Experiment:
    """A named statistic with typed parameters.

    Args:
        name: Registry name used by `sweep --experiment`
        run: Callable taking the parsed parameters plus budget, threads and seed
        params: Parameter name to parser; order is the column order
        defaults: Parameter defaults (as strings)
        description: One line for `sweep --list`
        seeded: Whether the statistic depends on the seed
    """

    name: str
    run: Callable[..., Any]
    params: Dict[str, Callable[[str], Any]]
    defaults: Dict[str, str] = field(default_factory=dict)
    description: str = ""
    seeded: bool = False

    def resolve(self, given: Dict[str, str]) -> Dict[str, str]:
        """All parameters in declaration order, defaults filled in."""
        unknown = set(given) - set(self.params)
        if unknown:
            raise InvalidArgumentError(
                f"unknown parameter(s) for {self.name}: {', '.join(sorted(unknown))}"
            )
        resolved = {}
        for name in self.params:
            if name in given:
                resolved[name] = str(given[name])
            elif name in self.defaults:
                resolved[name] = self.defaults[name]
            else:
                raise InvalidArgumentError(f"missing parameter {name!r} for {self.name}")
        return resolved

    def evaluate(
        self,
        given: Dict[str, str],
        budget: Optional[int] = None,
        threads: int = 1,
        seed: Optional[int] = None,
    ) -> Outcome:
        """Run the statistic on the resolved parameters; plain values get status "ok"."""
        resolved = self.resolve(given)
        parsed = {name: self.params[name](value) for name, value in resolved.items()}
        value = self.run(budget=budget, threads=threads, seed=seed, **parsed)
        return value if isinstance(value, Outcome) else Outcome(value)


def _tm_balance(length, budget, threads, seed):
    return tm_balance(length)


def _farey_p(alpha, Q, budget, threads, seed):
    return farey.farey_approx(alpha, Q).p


def _farey_q(alpha, Q, budget, threads, seed):
    return farey.farey_approx(alpha, Q).q


def _lod_total(x, theta, offset, budget, threads, seed):
    return lod.lod_error_total(x, theta, offset, threads=threads, budget=budget).total


def _lod_window(d, a, x, offset, budget, threads, seed):
    return lod.ap_signed_prefix_extremes(d, a, x, offset).max_dev


def _lod_beatty(x, D, alpha_grid, budget, threads, seed):
    return lod.beatty_lod_total(x, D, alpha_grid, budget=budget)


def _s0_discrete(N, D, xi, strategy, cap, budget, threads, seed):
    D = scale_from(D, N)
    result = lod.s0_discrete(N, D, 2 * D, xi, strategy, cap, threads=threads, budget=budget)
    if isinstance(result.value, int):
        return Fraction(result.value, N * D)
    return result.value / (N * D)


def _s0_beatty(N, D, xi, alpha_grid, strategy, beta_grid, budget, threads, seed):
    D = Fraction(scale_from(D, N, parse_rational))
    result = lod.s0_beatty(N, D, xi, alpha_grid, strategy, beta_grid, budget=budget)
    return result.value / (N * D)


def _pshapiro(c, N, method, budget, threads, seed):
    experiment = lod.ps_frequency(c, N, method)
    return Outcome(experiment.deviation, excluded_status(experiment.excluded))


def _discrepancy(alpha, N, budget, threads, seed):
    return sequences.discrepancy(alpha, N)


def _mean_discrepancy(mu, N, mode, grid, budget, threads, seed):
    total = sequences.mean_discrepancy_sum(mu, N, mode, grid)
    return float(total) / sequences.mean_discrepancy_bound(mu, N, mode)


def _carry(N, r, alpha, beta, lam, budget, threads, seed):
    return sequences.carry_census(0, N, r, alpha, beta, lam).count


def _vdc_random(count, N, K, R, budget, threads, seed):
    rng = np.random.default_rng(seed)
    failures = 0
    for _ in range(count):
        length = int(rng.integers(1, N + 1))
        radius = rng.uniform(0, 1, length)
        angle = rng.uniform(0, 2 * np.pi, length)
        z = radius * np.exp(1j * angle)
        result = sequences.vdc_check(
            list(z), int(rng.integers(1, K + 1)), int(rng.integers(1, R + 1))
        )
        failures += not result.ok
    return failures


def _q_measure(K, gamma, grid, budget, threads, seed):
    return farey.q_divisibility_measure(K, gamma, grid)


def _exceptions(lam, mu, sigma, gamma, m, mode, budget, threads, seed):
    return farey.exceptions_census(
        lam, mu, sigma, gamma, m, mode, threads=threads, budget=budget
    ).ratio


def _gowers_brute(m, rho, budget, threads, seed):
    return gowers.gowers_bruteforce(m, rho, gowers.OffsetFamily.zero(m), threads, budget)


def _gowers_recursion(m, rho, budget, threads, seed):
    graph = gowers.build_graph(m, budget)
    return gowers.recursion_value(m, rho, graph.zero, graph)


def _gowers_contract(m, k_max, budget, threads, seed):
    graph = gowers.build_graph(m, budget)
    return gowers.contraction_check(graph, k_max).c_star


def _gowers_k_star(m, k_max, budget, threads, seed):
    graph = gowers.build_graph(m, budget)
    return gowers.contraction_check(graph, k_max).k_star


def _gowers_eta(m, k_max, budget, threads, seed):
    graph = gowers.build_graph(m, budget)
    result = gowers.contraction_check(graph, k_max)
    if result.k_star is None:
        return None
    return gowers.decay_rate(graph, result.k_star, result.c_star)


EXPERIMENTS: Dict[str, Experiment] = {
    experiment.name: experiment
    for experiment in (
        Experiment(
            "tm-balance",
            _tm_balance,
            {"length": parse_int},
            {},
            "max |prefix sum of (-1)^s(n)| over the first length terms",
        ),
        Experiment(
            "farey-p",
            _farey_p,
            {"alpha": parse_rational, "Q": parse_int},
            {},
            "numerator p_Q(alpha) of the Farey dissection",
        ),
        Experiment(
            "farey-q",
            _farey_q,
            {"alpha": parse_rational, "Q": parse_int},
            {},
            "denominator q_Q(alpha) of the Farey dissection",
        ),
        Experiment(
            "lod-total",
            _lod_total,
            {"x": parse_int, "theta": _float, "offset": parse_int},
            {"theta": "0.5", "offset": "0"},
            "sum over d <= x^theta of the maximal centred AP deviation",
        ),
        Experiment(
            "lod-window",
            _lod_window,
            {"d": parse_int, "a": parse_int, "x": parse_int, "offset": parse_int},
            {"offset": "0"},
            "maximal centred deviation of one residue class",
        ),
        Experiment(
            "lod-beatty",
            _lod_beatty,
            {"x": parse_int, "D": parse_rational, "alpha_grid": parse_int},
            {"alpha_grid": "16"},
            "integral over alpha in [D,2D] of the maximal Beatty deviation",
        ),
        Experiment(
            "s0-discrete",
            _s0_discrete,
            {"N": parse_int, "D": str, "xi": _float, "strategy": str, "cap": parse_int},
            {"D": "N", "xi": "0", "strategy": "structured", "cap": "4096"},
            "S_0(N, D, xi) / (N D) over D <= d < 2D",
        ),
        Experiment(
            "s0-beatty",
            _s0_beatty,
            {
                "N": parse_int,
                "D": str,
                "xi": _float,
                "alpha_grid": parse_int,
                "strategy": str,
                "beta_grid": parse_int,
            },
            {"D": "N^1/2", "xi": "0", "alpha_grid": "8", "strategy": "breakpoints", "beta_grid": "64"},
            "continuous S_0(N, D, xi) / (N D) by midpoint quadrature",
        ),
        Experiment(
            "pshapiro",
            _pshapiro,
            {"c": str, "N": parse_int, "method": str},
            {"method": "auto"},
            "|freq of t(floor(n^c)) = 0 - 1/2|",
        ),
        Experiment(
            "discrepancy",
            _discrepancy,
            {"alpha": parse_rational, "N": parse_int},
            {},
            "extreme discrepancy D_N(alpha)",
        ),
        Experiment(
            "mean-discrepancy",
            _mean_discrepancy,
            {"mu": parse_int, "N": parse_int, "mode": str, "grid": parse_int},
            {"mode": "discrete", "grid": "1024"},
            "mean discrepancy sum divided by its bound",
        ),
        Experiment(
            "carry",
            _carry,
            {"N": parse_int, "r": parse_int, "alpha": parse_rational, "beta": parse_rational, "lam": parse_int},
            {"beta": "0"},
            "carry propagation count on [0, N)",
        ),
        Experiment(
            "vdc-random",
            _vdc_random,
            {"count": parse_int, "N": parse_int, "K": parse_int, "R": parse_int},
            {"count": "1000", "N": "64", "K": "8", "R": "8"},
            "failures of the van der Corput inequality on random inputs",
            seeded=True,
        ),
        Experiment(
            "q-measure",
            _q_measure,
            {"K": parse_int, "gamma": parse_int, "grid": parse_int},
            {"grid": "4096"},
            "measure of x with 2^gamma | q_K(x)",
        ),
        Experiment(
            "exceptions",
            _exceptions,
            {"lam": parse_int, "mu": parse_int, "sigma": parse_int, "gamma": parse_int, "m": parse_int, "mode": str},
            {"m": "2", "mode": "discrete"},
            "|A| 2^{gamma - lambda} of the exceptions census",
        ),
        Experiment(
            "gowers-brute",
            _gowers_brute,
            {"m": parse_int, "rho": parse_int},
            {"m": "2"},
            "A_rho(0) by direct summation",
        ),
        Experiment(
            "gowers-recursion",
            _gowers_recursion,
            {"m": parse_int, "rho": parse_int},
            {"m": "2"},
            "A_rho(0) by the graph recursion",
        ),
        Experiment(
            "gowers-contract",
            _gowers_contract,
            {"m": parse_int, "k_max": parse_int},
            {"m": "2", "k_max": "20"},
            "contraction constant c* of the Gowers graph",
        ),
        Experiment(
            "gowers-k-star",
            _gowers_k_star,
            {"m": parse_int, "k_max": parse_int},
            {"m": "2", "k_max": "20"},
            "smallest path length k* with a contracting row maximum",
        ),
        Experiment(
            "gowers-eta",
            _gowers_eta,
            {"m": parse_int, "k_max": parse_int},
            {"m": "2", "k_max": "20"},
            "decay rate eta = -log2(c*) / k*",
        ),
    )
}


def get_experiment(name: str) -> Experiment:
    try:
        return EXPERIMENTS[name]
    except KeyError:
        raise InvalidArgumentError(
            f"unknown experiment {name!r}; choose one of {', '.join(EXPERIMENTS)}"
        ) from None
