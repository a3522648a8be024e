# SPDX-FileCopyrightText: 2025 Cake AI Technologies, Inc.
#
# SPDX-License-Identifier: Apache-2.0

"""Tests for experiment records, the experiment registry and parameter sweeps."""

import json
from fractions import Fraction

import pytest

from cake_tmlod.core import lod
from cake_tmlod.core.experiments import EXPERIMENTS, get_experiment, scale_from
from cake_tmlod.core.rationals import parse_rational
from cake_tmlod.core.rationals import DyadicRational
from cake_tmlod.utils.errors import InvalidArgumentError
from cake_tmlod.utils.records import (
    ExperimentRecord,
    format_value,
    parse_value,
    read_records,
    records_to_csv,
    records_to_json,
    write_records,
)
from cake_tmlod.utils.sweep import (
    SweepConfig,
    config_from_file,
    config_from_grids,
    parse_grid,
    run_point,
    sweep,
)


def _essentials(records):
    return [(r.experiment, r.params, r.value, r.exact, r.seed, r.status) for r in records]


def test_format_and_parse_value():
    assert format_value(Fraction(2, 4)) == ("1/2", True)
    assert format_value(7) == ("7", True)
    assert format_value(DyadicRational(3, 2)) == ("3/2^2", True)
    assert format_value(0.25) == ("0.25", False)
    assert format_value(None) == ("", False)
    assert parse_value("3/2^2", True) == DyadicRational(3, 2)
    assert parse_value("1/2", True) == Fraction(1, 2)
    assert parse_value("0.25", False) == 0.25
    assert parse_value("", False) is None


def test_csv_layout():
    record = ExperimentRecord.of("discrepancy", {"alpha": "1/2", "N": 2}, Fraction(1, 2))
    assert records_to_csv([record]) == (
        "experiment,alpha,N,value,exact,seed,status\n" "discrepancy,1/2,2,1/2,true,,ok\n"
    )
    assert records_to_csv([record], timings=True).splitlines()[0].endswith(",wall_time_ms")


def test_csv_merges_parameter_columns():
    first = ExperimentRecord.of("a", {"x": 1}, 1)
    second = ExperimentRecord.of("b", {"y": 2}, 0.5)
    lines = records_to_csv([first, second]).splitlines()
    assert lines[0] == "experiment,x,y,value,exact,seed,status"
    assert lines[1] == "a,1,,1,true,,ok"
    assert lines[2] == "b,,2,0.5,false,,ok"


def test_write_and_read_records(tmp_path):
    records = [
        ExperimentRecord.of("carry", {"N": 8, "r": 1}, 3),
        ExperimentRecord.of("vdc-random", {"count": 10}, 0, seed=7),
    ]
    for name, output_format in (("out.csv", "csv"), ("out.json", "json")):
        path = tmp_path / name
        write_records(records, path, output_format)
        assert _essentials(read_records(path)) == _essentials(records)
    rows = json.loads(records_to_json(records))
    assert rows[1]["seed"] == "7"
    assert rows[0]["count"] == ""


def test_parse_grid():
    assert parse_grid("1,2,4") == (["1", "2", "4"], False)
    assert parse_grid("1..5:2") == (["1", "3", "5"], False)
    assert parse_grid("2^10..2^14:2") == (["2^10", "2^12", "2^14"], True)
    assert parse_grid("1/2, 1/3") == (["1/2", "1/3"], False)
    with pytest.raises(InvalidArgumentError):
        parse_grid("2^3..3^4")


def test_sweep_config_validation():
    with pytest.raises(InvalidArgumentError):
        SweepConfig("discrepancy", {"N": []})
    with pytest.raises(InvalidArgumentError):
        SweepConfig("discrepancy", {"N": ["1"]}, budget=0)
    with pytest.raises(InvalidArgumentError):
        SweepConfig("discrepancy", {"N": ["1"]}, output_format="xml")
    with pytest.raises(InvalidArgumentError):
        config_from_grids("discrepancy", ["N"])


def test_grid_points_are_lexicographic():
    config = SweepConfig("discrepancy", {"alpha": ["1/2", "1/3"], "N": ["2", "4"]})
    assert config.points() == [
        {"alpha": "1/2", "N": "2"},
        {"alpha": "1/2", "N": "4"},
        {"alpha": "1/3", "N": "2"},
        {"alpha": "1/3", "N": "4"},
    ]


def test_registry_resolution():
    spec = get_experiment("lod-total")
    assert spec.resolve({"x": "64"}) == {"x": "64", "theta": "0.5", "offset": "0"}
    with pytest.raises(InvalidArgumentError):
        spec.resolve({"x": "64", "colour": "red"})
    with pytest.raises(InvalidArgumentError):
        spec.resolve({})
    with pytest.raises(InvalidArgumentError):
        get_experiment("no-such-experiment")
    assert "gowers-eta" in EXPERIMENTS


def test_sweep_values_and_order():
    config = config_from_grids("discrepancy", ["alpha=1/2,1/3", "N=2..4"])
    records = sweep(config)
    assert len(records) == 6
    assert [r.params for r in records[:3]] == [
        {"alpha": "1/2", "N": "2"},
        {"alpha": "1/2", "N": "3"},
        {"alpha": "1/2", "N": "4"},
    ]
    assert records[0].value == "1/2"
    assert records[5].value == "1/2"
    assert all(r.exact and r.status == "ok" for r in records)


def test_sweep_is_deterministic_across_workers():
    grids = ["alpha=1/3,2/7,5/8", "N=3..9:3"]
    single = sweep(config_from_grids("discrepancy", grids))
    pooled = sweep(config_from_grids("discrepancy", grids, threads=2))
    assert _essentials(single) == _essentials(pooled)
    assert records_to_csv(single) == records_to_csv(pooled)


def test_records_replay_in_isolation():
    records = sweep(config_from_grids("carry", ["N=16,32", "r=1,2", "alpha=3/2", "lam=1"]))
    for record in records:
        outcome = get_experiment(record.experiment).evaluate(record.params)
        assert format_value(outcome.value)[0] == record.value
        assert outcome.status == record.status
        assert record.params["beta"] == "0"


def test_geometric_sweep_appends_slope_row():
    records = sweep(config_from_grids("discrepancy", ["alpha=987/1597", "N=2^2..2^6"]))
    assert len(records) == 6
    slope = records[-1]
    assert slope.experiment == "discrepancy:slope"
    assert slope.params["over"] == "N"
    assert slope.params["alpha"] == "987/1597"
    assert float(slope.value) < 0


def test_budget_refusal_becomes_skipped_record():
    config = config_from_grids("lod-total", ["x=2^16"], budget=1000)
    (record,) = sweep(config)
    assert record.status == "skipped"
    assert record.value == ""
    assert records_to_csv([record]).splitlines()[1] == "lod-total,2^16,0.5,0,,false,,skipped"


def test_seeded_experiments_record_their_seed():
    seeded = run_point("vdc-random", {"count": "20"}, 2**34, 7)
    assert seeded.seed == 7
    assert seeded.value == "0"
    assert run_point("vdc-random", {"count": "20"}, 2**34, 7).value == seeded.value
    plain = run_point("discrepancy", {"alpha": "1/2", "N": "2"}, 2**34, 7)
    assert plain.seed is None


def test_config_from_file(tmp_path):
    path = tmp_path / "sweep.env"
    path.write_text(
        "# discrepancy at two sizes\n"
        "experiment=discrepancy\n"
        "alpha=1/2\n"
        "N=2,4\n"
        "threads=3\n"
        "format=json\n",
        encoding="utf-8",
    )
    defaults = {"threads": 1, "budget": 2**34, "seed": 5, "output_format": "csv"}
    config = config_from_file(path, defaults, threads=None)
    assert config.experiment == "discrepancy"
    assert config.grids == {"alpha": ["1/2"], "N": ["2", "4"]}
    assert config.threads == 3
    assert config.output_format == "json"
    assert config.seed == 5
    assert config_from_file(path, defaults, threads=2).threads == 2

    missing = tmp_path / "broken.env"
    missing.write_text("alpha=1/2\n", encoding="utf-8")
    with pytest.raises(InvalidArgumentError):
        config_from_file(missing)


def test_boolean_values_round_trip():
    assert parse_value(*format_value(True)) is True
    assert parse_value(*format_value(False)) is False


def test_scale_from():
    assert scale_from("N", 64) == 64
    assert scale_from("N^1/2", 128) == 11
    assert scale_from("N^1/2", 64) == 8
    assert scale_from("N^0", 64) == 1
    assert scale_from("7", 64) == 7
    assert scale_from("2^5", 64) == 32
    assert scale_from("3/2", 64, parse_rational) == Fraction(3, 2)
    with pytest.raises(InvalidArgumentError):
        scale_from("N^-1", 64)


@pytest.mark.parametrize(
    "experiment, params",
    [
        ("tm-balance", {"length": 1000}),
        ("farey-p", {"alpha": "7/13", "Q": 4}),
        ("farey-q", {"alpha": "7/13", "Q": 4}),
        ("s0-discrete", {"N": 16, "D": 16, "xi": 0.0, "strategy": "structured", "cap": 4096}),
    ],
)
def test_command_records_are_registered(experiment, params):
    spec = get_experiment(experiment)
    assert list(spec.params) == list(params)
    outcome = spec.evaluate({name: str(value) for name, value in params.items()})
    record = ExperimentRecord.of(experiment, params, outcome.value)
    replayed = spec.evaluate(record.params)
    assert format_value(replayed.value)[0] == record.value
    assert replayed.status == "ok"


def test_farey_records_hold_the_dissection():
    assert get_experiment("farey-p").evaluate({"alpha": "7/13", "Q": "4"}).value == 1
    assert get_experiment("farey-q").evaluate({"alpha": "7/13", "Q": "4"}).value == 2
    assert get_experiment("tm-balance").evaluate({"length": "2^10"}).value == 1


def test_s0_sweep_over_N_ties_D_and_fits_a_slope():
    records = sweep(config_from_grids("s0-discrete", ["N=2^2..2^4"]))
    assert len(records) == 4
    points, slope = records[:3], records[3]
    assert all(r.params["D"] == "N" and r.status == "ok" for r in points)
    assert slope.experiment == "s0-discrete:slope"
    assert slope.params["over"] == "N"
    for record in points:
        replayed = get_experiment("s0-discrete").evaluate(record.params)
        assert format_value(replayed.value)[0] == record.value


def test_s0_beatty_defaults_to_square_root_scale():
    spec = get_experiment("s0-beatty")
    assert spec.resolve({"N": "16"})["D"] == "N^1/2"
    tied = spec.evaluate({"N": "16", "alpha_grid": "2"})
    explicit = spec.evaluate({"N": "16", "D": "4", "alpha_grid": "2"})
    assert tied.value == explicit.value


@pytest.fixture
def float_exponents(monkeypatch):
    exact_only = lod.ps_frequency

    def as_float(c, N, method="auto"):
        return exact_only(float(parse_rational(c)), N, method)

    monkeypatch.setattr(lod, "ps_frequency", as_float)


def test_excluded_indices_become_a_status(float_exponents):
    # n^(3/2) is an integer at the 7 squares 1, 4, ..., 49
    record = run_point("pshapiro", {"c": "3/2", "N": "50"}, 2**34, None)
    assert record.status == "excluded:7"
    assert record.value != ""

    records = sweep(config_from_grids("pshapiro", ["c=3/2", "N=50,60"]))
    assert [r.status for r in records] == ["excluded:7", "excluded:7"]
    assert records_to_csv(records).splitlines()[1].endswith(",excluded:7")


def test_exact_exponents_exclude_nothing():
    record = run_point("pshapiro", {"c": "3/2", "N": "50"}, 2**34, None)
    assert record.status == "ok"
    assert record.exact
