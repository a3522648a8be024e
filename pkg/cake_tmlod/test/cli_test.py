# SPDX-FileCopyrightText: 2025 Cake AI Technologies, Inc.
#
# SPDX-License-Identifier: Apache-2.0

"""End-to-end tests of the tmlod command line."""

import json

import pytest
from typer.testing import CliRunner

from cake_tmlod import __version__
from cake_tmlod.core.experiments import get_experiment
from cake_tmlod.main import app, run_subcommand
from cake_tmlod.utils.config import config
from cake_tmlod.utils.records import format_value, read_records

runner = CliRunner()


@pytest.fixture(autouse=True)
def clean_config(monkeypatch):
    for name in ("TMLOD_THREADS", "TMLOD_BUDGET", "TMLOD_SEED", "TMLOD_FORMAT", "TMLOD_VERBOSE"):
        monkeypatch.delenv(name, raising=False)
    monkeypatch.setitem(config, "threads", 1)
    monkeypatch.setitem(config, "budget", 2**34)
    monkeypatch.setitem(config, "seed", 20240521)
    monkeypatch.setitem(config, "format", "csv")
    monkeypatch.setitem(config, "verbose", False)


def test_version():
    result = runner.invoke(app, ["version"])
    assert result.exit_code == 0
    assert f"Cake TMLoD CLI v{__version__}" in result.output


def test_exit_codes():
    assert run_subcommand(["--help"]) == 0
    assert run_subcommand(["no-such-command"]) == 2
    assert run_subcommand(["farey", "approx", "--alpha", "1/2", "--order", "0"]) == 2
    assert run_subcommand(["--budget", "1000", "lod", "total", "--x", "65536"]) == 1
    assert run_subcommand(["discrepancy", "--alpha", "1/2", "--N", "2"]) == 0


def test_group_without_subcommand_prints_a_hint():
    result = runner.invoke(app, ["gowers"])
    assert result.exit_code == 0
    assert "Please specify a subcommand" in result.output


def test_digit_sum():
    result = runner.invoke(app, ["digits", "sum", "--n", "13", "--lam", "2"])
    assert result.exit_code == 0
    assert "s_2(n)" in result.output


def test_farey_approx():
    result = runner.invoke(app, ["farey", "approx", "--alpha", "2/5", "--order", "2"])
    assert result.exit_code == 0
    assert "1/2" in result.output


def test_discrepancy_record_is_byte_exact(tmp_path):
    out = tmp_path / "d.csv"
    result = runner.invoke(app, ["discrepancy", "--alpha", "1/2", "--N", "2", "--check", "--out", str(out)])
    assert result.exit_code == 0
    assert out.read_bytes() == (
        b"experiment,alpha,N,value,exact,seed,status\n" b"discrepancy,1/2,2,1/2,true,,ok\n"
    )


def test_json_format(tmp_path):
    out = tmp_path / "d.json"
    result = runner.invoke(
        app, ["--format", "json", "discrepancy", "--alpha", "1/3", "--N", "4", "--out", str(out)]
    )
    assert result.exit_code == 0
    (row,) = json.loads(out.read_text(encoding="utf-8"))
    assert row["value"] == "1/2"
    assert row["exact"] == "true"


def test_invalid_arguments_exit_with_2():
    assert runner.invoke(app, ["farey", "approx", "--alpha", "half", "--order", "4"]).exit_code == 2
    assert runner.invoke(app, ["--format", "xml", "version"]).exit_code == 2
    assert runner.invoke(app, ["--budget", "lots", "version"]).exit_code == 2


def test_budget_refusal(tmp_path):
    result = runner.invoke(app, ["--budget", "1000", "lod", "total", "--x", "2^16"])
    assert result.exit_code == 1
    assert "Refused" in result.output


def test_gowers_contract_writes_three_records(tmp_path):
    out = tmp_path / "g.csv"
    result = runner.invoke(app, ["gowers", "contract", "--m", "2", "--out", str(out)])
    assert result.exit_code == 0
    lines = out.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "experiment,m,k_max,value,exact,seed,status"
    assert [line.split(",")[0] for line in lines[1:]] == [
        "gowers-k-star",
        "gowers-contract",
        "gowers-eta",
    ]


def test_gowers_graph_export(tmp_path):
    export = tmp_path / "graph.txt"
    result = runner.invoke(app, ["gowers", "graph", "--m", "2", "--export", str(export)])
    assert result.exit_code == 0
    assert export.read_text(encoding="utf-8").startswith("(0,0,0,0) -> ")


def test_lod_total_with_per_modulus_records(tmp_path):
    out = tmp_path / "lod.csv"
    result = runner.invoke(app, ["lod", "total", "--x", "64", "--per-d", "--out", str(out)])
    assert result.exit_code == 0
    lines = out.read_text(encoding="utf-8").splitlines()
    assert len(lines) == 1 + 1 + 8
    assert lines[1].startswith("lod-total,")
    assert all(line.startswith("lod-window,") for line in lines[2:])


def test_lod_beatty_needs_a_scale():
    assert runner.invoke(app, ["lod", "beatty", "--x", "32"]).exit_code == 2


def test_carry_and_box():
    carry = runner.invoke(app, ["carry", "--N", "8", "--r", "1", "--alpha", "1", "--lam", "1"])
    assert carry.exit_code == 0
    assert "carry count" in carry.output
    box = runner.invoke(app, ["box", "--N", "8", "--alpha", "1/2", "--t", "0", "--T", "2"])
    assert box.exit_code == 0


def test_vdc_exact_and_random():
    result = runner.invoke(
        app, ["vdc", "--z", "1", "--z", "1", "--z", "1", "--z", "1", "--K", "1", "--R", "2", "--random", "50"]
    )
    assert result.exit_code == 0
    assert "35/2" in result.output


def test_sweep_prints_records():
    result = runner.invoke(app, ["sweep", "-e", "discrepancy", "-g", "alpha=1/2", "-g", "N=2,4"])
    assert result.exit_code == 0
    assert "discrepancy,1/2,2,1/2,true,,ok" in result.output
    assert "experiment,alpha,N,value,exact,seed,status" in result.output


def test_sweep_from_config_file(tmp_path):
    sweep_file = tmp_path / "sweep.env"
    out = tmp_path / "sweep.csv"
    sweep_file.write_text(f"experiment=carry\nN=8\nr=1\nalpha=1\nlam=1\noutput={out}\n", encoding="utf-8")
    result = runner.invoke(app, ["sweep", "--config", str(sweep_file)])
    assert result.exit_code == 0
    assert out.read_text(encoding="utf-8").splitlines()[1] == "carry,8,1,1,0,1,3,true,,ok"

    both = runner.invoke(app, ["sweep", "--config", str(sweep_file), "-g", "N=4"])
    assert both.exit_code == 2


def test_sweep_list_and_missing_experiment():
    listing = runner.invoke(app, ["sweep", "--list"])
    assert listing.exit_code == 0
    assert "Experiments" in listing.output
    assert runner.invoke(app, ["sweep"]).exit_code == 2


@pytest.mark.parametrize(
    "arguments",
    [
        ["digits", "table", "--length", "100"],
        ["farey", "approx", "--alpha", "7/13", "--order", "4"],
        ["lod", "s0", "--N", "16"],
    ],
)
def test_command_records_replay_through_the_registry(tmp_path, arguments):
    out = tmp_path / "records.csv"
    result = runner.invoke(app, arguments + ["--out", str(out)])
    assert result.exit_code == 0
    records = read_records(out)
    assert records
    for record in records:
        replayed = get_experiment(record.experiment).evaluate(record.params)
        assert format_value(replayed.value)[0] == record.value


def test_s0_ties_D_to_N_by_default(tmp_path):
    out = tmp_path / "s0.csv"
    result = runner.invoke(app, ["lod", "s0", "--N", "16", "--out", str(out)])
    assert result.exit_code == 0
    (record,) = read_records(out)
    assert record.params["D"] == "16"
    rooted = runner.invoke(app, ["lod", "s0", "--N", "64", "--D", "N^1/2", "--out", str(out)])
    assert rooted.exit_code == 0
    assert read_records(out)[0].params["D"] == "8"
