#!/usr/bin/env python3
"""
Тесты командной строки: вывод, коды выхода, сценарии
"""

import json
from pathlib import Path

import pytest

from config.scenario import parse_scenario
from main import format_component, main
from propagators.diagnostics import TABLE_COLUMNS

SCENARIOS = Path(__file__).resolve().parent.parent / "scenarios"


def _scenario_file(tmp_path, **changes) -> str:
    data = json.loads((SCENARIOS / "phi3_first_order.json").read_text(encoding="utf-8"))
    data.update(changes)
    path = tmp_path / "scenario.json"
    path.write_text(json.dumps(data), encoding="utf-8")
    return str(path)


@pytest.mark.parametrize("value, text", [
    (0.0, "0.000000e0"),
    (-0.0, "0.000000e0"),
    (1.5, "1.500000e0"),
    (-2.5e-7, "-2.500000e-7"),
    (12345.0, "1.234500e4"),
])
def test_format_component(value, text):
    assert format_component(value) == text


def test_propagator_value(capsys):
    code = main(["propagator", "--kind", "pauli-jordan", "--m", "1", "--lambda", "1", "--t", "0", "--r", "1.3"])
    assert code == 0
    assert capsys.readouterr().out.strip() == "0.000000e0 0.000000e0"


def test_propagator_table(capsys, tmp_path):
    out = tmp_path / "table.csv"
    code = main(["propagator", "--kind", "feynman", "--m", "1", "--lambda", "0.5",
                 "--table", "t=0:1:3,r=0.5", "--out", str(out)])
    assert code == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == ",".join(TABLE_COLUMNS)
    assert len(lines) == 4
    assert out.read_text(encoding="utf-8").strip().splitlines() == lines


def test_propagator_needs_kind():
    with pytest.raises(SystemExit) as info:
        main(["propagator", "--m", "1", "--lambda", "1"])
    assert info.value.code == 2


def test_thermal_propagator_needs_beta(capsys):
    code = main(["propagator", "--kind", "thermal", "--m", "1", "--lambda", "1"])
    assert code == 3
    assert "beta" in capsys.readouterr().err


def test_unknown_suite():
    with pytest.raises(SystemExit) as info:
        main(["verify", "--suite", "everything"])
    assert info.value.code == 2


def test_verify_algebra(capsys):
    code = main(["verify", "--suite", "algebra", "--seed", "3"])
    report = json.loads(capsys.readouterr().out)
    assert code == 0
    assert report["suite"] == "algebra"
    assert report["seed"] == 3
    assert report["checks"]
    assert all(check["passed"] for check in report["checks"])


@pytest.mark.slow
def test_verify_all(capsys):
    code = main(["verify", "--suite", "all"])
    report = json.loads(capsys.readouterr().out)
    assert code == 0
    assert report["passed"]


def test_run_expectation(capsys):
    code = main(["run", "--scenario", str(SCENARIOS / "phi3_first_order.json"), "--mode", "expect"])
    assert code == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["mode"] == "expect"
    assert payload["order"] == 1
    assert payload["seed"] == 20240601
    assert set(payload["value"]) == {"re", "im"}
    assert parse_scenario(payload["scenario"]).order == 1


def test_run_rejects_invalid_json(tmp_path, capsys):
    path = tmp_path / "broken.json"
    path.write_text("{\"model\": ", encoding="utf-8")
    assert main(["run", "--scenario", str(path)]) == 2


def test_run_rejects_missing_file(tmp_path):
    assert main(["run", "--scenario", str(tmp_path / "absent.json")]) == 2


def test_run_rejects_atom_outside_slice(tmp_path, capsys):
    path = _scenario_file(tmp_path, observable=[{"t": 0.7, "x": [0.0, 0.0, 0.0], "power": 3}])
    assert main(["run", "--scenario", path]) == 3
    assert "slice" in capsys.readouterr().err


def test_run_order_guard(tmp_path, capsys):
    path = _scenario_file(tmp_path, order=5)
    assert main(["run", "--scenario", path]) == 3
    assert "max-order" in capsys.readouterr().err


def test_interacting_kms_rejects_dressed_state(tmp_path):
    dressing = [{"t": 0.0, "x": [0.0, 0.0, 0.0], "power": 0}]
    path = _scenario_file(tmp_path, state={"kind": "dressed", "dressing": dressing})
    assert main(["run", "--scenario", path, "--mode", "interacting-kms"]) == 3


def test_graphs(capsys):
    code = main(["graphs", "--series", "s-matrix", "--degree", "3", "--order", "2"])
    assert code == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["series"] == "s-matrix"
    assert len(payload["orders"]) == 3


def test_graphs_order_guard(capsys):
    assert main(["graphs", "--series", "bogoliubov", "--degree", "3", "--order", "5"]) == 3


def test_config_summary(capsys):
    assert main(["config"]) == 0
    assert "COMPLEXITY GUARDS" in capsys.readouterr().out


def test_run_thermal_state_without_beta(tmp_path, capsys):
    path = _scenario_file(tmp_path, state={"kind": "thermal"})
    assert main(["run", "--scenario", path]) == 3
    assert "beta" in capsys.readouterr().err
