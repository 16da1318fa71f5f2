#!/usr/bin/env python3
"""
Тесты конфигурации и разбора сценариев
"""

import copy
import json
from pathlib import Path

import pytest

from config.qst_config import get_cache_config, get_thread_count
from config.scenario import load_scenario, parse_scenario
from main import load_config
from propagators.kinds import QuadratureSpec
from states.spec import StateKind
from utils.errors import DomainError, ParameterError, ScenarioError

SCENARIOS = Path(__file__).resolve().parent.parent / "scenarios"


@pytest.fixture
def scenario_data():
    return json.loads((SCENARIOS / "phi3_first_order.json").read_text(encoding="utf-8"))


def test_parse_shipped_scenarios():
    cubic = load_scenario(str(SCENARIOS / "phi3_first_order.json"))
    assert cubic.degree == 3
    assert cubic.method == "radial"
    assert cubic.seed == 20240601
    assert cubic.state().kind is StateKind.VACUUM

    quartic = load_scenario(str(SCENARIOS / "phi4_thermal.json"))
    assert quartic.degree == 4
    assert quartic.state().beta == pytest.approx(2.0)
    assert quartic.seed == 7


def test_round_trip(scenario_data):
    config = parse_scenario(scenario_data)
    assert parse_scenario(config.to_dict()) == config


def test_seed_overrides_quadrature(scenario_data):
    scenario_data["quadrature"]["seed"] = 5
    scenario_data["seed"] = 9
    assert parse_scenario(scenario_data).quadrature.seed == 9


@pytest.mark.parametrize("change", [
    lambda d: d.pop("model"),
    lambda d: d.pop("observable"),
    lambda d: d.update(extra={}),
    lambda d: d["model"].pop("lambda"),
    lambda d: d["cutoffs"].update(sigma=1.0),
    lambda d: d.update(method="simpson"),
    lambda d: d["state"].update(kind="squeezed"),
    lambda d: d.update(order="one"),
    lambda d: d.update(observable=[]),
    lambda d: d["observable"][0].update(power=-1),
    lambda d: d["observable"][0].update(x=[0.0, 0.0]),
])
def test_malformed_scenarios(scenario_data, change):
    data = copy.deepcopy(scenario_data)
    change(data)
    with pytest.raises(ScenarioError):
        parse_scenario(data)


def test_observable_outside_slice(scenario_data):
    scenario_data["observable"][0]["t"] = 0.5
    with pytest.raises(DomainError):
        parse_scenario(scenario_data)


def test_component_constraints_keep_their_errors(scenario_data):
    scenario_data["model"]["m"] = -1.0
    with pytest.raises(ParameterError):
        parse_scenario(scenario_data)
    scenario_data["model"]["m"] = 1.0
    scenario_data["state"] = {"kind": "thermal"}
    with pytest.raises(ParameterError):
        parse_scenario(scenario_data)


def test_missing_scenario_file(tmp_path):
    with pytest.raises(ScenarioError):
        load_scenario(str(tmp_path / "absent.json"))


def test_quadrature_overrides():
    spec = QuadratureSpec.from_dict({"nodes": 64, "seed": 3})
    assert spec.nodes == 64
    assert spec.seed == 3
    with pytest.raises(ParameterError):
        QuadratureSpec.from_dict({"points": 64})
    with pytest.raises(ParameterError):
        QuadratureSpec(nodes=8)


def test_load_config_sections():
    config = load_config()
    assert set(config) == {"quadrature", "cache", "guards", "scan", "verify", "threads", "log_level"}
    assert config["guards"]["max_order"] == 4


def test_environment_overrides(monkeypatch):
    monkeypatch.setenv("QSTFIELD_THREADS", "3")
    monkeypatch.setenv("QSTFIELD_CACHE", "off")
    monkeypatch.setenv("QSTFIELD_CACHE_QUANTUM", "1e-9")
    assert get_thread_count() == 3
    cache = get_cache_config()
    assert cache["enabled"] is False
    assert cache["quantum"] == pytest.approx(1e-9)

    monkeypatch.setenv("QSTFIELD_THREADS", "many")
    assert get_thread_count() >= 1
