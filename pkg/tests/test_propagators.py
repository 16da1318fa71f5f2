#!/usr/bin/env python3
"""
Тесты ядер: тождества, оракулы, затухание, кэш и таблицы
"""

import math

import numpy as np
import pytest
from scipy import special

from config.qst_config import DECAY_WINDOWS
from model.geometry import ModelParams
from model.kernels import gaussian_kernel_values
from propagators.cache import PropagatorCache
from propagators.diagnostics import (TABLE_COLUMNS, beta_decay_fit, decay_fit, equation_of_motion_residual,
                                     parse_grid_spec, tabulate_propagator, weak_source_identity)
from propagators.evaluator import PropagatorEvaluator, evaluate_propagator
from propagators.kinds import (ADVANCED, DIRAC, FEYNMAN, PAULI_JORDAN, RETARDED, WIGHTMAN_PLUS, PropagatorKind,
                               QuadratureSpec, thermal, thermal_minus_vacuum)
from propagators.momentum import bessel_k1, feynman_inverse_transform, p0_transform, richardson_lambda_limit
from utils.errors import DomainError, ParameterError


def _points(rng, count=64):
    return rng.uniform(-5.0, 5.0, count), rng.uniform(0.0, 5.0, count)


def test_pauli_jordan_vanishes_at_equal_times(evaluator, rng):
    r = rng.uniform(0.0, 5.0, 50)
    assert np.max(np.abs(evaluator.evaluate_many(PAULI_JORDAN, 0.0, 0.0, r))) == 0.0


def test_exchange_relation(evaluator, rng):
    t, r = _points(rng)
    difference = evaluator.evaluate_many(WIGHTMAN_PLUS, t, 0.0, r) - evaluator.evaluate_many(WIGHTMAN_PLUS, -t, 0.0, r)
    assert np.max(np.abs(difference - 1j * evaluator.evaluate_many(PAULI_JORDAN, t, 0.0, r))) <= 1e-10


def test_pauli_jordan_is_real_and_odd(evaluator, rng):
    t, r = _points(rng)
    values = evaluator.evaluate_many(PAULI_JORDAN, t, 0.0, r)
    assert np.max(np.abs(values.imag)) <= 1e-14
    assert np.allclose(values, -evaluator.evaluate_many(PAULI_JORDAN, -t, 0.0, r), atol=1e-14)


def test_feynman_is_even(evaluator, rng):
    t, r = _points(rng)
    assert np.array_equal(evaluator.evaluate_many(FEYNMAN, t, 0.0, r), evaluator.evaluate_many(FEYNMAN, -t, 0.0, r))


def test_theta_composed_kernels(evaluator):
    t = np.array([-1.2, -0.3, 0.4, 2.0])
    r = np.full(4, 0.8)
    commutator = evaluator.evaluate_many(PAULI_JORDAN, t, 0.0, r)
    advanced = evaluator.evaluate_many(ADVANCED, t, 0.0, r)
    retarded = evaluator.evaluate_many(RETARDED, t, 0.0, r)
    assert np.all(advanced[t > 0] == 0)
    assert np.all(retarded[t < 0] == 0)
    assert np.allclose(retarded - advanced, commutator)
    assert np.allclose(evaluator.evaluate_many(DIRAC, t, 0.0, r), 0.5j * np.sign(t) * commutator)


def test_theta_composed_kernels_need_real_times(evaluator):
    with pytest.raises(DomainError):
        evaluator.evaluate(FEYNMAN, 0.5, 0.1, 0.5)


def test_commutator_derivative_at_origin(evaluator, params):
    h = 1e-3
    along = lambda s: evaluator.evaluate(PAULI_JORDAN, s, 0.0, 0.0)
    slope = (-along(2 * h) + 8 * along(h) - 8 * along(-h) + along(-2 * h)) / (12 * h)
    expected = -2.0 * math.sqrt(2.0 * math.pi) * params.lam * float(
        gaussian_kernel_values(np.zeros(4), 2.0 * params.lam)) * params.damping_offset
    assert slope.real == pytest.approx(expected, rel=1e-6)


def test_equation_of_motion(evaluator):
    assert equation_of_motion_residual(evaluator, PAULI_JORDAN, 0.7, 1.1, 1e-2) <= 1e-3


def test_thermal_kms_condition(evaluator, rng):
    beta = 2.0
    kind = thermal(beta)
    t, r = _points(rng)
    shifted = evaluator.evaluate_many(kind, t, beta, r)
    assert np.max(np.abs(shifted - evaluator.evaluate_many(kind, -t, 0.0, r))) <= 1e-9


def test_thermal_kernel_domain(evaluator):
    with pytest.raises(DomainError):
        evaluator.evaluate(thermal(1.0), 0.0, 1.5, 0.0)
    with pytest.raises(ParameterError):
        PropagatorKind.from_name("thermal")
    with pytest.raises(ParameterError):
        PropagatorKind.from_name("wightman-plus", 2.0)
    with pytest.raises(ParameterError):
        PropagatorKind.from_name("schwinger")


def test_thermal_mass_shift_is_positive_and_vanishes_when_cold(evaluator):
    assert evaluator.thermal_mass_shift(1.0) > 0
    assert abs(evaluator.evaluate(thermal_minus_vacuum(40.0), 0.3, 0.0, 0.5)) < 1e-15


def test_wightman_bound(evaluator, rng):
    t, r = _points(rng)
    values = evaluator.evaluate_many(WIGHTMAN_PLUS, t, 0.0, r)
    assert np.max(np.abs(values)) <= evaluator.bound() * (1 + 1e-12)


def test_negative_separation_is_rejected(evaluator):
    with pytest.raises(DomainError):
        evaluator.evaluate(WIGHTMAN_PLUS, 0.0, 0.0, -1.0)


FEYNMAN_SAMPLE_POINTS = [
    (0.7, 0.5), (0.8, 0.5), (-0.7, 0.5), (0.3, 0.0), (1.2, 0.2),
    (-1.7, 1.2), (2.0, 1.0), (0.5, 2.0), (-2.5, 0.8), (3.0, 2.5),
]


@pytest.mark.parametrize("t, r", FEYNMAN_SAMPLE_POINTS)
def test_feynman_matches_momentum_space_oracle(params, evaluator, t, r):
    oracle = feynman_inverse_transform(params, t, r)
    assert evaluator.evaluate(FEYNMAN, t, 0.0, r) == pytest.approx(oracle, rel=1e-4)


def test_p0_transform_is_pole_contribution(params):
    p = np.array([0.0, 0.5, 2.0])
    omega = np.sqrt(p * p + params.m ** 2)
    damping = np.exp(-params.lam ** 2 * (2.0 * p * p + params.m ** 2))
    expected = damping * np.exp(-1j * omega * 0.8) / (16.0 * math.pi ** 3 * omega)
    assert np.allclose(p0_transform(params, p, 0.8, 1e-12), expected, rtol=1e-9, atol=0.0)


def test_momentum_oracle_rejects_equal_times(params):
    with pytest.raises(DomainError):
        feynman_inverse_transform(params, 0.0, 1.0)


def test_weak_source_identity(params):
    lhs, rhs = weak_source_identity(params)
    assert abs(lhs - rhs) / abs(rhs) <= 1e-2


@pytest.mark.parametrize("z", [0.5, 1.0, 3.0])
def test_bessel_k1_against_scipy(z):
    assert bessel_k1(z) == pytest.approx(special.k1(z), rel=1e-10)


def test_richardson_extrapolation():
    lambdas = [0.4, 0.2, 0.1]
    values = [1.5 + 0.3 * lam ** 2 for lam in lambdas]
    assert richardson_lambda_limit(values, lambdas) == pytest.approx(1.5, abs=1e-10)


def test_spatial_decay(params):
    lo, hi = DECAY_WINDOWS["spatial"]
    fit = decay_fit(WIGHTMAN_PLUS, params, "spatial", (lo * params.lam / params.m, hi * params.lam / params.m), 0.0)
    assert fit.slope <= -0.9 * params.m


def test_temporal_decay(params):
    lo, hi = DECAY_WINDOWS["temporal"]
    fit = decay_fit(WIGHTMAN_PLUS, params, "temporal", (lo / params.m, hi / params.m), 0.0)
    assert abs(fit.slope + 1.5) <= 0.2


def test_thermal_approaches_vacuum_exponentially(params):
    lo, hi = DECAY_WINDOWS["beta"]
    fit = beta_decay_fit(params, 0.5, 0.5, (lo, hi))
    assert fit.slope <= -0.9 * params.m


def test_decay_fit_rejects_unknown_direction(params):
    with pytest.raises(ParameterError):
        decay_fit(WIGHTMAN_PLUS, params, "diagonal", (1.0, 2.0), 0.0)


def test_cache_does_not_change_values(params, spec, rng):
    t, r = _points(rng, 16)
    cached = PropagatorEvaluator(params, spec, PropagatorCache())
    uncached = PropagatorEvaluator(params, spec, PropagatorCache(enabled=False))
    first = cached.evaluate_many(WIGHTMAN_PLUS, t, 0.0, r)
    second = cached.evaluate_many(WIGHTMAN_PLUS, t, 0.0, r)
    assert np.array_equal(first, second)
    assert np.array_equal(first, uncached.evaluate_many(WIGHTMAN_PLUS, t, 0.0, r))
    assert cached.cache.get_stats()["hits"] >= 16


def test_values_do_not_depend_on_batch(evaluator):
    single = evaluator.evaluate(WIGHTMAN_PLUS, 30.0, 0.0, 0.5)
    batch = evaluator.evaluate_many(WIGHTMAN_PLUS, np.array([0.1, 30.0]), 0.0, np.array([0.0, 0.5]))
    assert batch[1] == single


def test_node_bucket_grows_with_phase(evaluator):
    buckets = evaluator.node_bucket(np.array([0.0, 500.0]), np.array([0.0, 0.0]))
    assert buckets[0] == evaluator.spec.nodes
    assert buckets[1] > evaluator.spec.nodes
    assert buckets[1] & (buckets[1] - 1) == 0


def test_cache_disabled_and_full():
    cache = PropagatorCache(max_entries=1)
    cache.set("a", 1.0)
    cache.set("b", 2.0)
    assert cache.get("a") == 1.0
    assert cache.get("b") is None
    disabled = PropagatorCache(enabled=False)
    disabled.set("a", 1.0)
    assert disabled.get("a") is None


def test_evaluate_propagator_cli_example():
    value = evaluate_propagator(PAULI_JORDAN, ModelParams(1.0, 1.0), 0.0, 0.0, 1.3)
    assert value == 0


def test_parse_grid_spec():
    grid = parse_grid_spec("t=0:1:5, r=0.5")
    assert grid["t"] == pytest.approx([0.0, 0.25, 0.5, 0.75, 1.0])
    assert grid["r"] == [0.5]
    with pytest.raises(ParameterError):
        parse_grid_spec("x=1")
    with pytest.raises(ParameterError):
        parse_grid_spec("t=0:1")


def test_tabulate_propagator(params):
    frame = tabulate_propagator(FEYNMAN, params, {"t": [0.5, 0.0], "r": [0.5, 1.0]}, QuadratureSpec())
    assert list(frame.columns) == TABLE_COLUMNS
    assert len(frame) == 4
    assert list(frame["t"]) == [0.0, 0.0, 0.5, 0.5]
    assert list(frame["r"]) == [0.5, 1.0, 0.5, 1.0]
    assert frame["kind"].unique().tolist() == ["feynman"]
    assert frame["beta"].isna().all()
