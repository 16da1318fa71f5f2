#!/usr/bin/env python3
"""
Тесты интегрирования, ожиданий в состояниях, сканов, KMS и эволюции
"""

import cmath

import pytest

from functionals.algebra import Functional, monomial
from model.geometry import ORIGIN, Event
from perturbation.bogoliubov import bogoliubov
from perturbation.interaction import Interaction
from states.evolution import (clustering_diagnostic, clustering_value, cocycle_conjugation_expectation,
                              evolution_scan, time_evolution_expectation)
from states.expectation import adiabatic_scan, expectation, kms_scan
from states.integration import integrate_function, tree_bound_diagnostic
from states.kms import interacting_kms
from states.spec import SCAN_COLUMNS, ScanPoint, ScanResult, StateSpec
from utils.errors import ComplexityGuardError, DomainError, ParameterError

VACUUM = StateSpec.vacuum()


@pytest.fixture
def cubic(cutoffs):
    return Interaction(3, cutoffs)


@pytest.fixture
def cubic_image(cubic):
    return bogoliubov(cubic, monomial([(ORIGIN, 3)]), 1)


def _scan(values, tolerance=0.01):
    return ScanResult(tuple(ScanPoint(float(i + 1), v, 0.0, 0) for i, v in enumerate(values)), tolerance)


def test_tree_bound_within_three_sigma():
    result, exact = tree_bound_diagnostic(1.0, 200_000, 20240601)
    assert abs(result.value.real - exact) <= 3 * result.stderr


def test_integrate_function():
    result = integrate_function(lambda x: x[:, 0] ** 2, [(0.0, 1.0)], 100_000, 3)
    assert abs(result.value - 1.0 / 3.0) <= 3 * result.stderr
    with pytest.raises(ParameterError):
        integrate_function(lambda x: x[:, 0], [(1.0, 1.0)], 10, 3)


def test_monte_carlo_agrees_with_radial_grid(cubic_image, evaluator, cutoffs, spec):
    radial = expectation(VACUUM, cubic_image, 1, evaluator, cutoffs, "radial")
    sampled = expectation(VACUUM, cubic_image, 1, evaluator, cutoffs, "mc", spec)
    assert radial.method == "radial"
    assert sampled.samples > 0
    assert abs(sampled.value - radial.value) <= 3 * sampled.stderr + 1e-3 * abs(radial.value)


def test_unbalanced_observable_has_zero_expectation(cubic, evaluator, cutoffs):
    image = bogoliubov(cubic, monomial([(ORIGIN, 1)]), 1)
    result = expectation(VACUUM, image, 1, evaluator, cutoffs, "radial")
    assert result.value == 0
    assert result.samples == 0


def test_cold_thermal_state_approaches_vacuum(cubic_image, evaluator, cutoffs):
    vacuum = expectation(VACUUM, cubic_image, 1, evaluator, cutoffs, "radial")
    cold = expectation(StateSpec.thermal(40.0), cubic_image, 1, evaluator, cutoffs, "radial")
    assert cold.value == pytest.approx(vacuum.value, rel=1e-6)


def test_radial_grid_needs_observable_at_origin(cubic, evaluator, cutoffs):
    image = bogoliubov(cubic, monomial([(Event(0.0, (0.5, 0.0, 0.0)), 3)]), 1)
    with pytest.raises(ParameterError):
        expectation(VACUUM, image, 1, evaluator, cutoffs, "radial")


def test_order_outside_truncation(cubic_image, evaluator, cutoffs):
    with pytest.raises(ParameterError):
        expectation(VACUUM, cubic_image, 2, evaluator, cutoffs, "radial")


def test_future_plateau_change_does_not_affect_first_order(cubic, cubic_image, evaluator, cutoffs):
    extended = bogoliubov(cubic.with_plateau_end(2.5), monomial([(ORIGIN, 3)]), 1)
    base = expectation(VACUUM, cubic_image, 1, evaluator, cutoffs, "radial")
    modified = expectation(VACUUM, extended, 1, evaluator, cutoffs, "radial")
    assert modified.value == pytest.approx(base.value, rel=1e-8)


def test_unit_dressing_reproduces_vacuum(cubic_image, evaluator, cutoffs):
    dressed = expectation(StateSpec.dressed(Functional.unit()), cubic_image, 1, evaluator, cutoffs, "radial")
    vacuum = expectation(VACUUM, cubic_image, 1, evaluator, cutoffs, "radial")
    assert dressed.value == pytest.approx(vacuum.value, rel=1e-12)


def test_zero_norm_dressing_is_rejected(cubic_image, evaluator, cutoffs):
    with pytest.raises(ParameterError):
        expectation(StateSpec.dressed(Functional.zero()), cubic_image, 1, evaluator, cutoffs, "radial")


def test_state_spec_validation():
    with pytest.raises(ParameterError):
        StateSpec.thermal(0.0)
    with pytest.raises(ParameterError):
        StateSpec.thermal(float("inf"))
    with pytest.raises(ParameterError):
        StateSpec.thermal(None)


def test_scan_result_ordering_and_convergence():
    with pytest.raises(ParameterError):
        ScanResult((ScanPoint(2.0, 1.0, 0.0, 0), ScanPoint(1.0, 1.0, 0.0, 0)), 0.01)
    assert _scan([1.0, 1.5, 1.501]).converged
    assert not _scan([1.0, 2.0]).converged
    assert not _scan([1.0]).converged
    assert _scan([0.0, 0.0]).converged


def test_scan_result_csv(tmp_path):
    path = tmp_path / "scan.csv"
    text = _scan([1.0 + 0.5j, 1.0 + 0.5j]).to_csv(str(path))
    lines = text.splitlines()
    assert lines[0] == ",".join(SCAN_COLUMNS)
    assert len(lines) == 3
    assert lines[1].endswith(",True")
    assert path.read_text(encoding="utf-8") == text


def test_scans_reject_bad_parameters(cubic_image, evaluator, cutoffs):
    with pytest.raises(ParameterError):
        adiabatic_scan(VACUUM, cubic_image, 1, [4.0, 2.0], evaluator, cutoffs, "radial")
    with pytest.raises(ParameterError):
        kms_scan(cubic_image, 1, [], evaluator, cutoffs, "radial")


def test_kms_scan(cubic_image, evaluator, cutoffs):
    scan = kms_scan(cubic_image, 1, [2.0, 8.0, 40.0], evaluator, cutoffs, "radial")
    assert scan.parameter_name == "beta"
    assert scan.parameters == [2.0, 8.0, 40.0]
    vacuum = expectation(VACUUM, cubic_image, 1, evaluator, cutoffs, "radial")
    assert scan.values[-1] == pytest.approx(vacuum.value, rel=1e-6)


@pytest.mark.slow
def test_adiabatic_scan_converges(cubic_image, evaluator, cutoffs):
    scan = adiabatic_scan(VACUUM, cubic_image, 1, [2.0, 4.0, 8.0, 16.0], evaluator, cutoffs, "radial")
    assert scan.parameter_name == "R"
    assert scan.converged


def test_interacting_kms_guards(cubic, evaluator, cutoffs):
    A = monomial([(ORIGIN, 2)])
    with pytest.raises(ComplexityGuardError) as info:
        interacting_kms(A, cubic, 1.0, evaluator, cutoffs, k=1, truncation=2)
    assert info.value.guard == "max-kms-truncation"
    with pytest.raises(ComplexityGuardError) as info:
        interacting_kms(A, cubic, 1.0, evaluator, cutoffs, k=3)
    assert info.value.guard == "max-kms-order"


def test_interacting_kms_at_zeroth_order_is_mass_shift(cubic, evaluator, cutoffs):
    beta = 2.0
    result = interacting_kms(monomial([(ORIGIN, 2)]), cubic, beta, evaluator, cutoffs, k=0)
    assert result.value == pytest.approx(evaluator.thermal_mass_shift(beta))


def test_evolution_rejects_negative_time(cubic, evaluator, cutoffs):
    with pytest.raises(DomainError):
        time_evolution_expectation(monomial([(ORIGIN, 3)]), cubic, -0.5, evaluator, cutoffs, method="radial")


def test_evolution_rejects_dressed_state(cubic, evaluator, cutoffs):
    with pytest.raises(ParameterError):
        time_evolution_expectation(monomial([(ORIGIN, 3)]), cubic, 0.5, evaluator, cutoffs,
                                   state=StateSpec.dressed(Functional.unit()), method="radial")


def test_evolution_at_zero_time_is_expectation(cubic, cubic_image, evaluator, cutoffs):
    evolved = time_evolution_expectation(monomial([(ORIGIN, 3)]), cubic, 0.0, evaluator, cutoffs, method="radial")
    direct = expectation(VACUUM, cubic_image, 1, evaluator, cutoffs, "radial")
    assert evolved.value == pytest.approx(direct.value, rel=1e-12)


def test_evolution_matches_cocycle_conjugation(cubic, evaluator, cutoffs):
    A = monomial([(ORIGIN, 3)])
    evolved = time_evolution_expectation(A, cubic, 0.5, evaluator, cutoffs, k=1, method="radial")
    conjugated = cocycle_conjugation_expectation(A, cubic, 0.5, evaluator, cutoffs, k=1, method="radial")
    assert evolved.value == pytest.approx(conjugated.value, rel=1e-3)


def test_evolution_scan(cubic, evaluator, cutoffs):
    scan = evolution_scan(monomial([(ORIGIN, 3)]), cubic, [0.0, 0.25], evaluator, cutoffs, method="radial")
    assert scan.parameter_name == "t"
    assert scan.parameters == [0.0, 0.25]
    with pytest.raises(ParameterError):
        evolution_scan(monomial([(ORIGIN, 3)]), cubic, [], evaluator, cutoffs, method="radial")


def test_commutator_order_guard(cubic, evaluator, cutoffs):
    with pytest.raises(ComplexityGuardError) as info:
        time_evolution_expectation(monomial([(ORIGIN, 3)]), cubic, 0.5, evaluator, cutoffs, k=1,
                                   commutator_order=3, method="radial")
    assert info.value.guard == "max-commutator-order"


def test_clustering_decays(cubic, evaluator, cutoffs):
    A = monomial([(ORIGIN, 2)])
    result = clustering_diagnostic(A, A, cubic, evaluator, cutoffs, times=[10.0, 20.0, 40.0, 80.0])
    assert result.decays
    assert result.exponent < -2.0
    assert list(result.to_frame()["t"]) == [10.0, 20.0, 40.0, 80.0]


def test_clustering_needs_positive_times(cubic, evaluator, cutoffs):
    A = monomial([(ORIGIN, 2)])
    with pytest.raises(ParameterError):
        clustering_diagnostic(A, A, cubic, evaluator, cutoffs, times=[0.0, 1.0])


@pytest.mark.slow
def test_clustering_value_with_interaction_is_finite(cubic, evaluator, cutoffs):
    value = clustering_value(monomial([(ORIGIN, 1)]), monomial([(ORIGIN, 2)]), cubic, 5.0, evaluator, cutoffs)
    assert cmath.isfinite(value)
