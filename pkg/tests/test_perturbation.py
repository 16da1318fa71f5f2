#!/usr/bin/env python3
"""
Тесты S-матрицы, отображения Боголюбова, коцикла и дампа графов
"""

import json
import logging

import pytest

from functionals.algebra import Functional, monomial, star_product, translate
from functionals.evaluation import probe_evaluate
from functionals.series import FormalSeries
from functionals.terms import VertexRole
from model.geometry import ORIGIN, Event
from perturbation.bogoliubov import bogoliubov, bogoliubov_inverse, check_connected_components, interacting_product
from perturbation.cocycle import cocycle, cocycle_interaction, generator
from perturbation.graphs import build_series, write_graphs
from perturbation.interaction import Interaction
from perturbation.smatrix import SeriesKind, check_order, relative_s, s_adjoint, s_inverse, s_matrix
from utils.errors import ComplexityGuardError, DomainError, ParameterError, StructureError

PROBES = [Event(0.2, (0.1, 0.0, 0.0)), Event(0.55, (0.0, 0.3, -0.2))]
SLICE_POINTS = [Event(-0.3, (0.1, 0.0, 0.0)), Event(0.35, (0.0, 0.3, -0.2))]


@pytest.fixture
def cubic(cutoffs):
    return Interaction(3, cutoffs)


@pytest.fixture
def long_plateau(cubic):
    return cubic.with_plateau_end(3.0)


def test_interaction_degree_validation(cutoffs):
    with pytest.raises(ParameterError):
        Interaction(1, cutoffs)


def test_s_matrix_leading_orders(cubic):
    S = s_matrix(cubic, 2)
    assert S.provenance is SeriesKind.S_MATRIX
    assert S[0] == Functional.unit()
    assert S[1] == cubic.functional().scale(-1j)


def test_s_matrix_times_inverse_is_unit(cubic):
    S = s_matrix(cubic, 3)
    assert S.series.star(s_inverse(S).series).is_unit()


def test_inverse_equals_adjoint_at_first_order(cubic):
    S = s_matrix(cubic, 2)
    assert s_inverse(S)[1] == s_adjoint(S)[1]


def test_inverse_equals_adjoint_at_probes(cubic, evaluator, cutoffs):
    S = s_matrix(cubic, 2)
    difference = s_inverse(S)[2] - s_adjoint(S)[2]
    value = probe_evaluate(difference, PROBES, cutoffs, evaluator)
    scale = abs(probe_evaluate(s_adjoint(S)[2], PROBES, cutoffs, evaluator))
    assert scale > 0
    assert abs(value) <= 1e-10 * scale


def test_order_guards(cubic, cutoffs):
    with pytest.raises(ComplexityGuardError) as info:
        s_matrix(cubic, 5)
    assert info.value.guard == "max-order"
    with pytest.raises(ParameterError):
        check_order(-1)
    with pytest.raises(ComplexityGuardError) as info:
        bogoliubov(Interaction(4, cutoffs), monomial([(ORIGIN, 1)]), 4)
    assert info.value.guard == "max-bogoliubov-order"


def test_bogoliubov_leading_order_is_observable(cubic):
    A = monomial([(ORIGIN, 2)])
    R = bogoliubov(cubic, A, 2)
    assert R.provenance is SeriesKind.BOGOLIUBOV
    assert R[0] == A
    check_connected_components(R.series)


def test_vacuum_bubbles_are_detected(cubic):
    bubble = star_product(cubic.functional(), cubic.functional())
    with pytest.raises(StructureError):
        check_connected_components(FormalSeries.constant(bubble, 0))


def test_first_order_image_is_retarded(cubic, evaluator, cutoffs):
    R = bogoliubov(cubic, monomial([(ORIGIN, 3)]), 1)
    later = probe_evaluate(R[1], [Event(0.6, (0.2, 0.0, 0.0))], cutoffs, evaluator)
    earlier = probe_evaluate(R[1], [Event(-0.6, (0.2, 0.0, 0.0))], cutoffs, evaluator)
    assert abs(earlier) > 0
    assert abs(later) <= 1e-10 * abs(earlier)


def test_bogoliubov_inverse_round_trip(cubic):
    A = monomial([(ORIGIN, 1)])
    image = bogoliubov(cubic, A, 2)
    assert bogoliubov_inverse(cubic, image, 2).series == FormalSeries.constant(A, 2)


def test_relative_s_derivative_is_bogoliubov_image(cubic):
    A = monomial([(ORIGIN, 2)])
    relative = relative_s(cubic, A, 2)
    assert relative.derivative().series == bogoliubov(cubic, A, 2).series
    assert relative.component(0, 0) == Functional.unit()
    with pytest.raises(ParameterError):
        relative.component(3, 0)


def test_interacting_product_leading_order(cubic):
    A, B = monomial([(ORIGIN, 1)]), monomial([(Event(0.1, (0.5, 0.0, 0.0)), 2)])
    product = interacting_product(cubic, A, B, 1)
    assert product.provenance is SeriesKind.INTERACTING_PRODUCT
    assert product[0] == star_product(A, B)


def test_cocycle_at_zero_time_is_unit(cubic):
    assert cocycle(cubic, 0.0, 2).series.is_unit()


def test_cocycle_rejects_negative_time(cubic):
    with pytest.raises(DomainError):
        cocycle(cubic, -0.1, 1)


def test_cocycle_raises_plateau_end(cubic, caplog):
    with caplog.at_level(logging.WARNING):
        raised = cocycle_interaction(cubic, 5.0)
    assert raised.plateau_end == pytest.approx(6.0)
    assert "raised" in caplog.text
    assert cocycle_interaction(raised, 5.0) is raised


def test_cocycle_first_order(cubic):
    U = cocycle(cubic, 0.5, 1)
    assert U.provenance is SeriesKind.COCYCLE
    assert U[0] == Functional.unit()
    assert len(U[1].terms) == 2
    assert not U[1].is_fixed


def test_cocycle_identity(long_plateau, evaluator, cutoffs, plane_wave):
    t, s = 0.4, 0.7
    whole = cocycle(long_plateau, t + s, 2).series
    later = cocycle(long_plateau, s, 2).series.map(lambda A: translate(A, t))
    split = cocycle(long_plateau, t, 2).series.star(later)
    for k in (1, 2):
        value = probe_evaluate(whole[k], SLICE_POINTS, cutoffs, evaluator, plane_wave)
        residual = probe_evaluate(whole[k] - split[k], SLICE_POINTS, cutoffs, evaluator, plane_wave)
        assert abs(value) > 0
        assert abs(residual) <= 1e-8 * abs(value)


def test_cocycle_is_unitary(long_plateau, evaluator, cutoffs, plane_wave):
    U = cocycle(long_plateau, 0.4, 2)
    product = U.series.star(s_adjoint(U).series)
    assert product[1].is_zero
    value = probe_evaluate(product[2], SLICE_POINTS, cutoffs, evaluator, plane_wave)
    scale = abs(probe_evaluate(U[2], SLICE_POINTS, cutoffs, evaluator, plane_wave))
    assert scale > 0
    assert abs(value) <= 1e-10 * scale


def test_generator_leading_order(cubic):
    K = generator(cubic, 1)
    assert K.provenance is SeriesKind.GENERATOR
    assert K[0] == cubic.derivative().functional(role=VertexRole.OBSERVABLE)


def test_graph_dump(cutoffs, tmp_path):
    series = build_series("s-matrix", 3, 2, cutoffs)
    path = tmp_path / "graphs.json"
    text = write_graphs(series, str(path))
    payload = json.loads(path.read_text(encoding="utf-8"))
    assert json.loads(text) == payload
    assert payload["series"] == "s-matrix"
    assert payload["max_order"] == 2
    assert [o["order"] for o in payload["orders"]] == [0, 1, 2]
    assert payload["orders"][1]["terms"] == 1
    assert payload["orders"][1]["graphs"][0]["vertices"][0]["power"] == 3


def test_graph_dump_rejects_unknown_series(cutoffs):
    with pytest.raises(ParameterError):
        build_series("propagator", 3, 1, cutoffs)
