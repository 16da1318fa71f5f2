#!/usr/bin/env python3
"""
Тесты алгебры функционалов: свертки Вика, произведения, инволюция,
трансляции, состояния и связные корреляторы
"""

import json

import numpy as np
import pytest
import sympy

from functionals.algebra import (Functional, commutator, field, involution, monomial, pointwise_product,
                                 star_chain, star_product, time_ordered_product, translate)
from functionals.coefficients import IMAG_UNIT, ONE, GaussianRational, minus_i_power
from functionals.evaluation import (connected_correlator, connected_part, evaluate, functional_to_json,
                                    state_reduce, vacuum_reduce)
from functionals.integrand import IntegrandExpression
from functionals.series import FormalSeries
from functionals.terms import Edge, EdgeKind, MonomialTerm, Vertex, WeightTag, canonicalize
from functionals.wick import contraction_patterns, gaussian_pairings, pairing_count_bruteforce
from model.geometry import ORIGIN, Event
from propagators.kinds import PAULI_JORDAN, WIGHTMAN_PLUS
from utils.errors import ComplexityGuardError, DomainError, ParameterError, StructureError

X = Event(0.3, (0.5, 0.0, 0.0))
Y = Event(-0.2, (0.0, 0.4, 0.1))
Z = Event(0.1, (-0.3, 0.2, 0.0))


def test_gaussian_rational_arithmetic():
    assert IMAG_UNIT ** 2 == -1
    assert minus_i_power(3) == IMAG_UNIT
    assert (ONE / GaussianRational.coerce(2j)) == GaussianRational.coerce(-0.5j)
    assert not GaussianRational()
    assert (ONE / 3) * 3 == ONE
    assert GaussianRational.coerce(0.5 - 0.25j).as_expr() == sympy.Rational(1, 2) - sympy.I / 4


@pytest.mark.parametrize("powers_a, powers_b", [([2], [2]), ([1, 2], [3]), ([2, 1], [1, 2]), ([3], [0, 2])])
def test_contraction_patterns_match_bruteforce(powers_a, powers_b):
    assert dict(contraction_patterns(powers_a, powers_b)) == pairing_count_bruteforce(powers_a, powers_b)


def test_quadratic_contraction_counts():
    counts = sorted(count for _, count in contraction_patterns([2], [2]))
    assert counts == [1, 2, 4]


def test_gaussian_pairings():
    assert list(gaussian_pairings([4])) == [((), ((0, 2),), 3)]
    assert list(gaussian_pairings([1, 1])) == [(((0, 1, 1),), (), 1)]
    assert list(gaussian_pairings([1])) == []
    assert list(gaussian_pairings([])) == [((), (), 1)]


def test_self_contraction_is_rejected():
    with pytest.raises(StructureError):
        MonomialTerm(ONE, (Vertex(ORIGIN, 1),), (Edge(EdgeKind.WIGHTMAN, 0, 0),))


def test_canonical_form_is_idempotent():
    product = star_chain([monomial([(X, 2)]), monomial([(Y, 1), (Z, 1)]), monomial([(X, 1)])])
    for term in product.terms:
        assert canonicalize(term) == term
        assert canonicalize(canonicalize(term)) == canonicalize(term)


def test_canonical_form_permutation_guard():
    free = Vertex(WeightTag(), 1)
    term = MonomialTerm(ONE, (free, free, free, free, Vertex(ORIGIN, 1)), (Edge(EdgeKind.WIGHTMAN, 4, 0),))
    with pytest.raises(ComplexityGuardError) as info:
        canonicalize(term, max_permutations=6)
    assert info.value.guard == "max-canonical-permutations"
    assert canonicalize(term) == canonicalize(canonicalize(term))
    bare = MonomialTerm(ONE, (free, free, free, free))
    assert canonicalize(bare, max_permutations=6).vertices == bare.vertices


def test_linear_structure():
    A = monomial([(X, 2), (Y, 1)], 1.5 - 2j)
    assert (A - A).is_zero
    assert A + Functional.zero() == A
    assert A.scale(2) == A + A
    assert Functional.unit().degree == 0


def test_star_product_is_associative():
    A, B, C = monomial([(X, 2)], 1j), monomial([(Y, 1)]), monomial([(Z, 2)], 0.5)
    assert star_product(star_product(A, B), C) == star_product(A, star_product(B, C))


def test_involution_reverses_products():
    A = monomial([(X, 2)], 1 + 2j)
    B = monomial([(Y, 1), (Z, 1)], -0.5j)
    assert involution(star_product(A, B)) == star_product(involution(B), involution(A))
    assert involution(involution(A)) == A


def test_time_ordered_product_is_commutative():
    A = monomial([(X, 2)])
    B = monomial([(Y, 1), (Z, 1)], 3)
    assert time_ordered_product(A, B) == time_ordered_product(B, A)


def test_time_ordering_factorizes_for_later_factor(evaluator):
    later = monomial([(Event(1.0, (0.2, 0.0, 0.0)), 2)])
    earlier = monomial([(Event(0.0), 2)])
    ordered = evaluate(vacuum_reduce(time_ordered_product(later, earlier)), evaluator=evaluator)
    star = evaluate(vacuum_reduce(star_product(later, earlier)), evaluator=evaluator)
    assert ordered == pytest.approx(star, rel=1e-12)


def test_commutator_of_fields(evaluator):
    value = evaluate(commutator(field(X), field(Y)), evaluator=evaluator)
    dt, r = X.separation(Y)
    assert value == pytest.approx(1j * evaluator.evaluate(PAULI_JORDAN, dt, 0.0, r), rel=1e-12)


def test_evaluate_at_zero_and_plane_wave(plane_wave):
    A = monomial([(X, 1)], 2.0)
    assert evaluate(A) == 0
    assert evaluate(A + Functional.constant(3)) == 3
    expected = 2.0 * plane_wave.field(complex(X.t), np.asarray(X.x))
    assert evaluate(A, plane_wave) == pytest.approx(complex(expected))


def test_evaluate_with_free_vertices_returns_integrand():
    A = monomial([(WeightTag(), 2), (ORIGIN, 1)])
    assert not A.is_fixed
    assert isinstance(evaluate(A), IntegrandExpression)


def test_translations():
    A = monomial([(X, 1), (Y, 2)])
    with pytest.raises(DomainError):
        translate(A, 0.5, -0.1)
    assert translate(translate(A, 0.25, 0.5), 0.5, 0.25) == translate(A, 0.75, 0.75)
    assert translate(A, 0.0, 0.0) == A


def test_vacuum_is_translation_invariant(evaluator):
    A = star_product(monomial([(X, 2)]), monomial([(Y, 2)]))
    shifted = translate(A, 1.7)
    assert evaluate(vacuum_reduce(shifted), evaluator=evaluator) == pytest.approx(
        evaluate(vacuum_reduce(A), evaluator=evaluator), rel=1e-12)


def test_thermal_two_point_kms(evaluator):
    beta, t = 2.0, 0.6
    A, B = field(X), field(Y)
    shifted = evaluate(star_product(translate(A, t, beta), B, EdgeKind.THERMAL), evaluator=evaluator, beta=beta)
    exchanged = evaluate(star_product(B, translate(A, t), EdgeKind.THERMAL), evaluator=evaluator, beta=beta)
    assert shifted == pytest.approx(exchanged, rel=1e-9)


def test_thermal_square_is_mass_shift(evaluator):
    beta = 1.5
    reduced = state_reduce(monomial([(ORIGIN, 2)]), beta)
    assert evaluate(reduced, evaluator=evaluator, beta=beta) == pytest.approx(evaluator.thermal_mass_shift(beta))
    assert state_reduce(monomial([(ORIGIN, 3)]), beta).is_zero


def test_connected_two_point(evaluator):
    value = connected_correlator([field(X), field(Y)], evaluator)
    dt, r = X.separation(Y)
    assert value == pytest.approx(evaluator.evaluate(WIGHTMAN_PLUS, dt, 0.0, r), rel=1e-12)


def test_connected_four_point_of_linear_fields_vanishes(evaluator):
    events = [X, Y, Z, Event(0.0, (0.1, 0.1, 0.1))]
    value = connected_correlator([field(e) for e in events], evaluator)
    assert abs(value) <= 1e-14


def test_connected_part_guard():
    with pytest.raises(ComplexityGuardError) as info:
        connected_part([field(X)] * 7)
    assert info.value.guard == "max-partition"


def test_degree_guard():
    with pytest.raises(ComplexityGuardError) as info:
        star_product(monomial([(X, 9)]), monomial([(Y, 8)]))
    assert info.value.guard == "max-degree"


def test_pointwise_product_has_no_edges():
    product = pointwise_product(field(X), field(Y))
    assert len(product) == 1
    assert product.terms[0].edges == ()
    assert product.degree == 2


def test_functional_json_dump():
    payload = json.loads(functional_to_json(star_product(field(X), field(Y)), indent=None))
    assert len(payload["terms"]) == 2
    assert {e["kind"] for t in payload["terms"] for e in t["edges"]} == {EdgeKind.WIGHTMAN.value}


def test_formal_series_truncation():
    series = FormalSeries({0: Functional.unit(), 2: field(X)}, 3)
    assert series[1].is_zero
    assert series.truncate(1)[0] == Functional.unit()
    with pytest.raises(ParameterError):
        series[4]
    with pytest.raises(ParameterError):
        series.truncate(5)
    with pytest.raises(ParameterError):
        FormalSeries({5: field(X)}, 3)
    assert FormalSeries.unit(2).star(FormalSeries.unit(3)).is_unit()
    assert (series - series) == FormalSeries({}, 3)
