#!/usr/bin/env python3
"""
Наборы проверок verify: тождества пропагаторов, алгебра функционалов,
S-матрица и состояния. Каждая проверка дает запись
[name, anchor, residual, threshold, passed]; отчет - JSON.
"""

import itertools
import json
import logging
import math
import traceback
from dataclasses import dataclass
from datetime import datetime
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from config.qst_config import DECAY_WINDOWS, VERIFY_DEFAULTS
from functionals.algebra import (Functional, field, involution, monomial, star_chain, star_product,
                                 time_ordered_product, translate)
from functionals.evaluation import connected_correlator, evaluate, probe_evaluate, state_reduce, vacuum_reduce
from functionals.terms import canonicalize
from functionals.wick import contraction_patterns, pairing_count_bruteforce
from model.cutoffs import CutoffSpec
from model.geometry import ORIGIN, Event, ModelParams
from model.kernels import PlaneWaveConfig, gaussian_kernel_values
from perturbation.bogoliubov import bogoliubov, bogoliubov_inverse, check_connected_components
from perturbation.cocycle import cocycle
from perturbation.interaction import Interaction
from perturbation.smatrix import s_adjoint, s_inverse, s_matrix
from propagators.diagnostics import (beta_decay_fit, decay_fit, equation_of_motion_residual,
                                     weak_source_identity)
from propagators.evaluator import PropagatorEvaluator, get_evaluator
from propagators.kinds import (ADVANCED, FEYNMAN, PAULI_JORDAN, WIGHTMAN_PLUS, QuadratureSpec, thermal)
from propagators.momentum import feynman_inverse_transform
from states.expectation import expectation
from states.integration import tree_bound_diagnostic
from states.spec import StateSpec
from utils.errors import ParameterError, QSTFieldError

SUITES = ("propagators", "algebra", "smatrix", "states", "all")


@dataclass(frozen=True)
class CheckResult:
    name: str
    anchor: str
    residual: float
    threshold: float
    passed: bool

    def to_dict(self) -> dict:
        return {"name": self.name, "anchor": self.anchor, "residual": self.residual,
                "threshold": self.threshold, "passed": self.passed}


def _relative(value: complex, reference: complex) -> float:
    return abs(value - reference) / max(abs(reference), 1e-300)


def _power_pairs(max_degree: int) -> List[Tuple[Tuple[int, ...], Tuple[int, ...]]]:
    """Пары мономов из одной или двух вершин с суммарной степенью ≤ max_degree"""
    shapes = [(p,) for p in range(1, max_degree)]
    shapes += [(p, q) for p, q in itertools.product(range(1, max_degree), repeat=2) if p + q < max_degree]
    return [(a, b) for a in shapes for b in shapes if sum(a) + sum(b) <= max_degree]


class VerificationSuite:
    """Прогон проверок одного набора с общими параметрами модели и seed"""

    def __init__(self, seed: int = 0, tol_scale: float = VERIFY_DEFAULTS["tol_scale"],
                 params: Optional[ModelParams] = None, spec: Optional[QuadratureSpec] = None):
        if not tol_scale > 0:
            raise ParameterError(f"tol_scale must be positive, got {tol_scale}")
        self.seed = int(seed)
        self.tol_scale = float(tol_scale)
        self.params = params or ModelParams(1.0, 1.0)
        self.spec = spec or QuadratureSpec(seed=self.seed)
        self.evaluator: PropagatorEvaluator = get_evaluator(self.params, self.spec)
        self.cutoffs = CutoffSpec(eps=0.5, T=1.0, R=2.0, delta=0.5)
        self.rng = np.random.default_rng(np.random.SeedSequence(self.seed))
        self.checks: List[CheckResult] = []
        self.logger = logging.getLogger(self.__class__.__name__)

    # ------------------------------------------------------------------
    # запись результатов
    # ------------------------------------------------------------------
    def _record(self, name: str, anchor: str, measure: Callable[[], float], threshold: float,
                scaled: bool = True, upper: bool = True):
        """residual ≤ threshold (upper) или residual ≥ threshold; исключение - проваленная проверка"""
        limit = threshold * self.tol_scale if scaled else threshold
        try:
            residual = float(measure())
            passed = residual <= limit if upper else residual >= limit
        except QSTFieldError as e:
            self.logger.error(f"❌ Check {name} raised: {e}")
            self.logger.debug(traceback.format_exc())
            residual, passed = math.inf, False
        if math.isnan(residual):
            passed = False
        marker = "✅" if passed else "❌"
        self.logger.info(f"{marker} {name}: residual={residual:.3e} threshold={limit:.3e}")
        self.checks.append(CheckResult(name, anchor, residual, limit, passed))

    def _random_points(self, count: int) -> Tuple[np.ndarray, np.ndarray]:
        t = self.rng.uniform(-5.0, 5.0, count)
        r = self.rng.uniform(0.0, 5.0, count)
        return t, r

    def _random_event(self, t_range: Tuple[float, float] = (-0.4, 0.4)) -> Event:
        return Event(float(self.rng.uniform(*t_range)), tuple(self.rng.uniform(-1.0, 1.0, 3).tolist()))

    def _random_config(self) -> PlaneWaveConfig:
        amplitude = complex(*self.rng.normal(size=2))
        k = self.rng.normal(size=4)
        return PlaneWaveConfig.single(amplitude, k.tolist())

    # ------------------------------------------------------------------
    # пропагаторы
    # ------------------------------------------------------------------
    def run_propagators(self):
        ev = self.evaluator
        m, lam = self.params.m, self.params.lam

        def parity():
            r = self.rng.uniform(0.0, 5.0, VERIFY_DEFAULTS["random_points"])
            return float(np.max(np.abs(ev.evaluate_many(PAULI_JORDAN, 0.0, 0.0, r))))

        def exchange():
            t, r = self._random_points(VERIFY_DEFAULTS["random_points"])
            lhs = ev.evaluate_many(WIGHTMAN_PLUS, t, 0.0, r) - ev.evaluate_many(WIGHTMAN_PLUS, -t, 0.0, r)
            return float(np.max(np.abs(lhs - 1j * ev.evaluate_many(PAULI_JORDAN, t, 0.0, r))))

        def derivative():
            h = 1e-3
            along = lambda s: ev.evaluate(PAULI_JORDAN, s, 0.0, 0.0)
            slope = (-along(2 * h) + 8 * along(h) - 8 * along(-h) + along(-2 * h)) / (12 * h)
            expected = -2.0 * math.sqrt(2.0 * math.pi) * lam * float(
                gaussian_kernel_values(np.zeros(4), 2.0 * lam)) * self.params.damping_offset
            return _relative(slope, expected)

        def feynman_momentum():
            worst = 0.0
            for t, r in zip(self.rng.uniform(-3.0, 3.0, 10), self.rng.uniform(0.2, 3.0, 10)):
                oracle = feynman_inverse_transform(self.params, float(t), float(r))
                worst = max(worst, _relative(ev.evaluate(FEYNMAN, float(t), 0.0, float(r)), oracle))
            return worst

        def feynman_even():
            t, r = self._random_points(VERIFY_DEFAULTS["random_points"])
            return float(np.max(np.abs(ev.evaluate_many(FEYNMAN, t, 0.0, r) - ev.evaluate_many(FEYNMAN, -t, 0.0, r))))

        def source():
            lhs, rhs = weak_source_identity(self.params, spec=self.spec)
            return _relative(lhs, rhs)

        def kms():
            beta = 2.0 / m
            kind = thermal(beta)
            t, r = self._random_points(VERIFY_DEFAULTS["random_points"])
            lhs = ev.evaluate_many(kind, t, beta, r)
            return float(np.max(np.abs(lhs - ev.evaluate_many(kind, -t, 0.0, r))))

        def spatial():
            lo, hi = DECAY_WINDOWS["spatial"]
            return decay_fit(WIGHTMAN_PLUS, self.params, "spatial", (lo * lam / m, hi * lam / m), 0.0,
                             self.spec).slope

        def temporal():
            lo, hi = DECAY_WINDOWS["temporal"]
            fit = decay_fit(WIGHTMAN_PLUS, self.params, "temporal", (lo / m, hi / m), 0.0, self.spec)
            return abs(fit.slope + 1.5)

        def beta_gap():
            lo, hi = DECAY_WINDOWS["beta"]
            return beta_decay_fit(self.params, 0.5, 0.5, (lo / m, hi / m), self.spec).slope

        self._record("pauli-jordan-parity", "commutator vanishes at equal times", parity, 1e-10)
        self._record("exchange-relation", "Wightman exchange relation", exchange, 1e-10)
        self._record("commutator-derivative", "time derivative of the commutator at the origin", derivative, 1e-6)
        self._record("equation-of-motion", "Klein-Gordon equation for the commutator",
                     lambda: equation_of_motion_residual(ev, PAULI_JORDAN, 0.7, 1.1, 1e-2), 1e-3)
        self._record("feynman-momentum", "momentum-space form of the Feynman propagator", feynman_momentum, 1e-4)
        self._record("feynman-evenness", "Feynman propagator is even in time", feynman_even, 1e-12)
        self._record("weak-source-identity", "smeared source term of the Feynman propagator", source, 1e-2)
        self._record("thermal-kms", "KMS condition of the thermal two-point function", kms, 1e-9)
        self._record("spatial-decay", "exponential decay in space", spatial, -0.9 * m, scaled=False)
        self._record("temporal-decay", "t^(-3/2) decay in time", temporal, 0.2, scaled=False)
        self._record("thermal-vacuum-gap", "exponential approach of thermal to vacuum", beta_gap, -0.9 * m,
                     scaled=False)

    # ------------------------------------------------------------------
    # алгебра функционалов
    # ------------------------------------------------------------------
    def run_algebra(self):
        ev = self.evaluator

        def wick():
            mismatches = 0
            for powers_a, powers_b in _power_pairs(8):
                if dict(contraction_patterns(powers_a, powers_b)) != pairing_count_bruteforce(powers_a, powers_b):
                    mismatches += 1
            return mismatches

        def phi_squared_pattern():
            x, y = Event(0.0, (0.0, 0.0, 0.0)), Event(-0.3, (0.2, 0.0, 0.0))
            product = star_product(monomial([(x, 2)]), monomial([(y, 2)]))
            counts = sorted(int(t.coefficient.re) for t in product.terms)
            return 0 if counts == [1, 2, 4] else 1

        def associativity():
            A, B, C = (monomial([(self._random_event(), p)]) for p in (1, 2, 3))
            return 0 if star_product(star_product(A, B), C) == star_product(A, star_product(B, C)) else 1

        def antihomomorphism():
            A = monomial([(self._random_event(), 2)], 1 + 2j)
            B = monomial([(self._random_event(), 3)], 0.5)
            return 0 if involution(star_product(A, B)) == star_product(involution(B), involution(A)) else 1

        def commutator_constant():
            x, y = self._random_event(), self._random_event()
            value = evaluate(star_product(field(x), field(y)) - star_product(field(y), field(x)), evaluator=ev)
            dt, r = x.separation(y)
            return abs(value - 1j * ev.evaluate(PAULI_JORDAN, dt, 0.0, r))

        def factorization():
            x = self._random_event((1.5, 2.0))
            y = self._random_event((-0.4, 0.0))
            A, B = monomial([(x, 2)]), monomial([(y, 2)])
            difference = time_ordered_product(A, B) - star_product(A, B)
            return max(abs(evaluate(difference, config, ev)) for config in (PlaneWaveConfig(), self._random_config()))

        def canonical():
            A = star_chain([monomial([(self._random_event(), 2)]) for _ in range(3)])
            once = [canonicalize(t) for t in A.terms]
            return sum(canonicalize(t) != t for t in once)

        def gaussian_cumulant():
            fields = [field(self._random_event()) for _ in range(4)]
            return abs(connected_correlator(fields, ev))

        self._record("wick-bruteforce", "Wick theorem combinatorics", wick, 0, scaled=False)
        self._record("wick-phi-squared", "phi^2 star phi^2 expansion 1, 4, 2", phi_squared_pattern, 0, scaled=False)
        self._record("associativity", "star product is associative", associativity, 0, scaled=False)
        self._record("involution", "(A star B)* = B* star A*", antihomomorphism, 0, scaled=False)
        self._record("commutator-constant", "canonical commutation relations", commutator_constant, 1e-12)
        self._record("temporal-factorization", "time-ordered equals star for later-earlier supports",
                     factorization, 1e-12)
        self._record("canonical-idempotence", "canonical form is idempotent", canonical, 0, scaled=False)
        self._record("gaussian-cumulant", "connected four-point function of linear fields vanishes",
                     gaussian_cumulant, 1e-12)

    # ------------------------------------------------------------------
    # S-матрица
    # ------------------------------------------------------------------
    def _probes(self, count: int) -> List[Event]:
        lo, hi = self.cutoffs.temporal_support
        return [Event(float(self.rng.uniform(lo, hi)), tuple(self.rng.uniform(-1.0, 1.0, 3).tolist()))
                for _ in range(count)]

    def run_smatrix(self):
        ev = self.evaluator

        def unitarity(order: int) -> Callable[[], float]:
            def measure() -> float:
                worst = 0.0
                for degree in (3, 4):
                    S = s_matrix(Interaction(degree, self.cutoffs), order)
                    product = S.series.star(s_adjoint(S).series)
                    config = self._random_config()
                    probes = self._probes(order)
                    value = probe_evaluate(product[order], probes, self.cutoffs, ev, config)
                    scale = sum(abs(probe_evaluate(Functional([t]), probes, self.cutoffs, ev, config))
                                for t in product[order].terms)
                    worst = max(worst, abs(value) / max(scale, 1.0))
                return worst
            return measure

        def inverse_structural():
            S = s_matrix(Interaction(3, self.cutoffs), 2)
            return 0 if S.series.star(s_inverse(S).series).is_unit() else 1

        def inverse_adjoint():
            V = monomial([(self._random_event(), 3)])
            S = s_matrix(V, 2)
            difference = s_inverse(S)[2] - s_adjoint(S)[2]
            return max(abs(evaluate(difference, config, ev)) for config in (PlaneWaveConfig(), self._random_config()))

        def factorization():
            A = monomial([(self._random_event((3.5, 4.0)), 3)])
            B = monomial([(self._random_event((1.5, 2.0)), 3)])
            C = monomial([(self._random_event((-0.5, 0.0)), 3)])
            whole = s_matrix(A + B + C, 2).series
            split = s_matrix(A + B, 2).series.star(s_inverse(s_matrix(B, 2)).series).star(s_matrix(B + C, 2).series)
            worst = 0.0
            for k in range(3):
                difference = whole[k] - split[k]
                for config in (PlaneWaveConfig(), self._random_config()):
                    worst = max(worst, abs(evaluate(difference, config, ev)))
            return worst

        def retarded_image():
            y = Event(0.0)
            worst = 0.0
            for dt in (-1.0, 1.0):
                x = Event(dt, (0.3, 0.0, 0.0))
                R = bogoliubov(monomial([(x, 2)]), field(y), 1)
                config = self._random_config()
                value = evaluate(R[1], config, ev)
                sep, r = x.separation(y)
                expected = 2.0 * ev.evaluate(ADVANCED, sep, 0.0, r) * complex(config.field(x.t, np.array(x.x)))
                worst = max(worst, abs(value - expected))
            return worst

        def components():
            image = bogoliubov(Interaction(4, self.cutoffs), monomial([(ORIGIN, 2)]), 2)
            check_connected_components(image.series)
            return 0

        def inverse_roundtrip():
            V = Interaction(3, self.cutoffs)
            A = monomial([(ORIGIN, 2)])
            back = bogoliubov_inverse(V, bogoliubov(V, A, 2), 2)
            return 0 if all(back[k] == (A if k == 0 else Functional.zero()) for k in range(3)) else 1

        def cocycle_unit():
            return 0 if cocycle(Interaction(3, self.cutoffs), 0.0, 2).series.is_unit() else 1

        def cocycle_identity():
            t, s = 0.4, 0.7
            V = Interaction(3, self.cutoffs).with_plateau_end(3.0)
            whole = cocycle(V, t + s, 2).series
            later = cocycle(V, s, 2).series.map(lambda A: translate(A, t))
            split = cocycle(V, t, 2).series.star(later)
            probes = [self._random_event((-0.6, 0.6)) for _ in range(2)]
            config = self._random_config()
            return max(abs(probe_evaluate(whole[k] - split[k], probes, self.cutoffs, ev, config))
                       for k in (1, 2))

        def cocycle_unitarity():
            U = cocycle(Interaction(3, self.cutoffs).with_plateau_end(3.0), 0.4, 2)
            product = U.series.star(s_adjoint(U).series)
            probes = [self._random_event((-0.6, 0.6)) for _ in range(2)]
            config = self._random_config()
            worst = 0.0
            for k in (1, 2):
                value = probe_evaluate(product[k], probes, self.cutoffs, ev, config)
                scale = sum(abs(probe_evaluate(Functional([term]), probes, self.cutoffs, ev, config))
                            for term in product[k].terms)
                worst = max(worst, abs(value) / max(scale, 1.0))
            return worst

        self._record("unitarity-order-1", "unitarity of the S-matrix", unitarity(1), 1e-10)
        self._record("unitarity-order-2", "unitarity of the S-matrix", unitarity(2), 1e-10)
        self._record("inverse-structural", "anti-chronological inverse", inverse_structural, 0, scaled=False)
        self._record("inverse-equals-adjoint", "S^-1 = S* for local interactions", inverse_adjoint, 1e-10)
        self._record("s-factorization", "temporal factorization of the S-matrix", factorization, 1e-8)
        self._record("bogoliubov-retarded", "first-order Bogoliubov image is retarded", retarded_image, 1e-12)
        self._record("bogoliubov-components", "every component touches the observable", components, 0,
                     scaled=False)
        self._record("bogoliubov-inverse", "inverse Bogoliubov map", inverse_roundtrip, 0, scaled=False)
        self._record("cocycle-unit", "U(0) = 1", cocycle_unit, 0, scaled=False)
        self._record("cocycle-identity", "U(t+s) = U(t) * alpha_t U(s)", cocycle_identity, 1e-8)
        self._record("cocycle-unitarity", "U(t) is unitary order by order", cocycle_unitarity, 1e-10)

    # ------------------------------------------------------------------
    # состояния
    # ------------------------------------------------------------------
    def run_states(self):
        ev = self.evaluator
        m = self.params.m
        samples = VERIFY_DEFAULTS["mc_samples"]

        def tree_bound():
            result, exact = tree_bound_diagnostic(m, samples, self.seed)
            if result.stderr / exact > 0.01:
                return math.inf
            return abs(result.value.real - exact) / result.stderr

        def kms_two_point():
            beta = 2.0 / m
            x, y = self._random_event(), self._random_event()
            lhs = evaluate(state_reduce(star_product(translate(field(x), 0.0, beta), field(y)), beta),
                           evaluator=ev, beta=beta)
            rhs = evaluate(state_reduce(star_product(field(y), field(x)), beta), evaluator=ev, beta=beta)
            return abs(lhs - rhs)

        def first_order_oracle():
            series = bogoliubov(Interaction(3, self.cutoffs), monomial([(ORIGIN, 3)]), 1)
            spec = self.spec.with_overrides(mc_samples=samples)
            mc = expectation(StateSpec.vacuum(), series, 1, ev, self.cutoffs, "mc", spec)
            radial = expectation(StateSpec.vacuum(), series, 1, ev, self.cutoffs, "radial", spec)
            return abs(mc.value - radial.value) / max(mc.stderr, 1e-300)

        def degenerate():
            series = bogoliubov(Interaction(4, self.cutoffs), monomial([(ORIGIN, 2)]), 1)
            reduced = vacuum_reduce(series[1])
            return 0 if reduced.is_zero else len(reduced)

        def vacuum_limit():
            series = bogoliubov(Interaction(3, self.cutoffs), monomial([(ORIGIN, 3)]), 1)
            vacuum = expectation(StateSpec.vacuum(), series, 1, ev, self.cutoffs, "radial")
            cold = expectation(StateSpec.thermal(40.0 / m), series, 1, ev, self.cutoffs, "radial")
            return _relative(cold.value, vacuum.value)

        self._record("tree-bound", "integral of exp(-m|x|) equals 8 pi / m^3", tree_bound, 2.0)
        self._record("thermal-kms-two-point", "KMS condition of the free thermal state", kms_two_point, 1e-9)
        self._record("first-order-oracle", "MC agrees with the radial oracle", first_order_oracle, 2.0)
        self._record("degenerate-observable", "unbalanced legs pair to zero", degenerate, 0, scaled=False)
        self._record("zero-temperature-limit", "thermal expectation tends to the vacuum one", vacuum_limit, 1e-6)

    # ------------------------------------------------------------------
    # отчет
    # ------------------------------------------------------------------
    def run(self, suite: str) -> dict:
        if suite not in SUITES:
            raise ParameterError(f"unknown suite '{suite}', expected one of {', '.join(SUITES)}")
        runners: Dict[str, Callable[[], None]] = {
            "propagators": self.run_propagators,
            "algebra": self.run_algebra,
            "smatrix": self.run_smatrix,
            "states": self.run_states,
        }
        self.logger.info(f"🚀 Verification suite '{suite}' (seed={self.seed}, tol_scale={self.tol_scale:g})")
        self.checks = []
        for name in (runners if suite == "all" else (suite,)):
            runners[name]()
        passed = all(c.passed for c in self.checks)
        failed = sum(not c.passed for c in self.checks)
        if passed:
            self.logger.info(f"✅ All {len(self.checks)} checks passed")
        else:
            self.logger.error(f"❌ {failed} of {len(self.checks)} checks failed")
        return {
            "suite": suite,
            "seed": self.seed,
            "tol_scale": self.tol_scale,
            "checks": [c.to_dict() for c in self.checks],
            "passed": passed,
            "timestamp": datetime.now().isoformat(),
        }


def run_suite(suite: str, seed: int = 0, tol_scale: float = VERIFY_DEFAULTS["tol_scale"],
              params: Optional[ModelParams] = None) -> dict:
    return VerificationSuite(seed, tol_scale, params).run(suite)


def report_to_json(report: dict) -> str:
    def finite(value):
        return value if not isinstance(value, float) or math.isfinite(value) else str(value)

    cleaned = dict(report)
    cleaned["checks"] = [{k: finite(v) for k, v in check.items()} for check in report["checks"]]
    return json.dumps(cleaned, indent=2, ensure_ascii=False)
