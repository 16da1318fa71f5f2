#!/usr/bin/env python3
"""
Общие фикстуры: параметры модели, квадратура, вычислитель со свежим кэшем,
срезки и конфигурации плоских волн
"""

import numpy as np
import pytest

from model.cutoffs import CutoffSpec
from model.geometry import Event, ModelParams
from model.kernels import PlaneWaveConfig
from propagators.cache import PropagatorCache
from propagators.evaluator import PropagatorEvaluator
from propagators.kinds import QuadratureSpec


@pytest.fixture
def params():
    return ModelParams(1.0, 1.0)


@pytest.fixture
def spec():
    return QuadratureSpec(mc_samples=40_000, seed=11)


@pytest.fixture
def evaluator(params, spec):
    return PropagatorEvaluator(params, spec, PropagatorCache())


@pytest.fixture
def cutoffs():
    return CutoffSpec(eps=0.5, T=1.0, R=2.0, delta=0.5)


@pytest.fixture
def rng():
    return np.random.default_rng(np.random.SeedSequence(1234))


@pytest.fixture
def plane_wave():
    return PlaneWaveConfig.single(0.7 - 0.3j, (0.4, 0.1, -0.2, 0.3))


@pytest.fixture
def random_event(rng):
    def make(t_range=(-0.4, 0.4)):
        return Event(float(rng.uniform(*t_range)), tuple(rng.uniform(-1.0, 1.0, 3).tolist()))
    return make
