#!/usr/bin/env python3
"""
Тесты параметров модели, гауссова ядра и срезок
"""

import math

import numpy as np
import pytest
from scipy import integrate

from model.cutoffs import (CutoffSpec, TemporalWeight, bump, chi, chi_dot, chi_dot_minus, chi_on, cutoff_eval,
                           spatial_cutoff, temporal_weight)
from model.geometry import Event, ModelParams, euclidean_square, minkowski_square
from model.kernels import (PlaneWaveConfig, gaussian_convolution, gaussian_kernel, gaussian_normalization_check,
                           mean_square_identity, smear_plane_wave)
from utils.errors import DomainError, ParameterError


@pytest.mark.parametrize("m, lam", [(0.0, 1.0), (1.0, -1.0), (float("nan"), 1.0), (1.0, float("inf"))])
def test_model_params_rejects_invalid(m, lam):
    with pytest.raises(ParameterError):
        ModelParams(m, lam)


def test_damping_offset():
    params = ModelParams(2.0, 0.5)
    assert params.damping_offset == pytest.approx(math.exp(-1.0))


def test_event_rejects_upper_half_plane():
    with pytest.raises(DomainError):
        Event(0.0, u=-0.1)


def test_event_separation():
    x = Event(1.0, (3.0, 0.0, 0.0))
    y = Event(0.25, (0.0, 4.0, 0.0))
    assert x.separation(y) == pytest.approx((0.75, 5.0))


def test_euclidean_and_minkowski_squares():
    v = np.array([1.0, 2.0, 0.0, 0.0])
    assert euclidean_square(v) == pytest.approx(5.0)
    assert minkowski_square(v) == pytest.approx(3.0)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
@pytest.mark.parametrize("lam", [0.5, 1.0])
def test_gaussian_normalization(n, lam):
    assert gaussian_normalization_check(n, lam) == pytest.approx(1.0, abs=1e-10)


def test_gaussian_semigroup():
    x = Event(0.3, (0.1, -0.2, 0.4))
    lam1, lam2 = 0.5, 0.7
    expected = gaussian_kernel(x, math.hypot(lam1, lam2))
    assert gaussian_convolution(x, lam1, lam2) == pytest.approx(expected, rel=1e-8)


def test_gaussian_kernel_needs_real_point():
    with pytest.raises(DomainError):
        gaussian_kernel(Event(0.0, u=0.5), 1.0)


def test_mean_square_identity():
    points = [Event(0.1, (1.0, 0.0, 0.0)), Event(-0.4, (0.0, 2.0, 1.0)), Event(0.7, (0.5, -1.0, 0.0))]
    lhs, rhs = mean_square_identity(points, Event(0.2, (0.3, 0.3, -0.3)))
    assert lhs == pytest.approx(rhs, rel=1e-12)


def test_smearing_damps_plane_waves():
    amplitude, k = smear_plane_wave(2.0, (1.0, 0.0, 1.0, 0.0), 0.5)
    assert k == (1.0, 0.0, 1.0, 0.0)
    assert amplitude == pytest.approx(2.0 * math.exp(-0.25))

    smeared = PlaneWaveConfig.single(2.0, (1.0, 0.0, 1.0, 0.0)).smeared(0.5)
    assert smeared.waves[0].amplitude == pytest.approx(amplitude)


def test_plane_wave_field():
    config = PlaneWaveConfig.single(0.5j, (0.3, 1.0, 0.0, 0.0))
    value = config.field(0.2, np.array([0.7, 0.0, 0.0]))
    assert complex(value) == pytest.approx(0.5j * np.exp(1j * (-0.3 * 0.2 + 0.7)))
    assert PlaneWaveConfig().is_zero


def test_bump_profile():
    assert float(bump(0.0)) == 0.0
    assert float(bump(1.0)) == 1.0
    assert float(bump(0.5)) == pytest.approx(0.5)


def test_chi_plateau_and_support(cutoffs):
    plateau = np.linspace(-cutoffs.eps, cutoffs.T, 11)
    assert np.allclose(chi(cutoffs, plateau), 1.0)
    assert float(chi(cutoffs, -2.0 * cutoffs.eps)) == 0.0
    assert float(chi(cutoffs, cutoffs.T + cutoffs.eps)) == 0.0
    assert cutoffs.temporal_support == (-1.0, 1.5)


def test_chi_dot_minus_integrates_to_one(cutoffs):
    value, _ = integrate.quad(lambda s: float(chi_dot_minus(cutoffs, s)), -2.0 * cutoffs.eps, -cutoffs.eps,
                              epsabs=1e-12)
    assert value == pytest.approx(1.0, abs=1e-8)


def test_chi_dot_matches_finite_difference(cutoffs):
    t, h = -1.3 * cutoffs.eps, 1e-5
    numeric = (float(chi(cutoffs, t + h)) - float(chi(cutoffs, t - h))) / (2 * h)
    assert float(chi_dot(cutoffs, t)) == pytest.approx(numeric, abs=1e-6)


def test_spatial_cutoff(cutoffs):
    assert float(spatial_cutoff(cutoffs, cutoffs.R)) == 1.0
    assert float(spatial_cutoff(cutoffs, cutoffs.R + cutoffs.delta)) == 0.0
    assert cutoff_eval(cutoffs, "spatial", (cutoffs.R + cutoffs.delta + 0.1, 0.0, 0.0)) == 0.0
    assert cutoff_eval(cutoffs, "temporal", 0.0) == 1.0
    with pytest.raises(ParameterError):
        cutoff_eval(cutoffs, "radial", 0.0)


def test_cutoff_spec_validation():
    with pytest.raises(ParameterError):
        CutoffSpec(eps=1.0, T=0.5, R=1.0, delta=0.1)
    with pytest.raises(ParameterError):
        CutoffSpec(eps=0.5, T=1.0, R=0.0, delta=0.1)


def test_cocycle_remainder_weight_at_zero_time(cutoffs):
    s = np.linspace(-1.0, 1.5, 9)
    weight = temporal_weight(TemporalWeight.COCYCLE_REMAINDER, cutoffs, s, 0.0)
    assert np.allclose(weight, chi(cutoffs, s))


def test_cocycle_remainder_weight_moves_switch_on(cutoffs):
    t = 0.6
    s = np.linspace(-1.0, 2.0, 13)
    weight = temporal_weight(TemporalWeight.COCYCLE_REMAINDER, cutoffs, s, t, plateau_end=2.0)
    expected = chi(cutoffs, s, 2.0) - chi_on(cutoffs, s) + chi_on(cutoffs, s - t)
    assert np.allclose(weight, expected)
