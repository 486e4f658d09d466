"""Quadratic-interaction tables, slaved-mode coefficients, amplitude model."""
import math

import numpy as np
import pytest

from rotabouss.errors import SigmaOutOfRange
from rotabouss.params import PI, PI_SQ, PhysicalParams, WaveIndex
from rotabouss.reduction import (amplitude_model, amplitude_rhs,
                                 center_manifold_coeffs, cm_mode_field,
                                 delta, integrate_amplitude,
                                 interaction_integrals, predicted_radius)
from rotabouss.verify import HOPF_EXAMPLE, STEADY_EXAMPLE

R_C1_STEADY = 658.042658053463
DELTA_ORACLE = -0.0833441617643971


def _onset_params():
    return STEADY_EXAMPLE.with_rayleigh(R_C1_STEADY)


def test_interaction_table_frozen_entries():
    table = interaction_integrals(_onset_params(), 1, 0.0)
    g11 = table.forward[(1, 1)]
    assert g11["t_sin_2z"] == pytest.approx(-0.1056380710895, rel=1e-10)
    assert g11["v_sin_2x"] == pytest.approx(0.07420878779482, rel=1e-10)


def test_interaction_table_structure():
    table = interaction_integrals(_onset_params(), 1, 0.0)
    fwd = table.forward
    assert set(fwd) == {(1, 1), (1, 2), (2, 1), (2, 2)}
    # the quarter-shifted diagonal flips the shear entry, keeps the thermal
    assert fwd[(2, 2)]["v_sin_2x"] == pytest.approx(-fwd[(1, 1)]["v_sin_2x"],
                                                    rel=1e-14)
    assert fwd[(2, 2)]["t_sin_2z"] == pytest.approx(fwd[(1, 1)]["t_sin_2z"],
                                                    rel=1e-14)
    # cross terms carry the pure-u entry with opposite signs
    k = PI_SQ / (2.0 * table.base_wavenumber)
    assert fwd[(1, 2)]["u_cos_2z"] == pytest.approx(-k, rel=1e-14)
    assert fwd[(2, 1)]["u_cos_2z"] == pytest.approx(k, rel=1e-14)
    # dual table uses adjoint coefficients: thermal entry scales by sigma R
    p = _onset_params()
    scale = p.sigma * p.rayleigh
    assert table.dual[(1, 1)]["t_sin_2z"] == pytest.approx(
        scale * fwd[(1, 1)]["t_sin_2z"], rel=1e-12)


def test_interaction_table_validation():
    with pytest.raises(ValueError):
        interaction_integrals(_onset_params(), 0, 0.0)
    with pytest.raises(ValueError):
        interaction_integrals(_onset_params(), 1, 1.0j)


def test_center_manifold_coeffs_frozen():
    cm = center_manifold_coeffs(_onset_params(), 1, R_C1_STEADY)
    assert cm.shear_sin_coeff == pytest.approx(-0.000414839735093, rel=1e-9)
    assert cm.shear_cos_coeff == cm.shear_sin_coeff
    assert cm.thermal_coeff == pytest.approx(-0.00267584360012, rel=1e-9)
    s, c, t = cm.evaluate(2.0, 1.0)
    assert s == pytest.approx(cm.shear_sin_coeff * 3.0, rel=1e-14)
    assert c == pytest.approx(cm.shear_cos_coeff * 4.0, rel=1e-14)
    assert t == pytest.approx(cm.thermal_coeff * 5.0, rel=1e-14)


def test_cm_mode_fields():
    p = _onset_params()
    shear = cm_mode_field(p, 1, "shear_sin", 32, 17)
    assert np.max(np.abs(shear.u)) == 0.0 and np.max(np.abs(shear.T)) == 0.0
    a = p.alpha1
    want = -2.0 * a * np.sin(2.0 * a * shear.x)
    assert np.allclose(shear.v[:, 0], want, atol=1e-12)
    thermal = cm_mode_field(p, 1, "thermal", 32, 17)
    assert np.max(np.abs(thermal.v)) == 0.0
    assert np.allclose(thermal.T[0, :], np.sin(2.0 * PI * thermal.z),
                       atol=1e-12)
    with pytest.raises(ValueError):
        cm_mode_field(p, 1, "bogus", 32, 17)


def test_delta_frozen_and_negative():
    d = delta(STEADY_EXAMPLE, 1)
    assert d < 0.0
    assert d == pytest.approx(DELTA_ORACLE, rel=1e-12)


def test_delta_rejects_small_sigma():
    with pytest.raises(SigmaOutOfRange):
        delta(HOPF_EXAMPLE, 1)


def test_amplitude_model_predictions():
    model = amplitude_model(STEADY_EXAMPLE, 1)
    assert model.r_crit == pytest.approx(R_C1_STEADY, rel=1e-13)
    assert model.delta == pytest.approx(DELTA_ORACLE, rel=1e-12)
    r_run = 1.05 * model.r_crit
    assert model.beta_of_r(r_run) == pytest.approx(0.490511164227, rel=1e-10)
    assert predicted_radius(model, r_run) == pytest.approx(2.42597799226,
                                                           rel=1e-9)
    assert predicted_radius(model, model.r_crit) <= 1e-6
    with pytest.raises(ValueError):
        predicted_radius(model, 0.9 * model.r_crit)


def test_amplitude_flow_saturates_at_predicted_radius():
    model = amplitude_model(STEADY_EXAMPLE, 1)
    r_run = 1.05 * model.r_crit
    traj = integrate_amplitude(model, r_run, 1e-3, 0.0, t_end=60.0, dt=1e-2)
    radius = math.hypot(traj[-1, 1], traj[-1, 2])
    assert radius == pytest.approx(predicted_radius(model, r_run), rel=1e-6)
    # below onset the origin attracts
    traj_lo = integrate_amplitude(model, 0.95 * model.r_crit, 1e-3, 1e-3,
                                  t_end=60.0, dt=1e-2)
    assert math.hypot(traj_lo[-1, 1], traj_lo[-1, 2]) < 1e-12


def test_amplitude_flow_rotational_symmetry():
    """The planar cubic field commutes with rotations: evaluating after a
    rotation equals rotating the evaluation."""
    model = amplitude_model(STEADY_EXAMPLE, 1)
    beta = model.beta_of_r(1.02 * model.r_crit)
    theta = 0.7
    c, s = math.cos(theta), math.sin(theta)
    x, y = 0.8, -0.4
    fx, fy = amplitude_rhs(x, y, beta, model.delta)
    gx, gy = amplitude_rhs(c * x - s * y, s * x + c * y, beta, model.delta)
    assert gx == pytest.approx(c * fx - s * fy, rel=1e-12)
    assert gy == pytest.approx(s * fx + c * fy, rel=1e-12)


def test_integrate_amplitude_validation():
    model = amplitude_model(STEADY_EXAMPLE, 1)
    with pytest.raises(ValueError):
        integrate_amplitude(model, model.r_crit, 1.0, 0.0, 1.0, dt=0.0)
