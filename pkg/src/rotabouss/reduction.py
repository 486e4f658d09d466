"""Center-manifold reduction near the steady convection onset.

Near the first steady critical Rayleigh number the dynamics collapse onto a
two-dimensional center manifold spanned by the translation pair of critical
modes.  Their quadratic self-interaction excites three slaved modes — the two
mean-shear harmonics at twice the critical horizontal wavenumber and the
second thermal harmonic — whose feedback produces a rotationally symmetric
planar cubic system

    dx/dt = beta(R) x + delta (x^2 + y^2) x,
    dy/dt = beta(R) y + delta (x^2 + y^2) y,

with delta < 0, so the bifurcated attractor is the circle of radius
sqrt(-beta/delta).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .critical import f_b, check_c6
from .errors import PositiveDelta
from .fields import FieldOnGrid, make_grid, zero_field
from .params import PI, PI_SQ, PhysicalParams, WaveIndex
from .spectrum import cubic_coeffs, eigvec_coeffs, solve_cubic

# Entry keys name the receiving component and its carrier function:
# v_sin_2x : v-component on sin(2 j1 alpha1 x)   (mean-shear harmonic)
# v_cos_2x : v-component on cos(2 j1 alpha1 x)   (mean-shear harmonic)
# u_cos_2z : u-component on cos(2 pi z)          (depth-dependent mean flow)
# v_cos_2z : v-component on cos(2 pi z)          (depth-dependent mean flow)
# t_sin_2z : temperature on sin(2 pi z)          (second thermal harmonic)


@dataclass(frozen=True)
class InteractionTable:
    """Nonzero mode projections of the critical-pair quadratic interactions.

    forward[(i, j)] holds the projections of the advective interaction of
    critical mode i acting on critical mode j; dual[(i, j)] holds the same
    with the dual (adjoint) eigenvector in the second slot.  All entries are
    real coefficients on the carrier functions named by the keys.
    """

    j1: int
    base_wavenumber: float       # j1 * alpha1
    forward: dict
    dual: dict


def _table_entries(a: float, c1: float, c2: float) -> dict:
    """Interaction entries for eigenvector pair coefficients (c1, c2).

    The same closed forms serve the forward table (with the eigenvector's own
    coefficients) and the dual table (with the adjoint coefficients): the
    advected field enters linearly through its v- and T-coefficients.
    """
    k = PI_SQ / (2.0 * a)
    return {
        (1, 1): {"v_sin_2x": -c1 * k, "t_sin_2z": -c2 * PI / 2.0},
        (1, 2): {"u_cos_2z": -k, "v_cos_2z": -c1 * k, "v_cos_2x": c1 * k},
        (2, 1): {"u_cos_2z": k, "v_cos_2z": c1 * k, "v_cos_2x": c1 * k},
        (2, 2): {"v_sin_2x": c1 * k, "t_sin_2z": -c2 * PI / 2.0},
    }


def interaction_integrals(params: PhysicalParams, j1: int,
                          beta: float) -> InteractionTable:
    """Closed-form quadratic-interaction projections of the critical pair.

    beta must be real (the steady branch); the eigenvector coefficients are
    evaluated at that eigenvalue.
    """
    if j1 < 1:
        raise ValueError("j1 must be a positive integer")
    b = complex(beta)
    if b.imag != 0.0:
        raise ValueError("interaction table needs a real eigenvalue")
    idx = WaveIndex.make(j1, 0, 1, params)
    ev = eigvec_coeffs(b.real, params, idx)
    a = j1 * params.alpha1
    fwd = _table_entries(a, float(np.real(ev.a1)), float(np.real(ev.a2)))
    dua = _table_entries(a, float(np.real(ev.c1d)), float(np.real(ev.c2d)))
    return InteractionTable(j1=j1, base_wavenumber=a, forward=fwd, dual=dua)


@dataclass(frozen=True)
class CenterManifoldCoeffs:
    """Quadratic-form coefficients of the three slaved-mode amplitudes.

    With planar coordinates (x, y) on the center manifold:
      shear_sin amplitude = shear_sin_coeff * (x^2 - y^2)
      shear_cos amplitude = shear_cos_coeff * (2 x y)
      thermal   amplitude = thermal_coeff   * (x^2 + y^2)
    against the generator fields (0, -2 j1 a1 sin(2 j1 a1 x), 0, 0),
    (0, 2 j1 a1 cos(2 j1 a1 x), 0, 0) and (0, 0, 0, sin(2 pi z)).
    """

    j1: int
    shear_sin_coeff: float
    shear_cos_coeff: float
    thermal_coeff: float

    def evaluate(self, x: float, y: float) -> tuple[float, float, float]:
        return (self.shear_sin_coeff * (x * x - y * y),
                self.shear_cos_coeff * (2.0 * x * y),
                self.thermal_coeff * (x * x + y * y))


def center_manifold_coeffs(params: PhysicalParams, j1: int,
                           R: float) -> CenterManifoldCoeffs:
    """Slaved-mode amplitude coefficients near onset.

    The coefficients are evaluated in the onset limit (critical eigenvalue
    zero); R is accepted for interface consistency with the rest of the
    reduction and must be positive.
    """
    if j1 < 1:
        raise ValueError("j1 must be a positive integer")
    if R <= 0.0:
        raise ValueError("R must be positive")
    idx = WaveIndex.make(j1, 0, 1, params)
    ev = eigvec_coeffs(0.0, params, idx)
    a1 = float(np.real(ev.a1))
    a2 = float(np.real(ev.a2))
    alpha4_shear = params.alpha_sq(2 * j1, 0) ** 2
    shear = a1 * PI_SQ / (params.sigma * alpha4_shear)
    thermal = -a2 / (8.0 * PI)
    return CenterManifoldCoeffs(j1=j1, shear_sin_coeff=shear,
                                shear_cos_coeff=shear, thermal_coeff=thermal)


def cm_mode_field(params: PhysicalParams, j1: int, name: str,
                  nx: int = 64, nz: int = 32) -> FieldOnGrid:
    """One slaved-mode generator sampled on a collocation grid.

    name is one of "shear_sin", "shear_cos", "thermal".
    """
    x, z = make_grid(nx, nz, params.alpha1)
    f = zero_field(nx, nz, params.alpha1)
    xx = x[:, None]
    zz = z[None, :]
    a = j1 * params.alpha1
    if name == "shear_sin":
        v = -2.0 * a * np.sin(2.0 * a * xx) * np.ones_like(zz)
        return f.copy_with(v=v)
    if name == "shear_cos":
        v = 2.0 * a * np.cos(2.0 * a * xx) * np.ones_like(zz)
        return f.copy_with(v=v)
    if name == "thermal":
        T = np.ones_like(xx) * np.sin(2.0 * PI * zz)
        return f.copy_with(T=T)
    raise ValueError(f"unknown slaved mode {name!r}")


def delta(params: PhysicalParams, j1: int) -> float:
    """Cubic coefficient of the reduced planar system at the steady onset.

    Assembled from the dual-side interaction table and the slaved-mode
    amplitudes: the cubic feedback on the critical pair is the projection of
    the interaction of each critical mode with the slaved modes onto the dual
    eigenvectors, normalized by the primal-dual pairing.  Raises PositiveDelta
    if the result is not strictly negative.
    """
    chk = check_c6(params)        # also rejects sigma <= 1
    if chk.status == "fails":
        raise ValueError("single-minimizer condition fails; the reduction "
                         f"is undefined (witness: {chk.witness})")
    if j1 < 1:
        raise ValueError("j1 must be a positive integer")
    sigma = params.sigma
    a = j1 * params.alpha1
    a_sq = a * a
    b1 = PI_SQ / (sigma * sigma * params.ro * params.ro)
    r_onset = f_b(a_sq, b1)
    at_onset = params.with_rayleigh(r_onset)

    table = interaction_integrals(at_onset, j1, 0.0)
    cm = center_manifold_coeffs(at_onset, j1, r_onset)
    idx = WaveIndex.make(j1, 0, 1, at_onset)
    ev = eigvec_coeffs(0.0, at_onset, idx)
    a1c1 = float(np.real(ev.a1 * ev.c1d))
    a2c2 = float(np.real(ev.a2 * ev.c2d))

    # cell-averaged pairings of the carrier functions with the generators
    pair_v_sin = -a           # mean of sin(2ax) * (-2a sin(2ax))
    pair_v_cos = a            # mean of cos(2ax) * (+2a cos(2ax))
    pair_t = 0.5              # mean of sin(2 pi z)^2
    denom = 0.25 * (PI_SQ / a_sq * (1.0 + a1c1) + 1.0 + a2c2)

    g11 = table.dual[(1, 1)]
    g21 = table.dual[(2, 1)]
    cs = cm.shear_sin_coeff
    cc = cm.shear_cos_coeff
    ct = cm.thermal_coeff
    # x-equation cubic term: -(x <G(psi1, Psi1), Phi> + y <G(psi2, Psi1), Phi>)
    # with Phi evaluated as quadratic forms; collect on x^3 and x y^2.
    coeff_x3 = -(g11["v_sin_2x"] * pair_v_sin * cs
                 + g11["t_sin_2z"] * pair_t * ct) / denom
    coeff_xy2 = -(-g11["v_sin_2x"] * pair_v_sin * cs
                  + g11["t_sin_2z"] * pair_t * ct
                  + 2.0 * g21["v_cos_2x"] * pair_v_cos * cc) / denom
    if abs(coeff_x3 - coeff_xy2) > 1e-9 * max(abs(coeff_x3), 1e-300):
        raise ArithmeticError("reduced cubic lost rotational symmetry: "
                              f"{coeff_x3!r} vs {coeff_xy2!r}")
    value = coeff_x3
    if value >= 0.0:
        raise PositiveDelta(f"cubic coefficient {value!r} is not negative")
    return value


@dataclass(frozen=True)
class AmplitudeModel:
    """Reduced planar model at the steady onset of one critical pair."""

    params: PhysicalParams
    j1: int
    r_crit: float
    delta: float
    cm_coeffs: CenterManifoldCoeffs
    beta_of_r: Callable[[float], float]
    radius_pred: Callable[[float], float]


def amplitude_model(params: PhysicalParams, j1: int) -> AmplitudeModel:
    """Build the reduced model: growth rate, cubic coefficient, radius law."""
    d = delta(params, j1)
    sigma = params.sigma
    a_sq = (j1 * params.alpha1) ** 2
    b1 = PI_SQ / (sigma * sigma * params.ro * params.ro)
    r_crit = f_b(a_sq, b1)

    def beta_of_r(R: float) -> float:
        p = params.with_rayleigh(R)
        idx = WaveIndex.make(j1, 0, 1, p)
        roots = solve_cubic(cubic_coeffs(p, idx)).roots
        return max(root.real for root in roots)

    model_box = {}

    def radius_pred(R: float) -> float:
        return predicted_radius(model_box["m"], R)

    m = AmplitudeModel(params=params, j1=j1, r_crit=r_crit, delta=d,
                       cm_coeffs=center_manifold_coeffs(params, j1, r_crit),
                       beta_of_r=beta_of_r, radius_pred=radius_pred)
    model_box["m"] = m
    return m


def predicted_radius(model: AmplitudeModel, R: float) -> float:
    """Radius of the bifurcated circle sqrt(-beta/delta) for R at or above onset."""
    if R < model.r_crit * (1.0 - 1e-12):
        raise ValueError(f"R={R} is below the onset value {model.r_crit}")
    beta = max(model.beta_of_r(R), 0.0)
    return math.sqrt(beta / (-model.delta))


def amplitude_rhs(x: float, y: float, beta: float,
                  delta_coeff: float) -> tuple[float, float]:
    """Right-hand side of the truncated planar system."""
    r_sq = x * x + y * y
    return (beta * x + delta_coeff * r_sq * x,
            beta * y + delta_coeff * r_sq * y)


def integrate_amplitude(model: AmplitudeModel, R: float, x0: float, y0: float,
                        t_end: float, dt: float) -> np.ndarray:
    """Fixed-step fourth-order trajectory of the reduced planar system.

    Returns an array of rows (t, x, y).
    """
    if dt <= 0.0:
        raise ValueError("dt must be positive")
    beta = model.beta_of_r(R)
    d = model.delta
    n = int(round(t_end / dt))
    out = np.empty((n + 1, 3))
    x, y = float(x0), float(y0)
    out[0] = (0.0, x, y)
    for i in range(1, n + 1):
        k1 = amplitude_rhs(x, y, beta, d)
        k2 = amplitude_rhs(x + 0.5 * dt * k1[0], y + 0.5 * dt * k1[1], beta, d)
        k3 = amplitude_rhs(x + 0.5 * dt * k2[0], y + 0.5 * dt * k2[1], beta, d)
        k4 = amplitude_rhs(x + dt * k3[0], y + dt * k3[1], beta, d)
        x += dt / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0])
        y += dt / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1])
        out[i] = (i * dt, x, y)
    return out
