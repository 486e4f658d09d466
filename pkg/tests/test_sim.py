"""Pseudo-spectral solver: projection, conservation, stepping, diagnostics."""
import math
import warnings

import numpy as np
import pytest

from rotabouss.errors import BlowUp, InsufficientOscillations, OutOfLattice
from rotabouss.params import PI, PhysicalParams, SpaceFlag, WaveIndex
from rotabouss.reduction import amplitude_model, predicted_radius
from rotabouss.sim import (SimConfig, SimState, divergence_max, energies,
                           load_checkpoint, measure_period_series,
                           mode_amplitude, nonlinear_term, project_divfree,
                           run, save_checkpoint, seed_from_eigenvector, step,
                           translate, zero_state)
from rotabouss.verify import STEADY_EXAMPLE

GROWTH_AT_700 = 0.6236676429300163    # leading rate of mode (1,0,1) at R=700


def _seed_cfg(**kw):
    p = kw.pop("params", STEADY_EXAMPLE)
    kw.setdefault("seed_mode", WaveIndex.make(1, 0, 1, p))
    return SimConfig(params=p, **kw)


def _random_divfree_state(cfg, seed=7):
    rng = np.random.default_rng(seed)
    shape = (cfg.jx + 1, cfg.nz + 1)

    def rnd():
        return rng.normal(size=shape) + 1j * rng.normal(size=shape)

    u, v, w, T = rnd(), rnd(), rnd(), rnd()
    for arr in (u, v, w, T):
        arr[0, :] = arr[0, :].real
    u[:, 0] = 0.0
    v[0, 0] = 0.0
    w[0, :] = 0.0
    w[:, 0] = 0.0
    T[:, 0] = 0.0
    u, w = project_divfree(u, w, cfg)
    return SimState(u=u, v=v, w=w, T=T)


@pytest.fixture(scope="module")
def coarse_saturated():
    """Saturated steady state of the standard supercritical example on a
    coarse grid; shared by the outcome and grid-refinement tests."""
    cfg = _seed_cfg(nx=32, nz=16, dt=2e-3, t_end=60.0, seed_amp=1e-4,
                    scheme="imex2", symmetry=SpaceFlag.SymmetricSpace)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        diag, state = run(cfg, return_state=True)
    return cfg, diag, state


def test_projection_divfree_and_idempotent():
    cfg = _seed_cfg(nx=36, nz=12)
    st = _random_divfree_state(cfg)
    peak = max(np.max(np.abs(st.u)), np.max(np.abs(st.w)), 1.0)
    assert divergence_max(st, cfg) <= 1e-12 * peak
    u2, w2 = project_divfree(st.u, st.w, cfg)
    assert np.allclose(u2, st.u, atol=1e-13 * peak)
    assert np.allclose(w2, st.w, atol=1e-13 * peak)


def test_projection_kills_gradient():
    cfg = _seed_cfg(nx=36, nz=12)
    rng = np.random.default_rng(3)
    shape = (cfg.jx + 1, cfg.nz + 1)
    phi = rng.normal(size=shape) + 1j * rng.normal(size=shape)
    jj = np.arange(cfg.jx + 1)[:, None]
    ll = np.arange(cfg.nz + 1)[None, :]
    u_g = 1j * jj * cfg.params.alpha1 * phi   # d/dx of a cos-parity scalar
    w_g = -ll * PI * phi                      # d/dz maps cos(l pi z) -> sin
    u_p, w_p = project_divfree(u_g, w_g, cfg)
    scale = max(np.max(np.abs(u_g)), np.max(np.abs(w_g)))
    assert np.max(np.abs(u_p)) <= 1e-12 * scale
    assert np.max(np.abs(w_p)) <= 1e-12 * scale


def test_zero_state_is_fixed_point():
    for scheme in ("imex1", "imex2"):
        cfg = _seed_cfg(nx=24, nz=8, dt=1e-3, scheme=scheme)
        nxt = step(zero_state(cfg), cfg)
        for arr in (nxt.u, nxt.v, nxt.w, nxt.T):
            assert np.max(np.abs(arr)) == 0.0
        assert nxt.t == pytest.approx(1e-3)
        tends = nonlinear_term(zero_state(cfg), cfg)
        assert all(np.max(np.abs(t)) == 0.0 for t in tends)


def _energy_pairing(cfg, state, tends):
    """Rates d(KE)/dt and d(TE)/dt from given tendencies, plus size scales."""
    tu, tv, tw, tT = tends
    wx = np.full(cfg.jx + 1, 2.0)
    wx[0] = 1.0
    wz_cos = np.full(cfg.nz + 1, 0.5)
    wz_cos[0] = 1.0
    wz_sin = np.full(cfg.nz + 1, 0.5)
    cell = 2.0 * PI / cfg.params.alpha1
    wc = wx[:, None] * wz_cos[None, :]
    ws = wx[:, None] * wz_sin[None, :]

    def pair(weight, c, t):
        return cell * float(np.sum(weight * np.real(np.conj(c) * t)))

    def mag(weight, c, t):
        return cell * float(np.sum(weight * np.abs(c) * np.abs(t)))

    ke_rate = (pair(wc, state.u, tu) + pair(wc, state.v, tv)
               + pair(ws, state.w, tw))
    te_rate = pair(ws, state.T, tT)
    ke_scale = (mag(wc, state.u, tu) + mag(wc, state.v, tv)
                + mag(ws, state.w, tw))
    te_scale = mag(ws, state.T, tT)
    return ke_rate, te_rate, ke_scale, te_scale


def test_advection_is_energy_neutral():
    """With exact product evaluation and a divergence-free advecting field,
    advection moves kinetic and thermal energy between modes without creating
    or destroying either total."""
    cfg = _seed_cfg(nx=36, nz=12)
    st = _random_divfree_state(cfg, seed=11)
    tends = nonlinear_term(st, cfg)
    ke_rate, te_rate, ke_scale, te_scale = _energy_pairing(cfg, st, tends)
    assert abs(ke_rate) <= 1e-11 * ke_scale
    assert abs(te_rate) <= 1e-11 * te_scale
    # projecting the velocity tendencies does not change the pairing
    tu, tw = project_divfree(tends[0], tends[2], cfg)
    ke2, _, _, _ = _energy_pairing(cfg, st, (tu, tends[1], tw, tends[3]))
    assert abs(ke2) <= 1e-11 * ke_scale


def test_linear_growth_matches_spectrum():
    cfg = _seed_cfg(nx=24, nz=8, dt=1e-3, t_end=1.0, seed_amp=1e-6,
                    scheme="imex2", nonlinear=False)
    st = seed_from_eigenvector(cfg, cfg.seed_amp)
    a0 = abs(mode_amplitude(st, "w", 1, 1))
    n = 1000
    for _ in range(n):
        st = step(st, cfg)
    rate = math.log(abs(mode_amplitude(st, "w", 1, 1)) / a0) / (n * cfg.dt)
    assert abs(rate - GROWTH_AT_700) <= 1e-4


def test_saturated_run_is_steady(coarse_saturated):
    cfg, diag, state = coarse_saturated
    assert diag.outcome == "steady"
    assert float(np.max(diag.div_max)) <= 1e-10
    amp = abs(diag.wmode[-1])
    model = amplitude_model(cfg.params, 1)
    pred = predicted_radius(model, cfg.params.rayleigh)
    assert abs(amp - pred) / pred < 0.05
    # the early exponential phase follows the linear rate
    early = (diag.t > 1.0) & (diag.t < 8.0)
    rates = diag.growth_rate[early]
    assert np.median(rates) == pytest.approx(GROWTH_AT_700, rel=0.05)


def test_grid_refinement_keeps_amplitude(coarse_saturated):
    cfg, diag, state = coarse_saturated
    amp_coarse = abs(mode_amplitude(state, "w", 1, 1))
    fine = _seed_cfg(nx=2 * cfg.nx, nz=2 * cfg.nz, dt=cfg.dt, t_end=15.0,
                     seed_amp=0.0, scheme="imex2",
                     symmetry=SpaceFlag.SymmetricSpace)
    warm = zero_state(fine)
    nj, nl = state.u.shape
    warm.u[:nj, :nl] = state.u
    warm.v[:nj, :nl] = state.v
    warm.w[:nj, :nl] = state.w
    warm.T[:nj, :nl] = state.T
    warm.t = state.t
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        diag2, final = run(fine, state=warm, return_state=True)
    amp_fine = abs(mode_amplitude(final, "w", 1, 1))
    assert abs(amp_fine - amp_coarse) / amp_coarse < 0.01
    assert float(np.max(diag2.div_max)) <= 1e-10


def test_full_space_run_preserves_symmetric_subspace():
    """A state in the odd/even subspace stays there under the full-space
    dynamics: the discretization inherits the reflection equivariance."""
    cfg = _seed_cfg(nx=24, nz=12, dt=2e-3, seed_amp=0.5, scheme="imex2",
                    symmetry=SpaceFlag.FullSpace)
    st = seed_from_eigenvector(cfg, cfg.seed_amp)
    for _ in range(300):
        st = step(st, cfg)
    peak = max(float(np.max(np.abs(a))) for a in (st.u, st.v, st.w, st.T))
    residual = max(float(np.max(np.abs(st.u.real))),
                   float(np.max(np.abs(st.v.real))),
                   float(np.max(np.abs(st.w.imag))),
                   float(np.max(np.abs(st.T.imag))))
    assert residual <= 1e-13 * peak


def test_checkpoint_roundtrip(tmp_path):
    cfg = _seed_cfg(nx=24, nz=8)
    st = seed_from_eigenvector(cfg, 0.25)
    st.t = 3.125
    path = str(tmp_path / "state.ck")
    save_checkpoint(st, cfg, path)
    back, nx, nz = load_checkpoint(path)
    assert (nx, nz) == (24, 8)
    assert back.t == st.t
    for a, b in zip((back.u, back.v, back.w, back.T),
                    (st.u, st.v, st.w, st.T)):
        assert np.array_equal(a, b)

    bad = tmp_path / "bad.ck"
    bad.write_bytes(b"NOTACHECKPOINT")
    with pytest.raises(ValueError):
        load_checkpoint(str(bad))
    short = tmp_path / "short.ck"
    header = b"RBSIM1" + np.array([24, 8, 9, 9], "<u4").tobytes() + bytes(8)
    short.write_bytes(header)          # header promises a payload, none follows
    with pytest.raises(ValueError):
        load_checkpoint(str(short))


def test_translate_preserves_energy_and_period_returns():
    cfg = _seed_cfg(nx=24, nz=8)
    st = seed_from_eigenvector(cfg, 0.3)
    ke0, te0 = energies(st, cfg)
    moved = translate(st, 0.37, cfg)
    ke1, te1 = energies(moved, cfg)
    assert ke1 == pytest.approx(ke0, rel=1e-12)
    assert te1 == pytest.approx(te0, rel=1e-12)
    full = translate(st, 2.0 * PI / cfg.params.alpha1, cfg)
    peak = float(np.max(np.abs(st.w)))
    for a, b in zip((full.u, full.v, full.w, full.T),
                    (st.u, st.v, st.w, st.T)):
        assert np.allclose(a, b, atol=1e-12 * max(peak, 1.0))


def test_measure_period_synthetic_series():
    t = np.arange(0.0, 30.0 + 1e-12, 0.01)
    y = np.exp(0.01 * t) * np.sin(4.47 * t)
    period, unc = measure_period_series(t, y)
    want = 2.0 * math.pi / 4.47
    assert abs(period - want) <= 0.01 * want
    assert unc <= 0.01 * want

    t2 = np.arange(0.0, 5.0, 0.001)
    period2, unc2 = measure_period_series(t2, np.sin(2.0 * PI * t2))
    assert period2 == pytest.approx(1.0, abs=1e-6)
    assert unc2 <= 1e-4

    with pytest.raises(InsufficientOscillations):
        measure_period_series(t2, np.exp(0.05 * t2))
    with pytest.raises(ValueError):
        measure_period_series(t2, np.ones((3, 3)))


def test_runaway_amplitude_raises():
    cfg = _seed_cfg(params=STEADY_EXAMPLE.with_rayleigh(1e8), nx=12, nz=4,
                    dt=1e-2, t_end=1.0, seed_amp=1.0, scheme="imex1")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        with pytest.raises(BlowUp):
            run(cfg)


def test_seed_validation():
    cfg = _seed_cfg(nx=12, nz=4)
    zero = seed_from_eigenvector(cfg, 0.0)
    assert all(np.max(np.abs(a)) == 0.0
               for a in (zero.u, zero.v, zero.w, zero.T))
    with pytest.raises(ValueError):
        seed_from_eigenvector(cfg, -1e-3)

    p = STEADY_EXAMPLE
    with pytest.raises(ValueError):
        SimConfig(params=p, nx=12, nz=4,
                  seed_mode=WaveIndex.make(1, 1, 1, p))
    mean_mode = _seed_cfg(nx=12, nz=4, seed_mode=WaveIndex.make(0, 0, 1, p))
    with pytest.raises(OutOfLattice):
        seed_from_eigenvector(mean_mode, 1e-4)
    beyond = _seed_cfg(nx=12, nz=4, seed_mode=WaveIndex.make(5, 0, 1, p))
    with pytest.raises(ValueError):
        seed_from_eigenvector(beyond, 1e-4)
    unset = SimConfig(params=p, nx=12, nz=4, seed_mode=None)
    with pytest.raises(ValueError):
        seed_from_eigenvector(unset, 1e-4)


def test_cfl_advisory_warning():
    cfg = _seed_cfg(nx=12, nz=4, dt=0.05, seed_amp=50.0, scheme="imex1")
    st = seed_from_eigenvector(cfg, cfg.seed_amp)
    with pytest.warns(RuntimeWarning):
        step(st, cfg)


def test_subcritical_run_decays():
    cfg = _seed_cfg(params=STEADY_EXAMPLE.with_rayleigh(600.0), nx=24, nz=8,
                    dt=1e-3, t_end=1.0, seed_amp=1e-3, scheme="imex1")
    diag = run(cfg)
    assert diag.ke[-1] < diag.ke[0]
    assert float(np.max(diag.div_max)) <= 1e-10


def test_config_validation():
    p = STEADY_EXAMPLE
    with pytest.raises(ValueError):
        SimConfig(params=p, nx=10, nz=8)
    with pytest.raises(ValueError):
        SimConfig(params=p, nx=24, nz=2)
    with pytest.raises(ValueError):
        SimConfig(params=p, nx=24, nz=8, dt=0.0)
    with pytest.raises(ValueError):
        SimConfig(params=p, nx=24, nz=8, t_end=-1.0)
    with pytest.raises(ValueError):
        SimConfig(params=p, nx=24, nz=8, diag_every=0.0)
    with pytest.raises(ValueError):
        SimConfig(params=p, nx=24, nz=8, scheme="rk4")
