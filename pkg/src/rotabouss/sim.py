"""Vertical-slice pseudo-spectral solver for rotating convection.

Fields depend on x and z only (the spanwise velocity v is retained, its
spanwise derivatives vanish).  State is stored spectrally: Fourier modes in x
with the real-field convention f = c_0 + 2 Re sum_{j>=1} c_j exp(i j a1 x),
and parity modes in z — u, v on cos(l pi z) (l = 0..nz), w, T on sin(l pi z)
(l = 1..nz) — so the free-slip boundary conditions hold identically.

Two time steppers share the spatial discretization:
  "imex1": backward-Euler diffusion, forward-Euler everything else, then
           divergence projection — the simplest robust baseline.
  "imex2": Crank-Nicolson on the full per-mode linear block (diffusion,
           rotation, buoyancy, stratification, projection) combined with
           two-step Adams-Bashforth on the projected advection term; this is
           the variant used by the acceptance runs, where the rotation
           frequency is too stiff for an accurate explicit treatment.

Products are evaluated pseudo-spectrally with a 2/3-rule truncation in x and
zero-padded parity transforms in z (products of trigonometric polynomials are
resolved exactly on the padded midpoint grid before truncation).
"""
from __future__ import annotations

import functools
import math
import struct
import warnings
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import BlowUp, InsufficientOscillations, OutOfLattice
from .params import PI, PI_SQ, LatticeClass, PhysicalParams, SpaceFlag, WaveIndex
from .spectrum import cubic_coeffs, eigvec_coeffs, solve_cubic

BLOWUP_LIMIT = 1.0e6


@dataclass(frozen=True)
class SimConfig:
    """Grid, time stepping, and run options for one simulation."""

    params: PhysicalParams
    nx: int = 64
    nz: int = 32
    dt: float = 1.0e-3
    t_end: float = 10.0
    symmetry: SpaceFlag = SpaceFlag.FullSpace
    dealias: bool = True
    seed_mode: WaveIndex | None = None
    seed_amp: float = 1.0e-4
    scheme: str = "imex1"
    nonlinear: bool = True
    diag_every: float = 0.05

    def __post_init__(self):
        if self.nx < 12 or self.nz < 4:
            raise ValueError("grid too small: need nx >= 12, nz >= 4")
        if self.dt <= 0.0:
            raise ValueError("dt must be positive")
        if self.t_end < 0.0:
            raise ValueError("t_end must be non-negative")
        if self.diag_every <= 0.0:
            raise ValueError("diag_every must be positive")
        if self.scheme not in ("imex1", "imex2"):
            raise ValueError(f"unknown scheme {self.scheme!r}")
        if self.seed_mode is not None and self.seed_mode.k != 0:
            raise ValueError("seed_mode must have k = 0 (spanwise-uniform)")

    @property
    def jx(self) -> int:
        """Largest retained x wavenumber index.

        The dealiased band satisfies 3*jx < nx, so quadratic products of
        retained modes (wavenumbers up to 2*jx) cannot alias back into the
        band on the nx-point grid.
        """
        return (self.nx - 1) // 3 if self.dealias else self.nx // 2


@dataclass
class SimState:
    """Spectral coefficients of (u, v, w, T) and the current time.

    Arrays have shape (jx + 1, nz + 1); u, v hold cos(l pi z) coefficients,
    w, T hold sin(l pi z) coefficients with the l = 0 column identically zero.
    prev_advection carries the one-step history of the projected advection
    term for the two-step scheme; it resets across restarts.
    """

    u: np.ndarray
    v: np.ndarray
    w: np.ndarray
    T: np.ndarray
    t: float = 0.0
    prev_advection: tuple | None = None

    def copy(self) -> "SimState":
        return SimState(u=self.u.copy(), v=self.v.copy(), w=self.w.copy(),
                        T=self.T.copy(), t=self.t,
                        prev_advection=self.prev_advection)


@dataclass
class Diagnostics:
    """Time series sampled at the diagnostic cadence."""

    t: np.ndarray
    ke: np.ndarray
    te: np.ndarray
    wmode: np.ndarray          # complex amplitude of the seed (j1, l=1) w-mode
    tmode: np.ndarray          # complex amplitude of the matching T-mode
    growth_rate: np.ndarray
    div_max: np.ndarray
    outcome: str = "none"      # "steady" | "oscillating" | "none"


class _Operators:
    """Precomputed transforms, masks, and per-mode linear solves."""

    def __init__(self, config: SimConfig):
        p = config.params
        nx, nz, jx = config.nx, config.nz, config.jx
        self.nx, self.nz, self.jx = nx, nz, jx
        self.alpha1 = p.alpha1
        self.mz = 2 * (nz + 1) if config.dealias else nz + 1

        j = np.arange(jx + 1)
        l = np.arange(nz + 1)
        self.iqx = 1j * j * p.alpha1                     # d/dx per x-mode
        self.lpi = l * PI
        self.g_sq = (j * p.alpha1)[:, None] ** 2 + (l * PI)[None, :] ** 2

        zm = (np.arange(self.mz) + 0.5) / self.mz        # midpoint z grid
        lz = np.outer(l, zm) * PI                        # (nz+1, mz)
        self.synth_cos = np.cos(lz)                      # coeffs @ -> physical-z
        self.synth_sin = np.sin(lz)
        self.an_cos = (2.0 / self.mz) * np.cos(lz).T     # physical-z @ -> coeffs
        self.an_cos[:, 0] *= 0.5
        self.an_sin = (2.0 / self.mz) * np.sin(lz).T

        jj, ll = np.meshgrid(j, l, indexing="ij")
        self.mask_u = (ll >= 1)
        self.mask_v = ~((jj == 0) & (ll == 0))
        self.mask_w = (jj >= 1) & (ll >= 1)
        self.mask_T = (ll >= 1)

        self._build_linear(config)

    def _build_linear(self, config: SimConfig):
        p = config.params
        sigma, ro, R = p.sigma, p.ro, p.rayleigh
        jx, nz = self.jx, self.nz
        n_modes = (jx + 1, nz + 1)
        g = self.g_sq

        if config.scheme == "imex1":
            self.diff_u = 1.0 / (1.0 + config.dt * sigma * g)
            self.diff_T = 1.0 / (1.0 + config.dt * g)
            return

        # full per-mode linear block, with the projection folded in
        L = np.zeros(n_modes + (4, 4), dtype=complex)
        L[..., 0, 0] = -sigma * g
        L[..., 0, 1] = 1.0 / ro
        L[..., 1, 0] = -1.0 / ro
        L[..., 1, 1] = -sigma * g
        L[..., 2, 2] = -sigma * g
        L[..., 2, 3] = sigma * R
        L[..., 3, 2] = 1.0
        L[..., 3, 3] = -g

        proj = np.zeros(n_modes + (4, 4), dtype=complex)
        proj[..., 1, 1] = 1.0
        proj[..., 3, 3] = 1.0
        qu = self.iqx[:, None] * np.ones(nz + 1)[None, :]
        qw = np.ones(jx + 1)[:, None] * self.lpi[None, :]
        g_safe = np.where(g == 0.0, 1.0, g)
        proj[..., 0, 0] = (qw * qw) / g_safe
        proj[..., 0, 2] = qu * qw / g_safe
        proj[..., 2, 0] = -qu * qw / g_safe
        proj[..., 2, 2] = -(qu * qu).real / g_safe

        mask4 = np.stack([self.mask_u, self.mask_v, self.mask_w, self.mask_T],
                         axis=-1).astype(float)
        M = np.einsum("jlab,jlbc->jlac", proj, L)
        M *= mask4[..., :, None]
        M *= mask4[..., None, :]

        eye = np.broadcast_to(np.eye(4, dtype=complex), M.shape)
        half = 0.5 * config.dt
        self.cn_rhs = eye + half * M
        self.cn_inv = np.linalg.inv(eye - half * M)
        self.cn_step = np.einsum("jlab,jlbc->jlac", self.cn_inv, self.cn_rhs)


@functools.lru_cache(maxsize=16)
def _operators(config: SimConfig) -> _Operators:
    return _Operators(config)


def zero_state(config: SimConfig) -> SimState:
    shape = (config.jx + 1, config.nz + 1)
    return SimState(u=np.zeros(shape, complex), v=np.zeros(shape, complex),
                    w=np.zeros(shape, complex), T=np.zeros(shape, complex))


def _apply_constraints(state: SimState, config: SimConfig,
                       ops: _Operators) -> None:
    state.u *= ops.mask_u
    state.v *= ops.mask_v
    state.w *= ops.mask_w
    state.T *= ops.mask_T
    for arr in (state.u, state.v, state.w, state.T):
        arr[0, :] = arr[0, :].real         # x-mean modes of a real field
    if config.symmetry is SpaceFlag.SymmetricSpace:
        state.u.real = 0.0                 # u, v odd in x
        state.v.real = 0.0
        state.w.imag = 0.0                 # w, T even in x
        state.T.imag = 0.0


def project_divfree(u: np.ndarray, w: np.ndarray,
                    config: SimConfig) -> tuple[np.ndarray, np.ndarray]:
    """Remove the per-mode gradient component from a velocity pair.

    Acts on the (u, w) spectral arrays only; v and T are untouched by the
    projection.  Modes whose divergence-free subspace is trivial (u at l = 0,
    w at j = 0) come back zero.
    """
    ops = _operators(config)
    qu = ops.iqx[:, None]
    qw = ops.lpi[None, :]
    g = ops.g_sq
    g_safe = np.where(g == 0.0, 1.0, g)
    phi = -(qu * u + qw * w) / g_safe
    u_p = (u - phi * qu) * ops.mask_u
    w_p = (w + phi * qw) * ops.mask_w
    return u_p, w_p


def divergence_max(state: SimState, config: SimConfig) -> float:
    ops = _operators(config)
    div = ops.iqx[:, None] * state.u + ops.lpi[None, :] * state.w
    return float(np.max(np.abs(div)))


def _to_phys(coeffs: np.ndarray, zmat: np.ndarray, ops: _Operators) -> np.ndarray:
    zphys = coeffs @ zmat
    buf = np.zeros((ops.nx // 2 + 1, ops.mz), dtype=complex)
    buf[: ops.jx + 1] = zphys * ops.nx
    return np.fft.irfft(buf, n=ops.nx, axis=0)


def _to_spec(phys: np.ndarray, amat: np.ndarray, ops: _Operators) -> np.ndarray:
    c = np.fft.rfft(phys, axis=0)[: ops.jx + 1] / ops.nx
    return c @ amat


def _advection(state: SimState, ops: _Operators):
    """Projected-parity advection tendencies and the physical velocity max."""
    U = _to_phys(state.u, ops.synth_cos, ops)
    W = _to_phys(state.w, ops.synth_sin, ops)
    iqx = ops.iqx[:, None]
    lpi = ops.lpi[None, :]

    dxu = _to_phys(iqx * state.u, ops.synth_cos, ops)
    dzu = _to_phys(-lpi * state.u, ops.synth_sin, ops)   # d/dz cos -> sin
    dxv = _to_phys(iqx * state.v, ops.synth_cos, ops)
    dzv = _to_phys(-lpi * state.v, ops.synth_sin, ops)
    dxw = _to_phys(iqx * state.w, ops.synth_sin, ops)
    dzw = _to_phys(lpi * state.w, ops.synth_cos, ops)    # d/dz sin -> cos
    dxT = _to_phys(iqx * state.T, ops.synth_sin, ops)
    dzT = _to_phys(lpi * state.T, ops.synth_cos, ops)

    tu = _to_spec(-(U * dxu + W * dzu), ops.an_cos, ops)
    tv = _to_spec(-(U * dxv + W * dzv), ops.an_cos, ops)
    tw = _to_spec(-(U * dxw + W * dzw), ops.an_sin, ops)
    tT = _to_spec(-(U * dxT + W * dzT), ops.an_sin, ops)
    umax = max(float(np.max(np.abs(U))), float(np.max(np.abs(W))))
    return (tu, tv, tw, tT), umax


def nonlinear_term(state: SimState, config: SimConfig):
    """Advection tendencies -(u d/dx + w d/dz)(u, v, w, T), unprojected."""
    tends, _ = _advection(state, _operators(config))
    return tends


def step(state: SimState, config: SimConfig) -> SimState:
    """Advance one time step; raises BlowUp past the runaway threshold."""
    ops = _operators(config)
    p = config.params
    dt = config.dt

    if config.nonlinear:
        (nu, nv, nw, nT), umax = _advection(state, ops)
        nu, nw = project_divfree(nu, nw, config)
        nu *= ops.mask_u
        nv *= ops.mask_v
        nw *= ops.mask_w
        nT *= ops.mask_T
        if umax > BLOWUP_LIMIT:
            raise BlowUp(f"velocity max-norm {umax:.3e} at t={state.t:.6g}")
        cfl = dt * umax * max(config.nx * p.alpha1, config.nz * PI)
        if cfl >= 0.5:
            warnings.warn("advective CFL number >= 0.5; consider reducing dt",
                          RuntimeWarning, stacklevel=2)
    else:
        shape = (config.jx + 1, config.nz + 1)
        nu = nv = nw = nT = np.zeros(shape, complex)

    new = SimState(u=None, v=None, w=None, T=None, t=state.t + dt)

    if config.scheme == "imex2":
        S = np.stack([state.u, state.v, state.w, state.T], axis=-1)
        N = np.stack([nu, nv, nw, nT], axis=-1)
        if config.nonlinear and state.prev_advection is not None:
            N_eff = 1.5 * N - 0.5 * np.stack(state.prev_advection, axis=-1)
        else:
            N_eff = N
        S_new = (np.einsum("jlab,jlb->jla", ops.cn_step, S)
                 + dt * np.einsum("jlab,jlb->jla", ops.cn_inv, N_eff))
        new.u = np.ascontiguousarray(S_new[..., 0])
        new.v = np.ascontiguousarray(S_new[..., 1])
        new.w = np.ascontiguousarray(S_new[..., 2])
        new.T = np.ascontiguousarray(S_new[..., 3])
        new.prev_advection = (nu, nv, nw, nT) if config.nonlinear else None
    else:
        sigma, ro, R = p.sigma, p.ro, p.rayleigh
        xu = state.v / ro + nu
        xv = -state.u / ro + nv
        xw = sigma * R * state.T + nw
        xT = state.w + nT
        new.u = (state.u + dt * xu) * ops.diff_u
        new.v = (state.v + dt * xv) * ops.diff_u
        new.w = (state.w + dt * xw) * ops.diff_u
        new.T = (state.T + dt * xT) * ops.diff_T
        new.u, new.w = project_divfree(new.u, new.w, config)
        new.prev_advection = None

    _apply_constraints(new, config, ops)
    peak = max(float(np.max(np.abs(new.u))), float(np.max(np.abs(new.v))),
               float(np.max(np.abs(new.w))), float(np.max(np.abs(new.T))))
    if not np.isfinite(peak) or peak > BLOWUP_LIMIT:
        raise BlowUp(f"spectral max-norm {peak:.3e} at t={new.t:.6g}")
    return new


def energies(state: SimState, config: SimConfig) -> tuple[float, float]:
    """Kinetic and thermal energy by spectral summation."""
    nz = config.nz
    wx = np.full(config.jx + 1, 2.0)
    wx[0] = 1.0
    wz_cos = np.full(nz + 1, 0.5)
    wz_cos[0] = 1.0
    wz_sin = np.full(nz + 1, 0.5)
    cell = 2.0 * PI / config.params.alpha1
    weight_cos = wx[:, None] * wz_cos[None, :]
    weight_sin = wx[:, None] * wz_sin[None, :]
    ke = 0.5 * cell * float(
        np.sum(weight_cos * (np.abs(state.u) ** 2 + np.abs(state.v) ** 2))
        + np.sum(weight_sin * np.abs(state.w) ** 2))
    te = 0.5 * cell * float(np.sum(weight_sin * np.abs(state.T) ** 2))
    return ke, te


def mode_amplitude(state: SimState, component: str, j: int, l: int) -> complex:
    """Real-field amplitude of one spectral mode (2 c_j for j >= 1, c_0 else)."""
    arr = getattr(state, component)
    weight = 2.0 if j >= 1 else 1.0
    return complex(weight * arr[j, l])


def seed_from_eigenvector(config: SimConfig, eps: float) -> SimState:
    """State proportional to the real part of the seed mode's leading eigenvector.

    The seed mode must be a (j, 0, l) interior mode resolvable on the grid.
    eps scales the w-field amplitude normalization (unit coefficient on the
    w carrier cos(j a1 x) sin(l pi z)).
    """
    if eps < 0.0:
        raise ValueError("eps must be non-negative")
    idx = config.seed_mode
    if idx is None:
        raise ValueError("config.seed_mode is not set")
    if idx.cls is not LatticeClass.Lambda1 or idx.k != 0:
        raise OutOfLattice(f"seed mode ({idx.j},{idx.k},{idx.l}) is not a "
                           "spanwise-uniform interior mode")
    if idx.j > config.jx or idx.l > config.nz:
        raise ValueError("seed mode is outside the retained spectral band")
    state = zero_state(config)
    if eps == 0.0:
        return state
    roots = solve_cubic(cubic_coeffs(config.params, idx)).roots
    beta = max(roots, key=lambda z: z.real)
    ev = eigvec_coeffs(beta, config.params, idx)
    a = idx.j * config.params.alpha1
    u_coeff = 0.5j * idx.l * PI / a        # u = -(l pi / a) sin(a x) cos(l pi z)
    w_coeff = 0.5                          # w = cos(a x) sin(l pi z)
    state.u[idx.j, idx.l] = eps * u_coeff
    state.v[idx.j, idx.l] = eps * complex(ev.a1).real * u_coeff
    state.w[idx.j, idx.l] = eps * w_coeff
    state.T[idx.j, idx.l] = eps * complex(ev.a2).real * w_coeff
    _apply_constraints(state, config, _operators(config))
    return state


def _state_norm(state: SimState) -> float:
    return math.sqrt(sum(float(np.sum(np.abs(a) ** 2))
                         for a in (state.u, state.v, state.w, state.T)))


STEADY_REL_TOL = 1.0e-8
STEADY_DETECT_START = 5.0


def run(config: SimConfig, state: SimState | None = None,
        return_state: bool = False):
    """Integrate to t_end, sampling diagnostics at the configured cadence.

    Detects convergence to a steady state (relative state change below 1e-8
    over one time unit, checked after the initial transient) and stops early
    when it occurs; a sustained oscillation of the tracked w-mode is reported
    in the outcome field instead.  Returns Diagnostics, or (Diagnostics,
    final SimState) when return_state is set.
    """
    if state is None:
        state = seed_from_eigenvector(config, config.seed_amp)
    j1 = config.seed_mode.j if config.seed_mode is not None else 1
    l1 = config.seed_mode.l if config.seed_mode is not None else 1

    rows_t, rows_ke, rows_te = [], [], []
    rows_w, rows_tm, rows_g, rows_div = [], [], [], []
    outcome = "none"
    diag_stride = max(1, int(round(config.diag_every / config.dt)))
    n_steps = int(round(config.t_end / config.dt))
    snap_state, snap_t = state.copy(), state.t

    def sample():
        ke, te = energies(state, config)
        wm = mode_amplitude(state, "w", j1, l1)
        tm = mode_amplitude(state, "T", j1, l1)
        if rows_t:
            dt_s = state.t - rows_t[-1]
            prev = abs(rows_w[-1])
            cur = abs(wm)
            g = (math.log(cur / prev) / dt_s
                 if prev > 1e-300 and cur > 1e-300 and dt_s > 0 else 0.0)
        else:
            g = 0.0
        rows_t.append(state.t)
        rows_ke.append(ke)
        rows_te.append(te)
        rows_w.append(wm)
        rows_tm.append(tm)
        rows_g.append(g)
        rows_div.append(divergence_max(state, config))

    sample()
    for i in range(1, n_steps + 1):
        state = step(state, config)
        if i % diag_stride == 0 or i == n_steps:
            sample()
            if state.t - snap_t >= 1.0 - 1e-9:
                if state.t > STEADY_DETECT_START:
                    diff = SimState(u=state.u - snap_state.u,
                                    v=state.v - snap_state.v,
                                    w=state.w - snap_state.w,
                                    T=state.T - snap_state.T)
                    ref = max(_state_norm(state), 1e-300)
                    if _state_norm(diff) / ref < STEADY_REL_TOL:
                        outcome = "steady"
                        snap_state, snap_t = state.copy(), state.t
                        break
                snap_state, snap_t = state.copy(), state.t

    wr = np.real(np.asarray(rows_w))
    signs = np.sign(wr[np.abs(wr) > 0])
    flips = int(np.sum(signs[1:] * signs[:-1] < 0)) if signs.size > 1 else 0
    if outcome != "steady" and flips >= 5:
        outcome = "oscillating"
    diag = Diagnostics(t=np.asarray(rows_t), ke=np.asarray(rows_ke),
                       te=np.asarray(rows_te), wmode=np.asarray(rows_w),
                       tmode=np.asarray(rows_tm),
                       growth_rate=np.asarray(rows_g),
                       div_max=np.asarray(rows_div), outcome=outcome)
    return (diag, state) if return_state else diag


def measure_period_series(t: np.ndarray, y: np.ndarray) -> tuple[float, float]:
    """Oscillation period from zero crossings of a detrended series.

    The exponential envelope is removed by a log-amplitude fit through the
    local extrema, crossings are located by linear interpolation, and the
    period is twice the mean crossing spacing with twice the spacing standard
    deviation as the uncertainty.  Needs at least five crossings.
    """
    t = np.asarray(t, dtype=float)
    y = np.asarray(y, dtype=float)
    if t.shape != y.shape or t.ndim != 1:
        raise ValueError("t and y must be matching one-dimensional arrays")
    ay = np.abs(y)
    peaks = [i for i in range(1, len(y) - 1)
             if ay[i] >= ay[i - 1] and ay[i] >= ay[i + 1] and ay[i] > 0.0]
    if len(peaks) >= 2:
        slope = np.polyfit(t[peaks], np.log(ay[peaks]), 1)[0]
        y = y * np.exp(-slope * (t - t[0]))
    nz = np.nonzero(y)[0]
    crossings = []
    for a, b in zip(nz[:-1], nz[1:]):
        if y[a] * y[b] < 0.0:
            frac = y[a] / (y[a] - y[b])
            crossings.append(t[a] + frac * (t[b] - t[a]))
    if len(crossings) < 5:
        raise InsufficientOscillations(
            f"found {len(crossings)} zero crossings; need at least 5")
    spacing = np.diff(crossings)
    return 2.0 * float(np.mean(spacing)), 2.0 * float(np.std(spacing))


def measure_period(diag: Diagnostics) -> tuple[float, float]:
    """Period of the tracked w-mode's real part, with uncertainty."""
    return measure_period_series(diag.t, np.real(diag.wmode))


CHECKPOINT_MAGIC = b"RBSIM1"


def save_checkpoint(state: SimState, config: SimConfig, path: str) -> None:
    """Write the spectral state as a flat little-endian binary snapshot."""
    nrows, ncols = state.u.shape
    with open(path, "wb") as fh:
        fh.write(CHECKPOINT_MAGIC)
        fh.write(struct.pack("<4I", config.nx, config.nz, nrows, ncols))
        fh.write(struct.pack("<d", state.t))
        for arr in (state.u, state.v, state.w, state.T):
            fh.write(np.ascontiguousarray(arr, dtype="<c16").tobytes())


def load_checkpoint(path: str) -> tuple[SimState, int, int]:
    """Read a snapshot; returns (state, nx, nz).  History is not restored."""
    with open(path, "rb") as fh:
        magic = fh.read(len(CHECKPOINT_MAGIC))
        if magic != CHECKPOINT_MAGIC:
            raise ValueError(f"not a simulation checkpoint: magic {magic!r}")
        nx, nz, nrows, ncols = struct.unpack("<4I", fh.read(16))
        (t,) = struct.unpack("<d", fh.read(8))
        count = nrows * ncols
        arrays = []
        for _ in range(4):
            buf = fh.read(count * 16)
            if len(buf) != count * 16:
                raise ValueError("truncated checkpoint payload")
            arrays.append(np.frombuffer(buf, dtype="<c16").reshape(nrows, ncols)
                          .astype(complex))
    u, v, w, T = arrays
    return SimState(u=u, v=v, w=w, T=T, t=t), int(nx), int(nz)


def translate(state: SimState, dx: float, config: SimConfig) -> SimState:
    """Shift the field x -> x + dx via per-mode phase factors.

    The shifted field generally leaves the odd/even symmetric subspace (the
    shift moves the symmetry axis), so no symmetry projection is applied;
    continue it under a full-space configuration.
    """
    phase = np.exp(1j * np.arange(config.jx + 1) * config.params.alpha1 * dx)
    out = SimState(u=state.u * phase[:, None], v=state.v * phase[:, None],
                   w=state.w * phase[:, None], T=state.T * phase[:, None],
                   t=state.t)
    full = replace(config, symmetry=SpaceFlag.FullSpace)
    _apply_constraints(out, full, _operators(full))
    return out
