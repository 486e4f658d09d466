"""Collocation-grid fields, eigenvector assembly, and quadrature oracles.

Fields live on one periodicity cell [0, 2*pi/alpha1) x [0, 1]: uniform
periodic x samples (no endpoint) and an endpoint z grid.  Horizontal (u, v)
components carry cosine vertical parity, (w, T) sine parity, so free-slip and
thermal boundary conditions hold identically.  All quadratures are uniform-x
sums times trapezoid-z, which integrate the band-limited trigonometric
polynomials used here exactly; z-derivatives are spectral (type-I transforms),
never finite differences.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.fft as sfft

from .errors import OutOfLattice
from .params import PI, PI_SQ, LatticeClass, PhysicalParams, WaveIndex
from .spectrum import eigvec_coeffs


@dataclass
class FieldOnGrid:
    """Velocity/temperature components sampled on the (x, z) cell grid.

    Arrays are real for real eigenvalues; for a complex eigenvalue the real
    and imaginary parts are the two basis fields of the associated invariant
    plane, so one complex-valued field encodes the pair.
    """

    u: np.ndarray
    v: np.ndarray
    w: np.ndarray
    T: np.ndarray
    x: np.ndarray
    z: np.ndarray
    alpha1: float

    @property
    def nx(self) -> int:
        return self.x.size

    @property
    def nz(self) -> int:
        return self.z.size

    def components(self):
        return {"u": self.u, "v": self.v, "w": self.w, "T": self.T}

    def copy_with(self, **arrays) -> "FieldOnGrid":
        data = {"u": self.u, "v": self.v, "w": self.w, "T": self.T}
        data.update(arrays)
        return FieldOnGrid(x=self.x, z=self.z, alpha1=self.alpha1, **data)


def make_grid(nx: int, nz: int, alpha1: float) -> tuple[np.ndarray, np.ndarray]:
    """Uniform periodic x grid and endpoint z grid for one cell."""
    if nx < 4 or nz < 4:
        raise ValueError("grid too small")
    x = np.arange(nx) * (2.0 * PI / alpha1) / nx
    z = np.linspace(0.0, 1.0, nz)
    return x, z


def zero_field(nx: int, nz: int, alpha1: float,
               dtype=float) -> FieldOnGrid:
    x, z = make_grid(nx, nz, alpha1)
    shape = (nx, nz)
    return FieldOnGrid(u=np.zeros(shape, dtype), v=np.zeros(shape, dtype),
                       w=np.zeros(shape, dtype), T=np.zeros(shape, dtype),
                       x=x, z=z, alpha1=alpha1)


# ---------------------------------------------------------------------------
# quadrature
# ---------------------------------------------------------------------------

def integrate(field_values: np.ndarray, x: np.ndarray, z: np.ndarray,
              alpha1: float) -> float | complex:
    """Cell integral: uniform-x sum times trapezoid-z."""
    nx, nz = field_values.shape
    wz = np.ones(nz)
    wz[0] = wz[-1] = 0.5
    cell_dx = (2.0 * PI / alpha1) / nx
    dz = 1.0 / (nz - 1)
    return np.sum(field_values * wz[None, :]) * cell_dx * dz


def inner(f: FieldOnGrid, g: FieldOnGrid) -> float | complex:
    """Bilinear (unconjugated) L2 pairing of two fields over the cell."""
    total = 0.0
    for name in ("u", "v", "w", "T"):
        total = total + integrate(f.components()[name] * g.components()[name],
                                  f.x, f.z, f.alpha1)
    return total


def norm(f: FieldOnGrid) -> float:
    """L2 norm (conjugated) of a possibly complex field."""
    total = 0.0
    for arr in f.components().values():
        total = total + integrate(np.abs(arr) ** 2, f.x, f.z, f.alpha1)
    return float(np.sqrt(total.real))


# ---------------------------------------------------------------------------
# spectral helpers on the endpoint z grid / uniform x grid
# ---------------------------------------------------------------------------

def _dx(values: np.ndarray, alpha1: float) -> np.ndarray:
    """Exact x-derivative via the periodic Fourier representation."""
    nx = values.shape[0]
    kx = np.fft.fftfreq(nx, d=1.0 / nx) * alpha1
    out = np.fft.ifft(1j * kx[:, None] * np.fft.fft(values, axis=0), axis=0)
    return out if np.iscomplexobj(values) else out.real


def _cos_coeffs(values: np.ndarray) -> np.ndarray:
    """Cosine-series coefficients along z (endpoint grid, orders 0..nz-1)."""
    nz = values.shape[1]
    c = sfft.dct(values, type=1, axis=1) / (nz - 1)
    c[:, 0] *= 0.5
    c[:, -1] *= 0.5
    return c


def _sin_coeffs(values: np.ndarray) -> np.ndarray:
    """Sine-series coefficients along z (interior points, orders 1..nz-2)."""
    return sfft.dst(values[:, 1:-1], type=1, axis=1) / (values.shape[1] - 1)


def _cos_synth(coeffs: np.ndarray, nz: int) -> np.ndarray:
    c = coeffs.copy()
    c[:, 0] *= 2.0
    c[:, -1] *= 2.0
    return sfft.dct(c, type=1, axis=1) * 0.5


def _sin_synth(coeffs: np.ndarray, nz: int) -> np.ndarray:
    out = np.zeros((coeffs.shape[0], nz), dtype=coeffs.dtype)
    out[:, 1:-1] = sfft.dst(coeffs, type=1, axis=1) * 0.5
    return out


def _dz_cos_parity(values: np.ndarray) -> np.ndarray:
    """Exact z-derivative of a cosine-parity field (result has sine parity)."""
    nz = values.shape[1]
    if np.iscomplexobj(values):
        return _dz_cos_parity(values.real) + 1j * _dz_cos_parity(values.imag)
    c = _cos_coeffs(values)                       # orders 0..nz-1
    orders = np.arange(nz)
    s = -(orders * PI)[None, 1:-1] * c[:, 1:-1]   # sine orders 1..nz-2
    return _sin_synth(s, nz)


def _dz_sin_parity(values: np.ndarray) -> np.ndarray:
    """Exact z-derivative of a sine-parity field (result has cosine parity)."""
    nz = values.shape[1]
    if np.iscomplexobj(values):
        return _dz_sin_parity(values.real) + 1j * _dz_sin_parity(values.imag)
    s = _sin_coeffs(values)                       # orders 1..nz-2
    c = np.zeros((values.shape[0], nz))
    c[:, 1:-1] = (np.arange(1, nz - 1) * PI)[None, :] * s
    return _cos_synth(c, nz)


def derivatives(f: FieldOnGrid) -> dict[str, tuple[np.ndarray, np.ndarray]]:
    """Exact (d/dx, d/dz) of every component, parity-aware in z."""
    out = {}
    for name, arr in f.components().items():
        ddx = _dx(arr, f.alpha1)
        ddz = (_dz_cos_parity(arr) if name in ("u", "v")
               else _dz_sin_parity(arr))
        out[name] = (ddx, ddz)
    return out


# ---------------------------------------------------------------------------
# eigenvector assembly
# ---------------------------------------------------------------------------

def assemble_eigenvector(params: PhysicalParams, idx: WaveIndex, beta: complex,
                         variant: int, nx: int, nz: int) -> FieldOnGrid:
    """Critical-mode eigenfield on the grid for a buoyancy-coupled index.

    variant 1 has w ~ cos(j a1 x) sin(l pi z); variant 2 the quarter-shifted
    partner with w ~ sin(j a1 x) sin(l pi z).  The v and T components carry
    the eigenvector coefficients; complex beta yields a complex field whose
    real/imaginary parts span the invariant plane.
    """
    if idx.cls is not LatticeClass.Lambda1:
        raise OutOfLattice(f"eigenfield assembly needs a buoyancy-coupled "
                           f"index, got {idx.cls.value}")
    if idx.k != 0:
        raise OutOfLattice("grid assembly is for k = 0 modes only")
    if variant not in (1, 2):
        raise ValueError(f"variant must be 1 or 2, got {variant}")
    coeffs = eigvec_coeffs(beta, params, idx)
    return _assemble(params, idx, coeffs.a1, coeffs.a2, variant, nx, nz)


def assemble_dual(params: PhysicalParams, idx: WaveIndex, beta: complex,
                  variant: int, nx: int, nz: int) -> FieldOnGrid:
    """Dual (adjoint-side) eigenfield; same structure with dual coefficients."""
    if idx.cls is not LatticeClass.Lambda1:
        raise OutOfLattice(f"eigenfield assembly needs a buoyancy-coupled "
                           f"index, got {idx.cls.value}")
    if idx.k != 0:
        raise OutOfLattice("grid assembly is for k = 0 modes only")
    coeffs = eigvec_coeffs(beta, params, idx)
    return _assemble(params, idx, coeffs.c1d, coeffs.c2d, variant, nx, nz)


def _assemble(params, idx, cv, ct, variant, nx, nz):
    x, z = make_grid(nx, nz, params.alpha1)
    a = idx.j * params.alpha1
    lp = idx.l * PI
    X, Z = np.meshgrid(x, z, indexing="ij")
    if variant == 1:
        w = np.cos(a * X) * np.sin(lp * Z)
        u = -(lp / a) * np.sin(a * X) * np.cos(lp * Z)
    else:
        w = np.sin(a * X) * np.sin(lp * Z)
        u = (lp / a) * np.cos(a * X) * np.cos(lp * Z)
    cv, ct = complex(cv), complex(ct)
    if cv.imag == 0.0 and ct.imag == 0.0:
        cv, ct = cv.real, ct.real
    return FieldOnGrid(u=u, v=cv * u, w=w, T=ct * w, x=x, z=z,
                       alpha1=params.alpha1)


# ---------------------------------------------------------------------------
# discretized linear operator and residual oracle
# ---------------------------------------------------------------------------

def _to_spectral(f: FieldOnGrid):
    """Complex x-Fourier coefficients times z-parity coefficients.

    Returns (u, v, w, T) coefficient arrays over the full signed x-mode set
    (numpy fft order) and z-orders (cos: 0..nz-1 for u,v; sin: 1..nz-2 for
    w,T).  Signed modes are kept separately because complex-valued fields
    carry independent content on opposite wavenumbers.
    """
    def xhat(arr):
        return np.fft.fft(arr, axis=0) / arr.shape[0]

    u = _cos_coeffs_complex(f.u)
    v = _cos_coeffs_complex(f.v)
    w = _sin_coeffs_complex(f.w)
    T = _sin_coeffs_complex(f.T)
    return tuple(xhat(a) for a in (u, v, w, T))


def _cos_coeffs_complex(arr):
    if np.iscomplexobj(arr):
        return _cos_coeffs(arr.real) + 1j * _cos_coeffs(arr.imag)
    return _cos_coeffs(arr)


def _sin_coeffs_complex(arr):
    if np.iscomplexobj(arr):
        return _sin_coeffs(arr.real) + 1j * _sin_coeffs(arr.imag)
    return _sin_coeffs(arr)


def _project_spectral(uh: np.ndarray, vh: np.ndarray, wh: np.ndarray,
                      alpha1: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Per-mode divergence-free projection of spectral velocity coefficients.

    Removes the pressure-gradient part of (u, w), zeroes the u content that
    incompressibility forbids (l = 0 columns with j != 0), and pins the mean
    horizontal flow (u and v at the constant mode).  Arrays are in signed
    x-mode (fft) order; u, v carry cosine orders 0..nz-1 and w sine orders
    1..nz-2.
    """
    nx = uh.shape[0]
    nzs = wh.shape[1]
    jf = np.fft.fftfreq(nx, d=1.0 / nx)[:, None]
    l_sin = np.arange(1, nzs + 1)[None, :]
    g_sin = (jf * alpha1) ** 2 + (l_sin * PI) ** 2
    qu = 1j * jf * alpha1 + 0.0 * l_sin
    qw = l_sin * PI + 0.0 * jf
    phi = -(qu * uh[:, 1:nzs + 1] + qw * wh) / g_sin
    up = uh.astype(complex).copy()
    up[:, 1:nzs + 1] -= phi * qu
    wp = wh + phi * qw
    up[1:, 0] = 0.0
    up[0, 0] = 0.0
    vp = vh.astype(complex).copy()
    vp[0, 0] = 0.0
    return up, vp, wp


def linear_residual(params: PhysicalParams, field: FieldOnGrid,
                    beta: complex) -> float:
    """Relative residual of the eigenvalue relation for the given field.

    Applies the spectrally discretized linearized operator (diffusion,
    rotation, buoyancy, stratification source; pressure eliminated by the
    per-mode divergence-free projection) and returns |L f - beta f| / |f| in
    the spectral energy norm.
    """
    nrm = norm(field)
    if nrm == 0.0:
        raise ValueError("zero field has no residual")
    scale = max(np.max(np.abs(field.w)), np.max(np.abs(field.T)), nrm)
    boundary = max(np.max(np.abs(field.w[:, [0, -1]])),
                   np.max(np.abs(field.T[:, [0, -1]])))
    if boundary > 1e-10 * scale:
        raise ValueError("w and T must vanish at z = 0, 1")
    sigma, ro, R = params.sigma, params.ro, params.rayleigh
    a1 = params.alpha1
    uh, vh, wh, Th = _to_spectral(field)
    nx, nzc = uh.shape            # signed x-modes (fft order); cos 0..nz-1
    nzs = wh.shape[1]             # sin orders 1..nz-2

    jf = np.fft.fftfreq(nx, d=1.0 / nx)[:, None]
    l_cos = np.arange(nzc)[None, :]
    l_sin = np.arange(1, nzs + 1)[None, :]
    g_cos = (jf * a1) ** 2 + (l_cos * PI) ** 2
    g_sin = (jf * a1) ** 2 + (l_sin * PI) ** 2

    ru = -sigma * g_cos * uh + (1.0 / ro) * vh
    rv = -(1.0 / ro) * uh - sigma * g_cos * vh
    rw = -sigma * g_sin * wh + sigma * R * Th
    rT = wh - g_sin * Th

    # per-mode divergence-free projection on (u, w): div = i j a1 u + l pi w,
    # pressure-gradient direction (i j a1, -l pi)
    ru_proj, rv, rw_proj = _project_spectral(ru, rv, rw, a1)

    ru_res = ru_proj - beta * uh
    rv_res = rv - beta * vh
    rw_res = rw_proj - beta * wh
    rT_res = rT - beta * Th

    # spectral energy: signed modes counted individually; z orders carry
    # weight 1/2 except the cosine constant; cell measure in x
    def energy(res, cos_parity):
        wl = np.full((1, res.shape[1]), 0.5)
        if cos_parity:
            wl[0, 0] = 1.0
        cell = 2.0 * PI / a1
        return float(np.sum(wl * np.abs(res) ** 2) * cell)

    total = (energy(ru_res, True) + energy(rv_res, True)
             + energy(rw_res, False) + energy(rT_res, False))
    return float(np.sqrt(total) / nrm)


# ---------------------------------------------------------------------------
# quadratic interaction on the grid
# ---------------------------------------------------------------------------

def advect(fa: FieldOnGrid, fb: FieldOnGrid) -> FieldOnGrid:
    """Quadratic interaction of two fields: minus advection of fb by fa.

    Returns -(u_a d/dx + w_a d/dz) applied to every component of fb, exactly
    (spectral derivatives).  No divergence-free projection is applied; the
    bilinear pairing identities hold for the unprojected form against
    divergence-free test fields.
    """
    derivs = derivatives(fb)
    out = {}
    for name in ("u", "v", "w", "T"):
        ddx, ddz = derivs[name]
        out[name] = -(fa.u * ddx + fa.w * ddz)
    return FieldOnGrid(x=fb.x, z=fb.z, alpha1=fb.alpha1, **out)


def project_field(params: PhysicalParams, f: FieldOnGrid) -> FieldOnGrid:
    """Divergence-free part of a grid field via the per-mode projection.

    The field is passed through the band-limited parity representation
    (cosine z-series for u, v; sine z-series for w, T), the pressure-gradient
    component of (u, w) is removed mode by mode, incompressibility-forbidden
    u content (l = 0 columns with j != 0) is zeroed, and the mean horizontal
    flow is pinned.  v and T pass through unchanged apart from the mean-v pin.
    This is the part of a quadratic-interaction tendency that the evolution
    equations actually feel.
    """
    uh, vh, wh, Th = _to_spectral(f)
    up, vp, wp = _project_spectral(uh, vh, wh, params.alpha1)
    nx, nz = f.u.shape

    def xsynth(arr):
        return np.fft.ifft(arr * nx, axis=0)

    u_g = _cos_synth(xsynth(up), nz)
    v_g = _cos_synth(xsynth(vp), nz)
    w_g = _sin_synth(xsynth(wp), nz)
    T_g = _sin_synth(xsynth(Th.astype(complex)), nz)
    if not any(np.iscomplexobj(a) for a in (f.u, f.v, f.w, f.T)):
        u_g, v_g, w_g, T_g = u_g.real, v_g.real, w_g.real, T_g.real
    return FieldOnGrid(u=u_g, v=v_g, w=w_g, T=T_g, x=f.x.copy(), z=f.z.copy(),
                       alpha1=f.alpha1)


def project_pair(g: FieldOnGrid, test: FieldOnGrid) -> float | complex:
    """Pairing <g, test>/<test, test> for reading one mode's coefficient."""
    return inner(g, test) / inner(test, test)


def random_divfree_field(params: PhysicalParams, rng: np.random.Generator,
                         nx: int, nz: int, jband: int = 6,
                         lband: int = 6) -> FieldOnGrid:
    """Band-limited random field: divergence-free velocity + random v, T.

    The (u, w) pair comes from a random streamfunction, so the divergence
    vanishes identically; v and T are independent random series.  Band limits
    keep triple products exactly integrable by the cell quadrature.
    """
    x, z = make_grid(nx, nz, params.alpha1)
    X, Z = np.meshgrid(x, z, indexing="ij")
    a1 = params.alpha1
    u = np.zeros((nx, nz))
    v = np.zeros((nx, nz))
    w = np.zeros((nx, nz))
    T = np.zeros((nx, nz))
    for j in range(0, jband + 1):
        for l in range(1, lband + 1):
            if j > 0:
                cs, sn = np.cos(j * a1 * X), np.sin(j * a1 * X)
                for hx, dhx in ((cs, -j * a1 * sn), (sn, j * a1 * cs)):
                    amp = rng.normal()
                    # streamfunction amp * hx * sin(l pi z)
                    u -= amp * hx * (l * PI) * np.cos(l * PI * Z)
                    w += amp * dhx * np.sin(l * PI * Z)
                    v += rng.normal() * hx * np.cos(l * PI * Z)
                    T += rng.normal() * hx * np.sin(l * PI * Z)
            else:
                u += rng.normal() * np.cos(l * PI * Z)
                v += rng.normal() * np.cos(l * PI * Z)
                T += rng.normal() * np.sin(l * PI * Z)
    return FieldOnGrid(u=u, v=v, w=w, T=T, x=x, z=z, alpha1=a1)
