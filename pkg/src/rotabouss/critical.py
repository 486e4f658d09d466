"""Critical Rayleigh numbers, exchange-of-stabilities scans, asymptotics.

The steady threshold minimizes f_b(x) = ((x + pi^2)^3 + b)/x over the lattice
of squared horizontal wavenumbers x = alpha_jk^2 with b = pi^2/(sigma^2 Ro^2);
the oscillatory threshold uses the same profile with b = pi^2/((sigma+1)^2 Ro^2)
scaled by 2(sigma+1), and exists only for sigma < 1.  Both onsets occur at
vertical order l = 1.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .errors import SigmaOutOfRange, TruncationTooSmall
from .params import PI_SQ, PhysicalParams, SpaceFlag, WaveIndex
from .spectrum import cubic_coeffs, growth_rate

TIE_REL_TOL = 1e-9


class Onset(enum.Enum):
    Steady = "steady"
    Hopf = "hopf"


@dataclass(frozen=True)
class NeutralCurve:
    """Samples of the neutral profile f_b and its interior minimizer."""

    b: float
    samples: list[tuple[float, float]]
    x_star: float


@dataclass(frozen=True)
class CriticalResult:
    r_crit: float
    onset: Onset
    argmin: WaveIndex
    unique: bool
    hopf_admissible: bool | None = None
    hopf_freq: float | None = None


@dataclass(frozen=True)
class UniquenessCheck:
    """Outcome of a single-minimizer condition check with witnesses."""

    status: str                      # "holds" | "holds_generically" | "fails"
    j_crit: int | None
    witness: list = field(default_factory=list)


def f_b(x: float, b: float) -> float:
    """Neutral profile ((x + pi^2)^3 + b) / x for x > 0."""
    if x <= 0:
        raise ValueError("f_b needs x > 0")
    return ((x + PI_SQ) ** 3 + b) / x


def x_star(b: float) -> float:
    """Unique minimizer of f_b on (0, inf).

    Solves (2x - pi^2)(x + pi^2)^2 = b on (pi^2/2, inf); returns pi^2/2 at
    b = 0.  The result satisfies the defining equation to 1e-12 * (1 + b).
    """
    if b < 0:
        raise ValueError("b must be non-negative")
    if b == 0.0:
        return PI_SQ / 2.0

    def h(x):
        return (2.0 * x - PI_SQ) * (x + PI_SQ) ** 2 - b

    lo = PI_SQ / 2.0
    hi = max(PI_SQ, b ** (1.0 / 3.0))
    while h(hi) < 0.0:
        hi *= 2.0
    root = brentq(h, lo, hi, xtol=1e-14, rtol=8.9e-16)
    # one Newton polish against the defining cubic
    dh = 2.0 * (root + PI_SQ) ** 2 + 2.0 * (2.0 * root - PI_SQ) * (root + PI_SQ)
    if dh != 0.0:
        root -= h(root) / dh
    if abs(h(root)) > 1e-12 * (1.0 + b):
        raise ArithmeticError(f"x_star residual {h(root):.3e} out of bound")
    return root


def neutral_curve(b: float, x_lo: float, x_hi: float, n: int) -> NeutralCurve:
    xs = np.linspace(x_lo, x_hi, n)
    return NeutralCurve(b=b, samples=[(float(x), f_b(float(x), b)) for x in xs],
                        x_star=x_star(b))


def _horizontal_lattice(params: PhysicalParams, jmax: int, kmax: int):
    """Normalized (j, k) pairs with their squared wavenumbers, (0,0) excluded."""
    out = []
    for j in range(0, jmax + 1):
        for k in range(-kmax, kmax + 1):
            if j == 0 and k <= 0:
                continue
            out.append((j, k, params.alpha_sq(j, k)))
    return out


def _scan_min(params: PhysicalParams, jmax: int, kmax: int, b: float):
    """Minimize f_b over the horizontal lattice; returns argmin and ties."""
    entries = _horizontal_lattice(params, jmax, kmax)
    values = [(f_b(a_sq, b), j, k, a_sq) for j, k, a_sq in entries]
    best = min(v[0] for v in values)
    tied = [(j, k, a_sq) for v, j, k, a_sq in values
            if v <= best * (1.0 + TIE_REL_TOL)]
    arg = tied[0]
    if arg[0] == jmax or abs(arg[1]) == kmax:
        raise TruncationTooSmall(
            f"lattice minimizer ({arg[0]},{arg[1]}) touches the truncation "
            f"boundary (jmax={jmax}, kmax={kmax})")
    return best, arg, tied


def rc1(params: PhysicalParams, jmax: int = 8, kmax: int = 8) -> CriticalResult:
    """Steady critical Rayleigh number by lattice scan at vertical order 1."""
    sigma, ro = params.sigma, params.ro
    b1 = PI_SQ / (sigma * sigma * ro * ro)
    best, (j, k, _), tied = _scan_min(params, jmax, kmax, b1)
    distinct_alpha = {round_sig(a_sq) for _, _, a_sq in tied}
    unique = (len(distinct_alpha) == 1) and (k == 0)
    idx = WaveIndex.make(j, k, 1, params)
    return CriticalResult(r_crit=best, onset=Onset.Steady, argmin=idx,
                          unique=unique)


def rc2(params: PhysicalParams, jmax: int = 8, kmax: int = 8) -> CriticalResult:
    """Oscillatory critical Rayleigh number; requires sigma < 1."""
    sigma, ro = params.sigma, params.ro
    if sigma >= 1.0:
        raise SigmaOutOfRange(f"oscillatory onset needs sigma < 1, "
                              f"got sigma={sigma}")
    b2 = PI_SQ / ((sigma + 1.0) ** 2 * ro * ro)
    best_f, (j, k, a_sq), tied = _scan_min(params, jmax, kmax, b2)
    r_crit = 2.0 * (sigma + 1.0) * best_f
    distinct_alpha = {round_sig(a) for _, _, a in tied}
    unique = (len(distinct_alpha) == 1) and (k == 0)
    idx = WaveIndex.make(j, k, 1, params)
    g6 = idx.gamma_sq ** 3
    admissible = ro * ro < (1.0 - sigma) * PI_SQ / (sigma * sigma
                                                    * (1.0 + sigma) * g6)
    at_crit = params.with_rayleigh(r_crit)
    c = cubic_coeffs(at_crit, idx)
    a_sq_freq = c.c0 / ((2.0 * sigma + 1.0) * idx.gamma_sq)
    freq = math.sqrt(a_sq_freq) if a_sq_freq > 0 else 0.0
    return CriticalResult(r_crit=r_crit, onset=Onset.Hopf, argmin=idx,
                          unique=unique, hopf_admissible=bool(admissible),
                          hopf_freq=freq)


def round_sig(x: float, rel: float = TIE_REL_TOL) -> float:
    """Quantize for tie detection at the given relative tolerance."""
    if x == 0.0:
        return 0.0
    digits = int(-math.log10(rel)) - 1
    exponent = math.floor(math.log10(abs(x)))
    return round(x, digits - exponent)


def _condition_check(params: PhysicalParams, b: float,
                     scan_jmax: int = 8, scan_kmax: int = 8) -> UniquenessCheck:
    a1_sq = params.alpha1 ** 2
    a2_sq = params.alpha2 ** 2
    xb = x_star(b)
    if xb <= a1_sq < a2_sq:
        return UniquenessCheck(status="holds", j_crit=1)
    if a1_sq <= xb / 5.0 and 2.0 * xb < a2_sq:
        j_lo = max(1, int(math.floor(math.sqrt(xb) / params.alpha1)))
        f_lo = f_b(j_lo * j_lo * a1_sq, b)
        f_hi = f_b((j_lo + 1) * (j_lo + 1) * a1_sq, b)
        if abs(f_lo - f_hi) > TIE_REL_TOL * min(f_lo, f_hi):
            j_crit = j_lo if f_lo < f_hi else j_lo + 1
            return UniquenessCheck(status="holds_generically", j_crit=j_crit)
        return UniquenessCheck(status="fails", j_crit=None,
                               witness=[(j_lo, 0), (j_lo + 1, 0)])
    # neither sufficient condition applies: report the lattice ties
    _, _, tied = _scan_min(params, scan_jmax, scan_kmax, b)
    witness = [(j, k) for j, k, _ in tied]
    return UniquenessCheck(status="fails", j_crit=None, witness=witness)


def check_c6(params: PhysicalParams) -> UniquenessCheck:
    """Single-minimizer condition for the steady onset (sigma > 1 route)."""
    if params.sigma <= 1.0:
        raise SigmaOutOfRange(f"steady-onset condition check needs sigma > 1, "
                              f"got sigma={params.sigma}")
    b1 = PI_SQ / (params.sigma ** 2 * params.ro ** 2)
    return _condition_check(params, b1)


def check_c7(params: PhysicalParams) -> UniquenessCheck:
    """Single-minimizer condition for the oscillatory onset (sigma < 1)."""
    if params.sigma >= 1.0:
        raise SigmaOutOfRange(f"oscillatory-onset condition check needs "
                              f"sigma < 1, got sigma={params.sigma}")
    b2 = PI_SQ / ((params.sigma + 1.0) ** 2 * params.ro ** 2)
    return _condition_check(params, b2)


def pes_scan(params: PhysicalParams, r_lo: float, r_hi: float, n: int,
             space: SpaceFlag, jmax: int = 8, kmax: int = 8, lmax: int = 4):
    """Leading growth rate over a uniform Rayleigh-number grid.

    Returns (rows, bracket): rows are (R, max Re beta, Im beta at max, index);
    bracket is the first (R_lo, R_hi) pair where the sign changes, or None.
    """
    if not (r_lo < r_hi):
        raise ValueError("need r_lo < r_hi")
    if n < 3:
        raise ValueError("need at least 3 samples")
    rows = []
    for R in np.linspace(r_lo, r_hi, n):
        p = params.with_rayleigh(float(R))
        rate, idx = growth_rate(p, jmax, kmax, lmax, space)
        imag = 0.0
        for beta in _spectrum_of(p, idx, space):
            if beta.real == rate:
                imag = beta.imag
                break
        rows.append((float(R), rate, imag, idx))
    bracket = None
    for (r0, g0, _, _), (r1, g1, _, _) in zip(rows, rows[1:]):
        if g0 <= 0.0 < g1 or g0 < 0.0 <= g1:
            bracket = (r0, r1)
            break
    return rows, bracket


def _spectrum_of(params, idx, space):
    from .spectrum import spectrum_at
    return spectrum_at(params, idx, space)


@dataclass(frozen=True)
class AsymptoticsFit:
    slope_continuous: float
    slope_lattice: float
    table: list  # rows: (ro, b, x_star, r_continuous, r_lattice)


def ro_asymptotics(sigma: float, alpha1: float, alpha2: float,
                   ro_list: list[float], jmax: int = 8,
                   kmax: int = 8) -> AsymptoticsFit:
    """Log-log slope of the steady threshold against the Rossby number.

    The continuous column minimizes f_b over all x > 0 (isolating the scaling
    law); the lattice column constrains x to the wavenumber lattice.  The
    fitted exponent is the least-squares slope of log r against log ro.
    """
    if sigma <= 1.0:
        raise SigmaOutOfRange(f"asymptotics fit needs sigma > 1, got {sigma}")
    if len(ro_list) < 4:
        raise ValueError("need at least 4 Rossby values")
    if any(b >= a for a, b in zip(ro_list, ro_list[1:])):
        raise ValueError("Rossby values must be strictly decreasing")
    if ro_list[0] / ro_list[-1] < 100.0:
        raise ValueError("Rossby values must span at least two decades")
    probe = PhysicalParams(sigma=sigma, ro=1.0, rayleigh=0.0,
                           alpha1=alpha1, alpha2=alpha2)
    rows = []
    for ro in ro_list:
        b = PI_SQ / (sigma * sigma * ro * ro)
        xb = x_star(b)
        r_cont = f_b(xb, b)
        r_lat, _, _ = _scan_min(probe, jmax, kmax, b)
        rows.append((ro, b, xb, r_cont, r_lat))
    log_ro = np.log([r[0] for r in rows])
    slope_cont = float(np.polyfit(log_ro, np.log([r[3] for r in rows]), 1)[0])
    slope_lat = float(np.polyfit(log_ro, np.log([r[4] for r in rows]), 1)[0])
    return AsymptoticsFit(slope_continuous=slope_cont, slope_lattice=slope_lat,
                          table=rows)
