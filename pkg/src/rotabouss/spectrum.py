"""Per-mode characteristic cubic, full linear spectrum, eigenvector coefficients.

Every buoyancy-coupled mode (class Lambda1) contributes three eigenvalues that
are the roots of a real cubic whose coefficients depend on (sigma, ro, R) and
the squared wavenumbers of the mode.  Shear modes (Lambda2) and mean-profile
modes (Lambda3) have closed-form eigenvalues independent of R.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NonConvergence, SingularShift, WrongClass
from .params import (PI_SQ, LatticeClass, PhysicalParams, SpaceFlag, WaveIndex,
                     lattice)


@dataclass(frozen=True)
class CubicCoeffs:
    """Monic cubic beta^3 + c2 beta^2 + c1 beta + c0 for one Lambda1 mode."""

    c2: float
    c1: float
    c0: float
    index: WaveIndex | None = None


@dataclass(frozen=True)
class EigenTriple:
    """The three cubic roots sorted by descending real part."""

    beta1: complex
    beta2: complex
    beta3: complex
    index: WaveIndex | None = None

    @property
    def roots(self) -> tuple[complex, complex, complex]:
        return (self.beta1, self.beta2, self.beta3)


@dataclass(frozen=True)
class EigenvectorCoeffs:
    """Eigenvector and dual-vector expansion coefficients at eigenvalue beta.

    The eigenvector in the per-mode basis is (1, a1, a2); the dual vector is
    (1, c1d, c2d).  Both follow the unit-leading-coefficient normalization.
    """

    a1: complex
    a2: complex
    c1d: complex
    c2d: complex


def cubic_coeffs(params: PhysicalParams, idx: WaveIndex) -> CubicCoeffs:
    """Characteristic-cubic coefficients for a Lambda1 mode."""
    if idx.cls is not LatticeClass.Lambda1:
        raise WrongClass(f"({idx.j},{idx.k},{idx.l}) is {idx.cls.value}, "
                         "cubic defined only on Lambda1")
    sigma, ro, R = params.sigma, params.ro, params.rayleigh
    a_sq, g_sq, l = idx.alpha_sq, idx.gamma_sq, idx.l
    c2 = (2.0 * sigma + 1.0) * g_sq
    c1 = ((sigma * sigma + 2.0 * sigma) * g_sq * g_sq
          + l * l * PI_SQ / (ro * ro * g_sq)
          - sigma * R * a_sq / g_sq)
    c0 = (sigma * sigma * g_sq ** 3
          - sigma * sigma * R * a_sq
          + l * l * PI_SQ / (ro * ro))
    return CubicCoeffs(c2=c2, c1=c1, c0=c0, index=idx)


def solve_cubic(c: CubicCoeffs) -> EigenTriple:
    """Roots of the characteristic cubic, companion-matrix based.

    The companion eigenvalues are polished by a few Newton iterations (the
    best iterate per root is kept, so a stagnating iteration cannot make a
    root worse).  Roots are sorted by descending real part, ties broken by
    descending imaginary part.  Raises NonConvergence if the polished roots
    fail the scaled residual bound (which signals an internal bug for finite
    coefficients).
    """
    for name, val in (("c2", c.c2), ("c1", c.c1), ("c0", c.c0)):
        if not np.isfinite(val):
            raise ValueError(f"non-finite cubic coefficient {name}={val!r}")
    roots = np.roots([1.0, c.c2, c.c1, c.c0]).astype(complex)

    def _residual(r: np.ndarray) -> np.ndarray:
        return np.abs(r ** 3 + c.c2 * r ** 2 + c.c1 * r + c.c0)

    best = roots.copy()
    best_res = _residual(best)
    cur = roots.copy()
    for _ in range(4):
        value = cur ** 3 + c.c2 * cur ** 2 + c.c1 * cur + c.c0
        slope = 3.0 * cur ** 2 + 2.0 * c.c2 * cur + c.c1
        safe = np.abs(slope) > 0
        cur = np.where(safe, cur - value / np.where(safe, slope, 1.0), cur)
        res = _residual(cur)
        improved = res < best_res
        best[improved] = cur[improved]
        best_res[improved] = res[improved]
    roots = best

    scale = 1.0 + max(abs(c.c2), abs(c.c1), abs(c.c0))
    residual = np.abs(roots ** 3 + c.c2 * roots ** 2 + c.c1 * roots + c.c0)
    if np.any(residual > 1e-6 * scale ** 3):
        raise NonConvergence(f"cubic root residuals {residual} exceed bound")

    order = np.lexsort((-roots.imag, -roots.real))
    r = roots[order]
    return EigenTriple(beta1=complex(r[0]), beta2=complex(r[1]),
                       beta3=complex(r[2]), index=c.index)


def vieta_residuals(triple: EigenTriple, c: CubicCoeffs) -> tuple[float, float, float]:
    """Absolute residuals of the three root/coefficient identities."""
    b1, b2, b3 = triple.roots
    return (abs(b1 + b2 + b3 + c.c2),
            abs(b1 * b2 + b1 * b3 + b2 * b3 - c.c1),
            abs(b1 * b2 * b3 + c.c0))


def spectrum_rows(params: PhysicalParams, idx: WaveIndex,
                  space: SpaceFlag) -> list[tuple[str, complex]]:
    """Labeled eigenvalues of one mode in the requested subspace.

    Lambda1 branches are labeled "1","2","3" (each listed twice in the full
    space for the two invariant planes); Lambda2 shear pairs are "shear1",
    "shear2" in both spaces; Lambda3 rows are "T" plus, in the full space,
    the rotation-coupled velocity pair "uv-","uv+".
    """
    if idx.cls is LatticeClass.Lambda2:
        beta = complex(-params.sigma * idx.alpha_sq)
        return [("shear1", beta), ("shear2", beta)]
    if idx.cls is LatticeClass.Lambda3:
        l_sq_pi_sq = idx.l * idx.l * PI_SQ
        rows = [("T", complex(-l_sq_pi_sq))]
        if space is SpaceFlag.FullSpace:
            rot = 1.0 / params.ro
            rows.append(("uv-", complex(-params.sigma * l_sq_pi_sq, -rot)))
            rows.append(("uv+", complex(-params.sigma * l_sq_pi_sq, +rot)))
        return rows
    triple = solve_cubic(cubic_coeffs(params, idx))
    copies = 2 if space is SpaceFlag.FullSpace else 1
    out = []
    for label, beta in zip(("1", "2", "3"), triple.roots):
        out.extend([(label, beta)] * copies)
    return out


def spectrum_at(params: PhysicalParams, idx: WaveIndex,
                space: SpaceFlag) -> list[complex]:
    """Eigenvalues of one mode, with multiplicity, in the requested subspace."""
    return [beta for _, beta in spectrum_rows(params, idx, space)]


def growth_rate(params: PhysicalParams, jmax: int, kmax: int, lmax: int,
                space: SpaceFlag) -> tuple[float, WaveIndex]:
    """Largest eigenvalue real part over the truncated lattice.

    Returns the maximum and the first lattice index (in enumeration order)
    attaining it.
    """
    if jmax < 1 or kmax < 1 or lmax < 1:
        raise ValueError("growth_rate needs truncation bounds >= (1,1,1)")
    best = -np.inf
    best_idx = None
    for idx in lattice(jmax, kmax, lmax, params):
        for beta in spectrum_at(params, idx, space):
            if beta.real > best:
                best = beta.real
                best_idx = idx
    return best, best_idx


def eigvec_coeffs(beta: complex, params: PhysicalParams,
                  idx: WaveIndex) -> EigenvectorCoeffs:
    """Eigenvector/dual coefficients (a1, a2) and (c1d, c2d) at beta.

    Raises SingularShift when a denominator is within 1e-12 * gamma_sq of
    zero: the closed-form eigenvector degenerates there.
    """
    sigma, ro, R = params.sigma, params.ro, params.rayleigh
    g_sq = idx.gamma_sq
    shift_v = beta + sigma * g_sq
    shift_t = beta + g_sq
    tol = 1e-12 * g_sq
    if abs(shift_v) < tol or abs(shift_t) < tol:
        raise SingularShift(
            f"eigenvector coefficients degenerate at beta={beta}: "
            f"|beta+sigma*gamma^2|={abs(shift_v):.3e}, "
            f"|beta+gamma^2|={abs(shift_t):.3e}")
    a1 = -1.0 / (ro * shift_v)
    a2 = 1.0 / shift_t
    return EigenvectorCoeffs(a1=a1, a2=a2, c1d=-a1, c2d=sigma * R * a2)
