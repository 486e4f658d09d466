"""Physical parameters and the wavenumber lattice shared by every module.

Wavenumber indices (j, k, l) label Fourier modes exp(i(j alpha1 x + k alpha2 y))
times a vertical sine/cosine profile of order l.  The lattice keeps j >= 0 with
signed k (and k > 0 when j = 0) so each conjugate pair of horizontal modes is
counted exactly once.  Classes:

  Lambda1: j >= 0, (j, k) != (0, 0), l >= 1   (buoyancy-coupled modes)
  Lambda2: j >= 0, (j, k) != (0, 0), l  = 0   (horizontal shear modes)
  Lambda3: (j, k) == (0, 0),         l >= 1   (mean-profile modes)
"""
from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass

from .errors import OutOfLattice

PI = math.pi
PI_SQ = math.pi ** 2


class LatticeClass(enum.Enum):
    Lambda1 = "Lambda1"
    Lambda2 = "Lambda2"
    Lambda3 = "Lambda3"


class SpaceFlag(enum.Enum):
    """Which invariant subspace a spectral enumeration works in.

    FullSpace is the whole phase space; SymmetricSpace is the subspace of
    fields with (u, v) odd and (w, T) even under (x, y) -> (-x, -y), in which
    the oscillatory critical pair is simple.
    """

    FullSpace = "full"
    SymmetricSpace = "sym"


@dataclass(frozen=True)
class PhysicalParams:
    """Dimensionless control parameters of the rotating convection problem.

    sigma: Prandtl number (> 0)
    ro: Rossby number (> 0); small ro means fast rotation
    rayleigh: thermal Rayleigh number (>= 0), the bifurcation parameter
    alpha1, alpha2: base horizontal wavenumbers of the periodicity cell (> 0)
    """

    sigma: float
    ro: float
    rayleigh: float
    alpha1: float
    alpha2: float

    def __post_init__(self):
        for name in ("sigma", "ro", "rayleigh", "alpha1", "alpha2"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value!r}")
        if self.sigma <= 0:
            raise ValueError(f"sigma must be > 0, got {self.sigma}")
        if self.ro <= 0:
            raise ValueError(f"ro must be > 0, got {self.ro}")
        if self.rayleigh < 0:
            raise ValueError(f"rayleigh must be >= 0, got {self.rayleigh}")
        if self.alpha1 <= 0:
            raise ValueError(f"alpha1 must be > 0, got {self.alpha1}")
        if self.alpha2 <= 0:
            raise ValueError(f"alpha2 must be > 0, got {self.alpha2}")

    def with_rayleigh(self, rayleigh: float) -> "PhysicalParams":
        return PhysicalParams(self.sigma, self.ro, rayleigh,
                              self.alpha1, self.alpha2)

    def alpha_sq(self, j: int, k: int) -> float:
        return j * j * self.alpha1 ** 2 + k * k * self.alpha2 ** 2

    def gamma_sq(self, j: int, k: int, l: int) -> float:
        return self.alpha_sq(j, k) + l * l * PI_SQ

    def to_dict(self) -> dict:
        return {"sigma": self.sigma, "ro": self.ro, "rayleigh": self.rayleigh,
                "alpha1": self.alpha1, "alpha2": self.alpha2}

    @classmethod
    def from_dict(cls, data: dict) -> "PhysicalParams":
        return cls(sigma=float(data["sigma"]), ro=float(data["ro"]),
                   rayleigh=float(data["rayleigh"]),
                   alpha1=float(data["alpha1"]), alpha2=float(data["alpha2"]))

    @classmethod
    def from_json(cls, path: str) -> "PhysicalParams":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))


@dataclass(frozen=True)
class WaveIndex:
    """One lattice point with its derived squared wavenumbers and class."""

    j: int
    k: int
    l: int
    alpha_sq: float
    gamma_sq: float
    cls: LatticeClass

    @classmethod
    def make(cls, j: int, k: int, l: int, params: PhysicalParams) -> "WaveIndex":
        lattice_class = classify(j, k, l)
        a_sq = params.alpha_sq(j, k)
        return cls(j=j, k=k, l=l, alpha_sq=a_sq,
                   gamma_sq=a_sq + l * l * PI_SQ, cls=lattice_class)


def classify(j: int, k: int, l: int) -> LatticeClass:
    """Return the lattice class of (j, k, l), or raise OutOfLattice.

    The lattice requires j >= 0, l >= 0, k > 0 when j = 0 (conjugate
    normalization), and excludes the zero horizontal index only when l = 0
    is also zero in the Lambda3 sense: (0,0,0) is not a mode.
    """
    if j < 0 or l < 0:
        raise OutOfLattice(f"({j},{k},{l}): j and l must be non-negative")
    if j == 0 and k < 0:
        raise OutOfLattice(f"({j},{k},{l}): k must be positive when j = 0")
    if j == 0 and k == 0:
        if l == 0:
            raise OutOfLattice("(0,0,0) is not a lattice mode")
        return LatticeClass.Lambda3
    return LatticeClass.Lambda2 if l == 0 else LatticeClass.Lambda1


def lattice(jmax: int, kmax: int, lmax: int,
            params: PhysicalParams) -> list[WaveIndex]:
    """Enumerate all lattice members with j <= jmax, |k| <= kmax, l <= lmax.

    Ordering is lexicographic in (l, j, k).  At least one horizontal
    truncation bound must be positive.
    """
    if jmax < 0 or kmax < 0 or lmax < 0:
        raise ValueError("truncation bounds must be non-negative")
    if jmax < 1 and kmax < 1:
        raise ValueError("need jmax >= 1 or kmax >= 1 for a nonempty "
                         "horizontal lattice")
    out = []
    for l in range(0, lmax + 1):
        for j in range(0, jmax + 1):
            for k in range(-kmax, kmax + 1):
                try:
                    out.append(WaveIndex.make(j, k, l, params))
                except OutOfLattice:
                    continue
    return out


DEFAULT_JMAX = 8
DEFAULT_KMAX = 8
DEFAULT_LMAX = 4
