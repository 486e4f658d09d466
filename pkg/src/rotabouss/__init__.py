"""Numerical toolkit for rotating Rayleigh-Benard convection.

Linear spectra on a periodic wavenumber lattice, critical Rayleigh numbers
for the steady and oscillatory onsets, center-manifold amplitude equations
near the first instability, and a vertical-slice pseudo-spectral simulator
for validating the predictions.
"""
from .critical import (
    AsymptoticsFit,
    CriticalResult,
    check_c6,
    check_c7,
    f_b,
    pes_scan,
    rc1,
    rc2,
    ro_asymptotics,
    x_star,
)
from .errors import (
    BlowUp,
    InsufficientOscillations,
    NonConvergence,
    OutOfLattice,
    PositiveDelta,
    RotaboussError,
    SigmaOutOfRange,
    SingularShift,
    TruncationTooSmall,
    WrongClass,
)
from .params import (
    LatticeClass,
    PhysicalParams,
    SpaceFlag,
    WaveIndex,
    classify,
    lattice,
)
from .reduction import (
    AmplitudeModel,
    CenterManifoldCoeffs,
    InteractionTable,
    amplitude_model,
    center_manifold_coeffs,
    delta,
    integrate_amplitude,
    interaction_integrals,
    predicted_radius,
)
from .sim import (
    Diagnostics,
    SimConfig,
    SimState,
    load_checkpoint,
    measure_period,
    run,
    save_checkpoint,
    seed_from_eigenvector,
    step,
    translate,
)
from .spectrum import (
    CubicCoeffs,
    EigenTriple,
    EigenvectorCoeffs,
    cubic_coeffs,
    eigvec_coeffs,
    growth_rate,
    solve_cubic,
    spectrum_at,
    spectrum_rows,
    vieta_residuals,
)

__version__ = "0.1.0"

__all__ = [
    "AmplitudeModel",
    "AsymptoticsFit",
    "BlowUp",
    "CenterManifoldCoeffs",
    "CriticalResult",
    "CubicCoeffs",
    "Diagnostics",
    "EigenTriple",
    "EigenvectorCoeffs",
    "InsufficientOscillations",
    "InteractionTable",
    "LatticeClass",
    "NonConvergence",
    "OutOfLattice",
    "PhysicalParams",
    "PositiveDelta",
    "RotaboussError",
    "SigmaOutOfRange",
    "SimConfig",
    "SimState",
    "SingularShift",
    "SpaceFlag",
    "TruncationTooSmall",
    "WaveIndex",
    "WrongClass",
    "amplitude_model",
    "center_manifold_coeffs",
    "check_c6",
    "check_c7",
    "classify",
    "cubic_coeffs",
    "delta",
    "eigvec_coeffs",
    "f_b",
    "growth_rate",
    "integrate_amplitude",
    "interaction_integrals",
    "lattice",
    "load_checkpoint",
    "measure_period",
    "pes_scan",
    "predicted_radius",
    "rc1",
    "rc2",
    "ro_asymptotics",
    "run",
    "save_checkpoint",
    "seed_from_eigenvector",
    "solve_cubic",
    "spectrum_at",
    "spectrum_rows",
    "step",
    "translate",
    "vieta_residuals",
    "x_star",
    "__version__",
]
