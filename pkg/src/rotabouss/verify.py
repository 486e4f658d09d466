"""Acceptance verification suite.

Each check function is self-contained, returns a CheckResult, and validates
one published claim of the toolkit: closed-form critical values, root
identities, exchange of stabilities, oscillatory onset, fast-rotation
scaling, the quadratic interaction tables and cubic amplitude coefficient,
bilinear identities of the advection term, eigenpair residuals, and the
steady / oscillatory bifurcation runs of the nonlinear simulator.

run_all executes every check (optionally skipping the two long simulator
runs) and is what the command-line ``verify`` subcommand prints.
"""
from __future__ import annotations

import math
import time
import warnings
from dataclasses import dataclass

import numpy as np

from . import fields, reduction, sim
from .critical import check_c6, f_b, rc1, rc2, ro_asymptotics, x_star
from .errors import PositiveDelta
from .params import PI, PI_SQ, LatticeClass, PhysicalParams, SpaceFlag, WaveIndex, lattice
from .spectrum import cubic_coeffs, eigvec_coeffs, solve_cubic, spectrum_at, vieta_residuals

# Reference parameter sets used throughout the validation suite: one with
# steady onset (sigma > 1, moderate rotation), one with oscillatory onset
# (sigma < 1, fast rotation).
STEADY_EXAMPLE = PhysicalParams(sigma=2.0, ro=1.0, rayleigh=700.0,
                                alpha1=math.sqrt(5.0), alpha2=3.0)
HOPF_EXAMPLE = PhysicalParams(sigma=0.5, ro=0.04, rayleigh=3200.0,
                              alpha1=1.0, alpha2=4.5)

# Independently computed reference value of the cubic amplitude coefficient
# on the steady reference parameters (scripted arithmetic oracle).
DELTA_STEADY_ORACLE = -0.0833441617643971

_SEED = 20260816


@dataclass
class CheckResult:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float


def _result(number: int, name: str, t0: float, passed: bool,
            detail: str) -> CheckResult:
    return CheckResult(number=number, name=name, passed=bool(passed),
                       detail=detail, seconds=time.time() - t0)


def check_closed_form_critical_rayleigh() -> CheckResult:
    """Lattice-scanned steady critical value equals the closed form."""
    t0 = time.time()
    rng = np.random.default_rng(_SEED)
    worst = 0.0
    for _ in range(50):
        sigma = 1.0 + 9.0 * (1.0 - rng.random())          # (1, 10]
        ro = float(np.exp(rng.uniform(np.log(0.05), np.log(10.0))))
        b1 = PI_SQ / (sigma * sigma * ro * ro)
        xb = x_star(b1)
        a1 = math.sqrt(xb * (1.0 + rng.random()))          # alpha1^2 >= x*(b1)
        a2 = a1 * (1.1 + 2.0 * rng.random())               # alpha2 > alpha1
        p = PhysicalParams(sigma=sigma, ro=ro, rayleigh=1.0, alpha1=a1, alpha2=a2)
        res = rc1(p)
        closed = f_b(a1 * a1, b1)
        rel = abs(res.r_crit - closed) / closed
        worst = max(worst, rel)
        if rel > 1e-12 or (res.argmin.j, res.argmin.k) != (1, 0):
            return _result(1, "closed-form critical Rayleigh", t0, False,
                           f"mismatch at sigma={sigma:.4f} ro={ro:.4f}: "
                           f"scan {res.r_crit!r} vs closed form {closed!r} "
                           f"(rel {rel:.2e}), argmin ({res.argmin.j},{res.argmin.k},{res.argmin.l})")
    return _result(1, "closed-form critical Rayleigh", t0, True,
                   f"50 random admissible parameter sets, worst relative "
                   f"deviation {worst:.2e} (tol 1e-12)")


def check_cubic_root_identities() -> CheckResult:
    """Root-sum/product identities for randomized dispersion cubics."""
    t0 = time.time()
    rng = np.random.default_rng(_SEED + 1)
    worst = 0.0
    for _ in range(10_000):
        sigma = float(np.exp(rng.uniform(np.log(0.05), np.log(10.0))))
        ro = float(np.exp(rng.uniform(np.log(0.01), np.log(10.0))))
        r = float(np.exp(rng.uniform(0.0, np.log(1e6))))
        a1 = float(np.exp(rng.uniform(np.log(0.3), np.log(6.0))))
        a2 = a1 * (1.0 + rng.random() * 3.0)
        p = PhysicalParams(sigma=sigma, ro=ro, rayleigh=r, alpha1=a1, alpha2=a2)
        j = int(rng.integers(0, 5))
        k = int(rng.integers(0 if j > 0 else 1, 5))
        l = int(rng.integers(1, 4))
        idx = WaveIndex.make(j, k, l, p)
        c = cubic_coeffs(p, idx)
        triple = solve_cubic(c)
        r_sum, r_pair, r_prod = vieta_residuals(triple, c)
        # residuals are degree-1, -2, -3 in the roots, so each is scaled by
        # the matching power of s = 1 + max coefficient magnitude
        s = 1.0 + max(abs(c.c2), abs(c.c1), abs(c.c0))
        res = max(r_sum / s, r_pair / s ** 2, r_prod / s ** 3)
        worst = max(worst, res)
        if res > 1e-9:
            return _result(2, "cubic root identities", t0, False,
                           f"scaled residual {res:.2e} > 1e-9 at "
                           f"sigma={sigma:.4f} ro={ro:.4f} R={r:.4f} "
                           f"mode ({j},{k},{l})")
    return _result(2, "cubic root identities", t0, True,
                   f"10000 randomized cubics, worst scaled residual "
                   f"{worst:.2e} (tol 1e-9)")


def _full_spectrum_max_other(p: PhysicalParams, skip: tuple[int, int, int],
                             skip_count: int) -> float:
    """Largest real part over the truncated lattice, excluding the leading
    skip_count eigenvalues of the mode `skip`."""
    worst = -math.inf
    for idx in lattice(8, 8, 4, p):
        eigs = spectrum_at(p, idx, SpaceFlag.FullSpace)
        eigs = sorted(eigs, key=lambda z: -z.real)
        if (idx.j, idx.k, idx.l) == skip:
            eigs = eigs[skip_count:]
        for e in eigs:
            worst = max(worst, e.real)
    return worst


def check_steady_exchange_of_stabilities() -> CheckResult:
    """Leading growth rate crosses zero at the steady critical value while
    every other truncated-lattice eigenvalue stays strictly negative."""
    t0 = time.time()
    p = STEADY_EXAMPLE
    r1 = rc1(p).r_crit
    idx = WaveIndex.make(1, 0, 1, p)
    msgs = []
    ok = True

    beta_at = max(solve_cubic(cubic_coeffs(p.with_rayleigh(r1), idx)).roots,
                  key=lambda z: z.real)
    tol = 1e-9 * idx.gamma_sq
    if abs(beta_at) > tol:
        ok = False
    msgs.append(f"|beta(R_c1)| = {abs(beta_at):.2e} (tol {tol:.2e})")

    lo = max(solve_cubic(cubic_coeffs(p.with_rayleigh(r1 * (1 - 1e-3)), idx)).roots,
             key=lambda z: z.real)
    hi = max(solve_cubic(cubic_coeffs(p.with_rayleigh(r1 * (1 + 1e-3)), idx)).roots,
             key=lambda z: z.real)
    if not (lo.real < 0.0 < hi.real):
        ok = False
    msgs.append(f"sign flip: {lo.real:.3e} -> {hi.real:.3e}")

    # The crossing eigenvalue is doubly degenerate in the full space (one copy
    # per invariant translation plane), so both copies are excluded.
    worst_other = max(
        _full_spectrum_max_other(p.with_rayleigh(r1 * (1 - 1e-3)), (1, 0, 1), 2),
        _full_spectrum_max_other(p.with_rayleigh(r1 * (1 + 1e-3)), (1, 0, 1), 2))
    if worst_other >= -1e-3:
        ok = False
    msgs.append(f"max other Re = {worst_other:.4f} (< -1e-3 required)")
    return _result(3, "steady exchange of stabilities", t0, ok, "; ".join(msgs))


def check_hopf_onset_spectrum() -> CheckResult:
    """At the oscillatory critical value the conjugate pair sits on the
    imaginary axis at the predicted frequency, the third root at its
    predicted real location, and the admissibility bound holds."""
    t0 = time.time()
    p = HOPF_EXAMPLE
    res = rc2(p)
    r2 = res.r_crit
    idx = WaveIndex.make(res.argmin.j, res.argmin.k, res.argmin.l, p)
    roots = solve_cubic(cubic_coeffs(p.with_rayleigh(r2), idx)).roots
    by_imag = sorted(roots, key=lambda z: -abs(z.imag))
    pair = by_imag[:2]
    third = by_imag[2]
    g = idx.gamma_sq
    tol = 1e-9 * g
    ok = True
    msgs = [f"critical mode ({res.argmin.j},{res.argmin.k},{res.argmin.l}), R_c2 = {r2:.6f}"]

    re_pair = max(abs(pair[0].real), abs(pair[1].real))
    if re_pair > tol:
        ok = False
    msgs.append(f"|Re pair| = {re_pair:.2e} (tol {tol:.2e})")

    third_dev = abs(third + (2.0 * p.sigma + 1.0) * g)
    if third_dev > tol:
        ok = False
    msgs.append(f"|beta3 + (2s+1)g^2| = {third_dev:.2e}")

    a = res.hopf_freq
    im = max(pair, key=lambda z: z.imag).imag
    rel = abs(im - a) / a
    if rel > 1e-9:
        ok = False
    msgs.append(f"Im beta vs predicted frequency rel dev {rel:.2e}")

    bound = (1.0 - p.sigma) * PI_SQ / (p.sigma ** 2 * (1.0 + p.sigma) * g ** 3)
    if not (res.hopf_admissible and p.ro ** 2 < bound):
        ok = False
    msgs.append(f"admissibility: Ro^2 = {p.ro**2:.6f} < {bound:.6f}")
    return _result(4, "oscillatory onset spectrum", t0, ok, "; ".join(msgs))


def check_fast_rotation_scaling() -> CheckResult:
    """Log-log slope of the continuous-minimizer critical value over the
    stated rotation range must be -4/3 +- 0.03."""
    t0 = time.time()
    p = STEADY_EXAMPLE
    fit = ro_asymptotics(p.sigma, p.alpha1, p.alpha2,
                         [1e-2, 3e-3, 1e-3, 3e-4, 1e-4])
    lo, hi = -4.0 / 3.0 - 0.03, -4.0 / 3.0 + 0.03
    ok = lo <= fit.slope_continuous <= hi
    deep = ro_asymptotics(p.sigma, p.alpha1, p.alpha2,
                          [1e-4, 3e-5, 1e-5, 3e-6, 1e-6], jmax=50, kmax=40)
    detail = (f"slope over [1e-2, 1e-4] = {fit.slope_continuous:.6f}, "
              f"required within [{lo:.4f}, {hi:.4f}]; the -4/3 regime is "
              f"reached only at faster rotation (slope over [1e-4, 1e-6] = "
              f"{deep.slope_continuous:.6f})")
    return _result(5, "fast-rotation scaling exponent", t0, ok, detail)


_PATTERN_BUILDERS = {
    "v_sin_2x": lambda g, a: ("v", np.sin(2 * a * g.x)[:, None] * np.ones_like(g.z)[None, :]),
    "v_cos_2x": lambda g, a: ("v", np.cos(2 * a * g.x)[:, None] * np.ones_like(g.z)[None, :]),
    "u_cos_2z": lambda g, a: ("u", np.ones_like(g.x)[:, None] * np.cos(2 * PI * g.z)[None, :]),
    "v_cos_2z": lambda g, a: ("v", np.ones_like(g.x)[:, None] * np.cos(2 * PI * g.z)[None, :]),
    "t_sin_2z": lambda g, a: ("T", np.ones_like(g.x)[:, None] * np.sin(2 * PI * g.z)[None, :]),
}


def _pattern_field(name: str, a: float, nx: int, nz: int,
                   alpha1: float) -> fields.FieldOnGrid:
    f = fields.zero_field(nx, nz, alpha1)
    comp, values = _PATTERN_BUILDERS[name](f, a)
    return f.copy_with(**{comp: values})


def check_interaction_tables() -> CheckResult:
    """Closed-form quadratic interaction tables match grid quadrature, and
    the cubic amplitude coefficient matches its arithmetic oracle and stays
    negative over an admissible parameter sweep."""
    t0 = time.time()
    p = STEADY_EXAMPLE
    r1 = rc1(p).r_crit
    pc = p.with_rayleigh(r1)
    j1 = 1
    nx, nz = 64, 33
    idx = WaveIndex.make(j1, 0, 1, pc)
    a = j1 * pc.alpha1
    table = reduction.interaction_integrals(pc, j1, 0.0)
    psi = {1: fields.assemble_eigenvector(pc, idx, 0.0, 1, nx, nz),
           2: fields.assemble_eigenvector(pc, idx, 0.0, 2, nx, nz)}
    ok = True
    worst = 0.0
    msgs = []
    for (i, jj), entries in table.forward.items():
        g_field = fields.advect(psi[i], psi[jj])
        explained = fields.zero_field(nx, nz, pc.alpha1)
        for name in _PATTERN_BUILDERS:
            pat = _pattern_field(name, a, nx, nz, pc.alpha1)
            norm_sq = fields.inner(pat, pat)
            coeff = fields.inner(g_field, pat) / norm_sq
            want = entries.get(name, 0.0)
            scale = max(abs(v) for v in entries.values())
            dev = abs(coeff - want) / scale
            worst = max(worst, dev)
            if dev > 1e-10:
                ok = False
                msgs.append(f"entry {name} of pair ({i},{jj}): quadrature "
                            f"{coeff:.6e} vs table {want:.6e}")
            explained = explained.copy_with(**{
                c: getattr(explained, c) + want * getattr(pat, c)
                for c in ("u", "v", "w", "T")})
        # Completeness holds for the projected interaction: the raw quadratic
        # term also carries pressure-gradient content the evolution never
        # feels, so the residual is measured after the projection.
        residual = fields.norm(fields.project_field(pc, fields.FieldOnGrid(
            u=g_field.u - explained.u, v=g_field.v - explained.v,
            w=g_field.w - explained.w, T=g_field.T - explained.T,
            x=g_field.x, z=g_field.z, alpha1=g_field.alpha1)))
        rel_res = residual / max(
            fields.norm(fields.project_field(pc, g_field)), 1e-300)
        worst = max(worst, rel_res)
        if rel_res > 1e-10:
            ok = False
            msgs.append(f"unexplained interaction content for pair ({i},{jj}): "
                        f"relative residual {rel_res:.2e}")

    d = reduction.delta(p, j1)
    dev = abs(d - DELTA_STEADY_ORACLE) / abs(DELTA_STEADY_ORACLE)
    if d >= 0.0 or dev > 1e-12:
        ok = False
        msgs.append(f"amplitude coefficient {d!r} vs oracle "
                    f"{DELTA_STEADY_ORACLE!r} (rel {dev:.2e})")

    rng = np.random.default_rng(_SEED + 6)
    neg = 0
    for _ in range(20):
        sigma = 1.0 + 9.0 * (1.0 - rng.random())
        ro = float(np.exp(rng.uniform(np.log(0.05), np.log(5.0))))
        b1 = PI_SQ / (sigma * sigma * ro * ro)
        a1 = math.sqrt(x_star(b1) * (1.0 + rng.random()))
        ps = PhysicalParams(sigma=sigma, ro=ro, rayleigh=1.0,
                            alpha1=a1, alpha2=a1 * 2.0)
        try:
            if reduction.delta(ps, 1) < 0.0:
                neg += 1
        except PositiveDelta:
            pass
    if neg != 20:
        ok = False
        msgs.append(f"only {neg}/20 admissible sweep points gave a negative "
                    "amplitude coefficient")
    detail = (f"table-vs-quadrature worst relative deviation {worst:.2e} "
              f"(tol 1e-10); delta = {d!r} matches oracle to "
              f"{dev:.2e}; 20/20 sweep points negative")
    if msgs:
        detail = "; ".join(msgs)
    return _result(6, "interaction tables and amplitude coefficient", t0, ok, detail)


def check_bilinear_identities() -> CheckResult:
    """Advection-term identities on randomized solenoidal grid fields:
    energy neutrality, skew symmetry, critical-eigenspace confinement, and
    annihilation by the purely slaved profiles."""
    t0 = time.time()
    p = STEADY_EXAMPLE
    r1 = rc1(p).r_crit
    pc = p.with_rayleigh(r1)
    nx, nz = 64, 33
    rng = np.random.default_rng(_SEED + 7)
    worst_self = worst_skew = 0.0
    for _ in range(34):
        psi = fields.random_divfree_field(pc, rng, nx, nz, 4, 3)
        phi = fields.random_divfree_field(pc, rng, nx, nz, 4, 3)
        chi = fields.random_divfree_field(pc, rng, nx, nz, 4, 3)
        n_psi, n_phi, n_chi = (fields.norm(f) for f in (psi, phi, chi))
        self_pair = abs(fields.inner(fields.advect(psi, phi), phi))
        worst_self = max(worst_self, self_pair / (n_psi * n_phi * n_phi))
        skew = abs(fields.inner(fields.advect(psi, phi), chi)
                   + fields.inner(fields.advect(psi, chi), phi))
        worst_skew = max(worst_skew, skew / (n_psi * n_phi * n_chi))
    ok = worst_self <= 1e-10 and worst_skew <= 1e-10

    idx = WaveIndex.make(1, 0, 1, pc)
    psi1 = fields.assemble_eigenvector(pc, idx, 0.0, 1, nx, nz)
    psi2 = fields.assemble_eigenvector(pc, idx, 0.0, 2, nx, nz)
    duals = [fields.assemble_dual(pc, idx, 0.0, 1, nx, nz),
             fields.assemble_dual(pc, idx, 0.0, 2, nx, nz)]
    norm_scale = fields.norm(psi1) ** 2
    worst_conf = 0.0
    for fa in (psi1, psi2):
        for fb in (psi1, psi2):
            g = fields.advect(fa, fb)
            for du in duals:
                worst_conf = max(worst_conf,
                                 abs(fields.inner(g, du)) / norm_scale)
    ok = ok and worst_conf <= 1e-10

    worst_ann = 0.0
    for name in ("shear_sin", "shear_cos", "thermal"):
        tilde = reduction.cm_mode_field(pc, 1, name, nx, nz)
        for fb in (psi1, psi2):
            worst_ann = max(worst_ann, fields.norm(fields.advect(tilde, fb))
                            / max(fields.norm(fb), 1e-300))
    ok = ok and worst_ann <= 1e-10
    return _result(
        7, "advection bilinear identities", t0, ok,
        f"energy neutrality worst {worst_self:.2e}, skew symmetry worst "
        f"{worst_skew:.2e}, eigenspace confinement worst {worst_conf:.2e}, "
        f"slaved-profile annihilation worst {worst_ann:.2e} (all tol 1e-10)")


def check_eigenpair_residuals() -> CheckResult:
    """Assembled eigenvectors satisfy the linearized equations and the
    biorthogonality pairings."""
    t0 = time.time()
    nx, nz = 64, 33
    ok = True
    msgs = []

    worst_res = 0.0
    cases = []
    p1 = STEADY_EXAMPLE.with_rayleigh(rc1(STEADY_EXAMPLE).r_crit)
    idx1 = WaveIndex.make(1, 0, 1, p1)
    beta1 = max(solve_cubic(cubic_coeffs(p1, idx1)).roots, key=lambda z: z.real)
    cases += [(p1, idx1, beta1, v) for v in (1, 2)]
    p2 = HOPF_EXAMPLE.with_rayleigh(rc2(HOPF_EXAMPLE).r_crit)
    idx2 = WaveIndex.make(3, 0, 1, p2)
    roots2 = solve_cubic(cubic_coeffs(p2, idx2)).roots
    pair = sorted(roots2, key=lambda z: -abs(z.imag))[:2]
    cases += [(p2, idx2, b, 1) for b in pair]
    for p, idx, beta, variant in cases:
        f = fields.assemble_eigenvector(p, idx, beta, variant, nx, nz)
        res = fields.linear_residual(p, f, beta)
        worst_res = max(worst_res, res)
    if worst_res > 1e-8:
        ok = False
    msgs.append(f"worst linearized-equation residual {worst_res:.2e} (tol 1e-8)")

    psi = [fields.assemble_eigenvector(p1, idx1, beta1, v, nx, nz) for v in (1, 2)]
    dual = [fields.assemble_dual(p1, idx1, beta1, v, nx, nz) for v in (1, 2)]
    diag = abs(fields.inner(psi[0], dual[0]))
    worst_orth = max(abs(fields.inner(psi[0], dual[1])),
                     abs(fields.inner(psi[1], dual[0]))) / diag
    other_roots = sorted(solve_cubic(cubic_coeffs(p1, idx1)).roots,
                         key=lambda z: -z.real)
    dual_sub = fields.assemble_dual(p1, idx1, other_roots[1], 1, nx, nz)
    worst_orth = max(worst_orth, abs(fields.inner(psi[0], dual_sub)) / diag)
    idx_far = WaveIndex.make(2, 0, 1, p1)
    beta_far = max(solve_cubic(cubic_coeffs(p1, idx_far)).roots,
                   key=lambda z: z.real)
    dual_far = fields.assemble_dual(p1, idx_far, beta_far, 1, nx, nz)
    worst_orth = max(worst_orth, abs(fields.inner(psi[0], dual_far)) / diag)
    hopf_psi = fields.assemble_eigenvector(p2, idx2, pair[0], 1, nx, nz)
    hopf_dual_conj = fields.assemble_dual(p2, idx2, pair[1], 1, nx, nz)
    hopf_diag = abs(fields.inner(hopf_psi,
                                 fields.assemble_dual(p2, idx2, pair[0], 1, nx, nz)))
    worst_orth = max(worst_orth,
                     abs(fields.inner(hopf_psi, hopf_dual_conj)) / hopf_diag)
    if worst_orth > 1e-10:
        ok = False
    msgs.append(f"worst normalized cross pairing {worst_orth:.2e} (tol 1e-10)")
    return _result(8, "eigenpair residuals and biorthogonality", t0, ok,
                   "; ".join(msgs))


def check_steady_bifurcation_run() -> CheckResult:
    """Nonlinear run above onset saturates at the predicted amplitude; below
    onset the energy decays; the saturated state is part of a circle of
    steady states (translates restart steady)."""
    t0 = time.time()
    p = STEADY_EXAMPLE
    r1 = rc1(p).r_crit
    model = reduction.amplitude_model(p, 1)
    ok = True
    msgs = []

    pr = p.with_rayleigh(1.05 * r1)
    cfg = sim.SimConfig(params=pr, nx=64, nz=32, dt=2e-3, t_end=200.0,
                        seed_mode=WaveIndex.make(1, 0, 1, pr), seed_amp=1e-4,
                        scheme="imex2", symmetry=SpaceFlag.SymmetricSpace,
                        nonlinear=True, diag_every=0.25)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        diag, final = sim.run(cfg, return_state=True)
    amp = abs(diag.wmode[-1])
    pred = reduction.predicted_radius(model, 1.05 * r1)
    rel = abs(amp - pred) / pred
    if diag.outcome != "steady" or amp <= 0.0 or rel > 0.15:
        ok = False
    msgs.append(f"saturated amplitude {amp:.6f} vs predicted {pred:.6f} "
                f"(rel dev {rel:.2%}, tol 15%), outcome {diag.outcome}")

    pd = p.with_rayleigh(0.95 * r1)
    cfgd = sim.SimConfig(params=pd, nx=64, nz=32, dt=2e-3, t_end=50.0,
                         seed_mode=WaveIndex.make(1, 0, 1, pd), seed_amp=1e-4,
                         scheme="imex2", symmetry=SpaceFlag.SymmetricSpace,
                         nonlinear=True, diag_every=0.5)
    dd = sim.run(cfgd)
    ratio = dd.ke[-1] / dd.ke[0]
    if ratio > 1e-8:
        ok = False
    msgs.append(f"below onset: KE(50)/KE(0) = {ratio:.2e} (tol 1e-8)")

    shifted = sim.translate(final, 0.37, cfg)
    shifted.prev_advection = None
    cfg_full = sim.SimConfig(params=pr, nx=64, nz=32, dt=2e-3, t_end=5.0,
                             seed_mode=cfg.seed_mode, seed_amp=0.0,
                             scheme="imex2", symmetry=SpaceFlag.FullSpace,
                             nonlinear=True, diag_every=0.5)
    moved = shifted.copy()
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        for _ in range(int(round(5.0 / cfg_full.dt))):
            moved = sim.step(moved, cfg_full)
    drift = math.sqrt(sum(float(np.sum(np.abs(a - b) ** 2)) for a, b in
                          [(moved.u, shifted.u), (moved.v, shifted.v),
                           (moved.w, shifted.w), (moved.T, shifted.T)]))
    rel_drift = drift / sim._state_norm(shifted)
    amp_shift = abs(sim.mode_amplitude(moved, "w", 1, 1))
    amp_rel = abs(amp_shift - amp) / amp
    if rel_drift > 1e-6 or amp_rel > 1e-6:
        ok = False
    msgs.append(f"translated restart: relative drift {rel_drift:.2e} over 5 "
                f"units (tol 1e-6), amplitude preserved to {amp_rel:.2e}")
    return _result(9, "steady bifurcation run", t0, ok, "; ".join(msgs))


def check_hopf_bifurcation_run() -> CheckResult:
    """Above the oscillatory onset the solution oscillates at the linear
    frequency; below onset the oscillation decays.  The criticality
    direction is recorded, not asserted."""
    t0 = time.time()
    p = HOPF_EXAMPLE
    res = rc2(p)
    r2 = res.r_crit
    ok = True
    msgs = []

    ph = p.with_rayleigh(1.03 * r2)
    idx = WaveIndex.make(3, 0, 1, ph)
    beta = max(solve_cubic(cubic_coeffs(ph, idx)).roots, key=lambda z: z.real)
    cfg = sim.SimConfig(params=ph, nx=64, nz=32, dt=1e-3, t_end=6.0,
                        seed_mode=idx, seed_amp=1e-4, scheme="imex2",
                        symmetry=SpaceFlag.SymmetricSpace, nonlinear=True,
                        diag_every=0.01)
    diag = sim.run(cfg)
    period, perr = sim.measure_period(diag)
    predicted = 2.0 * math.pi / beta.imag
    rel = abs(period - predicted) / predicted
    onset_period = 2.0 * math.pi / res.hopf_freq
    if diag.outcome != "oscillating" or rel > 0.10:
        ok = False
    msgs.append(f"above onset: outcome {diag.outcome}, period {period:.6f} "
                f"+- {perr:.1e} vs linear-window prediction {predicted:.6f} "
                f"(rel dev {rel:.2%}, tol 10%); onset-limit period "
                f"2*pi/a = {onset_period:.6f}")
    grew = abs(diag.wmode[-1]) > abs(diag.wmode[0])
    if not grew:
        ok = False

    pl = p.with_rayleigh(0.97 * r2)
    cfgl = sim.SimConfig(params=pl, nx=64, nz=32, dt=1e-3, t_end=5.0,
                         seed_mode=WaveIndex.make(3, 0, 1, pl), seed_amp=1e-4,
                         scheme="imex2", symmetry=SpaceFlag.SymmetricSpace,
                         nonlinear=True, diag_every=0.01)
    diagl = sim.run(cfgl)
    decayed = abs(diagl.wmode[-1]) < 0.5 * abs(diagl.wmode[0])
    if not decayed:
        ok = False
    msgs.append(f"below onset: |amplitude| {abs(diagl.wmode[0]):.2e} -> "
                f"{abs(diagl.wmode[-1]):.2e} (decays)")
    msgs.append("criticality direction recorded: amplitude grows just above "
                "onset and decays just below; saturation vs local escape is "
                "not asserted")
    return _result(10, "oscillatory bifurcation run", t0, ok, "; ".join(msgs))


def _seed_interior_block(cfg: sim.SimConfig, j: int, l: int,
                         eps: float = 1e-6):
    idx = WaveIndex.make(j, 0, l, cfg.params)
    beta = max(solve_cubic(cubic_coeffs(cfg.params, idx)).roots,
               key=lambda z: z.real)
    ev = eigvec_coeffs(beta, cfg.params, idx)
    a = j * cfg.params.alpha1
    st = sim.zero_state(cfg)
    uc = 0.5j * l * PI / a
    st.u[j, l] = eps * uc
    st.v[j, l] = eps * complex(ev.a1).real * uc
    st.w[j, l] = eps * 0.5
    st.T[j, l] = eps * complex(ev.a2).real * 0.5
    return st, beta


def _block_norm(st: sim.SimState, j: int, l: int) -> float:
    return math.sqrt(abs(st.u[j, l]) ** 2 + abs(st.v[j, l]) ** 2
                     + abs(st.w[j, l]) ** 2 + abs(st.T[j, l]) ** 2)


def check_linear_operator_consistency() -> CheckResult:
    """Growth rates measured from nonlinearity-disabled runs reproduce the
    per-mode spectrum across all lattice classes and both spaces."""
    t0 = time.time()
    rows = []

    p = STEADY_EXAMPLE
    r1 = rc1(p).r_crit
    pr = p.with_rayleigh(1.05 * r1)
    dt = 1e-3
    cfg = sim.SimConfig(params=pr, nx=48, nz=16, dt=dt, t_end=1.0,
                        scheme="imex2", symmetry=SpaceFlag.FullSpace,
                        nonlinear=False, seed_mode=WaveIndex.make(1, 0, 1, pr))
    st = sim.zero_state(cfg)
    expected = {}
    for (j, l) in [(1, 1), (2, 1)]:
        seeded, beta = _seed_interior_block(cfg, j, l)
        st.u += seeded.u
        st.v += seeded.v
        st.w += seeded.w
        st.T += seeded.T
        expected[f"interior ({j},0,{l})"] = (beta.real, ("block", j, l))
    st.v[1, 0] = 1e-6
    expected["spanwise shear (1,0,0)"] = (-pr.sigma * pr.alpha1 ** 2, ("v", 1, 0))
    st.T[0, 1] = 1e-6
    expected["mean thermal (0,0,1)"] = (-PI_SQ, ("T", 0, 1))
    st.u[0, 1] = 1e-6
    expected["mean rotation pair (0,0,1)"] = (-pr.sigma * PI_SQ, ("uv", 0, 1))

    def measure(state, key):
        kind, j, l = key
        if kind == "block":
            return _block_norm(state, j, l)
        if kind == "uv":
            return math.sqrt(abs(state.u[j, l]) ** 2 + abs(state.v[j, l]) ** 2)
        return abs(getattr(state, kind)[j, l])

    m0 = {name: measure(st, key) for name, (_, key) in expected.items()}
    n = int(round(1.0 / dt))
    for _ in range(n):
        st = sim.step(st, cfg)
    for name, (want, key) in expected.items():
        rate = math.log(measure(st, key) / m0[name]) / (n * dt)
        rows.append((name, rate, want))

    ph = HOPF_EXAMPLE
    r2 = rc2(ph).r_crit
    pr2 = ph.with_rayleigh(1.03 * r2)
    idxh = WaveIndex.make(3, 0, 1, pr2)
    beta_h = max(solve_cubic(cubic_coeffs(pr2, idxh)).roots,
                 key=lambda z: z.real)
    half = math.pi / beta_h.imag
    t_star = half * max(1, round(1.0 / half))
    nh = max(1, round(t_star / 1e-3))
    cfgh = sim.SimConfig(params=pr2, nx=48, nz=16, dt=t_star / nh,
                         t_end=t_star, scheme="imex2",
                         symmetry=SpaceFlag.SymmetricSpace, nonlinear=False,
                         seed_mode=idxh)
    sth, _ = _seed_interior_block(cfgh, 3, 1)
    mh0 = _block_norm(sth, 3, 1)
    for _ in range(nh):
        sth = sim.step(sth, cfgh)
    rate_h = math.log(_block_norm(sth, 3, 1) / mh0) / (nh * cfgh.dt)
    rows.append(("oscillatory pair (3,0,1)", rate_h, beta_h.real))

    worst = max(abs(rate - want) / abs(want) for _, rate, want in rows)
    ok = worst <= 1e-4
    detail = "; ".join(f"{name}: {rate:.6f} vs {want:.6f}"
                       for name, rate, want in rows)
    return _result(11, "linear operator consistency", t0, ok,
                   f"worst relative deviation {worst:.2e} (tol 1e-4); {detail}")


CHECKS = [
    (check_closed_form_critical_rayleigh, False),
    (check_cubic_root_identities, False),
    (check_steady_exchange_of_stabilities, False),
    (check_hopf_onset_spectrum, False),
    (check_fast_rotation_scaling, False),
    (check_interaction_tables, False),
    (check_bilinear_identities, False),
    (check_eigenpair_residuals, False),
    (check_steady_bifurcation_run, True),
    (check_hopf_bifurcation_run, True),
    (check_linear_operator_consistency, False),
]


def run_all(quick: bool = False) -> list[CheckResult]:
    """Run the acceptance suite; quick mode skips the two long simulator runs."""
    results = []
    for func, is_long in CHECKS:
        if quick and is_long:
            continue
        results.append(func())
    return results


def format_table(results: list[CheckResult]) -> str:
    lines = []
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        lines.append(f"[{status}] {r.number:2d} {r.name:42s} "
                     f"({r.seconds:6.2f}s)  {r.detail}")
    n_pass = sum(r.passed for r in results)
    lines.append(f"{n_pass}/{len(results)} checks passed")
    return "\n".join(lines)
