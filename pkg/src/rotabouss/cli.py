"""Command-line front end binding every module of the toolkit.

Subcommands: spectrum (eigenvalue dump over the truncated lattice), critical
(onset values and growth-rate scans), asymptotics (fast-rotation scaling of
the steady threshold), reduce (amplitude-equation coefficients and predicted
branch radius), simulate (vertical-slice nonlinear run), and verify (the full
numbered check suite).  Every CSV output gets a JSON manifest alongside it
recording the fully resolved inputs, so a run can be reproduced bit-exactly
from the manifest alone in single-threaded mode.  Floats are printed with 17
significant digits; all file outputs are UTF-8.
"""
from __future__ import annotations

import argparse
import csv
import json
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import __version__
from .critical import pes_scan, rc1, rc2, ro_asymptotics
from .errors import RotaboussError, SigmaOutOfRange
from .params import PhysicalParams, SpaceFlag, WaveIndex, lattice
from .reduction import amplitude_model
from .sim import SimConfig, run
from .spectrum import spectrum_rows

_PARAM_NAMES = ("sigma", "ro", "rayleigh", "alpha1", "alpha2")


class UsageError(Exception):
    """Bad or incomplete command-line input (exit code 2)."""


# ---------------------------------------------------------------------------
# small shared helpers
# ---------------------------------------------------------------------------

def _g(x: float) -> str:
    """17-significant-digit decimal rendering of a float."""
    return format(float(x), ".17g")


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return _g(value)
    return str(value)


def _scan_range(text: str) -> tuple[float, float, int]:
    """Parse a lo:hi:n scan specification."""
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(
            f"scan range must be lo:hi:n, got {text!r}")
    try:
        lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    if not lo < hi:
        raise argparse.ArgumentTypeError(f"need lo < hi in {text!r}")
    if n < 2:
        raise argparse.ArgumentTypeError(f"need n >= 2 in {text!r}")
    return lo, hi, n


def _float_list(text: str) -> list[float]:
    try:
        values = [float(tok) for tok in text.split(",") if tok.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    if not values:
        raise argparse.ArgumentTypeError("empty list")
    return values


def _space(text: str) -> SpaceFlag:
    return SpaceFlag.FullSpace if text == "full" else SpaceFlag.SymmetricSpace


def _add_param_args(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--config", metavar="JSON",
                     help="JSON file with sigma, ro, rayleigh, alpha1, alpha2")
    for name in _PARAM_NAMES:
        sub.add_argument(f"--{name}", type=float,
                         help=f"override {name} from --config")


def _add_threads_arg(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--threads", type=int, default=None,
                     help="worker-pool size for scan loops (default: "
                          "ROTABOUSS_THREADS or 1)")


def _resolve_threads(args: argparse.Namespace) -> int:
    value = getattr(args, "threads", None)
    if value is None:
        env = os.environ.get("ROTABOUSS_THREADS", "").strip()
        value = int(env) if env else 1
    if value < 1:
        raise UsageError(f"thread count must be >= 1, got {value}")
    return value


def _pmap(fn, items, threads: int) -> list:
    """Order-preserving map, optionally over a worker pool."""
    items = list(items)
    if threads <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def _resolve_raw(args: argparse.Namespace, required: tuple[str, ...],
                 defaults: dict | None = None) -> dict:
    """Merge --config values with per-field flag overrides."""
    raw: dict = dict(defaults or {})
    if args.config is not None:
        try:
            with open(args.config, "r", encoding="utf-8") as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {args.config!r}: {exc}")
        if not isinstance(data, dict):
            raise UsageError(f"config {args.config!r} must be a JSON object")
        for name in _PARAM_NAMES:
            if name in data:
                raw[name] = float(data[name])
    for name in _PARAM_NAMES:
        value = getattr(args, name, None)
        if value is not None:
            raw[name] = float(value)
    missing = [name for name in required if name not in raw]
    if missing:
        raise UsageError(
            "missing parameter(s) " + ", ".join(missing)
            + "; supply --config or the individual flags")
    return raw


def _resolve_params(args: argparse.Namespace,
                    need_rayleigh: bool = True) -> PhysicalParams:
    required = _PARAM_NAMES if need_rayleigh else tuple(
        n for n in _PARAM_NAMES if n != "rayleigh")
    raw = _resolve_raw(args, required, defaults=(
        {} if need_rayleigh else {"rayleigh": 0.0}))
    try:
        return PhysicalParams.from_dict(raw)
    except ValueError as exc:
        raise UsageError(str(exc))


def _manifest_path(out_csv: str) -> str:
    root, _ = os.path.splitext(out_csv)
    return root + ".manifest.json"


def _write_csv(path: str, header: list[str], rows) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([_cell(v) for v in row])


def _write_manifest(out_csv: str, subcommand: str, params: dict,
                    settings: dict, resolved_argv: list[str],
                    t0: float) -> str:
    manifest = {
        "subcommand": subcommand,
        "params": params,
        "settings": settings,
        "resolved_argv": resolved_argv,
        "version": __version__,
        "outputs": [out_csv],
        "duration_seconds": time.time() - t0,
    }
    path = _manifest_path(out_csv)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path


def _param_argv(params: PhysicalParams) -> list[str]:
    out: list[str] = []
    for name in _PARAM_NAMES:
        out += [f"--{name}", _g(getattr(params, name))]
    return out


# ---------------------------------------------------------------------------
# subcommand handlers
# ---------------------------------------------------------------------------

def _cmd_spectrum(args: argparse.Namespace) -> int:
    t0 = time.time()
    params = _resolve_params(args)
    space = _space(args.space)
    single = [v is not None for v in (args.j, args.k, args.l)]
    if any(single) and not all(single):
        raise UsageError("give all of --j --k --l for a single mode, or none")
    if all(single):
        indices = [WaveIndex.make(args.j, args.k, args.l, params)]
    else:
        indices = lattice(args.jmax, args.kmax, args.lmax, params)
    rows = []
    for idx in indices:
        for label, beta in spectrum_rows(params, idx, space):
            rows.append((idx.j, idx.k, idx.l, idx.cls.value, label,
                         beta.real, beta.imag))
    _write_csv(args.out, ["j", "k", "l", "class", "branch",
                          "re_beta", "im_beta"], rows)
    argv = (["spectrum"] + _param_argv(params)
            + ["--space", args.space]
            + (["--j", str(args.j), "--k", str(args.k), "--l", str(args.l)]
               if all(single) else
               ["--jmax", str(args.jmax), "--kmax", str(args.kmax),
                "--lmax", str(args.lmax)])
            + ["--out", args.out])
    _write_manifest(args.out, "spectrum", params.to_dict(),
                    {"space": args.space, "jmax": args.jmax,
                     "kmax": args.kmax, "lmax": args.lmax,
                     "mode": ([args.j, args.k, args.l]
                              if all(single) else None)},
                    argv, t0)
    print(f"wrote {len(rows)} eigenvalue rows to {args.out}")
    return 0


def _cmd_critical(args: argparse.Namespace) -> int:
    t0 = time.time()
    threads = _resolve_threads(args)
    params = _resolve_params(args, need_rayleigh=False)
    if args.scan is not None:
        lo, hi, n = args.scan
        space = _space(args.space)
        rows, bracket = pes_scan(params, lo, hi, n, space,
                                 jmax=args.jmax, kmax=args.kmax,
                                 lmax=args.lmax)
        csv_rows = [(r, rate, imag, idx.j, idx.k, idx.l)
                    for r, rate, imag, idx in rows]
        _write_csv(args.out, ["R", "re_beta_max", "im_beta_at_max",
                              "j", "k", "l"], csv_rows)
        if bracket is not None:
            print(f"growth rate changes sign between R = {_g(bracket[0])} "
                  f"and R = {_g(bracket[1])}")
        else:
            print("growth rate does not change sign on the scanned interval")
        argv = (["critical"] + _param_argv(params)
                + ["--scan", f"{_g(lo)}:{_g(hi)}:{n}", "--space", args.space,
                   "--jmax", str(args.jmax), "--kmax", str(args.kmax),
                   "--lmax", str(args.lmax), "--threads", str(threads),
                   "--out", args.out])
        _write_manifest(args.out, "critical", params.to_dict(),
                        {"scan": [lo, hi, n], "space": args.space,
                         "jmax": args.jmax, "kmax": args.kmax,
                         "lmax": args.lmax, "threads": threads},
                        argv, t0)
        return 0

    modes = ("steady", "hopf") if args.mode == "both" else (args.mode,)

    def one(mode: str):
        if mode == "steady":
            res = rc1(params, jmax=args.jmax, kmax=args.kmax)
        else:
            try:
                res = rc2(params, jmax=args.jmax, kmax=args.kmax)
            except SigmaOutOfRange:
                if args.mode != "both":
                    raise
                # no oscillatory onset exists at this Prandtl number; under
                # "both" that is a reportable outcome, not a failure
                return None
        return (mode, res.r_crit, res.argmin.j, res.argmin.k, res.argmin.l,
                res.unique, res.hopf_admissible, res.hopf_freq)

    rows = [row for row in _pmap(one, modes, threads) if row is not None]
    _write_csv(args.out, ["onset", "r_crit", "j", "k", "l", "unique",
                          "hopf_admissible", "hopf_freq"], rows)
    for row in rows:
        extra = f", frequency {_g(row[7])}" if row[7] is not None else ""
        print(f"{row[0]} onset at R = {_g(row[1])} "
              f"(mode ({row[2]},{row[3]},{row[4]})){extra}")
    if len(rows) < len(modes):
        print(f"no oscillatory onset: sigma = {_g(params.sigma)} >= 1")
    argv = (["critical"] + _param_argv(params)
            + ["--mode", args.mode, "--jmax", str(args.jmax),
               "--kmax", str(args.kmax), "--threads", str(threads),
               "--out", args.out])
    _write_manifest(args.out, "critical", params.to_dict(),
                    {"mode": args.mode, "jmax": args.jmax,
                     "kmax": args.kmax, "threads": threads}, argv, t0)
    return 0


def _cmd_asymptotics(args: argparse.Namespace) -> int:
    t0 = time.time()
    threads = _resolve_threads(args)
    raw = _resolve_raw(args, ("sigma", "alpha1", "alpha2"))
    ro_list = args.ro_list
    fit = ro_asymptotics(raw["sigma"], raw["alpha1"], raw["alpha2"],
                         ro_list, jmax=args.jmax, kmax=args.kmax)
    _write_csv(args.out, ["ro", "b", "x_star", "r_continuous", "r_lattice"],
               fit.table)
    print(f"continuous-minimizer log-log slope: {_g(fit.slope_continuous)}")
    print(f"lattice-constrained log-log slope:  {_g(fit.slope_lattice)}")
    argv = (["asymptotics", "--sigma", _g(raw["sigma"]),
             "--alpha1", _g(raw["alpha1"]), "--alpha2", _g(raw["alpha2"]),
             "--ro-list", ",".join(_g(r) for r in ro_list),
             "--jmax", str(args.jmax), "--kmax", str(args.kmax),
             "--threads", str(threads), "--out", args.out])
    _write_manifest(args.out, "asymptotics",
                    {"sigma": raw["sigma"], "alpha1": raw["alpha1"],
                     "alpha2": raw["alpha2"], "ro_list": ro_list},
                    {"jmax": args.jmax, "kmax": args.kmax,
                     "threads": threads}, argv, t0)
    return 0


def _cmd_reduce(args: argparse.Namespace) -> int:
    t0 = time.time()
    threads = _resolve_threads(args)
    params = _resolve_params(args, need_rayleigh=False)
    if (args.r is None) == (args.r_scan is None):
        raise UsageError("give exactly one of --r or --r-scan")
    model = amplitude_model(params, args.j1)
    print(f"steady onset at R = {_g(model.r_crit)}; "
          f"cubic coefficient delta = {_g(model.delta)}")
    if args.r is not None:
        r_values = [args.r]
    else:
        lo, hi, n = args.r_scan
        r_values = [float(r) for r in np.linspace(lo, hi, n)]

    def one(r: float):
        radius = (model.radius_pred(r)
                  if r >= model.r_crit * (1.0 - 1e-12) else 0.0)
        return (r, model.beta_of_r(r), model.delta, radius)

    rows = _pmap(one, r_values, threads)
    _write_csv(args.out, ["R", "beta", "delta", "radius_pred"], rows)
    argv = (["reduce"] + _param_argv(params) + ["--j1", str(args.j1)]
            + (["--r", _g(args.r)] if args.r is not None else
               ["--r-scan", f"{_g(args.r_scan[0])}:{_g(args.r_scan[1])}:"
                            f"{args.r_scan[2]}"])
            + ["--threads", str(threads), "--out", args.out])
    _write_manifest(args.out, "reduce", params.to_dict(),
                    {"j1": args.j1, "r": args.r,
                     "r_scan": list(args.r_scan) if args.r_scan else None,
                     "threads": threads}, argv, t0)
    return 0


def _cmd_simulate(args: argparse.Namespace) -> int:
    t0 = time.time()
    params = _resolve_params(args, need_rayleigh=args.r is None)
    if args.r is not None:
        params = params.with_rayleigh(args.r)
    if params.rayleigh <= 0.0:
        raise UsageError("simulate needs a positive Rayleigh number "
                         "(--r or rayleigh in the config)")
    seed = WaveIndex.make(args.seed_j, 0, args.seed_l, params)
    config = SimConfig(params=params, nx=args.nx, nz=args.nz, dt=args.dt,
                       t_end=args.t_end, symmetry=_space(args.symmetry),
                       dealias=not args.no_dealias, seed_mode=seed,
                       seed_amp=args.seed_amp, scheme=args.scheme,
                       diag_every=args.diag_every)
    diag = run(config)
    rows = zip(diag.t, diag.ke, diag.te, diag.wmode.real, diag.wmode.imag,
               diag.growth_rate, diag.div_max)
    _write_csv(args.out, ["t", "ke", "te", "re_wmode", "im_wmode",
                          "growth_rate", "div_max"],
               [tuple(float(v) for v in row) for row in rows])
    print(f"outcome: {diag.outcome}; final t = {_g(float(diag.t[-1]))}, "
          f"|w-mode| = {_g(float(abs(diag.wmode[-1])))}, "
          f"max divergence = {_g(float(np.max(diag.div_max)))}")
    argv = (["simulate"] + _param_argv(params)
            + ["--nx", str(args.nx), "--nz", str(args.nz),
               "--dt", _g(args.dt), "--t-end", _g(args.t_end),
               "--seed-amp", _g(args.seed_amp), "--seed-j", str(args.seed_j),
               "--seed-l", str(args.seed_l), "--symmetry", args.symmetry,
               "--scheme", args.scheme, "--diag-every", _g(args.diag_every)]
            + (["--no-dealias"] if args.no_dealias else [])
            + ["--out", args.out])
    _write_manifest(args.out, "simulate", params.to_dict(),
                    {"nx": args.nx, "nz": args.nz, "dt": args.dt,
                     "t_end": args.t_end, "symmetry": args.symmetry,
                     "dealias": not args.no_dealias,
                     "seed_mode": [args.seed_j, 0, args.seed_l],
                     "seed_amp": args.seed_amp, "scheme": args.scheme,
                     "diag_every": args.diag_every}, argv, t0)
    return 0


def _cmd_verify(args: argparse.Namespace) -> int:
    from . import verify as verify_mod
    results = verify_mod.run_all(quick=args.quick)
    print(verify_mod.format_table(results))
    failed = [r for r in results if not r.passed]
    if failed:
        names = "; ".join(f"check {r.number} ({r.name})" for r in failed)
        print(f"failing: {names}", file=sys.stderr)
        return 1
    return 0


# ---------------------------------------------------------------------------
# parser and dispatch
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rotabouss",
        description="Linear spectra, onset thresholds, amplitude equations, "
                    "and a vertical-slice nonlinear simulator for rotating "
                    "stratified convection.")
    parser.add_argument("--version", action="version",
                        version=f"rotabouss {__version__}")
    subs = parser.add_subparsers(dest="subcommand", required=True)

    sp = subs.add_parser("spectrum",
                         help="eigenvalues over the truncated lattice")
    _add_param_args(sp)
    sp.add_argument("--j", type=int, help="single-mode x index")
    sp.add_argument("--k", type=int, help="single-mode y index")
    sp.add_argument("--l", type=int, help="single-mode vertical order")
    sp.add_argument("--jmax", type=int, default=8)
    sp.add_argument("--kmax", type=int, default=8)
    sp.add_argument("--lmax", type=int, default=4)
    sp.add_argument("--space", choices=("full", "sym"), default="full")
    sp.add_argument("--out", required=True, metavar="CSV")
    sp.set_defaults(func=_cmd_spectrum)

    cr = subs.add_parser("critical",
                         help="critical Rayleigh numbers or growth-rate scan")
    _add_param_args(cr)
    cr.add_argument("--mode", choices=("steady", "hopf", "both"),
                    default="both")
    cr.add_argument("--jmax", type=int, default=8)
    cr.add_argument("--kmax", type=int, default=8)
    cr.add_argument("--lmax", type=int, default=4,
                    help="vertical truncation for --scan")
    cr.add_argument("--scan", type=_scan_range, metavar="LO:HI:N",
                    help="scan leading growth rate over a Rayleigh range "
                         "(ignores --mode)")
    cr.add_argument("--space", choices=("full", "sym"), default="full",
                    help="subspace for --scan")
    _add_threads_arg(cr)
    cr.add_argument("--out", required=True, metavar="CSV")
    cr.set_defaults(func=_cmd_critical)

    asym = subs.add_parser("asymptotics",
                           help="fast-rotation scaling of the steady onset")
    _add_param_args(asym)
    asym.add_argument("--ro-list", type=_float_list, required=True,
                      metavar="RO1,RO2,...",
                      help="strictly decreasing Rossby numbers spanning "
                           ">= 2 decades")
    asym.add_argument("--jmax", type=int, default=8)
    asym.add_argument("--kmax", type=int, default=8)
    _add_threads_arg(asym)
    asym.add_argument("--out", required=True, metavar="CSV")
    asym.set_defaults(func=_cmd_asymptotics)

    rd = subs.add_parser("reduce",
                         help="amplitude-equation coefficients and "
                              "predicted branch radius")
    _add_param_args(rd)
    rd.add_argument("--j1", type=int, default=1,
                    help="x index of the critical mode")
    rd.add_argument("--r", type=float, help="single Rayleigh value")
    rd.add_argument("--r-scan", type=_scan_range, metavar="LO:HI:N",
                    help="Rayleigh scan range")
    _add_threads_arg(rd)
    rd.add_argument("--out", required=True, metavar="CSV")
    rd.set_defaults(func=_cmd_reduce)

    sim = subs.add_parser("simulate", help="vertical-slice nonlinear run")
    _add_param_args(sim)
    sim.add_argument("--nx", type=int, default=64)
    sim.add_argument("--nz", type=int, default=32)
    sim.add_argument("--dt", type=float, default=1e-3)
    sim.add_argument("--t-end", type=float, default=10.0)
    sim.add_argument("--r", type=float,
                     help="Rayleigh number (overrides config)")
    sim.add_argument("--seed-amp", type=float, default=1e-4)
    sim.add_argument("--seed-j", type=int, default=1)
    sim.add_argument("--seed-l", type=int, default=1)
    sim.add_argument("--symmetry", choices=("full", "sym"), default="full")
    sim.add_argument("--scheme", choices=("imex1", "imex2"), default="imex1")
    sim.add_argument("--diag-every", type=float, default=0.05)
    sim.add_argument("--no-dealias", action="store_true")
    sim.add_argument("--out", required=True, metavar="CSV")
    sim.set_defaults(func=_cmd_simulate)

    vf = subs.add_parser("verify", help="run the numbered check suite")
    vf.add_argument("--quick", action="store_true",
                    help="skip the two long simulation checks")
    vf.set_defaults(func=_cmd_verify)
    return parser


def dispatch(argv: list[str] | None = None) -> int:
    """Parse and execute; returns the process exit code.

    0 on success (for verify: all checks passed), 1 on numerical failure
    with the failing check named on stderr, 2 on usage errors.
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except RotaboussError as exc:
        print(f"error [{type(exc).__name__}]: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
