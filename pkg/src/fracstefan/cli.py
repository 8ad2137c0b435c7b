"""Command-line front end: solve, profile, verify and scan.

Every command resolves a :class:`RunConfig` from built-in defaults, an
optional JSON config file and the command-line flags (in increasing order
of precedence), validates it, and only then computes. Outputs depend on the
configuration alone; randomized scans need an explicit ``--seed``.

Exit codes
----------
0  success
1  invalid configuration or problem data
2  subcritical flux (no phase change)
3  no sign change of the root function
4  input/output error
5  a verification gate or regression check failed
6  a series, quadrature or root did not converge
"""
from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import math
import os
import sys
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import analysis, similarity, verify
from .errors import (
    ConvergenceError,
    FracStefanError,
    NoBracketError,
    SubcriticalFluxError,
    UnderflowGuardError,
)

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_SUBCRITICAL = 2
EXIT_NO_BRACKET = 3
EXIT_IO = 4
EXIT_GATE = 5
EXIT_CONVERGENCE = 6

SCANS = ("f2", "chain", "alpha-limit", "equivalence")
DEFAULT_LIMIT_ALPHAS = (0.9, 0.95, 0.99, 0.999, 0.9999)
CHAIN_ALPHAS = tuple(round(0.1 * k, 1) for k in range(1, 10))


class ConfigError(ValueError):
    """The resolved configuration violates a constraint."""


@dataclass
class RunConfig:
    """Fully resolved settings of one CLI run (SI units, temperatures in kelvin).

    Defaults describe ice at 263.15 K melted by a face flux of 5e4 W m^-2
    s^(alpha/2) at alpha = 1/2. ``alpha`` and ``q0`` stay ``None`` until
    :func:`resolve_config` fills them (alpha = 1 under ``classical``; q0 only
    when no ``t0`` is given).
    """

    command: str = "solve"
    alpha: Optional[float] = None
    q0: Optional[float] = None
    t0: Optional[float] = None
    ti: float = 263.15
    tm: float = 273.15
    ks: float = 2.22
    cs: float = 2050.0
    kl: float = 0.556
    cl: float = 4186.0
    rho: float = 1000.0
    latent: float = 334000.0
    one_phase: bool = False
    classical: bool = False
    tol: float = similarity.DEFAULT_TOL
    out: Optional[str] = None
    format: str = "json"
    seed: Optional[int] = None
    # profile grid
    x_max: Optional[float] = None
    nx: int = 50
    t_min: float = 0.1
    t_max: float = 10.0
    nt: int = 10
    # verify
    t_eval: float = 1.0
    # scans
    scan: str = "all"
    alphas: Optional[list] = None
    scan_x_max: float = 20.0
    scan_points: int = 200
    samples: int = 20


_FIELDS = {f.name: f for f in dataclasses.fields(RunConfig)}


def _positive(name, value):
    if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
        raise ConfigError(f"{name} must be a positive finite number, got {value!r}")


def validate(cfg: RunConfig) -> None:
    """Reject a configuration before any computation."""
    if cfg.command not in ("solve", "profile", "verify", "scan"):
        raise ConfigError(f"unknown command {cfg.command!r}")
    alpha = cfg.alpha
    if not (isinstance(alpha, (int, float)) and 0.0 < alpha <= 1.0):
        raise ConfigError(f"alpha must lie in (0, 1], got {alpha!r}")
    if cfg.classical and alpha != 1.0:
        raise ConfigError(f"--classical needs alpha = 1, got {alpha!r}")
    if cfg.q0 is not None and cfg.t0 is not None:
        raise ConfigError("give either q0 (flux problem) or t0 (temperature problem), not both")
    if cfg.classical and cfg.t0 is not None:
        raise ConfigError("--classical solves the flux problem; it cannot be combined with --t0")
    for name in ("ks", "cs", "kl", "cl", "rho", "latent", "tol", "t_min", "t_max", "t_eval", "scan_x_max"):
        _positive(name, getattr(cfg, name))
    for name in ("ti", "tm"):
        v = getattr(cfg, name)
        if not (isinstance(v, (int, float)) and math.isfinite(v)):
            raise ConfigError(f"{name} must be a finite number, got {v!r}")
    if not cfg.one_phase and not cfg.ti < cfg.tm:
        raise ConfigError(f"two-phase problems need ti < tm (got ti={cfg.ti!r}, tm={cfg.tm!r}); "
                          "use --one-phase for a solid at the melting temperature")
    if cfg.t_max < cfg.t_min:
        raise ConfigError(f"t_max ({cfg.t_max!r}) must not be below t_min ({cfg.t_min!r})")
    for name in ("nx", "nt", "scan_points", "samples"):
        v = getattr(cfg, name)
        if not (isinstance(v, int) and v >= 1):
            raise ConfigError(f"{name} must be a positive integer, got {v!r}")
    if cfg.x_max is not None:
        _positive("x_max", cfg.x_max)
    if cfg.format not in ("csv", "json"):
        raise ConfigError(f"format must be 'csv' or 'json', got {cfg.format!r}")
    if cfg.scan not in SCANS + ("all",):
        raise ConfigError(f"scan must be one of {', '.join(SCANS + ('all',))}, got {cfg.scan!r}")
    if cfg.seed is not None and not (isinstance(cfg.seed, int) and 0 <= cfg.seed < 2**64):
        raise ConfigError(f"seed must be an unsigned 64-bit integer, got {cfg.seed!r}")
    if cfg.alphas is not None:
        for a in cfg.alphas:
            if not (isinstance(a, (int, float)) and 0.0 < a <= 1.0):
                raise ConfigError(f"scan orders must lie in (0, 1], got {a!r}")
    if cfg.command == "scan" and cfg.scan == "equivalence" and cfg.seed is None:
        raise ConfigError("the equivalence scan draws random problems; pass --seed")


def build_problem(cfg: RunConfig):
    """Flux or temperature problem described by ``cfg`` (library validation applies)."""
    alpha = float(cfg.alpha)
    liquid = similarity.Material(cfg.kl, cfg.cl)
    if cfg.one_phase:
        if cfg.t0 is not None:
            return similarity.make_one_phase("temperature", liquid, cfg.rho, cfg.latent, cfg.tm, cfg.t0, alpha)
        return similarity.make_one_phase("flux", liquid, cfg.rho, cfg.latent, cfg.tm, cfg.q0, alpha)
    solid = similarity.Material(cfg.ks, cfg.cs)
    if cfg.t0 is not None:
        return similarity.TemperatureProblem(solid, liquid, cfg.rho, cfg.latent, cfg.ti, cfg.tm, cfg.t0, alpha)
    return similarity.FluxProblem(solid, liquid, cfg.rho, cfg.latent, cfg.ti, cfg.tm, cfg.q0, alpha)


def solve(cfg: RunConfig, problem=None):
    """Solve the configured problem with the solver its flags select."""
    p = build_problem(cfg) if problem is None else problem
    if isinstance(p, similarity.TemperatureProblem):
        return similarity.solve_temperature(p, cfg.tol)
    if cfg.classical:
        return similarity.solve_classical_flux(p, cfg.tol)
    return similarity.solve_flux(p, cfg.tol)


# ---------------------------------------------------------------- output


def fmt(v):
    """17 significant digits for floats, plain text otherwise."""
    if isinstance(v, bool) or v is None:
        return "" if v is None else str(v).lower()
    if isinstance(v, (float, np.floating)):
        return "%.17g" % v
    return str(v)


def _json_safe(v):
    if isinstance(v, dict):
        return {k: _json_safe(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_json_safe(x) for x in v]
    if isinstance(v, np.generic):
        v = v.item()
    if isinstance(v, float) and not math.isfinite(v):
        return None
    return v


def dumps(obj) -> str:
    return json.dumps(_json_safe(obj), indent=2) + "\n"


def write_csv(path: str, header, rows) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([fmt(v) for v in row])


def write_text(path: str, text: str) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        fh.write(text)


def _out_dir(cfg):
    d = cfg.out or "."
    os.makedirs(d, exist_ok=True)
    return d


def _emit_summary(cfg, name, summary, out):
    """Print a flat summary and, with ``--out``, save it as JSON or one-row CSV."""
    out.write(dumps(summary))
    if cfg.out is None:
        return
    d = _out_dir(cfg)
    if cfg.format == "json":
        write_text(os.path.join(d, f"{name}.json"), dumps(summary))
    else:
        keys = list(summary)
        write_csv(os.path.join(d, f"{name}.csv"), keys, [[summary[k] for k in keys]])


# ---------------------------------------------------------------- commands


def solution_summary(sol, p) -> dict:
    """Flat JSON-ready summary of a solution, including the dual boundary datum."""
    dp = sol.params
    temperature = sol.kind is similarity.SolutionKind.TEMPERATURE
    return {
        "kind": sol.kind.value,
        "alpha": sol.alpha,
        "one_phase": p.one_phase,
        "mu": sol.mu,
        "residual": sol.residual,
        "relative_residual": sol.relative_residual,
        "q_crit": 0.0 if p.one_phase else similarity.critical_flux(p),
        "q0": similarity.face_flux_coefficient(sol) if temperature else p.q0,
        "t0": p.T_0 if temperature else similarity.face_temperature(sol),
        "dual": "q0" if temperature else "t0",
        "lambda_s": dp.lambda_s,
        "lambda_l": dp.lambda_l,
        "lambda": dp.lam,
        "c_alpha": dp.c_alpha,
        "nu": dp.nu,
        "warnings": "; ".join(sol.warnings),
    }


def cmd_solve(cfg: RunConfig, out=sys.stdout) -> int:
    p = build_problem(cfg)
    sol = solve(cfg, p)
    _emit_summary(cfg, "solve", solution_summary(sol, p), out)
    return EXIT_OK


def profile_rows(sol, cfg: RunConfig):
    """(x, t, phase, temperature) rows, t-major and x-minor, plus (t, r) rows."""
    ts = np.linspace(cfg.t_min, cfg.t_max, cfg.nt)
    dp = sol.params
    x_max = cfg.x_max
    if x_max is None:
        x_max = similarity.front_position(sol, cfg.t_max) + 10.0 * dp.lambda_s * cfg.t_max**dp.nu
    xs = np.linspace(0.0, x_max, cfg.nx)
    rows, fronts = [], []
    for t in ts:
        t = float(t)
        r = similarity.front_position(sol, t)
        fronts.append((t, r))
        for x in xs:
            x = float(x)
            if x <= r:
                rows.append((x, t, "liquid", similarity.theta_liquid(sol, x, t)))
            else:
                rows.append((x, t, "solid", similarity.theta_solid(sol, x, t)))
    return rows, fronts


def cmd_profile(cfg: RunConfig, out=sys.stdout) -> int:
    p = build_problem(cfg)
    sol = solve(cfg, p)
    rows, fronts = profile_rows(sol, cfg)
    d = _out_dir(cfg)
    prof = os.path.join(d, "profile.csv")
    front = os.path.join(d, "front.csv")
    write_csv(prof, ["x", "t", "phase", "temperature"], rows)
    write_csv(front, ["t", "r_t"], fronts)
    summary = {"mu": sol.mu, "rows": len(rows), "profile_csv": prof, "front_csv": front}
    out.write(dumps(summary))
    return EXIT_OK


def cmd_verify(cfg: RunConfig, out=sys.stdout, err=sys.stderr) -> int:
    p = build_problem(cfg)
    sol = solve(cfg, p)
    report = verify.build_report(sol, t=cfg.t_eval)
    text = dumps(report.to_dict())
    out.write(text)
    if cfg.out is not None:
        write_text(os.path.join(_out_dir(cfg), "verify.json"), text)
    failed = [name for name, g in report.gates.items() if not g["passed"]]
    if failed:
        for name in failed:
            g = report.gates[name]
            err.write(f"gate {name} failed: value {fmt(g['value'])}, threshold {fmt(g['threshold'])}\n")
        return EXIT_GATE
    return EXIT_OK


def _scan_f2(cfg, d, verdict, findings):
    alphas = cfg.alphas or list(analysis.FIGURE_ALPHAS)
    figure_orders = set(analysis.FIGURE_ALPHAS)
    rows = []
    all_monotone, min_margin, regression = True, math.inf, False
    for a in alphas:
        rep = analysis.f2_monotonicity_scan(a, cfg.scan_x_max, cfg.scan_points)
        for x, v, m in zip(rep.grid, rep.values, rep.margins):
            rows.append((a, x, v, m))
        all_monotone &= rep.monotone
        min_margin = min(min_margin, rep.min_margin)
        if not rep.monotone or rep.min_margin <= 0.0:
            findings.append(f"f2 alpha={fmt(a)}: monotone={rep.monotone}, min margin {fmt(rep.min_margin)}")
            # violations at the figure orders are regressions, elsewhere findings
            regression |= a in figure_orders
    write_csv(os.path.join(d, "f2_scan.csv"), ["alpha", "x", "f2", "turan_margin"], rows)
    verdict["f2_monotone"] = all_monotone
    verdict["f2_min_turan_margin"] = min_margin
    return not regression


def _scan_chain(cfg, d, verdict, findings):
    alphas = [a for a in (cfg.alphas or CHAIN_ALPHAS) if a < 1.0]
    xs = np.geomspace(1e-3, cfg.scan_x_max, cfg.scan_points)
    rows, worst = [], math.inf
    for a in alphas:
        for x in xs:
            m1, m2, m3 = analysis.chain_inequality_margins(float(x), a)
            rows.append((a, float(x), m1, m2, m3))
            worst = min(worst, m1, m2, m3)
    write_csv(os.path.join(d, "chain_scan.csv"), ["alpha", "x", "m1", "m2", "m3"], rows)
    verdict["chain_min_margin"] = worst
    if not worst > 0.0:
        findings.append(f"chain inequality margin {fmt(worst)} is not positive")
    return True


def _scan_alpha_limit(cfg, d, verdict, findings):
    p = build_problem(cfg)
    if not isinstance(p, similarity.FluxProblem):
        raise ConfigError("the alpha-limit scan needs a flux problem (q0, not t0)")
    alphas = [a for a in (cfg.alphas or DEFAULT_LIMIT_ALPHAS) if a < 1.0]
    rows, mu1 = verify.alpha_limit_scan(p, alphas, cfg.tol)
    write_csv(os.path.join(d, "alpha_limit.csv"), ["alpha", "mu", "gap", "status"],
              [(r.alpha, r.mu, r.gap, r.status) for r in rows])
    verdict["alpha_limit_mu_classical"] = mu1
    ok = [r for r in rows if r.status == "ok"]
    if ok:
        last = max(ok, key=lambda r: r.alpha)
        verdict["alpha_limit_closest_alpha"] = last.alpha
        verdict["alpha_limit_closest_gap"] = last.gap
    return True


def _scan_equivalence(cfg, d, verdict, findings):
    rng = np.random.default_rng(cfg.seed)
    rows, worst_gap, worst_temp = [], 0.0, 0.0
    for i in range(cfg.samples):
        one = i % 5 == 4
        fwd = analysis.equivalence_roundtrip(analysis.random_flux_problem(rng, one), cfg.tol, rng)
        rev = analysis.reverse_roundtrip(analysis.random_temperature_problem(rng, one), cfg.tol, rng)
        for direction, r in (("forward", fwd), ("reverse", rev)):
            rows.append((i, direction, one, r.mu, r.dual, r.xi, r.gap, r.temperature_gap))
            worst_gap = max(worst_gap, r.gap)
            worst_temp = max(worst_temp, r.temperature_gap)
    write_csv(os.path.join(d, "equivalence.csv"),
              ["index", "direction", "one_phase", "mu", "dual", "xi", "gap", "temperature_gap"], rows)
    verdict["equivalence_max_gap"] = worst_gap
    verdict["equivalence_max_temperature_gap"] = worst_temp
    passed = worst_gap < 1e-10 and worst_temp < 1e-9
    if not passed:
        findings.append(f"equivalence gap {fmt(worst_gap)} or temperature gap {fmt(worst_temp)} too large")
    return passed


def cmd_scan(cfg: RunConfig, out=sys.stdout, err=sys.stderr) -> int:
    d = _out_dir(cfg)
    wanted = SCANS if cfg.scan == "all" else (cfg.scan,)
    verdict, findings, regressions = {}, [], []
    runners = {"f2": _scan_f2, "chain": _scan_chain, "alpha-limit": _scan_alpha_limit,
               "equivalence": _scan_equivalence}
    for name in wanted:
        if name == "equivalence" and cfg.seed is None:
            verdict["equivalence_skipped"] = "no --seed given"
            continue
        if not runners[name](cfg, d, verdict, findings):
            regressions.append(name)
    verdict["findings"] = "; ".join(findings)
    verdict["regressions"] = ",".join(regressions)
    out.write(dumps(verdict))
    if cfg.format == "json":
        write_text(os.path.join(d, "scan_verdict.json"), dumps(verdict))
    else:
        keys = list(verdict)
        write_csv(os.path.join(d, "scan_verdict.csv"), keys, [[verdict[k] for k in keys]])
    if regressions:
        err.write(f"regression check failed: {', '.join(regressions)}\n")
        return EXIT_GATE
    return EXIT_OK


COMMANDS = {"solve": cmd_solve, "profile": cmd_profile, "verify": cmd_verify, "scan": cmd_scan}


# ---------------------------------------------------------------- parsing


def _alpha_list(text):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _u64(text):
    try:
        v = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"seed must be an integer, got {text!r}")
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError(f"seed must fit in 64 unsigned bits, got {text!r}")
    return v


def _common_parser():
    pp = argparse.ArgumentParser(add_help=False)
    a = pp.add_argument
    # every default is None so that unset flags do not override the config file
    a("--alpha", type=float, help="fractional order in (0, 1] (default 0.5, or 1 with --classical)")
    grp = pp.add_mutually_exclusive_group()
    grp.add_argument("--q0", type=float, help="face flux coefficient, W m^-2 s^(alpha/2) (default 5e4)")
    grp.add_argument("--t0", type=float, help="face temperature in K (selects the temperature problem)")
    a("--ti", type=float, help="initial solid temperature, K (default 263.15)")
    a("--tm", type=float, help="melting temperature, K (default 273.15)")
    a("--ks", type=float, help="solid conductivity, W/(m K)")
    a("--cs", type=float, help="solid specific heat, J/(kg K)")
    a("--kl", type=float, help="liquid conductivity, W/(m K)")
    a("--cl", type=float, help="liquid specific heat, J/(kg K)")
    a("--rho", type=float, help="density, kg/m^3")
    a("--latent", type=float, help="latent heat, J/kg")
    a("--one-phase", dest="one_phase", action="store_const", const=True,
      help="solid initially at the melting temperature")
    a("--classical", action="store_const", const=True,
      help="alpha = 1 solution from erf/erfc instead of the Wright functions")
    a("--tol", type=float, help="relative root-residual tolerance (default 1e-12)")
    a("--out", help="output directory")
    a("--format", choices=("csv", "json"), help="format of summary files (default json)")
    a("--config", help="JSON file with default settings (flags take precedence)")
    a("--seed", type=_u64, help="seed for randomized scans")
    a("--print-config", dest="print_config", action="store_true",
      help="echo the resolved configuration to stderr before running")
    return pp


def build_parser() -> argparse.ArgumentParser:
    common = _common_parser()
    parser = argparse.ArgumentParser(
        prog="fracstefan",
        description="Similarity solutions of the two-phase time-fractional Stefan problem.",
        epilog="exit codes: 0 ok, 1 invalid config, 2 subcritical flux, 3 no bracket, "
               "4 I/O error, 5 gate failure, 6 no convergence",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("solve", parents=[common], help="solve for the front coefficient")
    prof = sub.add_parser("profile", parents=[common], help="tabulate temperatures and the front")
    prof.add_argument("--x-max", dest="x_max", type=float, help="right end of the x grid, m")
    prof.add_argument("--nx", type=int, help="number of x points (default 50)")
    prof.add_argument("--t-min", dest="t_min", type=float, help="first time, s (default 0.1)")
    prof.add_argument("--t-max", dest="t_max", type=float, help="last time, s (default 10)")
    prof.add_argument("--nt", type=int, help="number of times (default 10)")
    ver = sub.add_parser("verify", parents=[common], help="residual checks with pass/fail gates")
    ver.add_argument("--t-eval", dest="t_eval", type=float, help="time of the PDE residual samples (default 1)")
    sc = sub.add_parser("scan", parents=[common], help="conjecture, limit and equivalence scans")
    sc.add_argument("--scan", choices=SCANS + ("all",), help="which scan to run (default all)")
    sc.add_argument("--alphas", type=_alpha_list, help="comma-separated orders overriding the defaults")
    sc.add_argument("--scan-x-max", dest="scan_x_max", type=float, help="right end of scan grids (default 20)")
    sc.add_argument("--scan-points", dest="scan_points", type=int, help="points per scan grid (default 200)")
    sc.add_argument("--samples", type=int, help="random problems in the equivalence scan (default 20)")
    return parser


def load_config_file(path: str) -> dict:
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    if not isinstance(data, dict):
        raise ConfigError(f"config file {path!r} must hold a JSON object")
    unknown = sorted(set(data) - set(_FIELDS) - {"command"})
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
    return data


def resolve_config(ns: argparse.Namespace) -> RunConfig:
    """Defaults, then the config file, then explicit flags."""
    values = {}
    if getattr(ns, "config", None):
        values.update(load_config_file(ns.config))
    for name in _FIELDS:
        v = getattr(ns, name, None)
        if v is not None:
            values[name] = v
    values["command"] = ns.command
    if values.get("alpha") is None:
        values["alpha"] = 1.0 if values.get("classical") else 0.5
    if values.get("q0") is None and values.get("t0") is None:
        values["q0"] = 5e4
    if "seed" in values and isinstance(values["seed"], float) and values["seed"].is_integer():
        values["seed"] = int(values["seed"])
    cfg = RunConfig(**values)
    validate(cfg)
    return cfg


def main(argv=None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits with 2 on usage errors, which is reserved for subcritical flux
        return EXIT_OK if exc.code in (0, None) else EXIT_CONFIG
    try:
        cfg = resolve_config(ns)
    except (ConfigError, TypeError) as exc:
        err.write(f"error: invalid configuration: {exc}\n")
        return EXIT_CONFIG
    except json.JSONDecodeError as exc:
        err.write(f"error: config file is not valid JSON: {exc}\n")
        return EXIT_CONFIG
    except OSError as exc:
        err.write(f"error: cannot read config file: {exc}\n")
        return EXIT_IO
    if ns.print_config:
        err.write(dumps(dataclasses.asdict(cfg)))
    try:
        cmd = COMMANDS[cfg.command]
        if cfg.command in ("verify", "scan"):
            return cmd(cfg, out, err)
        return cmd(cfg, out)
    except SubcriticalFluxError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_SUBCRITICAL
    except NoBracketError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_NO_BRACKET
    except (ConvergenceError, UnderflowGuardError) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_CONVERGENCE
    except (ConfigError, FracStefanError) as exc:
        err.write(f"error: invalid configuration: {exc}\n")
        return EXIT_CONFIG
    except OSError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
