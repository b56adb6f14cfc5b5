"""Command-line entry point.

    tomodeco fig1a --dims 2,3,4,5 --out fig1a.csv
    tomodeco timescale --dim 2 --sigma 0 --gamma 1
    tomodeco verify --dim 3 --samples 1000000 --seed 42

Settings come from flags, then from a ``--config`` file of ``key=value``
lines, then from built-in defaults. The seed falls back to ``$TOMO_SEED``.
Exit status: 0 success, 1 runtime or I/O failure (including failed checks),
2 usage errors.
"""
from __future__ import annotations

import argparse
import math
import os
import sys

import numpy as np

from . import __version__, channel, classicality, lindblad, quasiprob, states, su_algebra, tables
from .lindblad import LindbladParams
from .quasiprob import QuasiprobSpec

COMMANDS = ("channel", "lindblad", "wmin", "timescale", "fig1a", "fig1b", "verify")

DEFAULTS = {
    "dim": None,  # per-command, see COMMAND_DEFAULTS
    "dims": "2,3,4,5",
    "sigma": 0.0,
    "gamma": 1.0,
    "steps": None,
    "t_max": None,
    "samples": None,
    "seed": None,
    "out": None,
    "format": "csv",
    "sigma_min": classicality.SIGMA_GRID[0],
    "sigma_max": classicality.SIGMA_GRID[1],
    "sigma_step": classicality.SIGMA_GRID[2],
    "t_steps": classicality.FIG1B_T_STEPS,
    "dt": None,
    "rhs": "reduced",
    "method": "rk4",
    "initial": "basis",
}

COMMAND_DEFAULTS = {
    "channel": {"dim": 2, "steps": 10, "samples": 0},
    "lindblad": {"dim": 2, "steps": 100, "t_max": 1.0},
    "wmin": {"dim": 2, "samples": 100_000},
    "timescale": {"dim": 2},
    "fig1a": {},
    "fig1b": {"dim": 4},
    "verify": {"dim": 3, "samples": 200_000},
}

INT_KEYS = {"dim", "steps", "samples", "seed", "t_steps"}
FLOAT_KEYS = {"sigma", "gamma", "t_max", "sigma_min", "sigma_max", "sigma_step", "dt"}


class UsageError(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tomodeco", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    helps = {
        "channel": "iterate the tomographic channel",
        "lindblad": "integrate the Lindblad flow",
        "wmin": "minimum of the order-sigma distribution",
        "timescale": "discrete and continuous classicality thresholds",
        "fig1a": "W_min over sigma for several N",
        "fig1b": "evolved W_min over the (sigma, t) plane",
        "verify": "run the numerical verification suite",
    }
    for name in COMMANDS:
        p = sub.add_parser(name, help=helps[name], argument_default=None)
        p.add_argument("--config", help="file of key=value lines; flags take precedence")
        p.add_argument("--dim", type=int)
        p.add_argument("--sigma", type=float)
        p.add_argument("--gamma", type=float)
        p.add_argument("--steps", "--k", dest="steps", type=int)
        p.add_argument("--t-max", type=float)
        p.add_argument("--samples", type=int)
        p.add_argument("--seed", type=int)
        p.add_argument("--out", help="output path (default: stdout)")
        p.add_argument("--format", choices=("csv", "json", "svg"))
        if name in ("fig1a", "fig1b"):
            p.add_argument("--sigma-min", type=float)
            p.add_argument("--sigma-max", type=float)
            p.add_argument("--sigma-step", type=float)
        if name == "fig1a":
            p.add_argument("--dims", help="comma-separated dimensions")
        if name == "fig1b":
            p.add_argument("--t-steps", type=int)
        if name == "lindblad":
            p.add_argument("--dt", type=float)
            p.add_argument("--rhs", choices=("full", "reduced"))
            p.add_argument("--method", choices=("rk4", "closed"))
        if name in ("channel", "lindblad"):
            p.add_argument("--initial", choices=("basis", "random"))
    return parser


def read_config(path: str) -> dict:
    out = {}
    try:
        with open(path) as fh:
            for n, line in enumerate(fh, 1):
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                key, sep, val = line.partition("=")
                if not sep:
                    raise UsageError(f"--config: line {n} is not key=value")
                key = key.strip().replace("-", "_")
                if key not in DEFAULTS:
                    raise UsageError(f"--config: unknown key {key!r}")
                val = val.strip()
                try:
                    out[key] = int(val) if key in INT_KEYS else float(val) if key in FLOAT_KEYS else val
                except ValueError:
                    raise UsageError(f"--config: bad value for {key}: {val!r}") from None
    except OSError as exc:
        raise UsageError(f"--config: cannot read {path}: {exc.strerror}") from None
    return out


def resolve(args: argparse.Namespace) -> dict:
    file_cfg = read_config(args.config) if args.config else {}
    cfg = {"command": args.command}
    for key, default in DEFAULTS.items():
        flag = getattr(args, key, None)
        if flag is not None:
            cfg[key] = flag
        elif key in file_cfg:
            cfg[key] = file_cfg[key]
        else:
            cfg[key] = COMMAND_DEFAULTS[args.command].get(key, default)
    if cfg["seed"] is None:
        env = os.environ.get("TOMO_SEED")
        try:
            cfg["seed"] = int(env) if env else 0
        except ValueError:
            raise UsageError(f"TOMO_SEED is not an integer: {env!r}") from None
    validate(cfg)
    return cfg


def validate(cfg: dict) -> None:
    def need(cond, flag, msg):
        if not cond:
            raise UsageError(f"--{flag.replace('_', '-')} {msg}")

    cmd = cfg["command"]
    if cfg["dim"] is not None:
        need(cfg["dim"] >= 2, "dim", "must be >= 2")
        if cmd == "lindblad" and cfg["rhs"] == "full":
            need(cfg["dim"] <= 8, "dim", "must be <= 8 with --rhs full")
    need(math.isfinite(cfg["sigma"]), "sigma", "must be finite")
    need(cfg["gamma"] > 0 and math.isfinite(cfg["gamma"]), "gamma", "must be positive")
    need(0 <= cfg["seed"] < 2**64, "seed", "must be a 64-bit unsigned integer")
    if cfg["steps"] is not None:
        need(cfg["steps"] >= 0, "steps", "must be >= 0")
        if cmd == "channel":
            need(cfg["steps"] <= channel.MAX_ITERATIONS, "steps", f"must be <= {channel.MAX_ITERATIONS}")
        if cmd == "lindblad":
            need(cfg["steps"] >= 1, "steps", "must be >= 1")
    if cfg["samples"] is not None:
        need(cfg["samples"] >= (0 if cmd == "channel" else 1), "samples", "must be positive")
    if cfg["t_max"] is not None:
        need(cfg["t_max"] > 0 and math.isfinite(cfg["t_max"]), "t_max", "must be positive")
    if cfg["dt"] is not None:
        need(cfg["dt"] > 0, "dt", "must be positive")
        if cfg["dim"] is not None:
            need(cfg["dt"] * 2 * cfg["gamma"] * cfg["dim"] <= lindblad.RK4_STABILITY, "dt",
                 f"violates the stability guard dt*2*gamma*N <= {lindblad.RK4_STABILITY}")
    for key, choices in (("format", ("csv", "json", "svg")), ("rhs", ("full", "reduced")),
                         ("method", ("rk4", "closed")), ("initial", ("basis", "random"))):
        need(cfg[key] in choices, key, f"must be one of {', '.join(choices)}")
    need(cfg["sigma_step"] > 0, "sigma_step", "must be positive")
    need(cfg["sigma_max"] >= cfg["sigma_min"], "sigma_max", "must be >= --sigma-min")
    need(cfg["t_steps"] >= 1, "t_steps", "must be >= 1")
    if cmd == "fig1a":
        try:
            dims = [int(x) for x in str(cfg["dims"]).split(",") if x.strip()]
        except ValueError:
            raise UsageError(f"--dims must be comma-separated integers, got {cfg['dims']!r}") from None
        need(dims and all(d >= 2 for d in dims), "dims", "must list dimensions >= 2")
    if cfg["format"] == "svg":
        need(cmd in ("fig1a", "fig1b"), "format", "svg is only available for fig1a and fig1b")


def _metadata(cfg: dict) -> dict:
    echo = {k: v for k, v in cfg.items() if k not in ("command", "out")}
    return {"command": cfg["command"], "version": __version__, "seed": cfg["seed"], "config": echo}


def _initial_state(cfg, rng):
    N = cfg["dim"]
    if cfg["initial"] == "random":
        return states.projector(states.haar_sample(N, rng))
    rho = np.zeros((N, N), dtype=complex)
    rho[0, 0] = 1.0
    return rho


def _emit(table: tables.Table, fmt: str) -> str:
    return tables.to_json(table) if fmt == "json" else tables.to_csv(table)


def cmd_channel(cfg):
    rng = np.random.default_rng(cfg["seed"])
    rho = _initial_state(cfg, rng)
    N = cfg["dim"]
    spec = QuasiprobSpec(cfg["sigma"], N)
    g = su_algebra.generate_su_generators(N)
    rows = []
    for k in range(cfg["steps"] + 1):
        state = channel.tomographic_iterate(rho, k).state
        rows.append([k, states.purity(state), float(np.linalg.norm(states.bloch_encode(state, g))),
                     states.min_husimi(state), quasiprob.min_w(state, spec)])
    meta = _metadata(cfg)
    if cfg["samples"]:
        est = channel.tomographic_step_mc(rho, cfg["samples"], rng)
        meta["mc_step_max_zscore"] = float(np.max(est.zscores(channel.tomographic_step(rho))))
    table = tables.Table(["k", "purity", "bloch_norm", "lambda_min", "min_w"], rows, meta)
    return _emit(table, cfg["format"]), None


def cmd_lindblad(cfg):
    rng = np.random.default_rng(cfg["seed"])
    rho0 = _initial_state(cfg, rng)
    p = LindbladParams(cfg["gamma"], cfg["dim"])
    t_eval = np.linspace(0.0, cfg["t_max"], cfg["steps"] + 1)
    if cfg["method"] == "rk4":
        traj = lindblad.evolve_rk4(rho0, cfg["t_max"], p, dt=cfg["dt"], rhs=cfg["rhs"], t_eval=t_eval)
    else:
        traj = lindblad.Trajectory(
            t_eval, np.array([lindblad.evolve_closed_form(rho0, t, p) for t in t_eval]))
    spec = QuasiprobSpec(cfg["sigma"], p.dim)
    exact = [lindblad.evolve_closed_form(rho0, t, p) for t in traj.times]
    extra = {
        "min_w": [quasiprob.min_w(s, spec) for s in traj.states],
        "closed_form_error": [float(np.linalg.norm(s - e)) for s, e in zip(traj.states, exact)],
    }
    table = tables.trajectory_to_table(traj, _metadata(cfg), extra)
    return _emit(table, cfg["format"]), None


def cmd_wmin(cfg):
    rng = np.random.default_rng(cfg["seed"])
    N = cfg["dim"]
    spec = QuasiprobSpec(cfg["sigma"], N)
    rho = states.projector(states.haar_sample(N, rng))
    mc = float(np.min(quasiprob.evaluate_w(rho, states.haar_samples(N, cfg["samples"], rng), spec)))
    table = tables.Table(
        ["N", "sigma", "w_min_formula", "min_w_pure", "mc_min"],
        [[N, cfg["sigma"], quasiprob.w_min_formula(spec), quasiprob.min_w(rho, spec), mc]],
        _metadata(cfg),
    )
    return _emit(table, cfg["format"]), None


def cmd_timescale(cfg):
    p = LindbladParams(cfg["gamma"], cfg["dim"])
    res = classicality.threshold(cfg["sigma"], p)
    lo, hi = res.bracket
    summary = (f"k_star={res.k_star}\n"
               f"t_star={tables._fmt(res.t_star)}\n"
               f"t_k_bracket={tables._fmt(lo)},{tables._fmt(hi)}\n")
    table = tables.Table(
        ["sigma", "N", "gamma", "k_star", "t_star", "t_k_lower", "t_k_upper"],
        [[res.sigma, res.dim, res.gamma, res.k_star, res.t_star, lo, hi]],
        _metadata(cfg),
    )
    return _emit(table, cfg["format"]), summary


def _sigma_grid(cfg):
    return classicality.make_grid(cfg["sigma_min"], cfg["sigma_max"], cfg["sigma_step"])


def cmd_fig1a(cfg):
    dims = [int(x) for x in str(cfg["dims"]).split(",") if x.strip()]
    fig = classicality.figure1a_data(dims, _sigma_grid(cfg))
    if cfg["format"] == "svg":
        return tables.figure1a_svg(fig), None
    return _emit(tables.figure_to_table(fig, _metadata(cfg)), cfg["format"]), None


def cmd_fig1b(cfg):
    p = LindbladParams(cfg["gamma"], cfg["dim"])
    sig = _sigma_grid(cfg)
    t_max = cfg["t_max"] if cfg["t_max"] is not None else 2 * classicality.t_star(float(sig[-1]), p)
    if t_max <= 0:
        raise UsageError("--t-max must be positive (default is zero when --sigma-max <= -1)")
    fig = classicality.figure1b_data(p, sig, np.linspace(0.0, t_max, cfg["t_steps"] + 1))
    if cfg["format"] == "svg":
        return tables.figure1b_svg(fig), None
    return _emit(tables.figure_to_table(fig, _metadata(cfg)), cfg["format"]), None


def cmd_verify(cfg):
    from .verification import run_all

    results = run_all(cfg["dim"], cfg["samples"], cfg["seed"])
    report = "".join(r.line() + "\n" for r in results)
    n_fail = sum(not r.passed for r in results)
    report += f"{len(results) - n_fail}/{len(results)} checks passed\n"
    table = tables.Table(
        ["check", "passed", "measured", "expected", "tolerance"],
        [[r.name, r.passed, r.measured, r.expected, r.tolerance] for r in results],
        _metadata(cfg),
    )
    return _emit(table, cfg["format"]), report, n_fail


HANDLERS = {
    "channel": cmd_channel,
    "lindblad": cmd_lindblad,
    "wmin": cmd_wmin,
    "timescale": cmd_timescale,
    "fig1a": cmd_fig1a,
    "fig1b": cmd_fig1b,
    "verify": cmd_verify,
}


def _run(argv):
    args = build_parser().parse_args(argv)
    cfg = resolve(args)
    out = HANDLERS[cfg["command"]](cfg)
    payload, summary = out[0], out[1]
    failures = out[2] if len(out) > 2 else 0
    return cfg, payload, summary, failures


def render(argv) -> str:
    """Artifact text a command would write, without touching the filesystem."""
    return _run(list(argv))[1]


def main(argv=None) -> int:
    try:
        cfg, payload, summary, failures = _run(argv)
    except UsageError as exc:
        print(f"tomodeco: error: {exc}", file=sys.stderr)
        return 2
    if summary:
        sys.stdout.write(summary)
    if cfg["out"]:
        try:
            with open(cfg["out"], "w", newline="") as fh:
                fh.write(payload)
        except OSError as exc:
            print(f"tomodeco: cannot write {cfg['out']}: {exc.strerror}", file=sys.stderr)
            return 1
    elif not summary:
        sys.stdout.write(payload)
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
