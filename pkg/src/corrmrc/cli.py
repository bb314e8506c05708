"""Command-line front end: parameter sweeps, model comparison, simulation,
transmission capacity, and asymptotic terms, emitted as CSV (or NDJSON).

dB/linear conversion happens only here; every engine works in linear units.
CSV schema is fixed: model,t_db,lambda,alpha,d,m_d,m_i,snr_db,value,err with
floats printed to 10 significant digits, rows in grid order.
"""
from __future__ import annotations

import argparse
import dataclasses
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor

from . import analytic, montecarlo
from .calculus import IntegrationError
from .core import DomainError, SystemConfig, validate

CSV_HEADER = "model,t_db,lambda,alpha,d,m_d,m_i,snr_db,value,err"

SWEEP_VARIABLES = ("t_db", "lambda", "alpha", "m")


@dataclasses.dataclass(frozen=True)
class SweepSpec:
    """One swept variable over an inclusive grid, the rest of the scenario fixed."""

    variable: str
    start: float
    stop: float
    step: float
    fixed: SystemConfig
    model: str = "exact"
    settings: analytic.EvalSettings | None = None

    def __post_init__(self):
        if self.variable not in SWEEP_VARIABLES:
            raise DomainError(f"sweep variable must be one of {SWEEP_VARIABLES}")
        if not (self.start <= self.stop and self.step > 0):
            raise DomainError("sweep needs start <= stop and step > 0")

    def grid(self) -> list[float]:
        vals, k = [], 0
        while True:
            v = self.start + k * self.step
            if v > self.stop + 1e-12 * max(1.0, abs(self.stop)):
                break
            vals.append(v)
            k += 1
        if not vals:
            raise DomainError("sweep grid is empty")
        return vals

    def points(self, t_db: float) -> list[tuple[SystemConfig, float]]:
        """(config, threshold-in-dB) pairs in grid order."""
        out = []
        for v in self.grid():
            if self.variable == "t_db":
                out.append((self.fixed, v))
            elif self.variable == "lambda":
                out.append((dataclasses.replace(self.fixed, lam=v), t_db))
            elif self.variable == "alpha":
                out.append((dataclasses.replace(self.fixed, alpha=v), t_db))
            else:  # m: sets both Nakagami parameters
                if v != int(v):
                    raise DomainError(f"sweep over m needs integer values (got {v})")
                out.append(
                    (dataclasses.replace(self.fixed, m_d=int(v), m_i=float(v)), t_db)
                )
        return out


_ANALYTIC_MODELS = (
    "exact",
    "special",
    "fc",
    "nc",
    "noise_limited",
    "asym",
    "blind",
    "sc",
    "mmse",
)


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float) and math.isinf(x):
        return "inf"
    if isinstance(x, float):
        return f"{x:.10g}"
    return str(x)


def _db_to_lin(db: float) -> float:
    return 10.0 ** (db / 10.0)


def _lin_to_db(x: float) -> float:
    return 10.0 * math.log10(x)


def _parse_grid(text: str, flag: str) -> list[float]:
    parts = text.split(":")
    try:
        if len(parts) == 1:
            return [float(parts[0])]
        if len(parts) == 3:
            start, stop, step = (float(p) for p in parts)
        else:
            raise ValueError
    except ValueError:
        raise SystemExit(_arg_error(f"{flag} expects VALUE or START:STOP:STEP (got {text!r})"))
    if step <= 0 or stop < start:
        raise SystemExit(_arg_error(f"{flag} needs start <= stop and step > 0"))
    grid, k = [], 0
    while True:
        v = start + k * step
        if v > stop + 1e-12 * max(1.0, abs(stop)):
            break
        grid.append(v)
        k += 1
    return grid


def _arg_error(msg: str) -> int:
    print(f"error: {msg}", file=sys.stderr)
    return 2


def _parse_snr_db(text: str) -> float:
    """Linear SNR from a dB string; 'inf' disables receiver noise."""
    if text.strip().lower() == "inf":
        return math.inf
    try:
        return _db_to_lin(float(text))
    except ValueError:
        raise SystemExit(_arg_error(f"--snr-db expects a number or 'inf' (got {text!r})"))


def _add_scenario_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--lambda", dest="lam", type=float, default=1e-3,
                   help="interferer density (per unit area)")
    p.add_argument("--alpha", type=float, default=4.0, help="path-loss exponent (> 2)")
    p.add_argument("--d", type=float, default=10.0, help="desired-link distance")
    p.add_argument("--m-d", type=int, default=None, help="Nakagami m of desired links")
    p.add_argument("--m-i", type=float, default=None, help="Nakagami m of interfering links")
    p.add_argument("--m", type=float, default=None,
                   help="sets both Nakagami parameters at once")
    p.add_argument("--snr-db", type=str, default="inf",
                   help="average SNR in dB, or 'inf' for no noise")
    p.add_argument("--t-db", type=str, default="0",
                   help="SINR threshold sweep in dB: VALUE or START:STOP:STEP")
    p.add_argument("--sweep", type=str, default=None, metavar="VAR=START:STOP:STEP",
                   help="sweep lambda, alpha or m instead of the threshold "
                        "(requires a single --t-db value)")
    p.add_argument("--n-branches", type=int, default=2,
                   help="branch count for fc/blind/sc/mmse models")
    p.add_argument("--cheb-p", type=int, default=None, help="Chebyshev node count override")
    p.add_argument("--quad-rel-tol", type=float, default=None,
                   help="quadrature relative tolerance override")
    p.add_argument("--out", type=str, default=None, help="write rows to this file")
    p.add_argument("--json", action="store_true", help="emit NDJSON rows instead of CSV")
    p.add_argument("--workers", type=int, default=1,
                   help="worker processes for grid points (output stays in grid order)")


def _config_from_args(args) -> SystemConfig:
    m_d = args.m_d
    m_i = args.m_i
    if args.m is not None:
        if args.m != int(args.m):
            raise SystemExit(_arg_error(f"--m must be integer-valued (got {args.m})"))
        if m_d is None:
            m_d = int(args.m)
        if m_i is None:
            m_i = args.m
    if m_d is None:
        m_d = 1
    if m_i is None:
        m_i = 1.0
    cfg = SystemConfig(
        lam=args.lam,
        alpha=args.alpha,
        d=args.d,
        m_d=m_d,
        m_i=m_i,
        snr=_parse_snr_db(args.snr_db),
    )
    return validate(cfg)


def _sweep_points(args, cfg, model="exact", settings=None):
    """Grid of (config, t_db) pairs from --t-db or an explicit --sweep."""
    t_grid = _parse_grid(args.t_db, "--t-db")
    if args.sweep is None:
        return [(cfg, t) for t in t_grid]
    if len(t_grid) != 1:
        raise SystemExit(_arg_error("--sweep requires a single --t-db value"))
    try:
        var, rng = args.sweep.split("=", 1)
    except ValueError:
        raise SystemExit(_arg_error("--sweep expects VAR=START:STOP:STEP"))
    parts = rng.split(":")
    try:
        if len(parts) == 1:
            start = stop = float(parts[0])
            step = 1.0
        elif len(parts) == 3:
            start, stop, step = (float(p) for p in parts)
        else:
            raise ValueError
    except ValueError:
        raise SystemExit(_arg_error(f"--sweep range must be VALUE or START:STOP:STEP (got {rng!r})"))
    try:
        spec = SweepSpec(var, start, stop, step, cfg, model, settings)
        return spec.points(t_grid[0])
    except DomainError as exc:
        raise SystemExit(_arg_error(str(exc)))


def _settings_from_args(args) -> analytic.EvalSettings:
    kw = {}
    if args.cheb_p is not None:
        kw["cheb_p"] = args.cheb_p
    if args.quad_rel_tol is not None:
        kw["quad_rel_tol"] = args.quad_rel_tol
    return analytic.EvalSettings(**kw)


def _row(model, t_db, cfg, value, err, extra=None):
    return {
        "model": model,
        "t_db": t_db,
        "lambda": cfg.lam,
        "alpha": cfg.alpha,
        "d": cfg.d,
        "m_d": cfg.m_d,
        "m_i": cfg.m_i,
        "snr_db": math.inf if math.isinf(cfg.snr) else _lin_to_db(cfg.snr),
        "value": value,
        "err": err,
        **(extra or {}),
    }


def _emit(rows, args) -> None:
    out = open(args.out, "w") if args.out else sys.stdout

    def jsonable(v):
        if isinstance(v, float) and not math.isfinite(v):
            return _fmt(v)
        return v

    try:
        if args.json:
            for r in rows:
                out.write(json.dumps({k: jsonable(v) for k, v in r.items()}) + "\n")
        else:
            out.write(CSV_HEADER + "\n")
            keys = CSV_HEADER.split(",")
            for r in rows:
                out.write(",".join(_fmt(r.get(k)) for k in keys) + "\n")
    finally:
        if args.out:
            out.close()


def _eval_point(task):
    model, cfg, t_db, n_branches, settings = task
    t = _db_to_lin(t_db)
    if model == "exact":
        res = analytic.p_mrc_exact(cfg, t, settings)
    elif model == "special":
        res = analytic.p_mrc_special_a4_m1(cfg, t)
    elif model == "fc":
        res = analytic.p_mrc_fc(cfg, t, n_branches)
    elif model == "nc":
        res = analytic.p_mrc_nc(cfg, t, settings)
    elif model == "noise_limited":
        res = analytic.p_noise_limited(cfg, t)
    elif model == "asym":
        res, _ = analytic.p_mrc_asymptotic(cfg, t)
    elif model == "blind":
        res = analytic.p_blind_asymptotic(cfg, t, n_branches)
    elif model == "sc":
        res = analytic.p_sc(cfg, t, n_branches)
    elif model == "mmse":
        res = analytic.p_mmse(cfg, t, n_branches)
    else:
        raise DomainError(f"unknown model {model!r}")
    return _row(res.model_tag, t_db, cfg, res.p, res.abs_err_est)


def _map_tasks(tasks, worker, args):
    if args.workers > 1:
        with ProcessPoolExecutor(max_workers=args.workers) as pool:
            return list(pool.map(worker, tasks))
    return [worker(t) for t in tasks]


def _cmd_eval(args) -> int:
    cfg = _config_from_args(args)
    settings = _settings_from_args(args)
    points = _sweep_points(args, cfg, args.model, settings)
    tasks = [(args.model, c, t_db, args.n_branches, settings) for c, t_db in points]
    _emit(_map_tasks(tasks, _eval_point, args), args)
    return 0


def _cmd_compare(args) -> int:
    cfg = _config_from_args(args)
    settings = _settings_from_args(args)
    models = [m.strip() for m in args.models.split(",") if m.strip()]
    for m in models:
        if m not in _ANALYTIC_MODELS:
            raise SystemExit(_arg_error(f"--models: unknown model {m!r}"))
    rows = []
    for c, t_db in _sweep_points(args, cfg, settings=settings):
        tasks = [(m, c, t_db, args.n_branches, settings) for m in models]
        rows.extend(_map_tasks(tasks, _eval_point, args))
        if args.delta_fc:
            dev = analytic.delta_fc(c, _db_to_lin(t_db), settings)
            rows.append(_row("delta_fc", t_db, c, dev, 0.0))
    _emit(rows, args)
    return 0


def _sim_point(task):
    cfg, t_db, sim = task
    est = montecarlo.estimate_success(cfg, _db_to_lin(t_db), sim)
    return _row(f"sim_{sim.correlation_mode}_{sim.combiner}", t_db, cfg,
                est.mean, est.std_err, extra={"trials": est.trials, "seed": est.seed})


def _cmd_simulate(args) -> int:
    cfg = _config_from_args(args)
    sim = montecarlo.SimSettings(
        trials=args.trials,
        seed=args.seed,
        region_radius=args.region_radius,
        correlation_mode=args.mode,
        combiner=args.combiner,
    )
    tasks = [(c, t_db, sim) for c, t_db in _sweep_points(args, cfg)]
    _emit(_map_tasks(tasks, _sim_point, args), args)
    return 0


def _cmd_tcap(args) -> int:
    if args.sweep:
        raise SystemExit(_arg_error("--sweep is not supported here; tcap sweeps --eps"))
    cfg = _config_from_args(args)
    settings = _settings_from_args(args)
    t = args.t if args.t is not None else _db_to_lin(_parse_grid(args.t_db, "--t-db")[0])
    t_db = _lin_to_db(t)
    rows = []
    for eps in _parse_grid(args.eps, "--eps"):
        try:
            c, lam_eps = analytic.transmission_capacity(cfg, eps, t, args.model, settings)
        except analytic.InfeasibleError as exc:
            # no density meets this target; keep the sweep going with c = 0
            print(f"note [tcap]: eps={eps:g} infeasible ({exc})", file=sys.stderr)
            rows.append(_row(f"tcap_{args.model}", t_db, cfg.with_lam(0.0), 0.0, None,
                             extra={"eps": eps, "infeasible": True}))
            continue
        target = 1.0 - eps
        resid = abs(analytic._TCAP_MODELS[args.model](cfg.with_lam(lam_eps), t, settings) - target)
        rows.append(_row(f"tcap_{args.model}", t_db, cfg.with_lam(lam_eps), c, resid,
                         extra={"eps": eps, "infeasible": False}))
    _emit(rows, args)
    return 0


def _cmd_asym(args) -> int:
    if args.sweep:
        raise SystemExit(_arg_error("--sweep is not supported here; asym sweeps --t-db"))
    cfg = _config_from_args(args)
    grid = _parse_grid(args.t_db, "--t-db")
    _, terms = analytic.p_mrc_asymptotic(cfg, _db_to_lin(grid[0]))
    rows = [_row("asym_kappa", None, cfg, terms.kappa, 0.0)]
    for k, ck in enumerate(terms.c_k):
        rows.append(_row(f"asym_c{k}", None, cfg, ck, 0.0))
    rows.append(_row("asym_delta_mrc_sa", None, cfg, analytic.delta_mrc_sa(cfg), 0.0))
    for t_db in grid:
        res, _ = analytic.p_mrc_asymptotic(cfg, _db_to_lin(t_db))
        rows.append(_row("asym", t_db, cfg, res.p, res.abs_err_est))
    _emit(rows, args)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="corrmrc",
        description="Dual-branch MRC success probability under correlated "
                    "Poisson interference: analytic models and Monte Carlo.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate one analytic model over a threshold sweep")
    p.add_argument("--model", choices=_ANALYTIC_MODELS, default="exact")
    _add_scenario_args(p)
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("compare", help="evaluate several models on a shared grid")
    p.add_argument("--models", type=str, default="exact,fc,nc")
    p.add_argument("--delta-fc", action="store_true",
                   help="append FC outage-deviation rows per grid point")
    _add_scenario_args(p)
    p.set_defaults(func=_cmd_compare)

    p = sub.add_parser("simulate", help="Monte Carlo estimate over a threshold sweep")
    p.add_argument("--mode", choices=("exact", "fc", "nc"), default="exact")
    p.add_argument("--combiner", choices=("mrc", "sc", "single"), default="mrc")
    p.add_argument("--trials", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--region-radius", type=float, default=None)
    _add_scenario_args(p)
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("tcap", help="transmission capacity over an outage-target sweep")
    p.add_argument("--eps", type=str, required=True,
                   help="target outage sweep: VALUE or START:STOP:STEP")
    p.add_argument("--t", type=float, default=None, help="SINR threshold, linear")
    p.add_argument("--model", choices=tuple(analytic._TCAP_MODELS), default="exact")
    _add_scenario_args(p)
    p.set_defaults(func=_cmd_tcap)

    p = sub.add_parser("asym", help="low-outage asymptotics and its scenario constants")
    _add_scenario_args(p)
    p.set_defaults(func=_cmd_asym)

    return ap


_SWEEP_FLAGS = ("--t-db", "--eps", "--snr-db")


def _merge_negative_values(argv: list[str]) -> list[str]:
    # argparse refuses "--t-db -10:15:0.5"; fold the value into flag=value
    out, i = [], 0
    while i < len(argv):
        tok = argv[i]
        if tok in _SWEEP_FLAGS and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def main(argv: list[str] | None = None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    argv = _merge_negative_values(list(argv))
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (DomainError, IntegrationError) as exc:
        print(f"error [{args.command}]: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
