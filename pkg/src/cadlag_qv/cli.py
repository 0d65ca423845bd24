"""
Command-line front end.

    cadlag-qv qv compute --path x.csv --scheme dyadic --levels 4..10 --t 0.7071 --mode q
    cadlag-qv qv limit   --path x.csv --levels 8..14 --out report.json --plot plot.csv
    cadlag-qv qv matrix  --path vec.csv --levels 8..12
    cadlag-qv dist --x a.csv --y b.csv --horizon 1 [--oracle]
    cadlag-qv ito  --path x.csv --f poly:0,0,0,1 --t 1 --levels 8..14
    cadlag-qv mc run --model brownian:sigma=1 --paths 200 --seed 1 --levels 8..14 --eps 0.1

Every command also takes ``--config file.json`` whose keys are the long flag
names (dashes or underscores); flags given on the command line win.

Exit status: 0 success, 1 non-convergence under ``--strict``, 2 configuration
error, 3 unreadable or malformed input.
"""

import argparse
import json
import sys

import numpy as np

from . import __version__
from .paths import CadlagPath, DomainError, PathFormatError, VectorCadlagPath, read_csv
from .partitions import PartitionError, parse_levels, parse_scheme
from .report import make_report, dumps, write_plot_csv, write_report


class ConfigError(Exception):
    pass


class InputError(Exception):
    pass


DEFAULTS = {
    "scheme": "dyadic", "mode": "q", "tol": 1e-3, "atol": None, "t": None,
    "out": None, "plot": None, "strict": False, "oracle": False, "halfline": False,
    "eps": 0.1, "delta": 0.05, "metric": "j1", "test": "cauchy", "paths": 200,
    "horizon": None, "resolution": None,
}

REQUIRED = {
    "qv compute": ("path", "levels"),
    "qv limit": ("path", "levels"),
    "qv matrix": ("path", "levels"),
    "dist": ("x", "y"),
    "ito": ("path", "f", "levels"),
    "mc run": ("model", "seed", "levels"),
}


def _parser():
    common = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument("--config", help="JSON file with default flag values")
    common.add_argument("--out", help="write the JSON report here")

    part = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    part.add_argument("--scheme", help="dyadic | uniform | file:<path>")
    part.add_argument("--levels", help="level range a..b")

    p = argparse.ArgumentParser(prog="cadlag-qv", description=__doc__.split("\n\n")[0].strip())
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    qv = sub.add_parser("qv", help="quadratic-variation approximants and limits")
    qsub = qv.add_subparsers(dest="action", required=True)
    c = qsub.add_parser("compute", parents=[common, part], argument_default=argparse.SUPPRESS, help="q_n, s_n, p_n per level")
    c.add_argument("--path")
    c.add_argument("--t", type=float)
    c.add_argument("--mode", choices=["q", "s", "p", "quartic", "discrepancy"])
    lim = qsub.add_parser("limit", parents=[common, part], argument_default=argparse.SUPPRESS, help="limit and decomposition")
    lim.add_argument("--path")
    lim.add_argument("--t", type=float, help="time for the value_at_t plot column")
    lim.add_argument("--tol", type=float)
    lim.add_argument("--atol", type=float)
    lim.add_argument("--plot", help="per-level CSV for plotting")
    lim.add_argument("--strict", action="store_true")
    mat = qsub.add_parser("matrix", parents=[common, part], argument_default=argparse.SUPPRESS, help="matrix quadratic variation")
    mat.add_argument("--path")
    mat.add_argument("--tol", type=float)
    mat.add_argument("--atol", type=float)
    mat.add_argument("--strict", action="store_true")

    d = sub.add_parser("dist", parents=[common], argument_default=argparse.SUPPRESS, help="Skorokhod J1 distance")
    d.add_argument("--x")
    d.add_argument("--y")
    d.add_argument("--horizon", type=float)
    d.add_argument("--oracle", action="store_true", help="also run the grid oracle")
    d.add_argument("--halfline", action="store_true", help="also report the half-line metric")

    it = sub.add_parser("ito", parents=[common, part], argument_default=argparse.SUPPRESS, help="pathwise Ito residual per level")
    it.add_argument("--path")
    it.add_argument("--f", help="poly:c0,c1,...")
    it.add_argument("--t", type=float)

    mc = sub.add_parser("mc", help="Monte Carlo ensembles")
    msub = mc.add_subparsers(dest="action", required=True)
    r = msub.add_parser("run", parents=[common, part], argument_default=argparse.SUPPRESS, help="ensemble convergence diagnostics")
    r.add_argument("--model", help="e.g. brownian:sigma=1 or poisson:lambda=2,jump=1")
    r.add_argument("--paths", type=int)
    r.add_argument("--seed", type=int)
    r.add_argument("--eps", type=float)
    r.add_argument("--delta", type=float)
    r.add_argument("--metric", choices=["j1", "uniform"])
    r.add_argument("--test", choices=["cauchy", "prob", "ucp"])
    r.add_argument("--horizon", type=float)
    r.add_argument("--resolution", type=int)
    r.add_argument("--strict", action="store_true")
    return p


def _merge(ns):
    flags = vars(ns)
    cmd = ns.command + (f" {ns.action}" if getattr(ns, "action", None) else "")
    cfg = {}
    if "config" in flags:
        try:
            with open(flags["config"]) as fh:
                raw = json.load(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read config: {exc}") from None
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}") from None
        if not isinstance(raw, dict):
            raise ConfigError("config must be a JSON object")
        cfg = {k.replace("-", "_"): v for k, v in raw.items()}
    opts = {**DEFAULTS, **cfg, **{k: v for k, v in flags.items() if k != "config"}}
    opts["command"] = cmd
    missing = [k for k in REQUIRED[cmd] if opts.get(k) is None]
    if missing:
        raise ConfigError(f"{cmd}: missing {', '.join('--' + m for m in missing)}")
    for k in ("tol", "eps", "delta", "atol"):
        if opts.get(k) is not None and not float(opts[k]) > 0:
            raise ConfigError(f"--{k} must be positive")
    if "levels" in REQUIRED[cmd]:
        try:
            opts["levels"] = parse_levels(opts["levels"])
        except PartitionError as exc:
            raise ConfigError(str(exc)) from None
    return opts


def _load(path, vector=False):
    try:
        x = read_csv(path)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from None
    if vector and isinstance(x, CadlagPath):
        x = VectorCadlagPath((x,))
    if not vector and isinstance(x, VectorCadlagPath):
        if x.dimension != 1:
            raise InputError(f"{path}: expected a scalar path (t,v)")
        x = x[0]
    return x


def _scheme(opts, horizon):
    spec = opts["scheme"]
    try:
        if spec.startswith("file:"):
            try:
                return parse_scheme(spec)
            except (OSError, ValueError) as exc:
                raise InputError(f"partition file: {exc}") from None
        return parse_scheme(spec, horizon)
    except PartitionError as exc:
        raise ConfigError(str(exc)) from None


def _emit(opts, report):
    if opts.get("out"):
        write_report(report, opts["out"])


# --------------------------------------------------------------------- commands

def cmd_qv_compute(opts):
    from .qv import p_n, q_n, quartic_jump_sum, s_n, sn_qn_discrepancy

    x = _load(opts["path"])
    S = _scheme(opts, x.horizon)
    t = x.horizon if opts["t"] is None else float(opts["t"])
    mode = opts["mode"]
    values = []
    for n in opts["levels"]:
        p = S.generate(n)
        if mode == "q":
            v = q_n(x, p).evaluate(t)
        elif mode == "p":
            v = p_n(x, p).evaluate(t)
        elif mode == "s":
            v = s_n(x, p, t)
        elif mode == "quartic":
            v = quartic_jump_sum(x, p, t)
        else:
            v = sn_qn_discrepancy(x, p, t)
        values.append(float(v))
        print(f"{n} {v:.17g}")
    _emit(opts, make_report("qv compute", mode=mode, t=t, levels=opts["levels"], values=values))
    return 0


def cmd_qv_limit(opts):
    from .qv import q_n, qv_limit

    x = _load(opts["path"])
    S = _scheme(opts, x.horizon)
    dec, rep = qv_limit(x, S, opts["levels"], float(opts["tol"]), opts["atol"])
    print(f"mode: {rep.mode}")
    print(f"converged: {rep.converged}")
    if dec is not None:
        H = x.horizon
        print(f"[x](horizon) = {dec.total.evaluate(H):.12g}")
        print(f"continuous part at horizon = {dec.continuous_part.evaluate(H):.12g}")
        for s, m in dec.jump_part:
            print(f"jump at {s:.12g}: mass {m:.12g}")
    elif rep.violation:
        print(f"violation: {rep.violation}")
    report = make_report("qv limit", levels=rep.levels, distances=rep.distances, mode=rep.mode,
                         limit=rep.to_dict()["limit"],
                         decomposition=None if dec is None else dec.to_dict(),
                         diagnostics=rep)
    _emit(opts, report)
    if opts.get("plot"):
        t = x.horizon if opts["t"] is None else float(opts["t"])
        rows = [(n, j, u, q_n(x, S.generate(n)).evaluate(t))
                for n, j, u in zip(rep.levels, rep.j1_to_limit, rep.uniform_to_limit)]
        write_plot_csv(rows, opts["plot"])
    return 1 if opts["strict"] and dec is None else 0


def cmd_qv_matrix(opts):
    from .multidim import matrix_qv_limit

    x = _load(opts["path"], vector=True)
    S = _scheme(opts, x.horizon)
    lim, rep = matrix_qv_limit(x, S, opts["levels"], float(opts["tol"]), opts["atol"])
    for e in rep.entries:
        print(f"entry {tuple(e['entry'])}: mode {e['mode']}")
    if lim is not None:
        print("limit at horizon:")
        print(np.array2string(lim.evaluate(x.horizon), precision=10))
    for v in rep.violations:
        print(f"entry {tuple(v['entry'])}: {v['reason']}")
    _emit(opts, make_report("qv matrix", report=rep, limit=None if lim is None else lim))
    return 1 if opts["strict"] and lim is None else 0


def cmd_dist(opts):
    from .skorokhod import (j1_distance_compact, j1_distance_grid_oracle, j1_distance_halfline,
                            uniform_distance)

    x, y = _load(opts["x"]), _load(opts["y"])
    T = min(x.horizon, y.horizon) if opts["horizon"] is None else float(opts["horizon"])
    if T > min(x.horizon, y.horizon):
        raise ConfigError(f"--horizon {T} exceeds the paths' horizon")
    d, lam = j1_distance_compact(x, y, T)
    payload = {"distance": d, "lambda_anchors": [list(a) for a in lam.anchors()],
               "uniform_distance": uniform_distance(x, y, T), "horizon": T}
    print(f"distance: {d:.12g}")
    if opts["oracle"]:
        payload["oracle_distance"] = j1_distance_grid_oracle(x, y, T)
        print(f"oracle: {payload['oracle_distance']:.12g}")
    if opts["halfline"]:
        payload["halfline_distance"] = j1_distance_halfline(x, y)
        print(f"half-line: {payload['halfline_distance']:.12g}")
    report = make_report("dist", **payload)
    print(dumps(report))
    _emit(opts, report)
    return 0


def cmd_ito(opts):
    from .calculus import ito_terms, parse_function

    x = _load(opts["path"])
    S = _scheme(opts, x.horizon)
    try:
        f = parse_function(opts["f"])
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    t = x.horizon if opts["t"] is None else float(opts["t"])
    rows = []
    for n in opts["levels"]:
        terms = ito_terms(f, x, S.generate(n), t)
        rows.append({"level": n, "residual": terms.residual, "integral": terms.integral,
                     "second_order": terms.second_order, "compensator": terms.compensator})
        print(f"{n} {terms.residual:.17g}")
    _emit(opts, make_report("ito", f=opts["f"], t=t, rows=rows))
    return 0


def cmd_mc_run(opts):
    from .mc import (Ensemble, ModelError, cauchy_in_probability, parse_model,
                     prob_convergence_estimate, ucp_vs_j1)

    H = 1.0 if opts["horizon"] is None else float(opts["horizon"])
    try:
        model = parse_model(opts["model"], H, opts["resolution"])
        if opts["resolution"] is None and model.resolution < max(opts["levels"]) + 2:
            model = parse_model(opts["model"], H, max(opts["levels"]) + 2)
        e = Ensemble(model, int(opts["paths"]), int(opts["seed"]))
        S = _scheme(opts, H)
        test = opts["test"]
        if test == "cauchy":
            rep = cauchy_in_probability(e, S, opts["levels"], opts["eps"], opts["delta"], opts["metric"])
            ok, fr = rep.passed, rep.fractions
        elif test == "prob":
            rep = prob_convergence_estimate(e, S, opts["levels"], opts["eps"],
                                            metric=opts["metric"], delta=opts["delta"])
            ok, fr = rep.passed, rep.fractions
        else:
            rep = ucp_vs_j1(e, S, opts["levels"], opts["eps"], opts["delta"])
            ok, fr = rep.verdict != "neither", rep.j1
    except ModelError as exc:
        raise ConfigError(str(exc)) from None
    print(f"{test}: fractions {', '.join(f'{v:.3f}' for v in fr)}")
    if test == "ucp":
        print(f"verdict: {rep.verdict}")
    else:
        print(f"passed: {ok}")
    _emit(opts, make_report("mc run", model=opts["model"], paths=e.n_paths, seed=e.seed,
                            test=test, report=rep))
    return 1 if opts["strict"] and not ok else 0


COMMANDS = {
    "qv compute": cmd_qv_compute, "qv limit": cmd_qv_limit, "qv matrix": cmd_qv_matrix,
    "dist": cmd_dist, "ito": cmd_ito, "mc run": cmd_mc_run,
}


def main(argv=None):
    ns = _parser().parse_args(argv)
    try:
        opts = _merge(ns)
        return COMMANDS[opts["command"]](opts)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (InputError, PathFormatError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 3
    except (DomainError, PartitionError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
