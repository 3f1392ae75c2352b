"""Command-line interface: ``girgspread <subcommand> [options]``.

Exit codes: 0 on success, 2 for usage errors, 3 for unreadable or malformed
input data.
"""
import argparse
import contextlib
import json
import sys

import numpy as np

from . import graphfile, harness, regimes
from .errors import DataError, ResourceError, UsageError
from .model import ModelParams, degree_stats, giant_component, sample_graph
from .protocol import SpreadConfig, pick_giant_start, run_spread
from .structure import (find_hierarchy, greedy_weight_path, long_edge_census,
                        mcd_alternating_path, verify_hierarchy, verify_path)

EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 2, 3


@contextlib.contextmanager
def _output(path):
    if path in (None, "-"):
        yield sys.stdout
    else:
        try:
            fh = open(path, "w")
        except OSError as exc:
            raise DataError(f"cannot write {path}: {exc.strerror}") from None
        with fh:
            yield fh


def _emit_json(obj, path):
    with _output(path) as fh:
        json.dump(obj, fh, indent=2, default=_jsonable)
        fh.write("\n")


def _jsonable(x):
    if isinstance(x, np.generic):
        return x.item()
    if isinstance(x, np.ndarray):
        return x.tolist()
    if hasattr(x, "value"):
        return x.value
    raise TypeError(f"not JSON serialisable: {type(x).__name__}")


# ---- shared option groups ----------------------------------------------------

class _SeedAction(argparse.Action):
    """Records whether --seed was given, so it can override a config file."""

    def __call__(self, parser, ns, values, option_string=None):
        ns.seed = values
        ns.seed_given = True


def _common(p):
    p.add_argument("--seed", type=int, default=0, action=_SeedAction, help="64-bit seed (default 0)")
    p.set_defaults(seed_given=False)
    p.add_argument("--threads", type=int, default=1, help="worker threads (default 1)")
    p.add_argument("--out", default=None, help="output file (default stdout)")
    p.add_argument("--json", action="store_true", help="machine-readable JSON output")


def _model_opts(p):
    g = p.add_argument_group("graph source")
    g.add_argument("--graph", help="read a graph file instead of sampling one")
    g.add_argument("--n", type=float, default=4096.0, help="expected vertex count")
    g.add_argument("--d", type=int, default=1)
    g.add_argument("--tau", type=float, default=2.5)
    g.add_argument("--alpha", type=float, default=2.0)
    g.add_argument("--theta", type=float, default=1.0)
    g.add_argument("--geom", default="inf", choices=("inf", "min"))
    g.add_argument("--fixed-count", type=int, default=None)
    g.add_argument("--engine", default="grid", choices=("grid", "naive"))


def _graph_from(args):
    if args.graph:
        return graphfile.load_graph(args.graph)
    params = ModelParams(n=args.n, d=args.d, tau=args.tau, alpha=args.alpha, theta=args.theta,
                         geometry=args.geom, seed=args.seed, fixed_count=args.fixed_count)
    return sample_graph(params, engine=args.engine)


# ---- subcommands -------------------------------------------------------------

def cmd_sample(args):
    g = _graph_from(args)
    if args.json:
        comp = giant_component(g)
        deg = g.degrees
        _emit_json({"num_vertices": g.num_vertices, "num_edges": g.num_edges,
                    "giant_size": comp.giant_size,
                    "mean_degree": float(deg.mean()) if deg.size else 0.0,
                    "degree_buckets": [b._asdict() for b in degree_stats(g)]}, args.out)
    else:
        with _output(args.out) as fh:
            graphfile.write_graph(g, fh)


def cmd_spread(args):
    g = _graph_from(args)
    start = args.start
    if start != "random-giant":
        try:
            start = int(start)
        except ValueError:
            raise UsageError("--start must be a vertex id or 'random-giant'") from None
    cfg = SpreadConfig(start_vertex=start, fraction=args.fraction, target=args.target,
                       max_rounds=args.max_rounds, record_selections=args.record_selections,
                       seed=args.seed)
    tr = run_spread(g, cfg)
    if args.trace:
        with _output(args.trace) as fh:
            tr.write_jsonl(fh)
    summary = {"start": tr.start, "rounds": tr.rounds_elapsed,
               "informed": tr.informed_count, "stop": tr.stop,
               "giant_size": giant_component(g).giant_size}
    if args.json:
        _emit_json(summary, args.out)
    else:
        with _output(args.out) as fh:
            fh.write(" ".join(f"{k}={v}" for k, v in summary.items()) + "\n")


def cmd_phase(args):
    if args.grid:
        taus = np.linspace(args.tau_min, args.tau_max, args.steps)
        alphas = np.linspace(args.alpha_min, args.alpha_max, args.steps)
        labels = regimes.phase_grid(taus, alphas, args.tol)
        with _output(args.out) as fh:
            fh.write("tau,alpha,label\n")
            for a, row in zip(alphas, labels):
                for t, lab in zip(taus, row):
                    fh.write(f"{t:.17g},{a:.17g},{lab.value}\n")
        return
    if args.tau is None or args.alpha is None:
        raise UsageError("phase needs --tau and --alpha, or --grid")
    rep = regimes.classify(args.tau, args.alpha, args.tol)
    if args.json:
        _emit_json(rep.to_dict(), args.out)
    else:
        with _output(args.out) as fh:
            for k, v in rep.to_dict().items():
                fh.write(f"{k}: {v}\n")


def cmd_census(args):
    g = _graph_from(args)
    _emit_json(long_edge_census(g, args.delta).to_dict(), args.out)


def _pick(graph, v, seed, salt):
    if v is not None:
        return v
    return pick_giant_start(graph, seed + salt)


def cmd_path(args):
    g = _graph_from(args)
    start = _pick(g, args.start, args.seed, 0)
    beta = args.beta
    if beta is None:
        rep = regimes.classify(g.params.tau, g.params.alpha)
        if rep.sup_beta is None:
            raise UsageError("--beta is required when tau >= 2.5")
        beta = 0.9 * rep.sup_beta
    if args.mechanism == "mcd-alt":
        res = mcd_alternating_path(g, start, beta, target_weight=args.target, cap=args.cap)
    else:
        res = greedy_weight_path(g, start, beta, eps=args.eps, target_weight=args.target,
                                 mechanism=args.mechanism, cap=args.cap)
    ok, problems = verify_path(g, res)
    out = res.to_dict()
    out["verified"], out["problems"] = ok, problems
    _emit_json(out, args.out)


def cmd_hierarchy(args):
    g = _graph_from(args)
    u = _pick(g, args.u, args.seed, 0)
    v = _pick(g, args.v, args.seed, 1)
    if u == v:
        raise UsageError("the two endpoints coincide; pass --u and --v")
    h = find_hierarchy(g, u, v, args.gamma, mode=args.mode, stop_dist=args.stop_dist,
                       R_cap=args.rcap, eps=args.eps)
    ok, problems = verify_hierarchy(g, h)
    out = h.to_dict()
    out["u"], out["v"], out["verified"], out["problems"] = u, v, ok, problems
    _emit_json(out, args.out)


_SHADOW = ("n_grid", "d", "tau", "alpha", "theta", "geometry", "graphs_per_n",
           "trials_per_graph", "fraction", "max_rounds", "engine")


def cmd_scaling(args):
    data = {}
    if args.config:
        try:
            with open(args.config) as fh:
                data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise DataError(f"config is not valid JSON: {exc.msg}", line=exc.lineno) from None
        except OSError as exc:
            raise DataError(f"cannot read config: {exc.strerror}") from None
        if not isinstance(data, dict):
            raise DataError("config must be a JSON object")
    for key in _SHADOW:
        val = getattr(args, key)
        if val is not None:
            data[key] = val
    if args.seed_given:
        data["seed_base"] = args.seed
    if "n_grid" not in data:
        raise UsageError("scaling needs an n grid (config key n_grid or --n-grid)")
    cfg = harness.ExperimentConfig.from_dict(data)
    rows = harness.run_scaling_experiment(cfg, threads=args.threads)
    with _output(args.out or cfg.out) as fh:
        harness.write_rows(rows, fh)


def cmd_fit(args):
    try:
        fh = open(args.rows)
    except OSError as exc:
        raise DataError(f"cannot read {args.rows}: {exc.strerror}") from None
    with fh:
        rows = harness.read_rows(fh)
    rep = harness.fit_growth(rows)
    if args.json:
        _emit_json(rep.to_dict(), args.out)
    else:
        with _output(args.out) as out:
            for n, m in zip(rep.ns, rep.medians):
                out.write(f"n={n:.17g} median={m:g}\n")
            for k in harness.MODELS:
                coef = " ".join(f"{c}={x:.6g}" for c, x in rep.coefficients[k].items())
                out.write(f"{k}: {coef} rss={rep.rss[k]:.6g}\n")
            out.write(f"winner: {rep.winner}\n")


def build_parser():
    ap = argparse.ArgumentParser(prog="girgspread",
                                 description="GIRG sampling and push-pull rumour spreading")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sample", help="sample a graph and write it as a graph file")
    _common(p)
    _model_opts(p)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("spread", help="run push-pull on a graph")
    _common(p)
    _model_opts(p)
    p.add_argument("--start", default="random-giant")
    p.add_argument("--fraction", type=float, default=None)
    p.add_argument("--target", type=int, default=None)
    p.add_argument("--max-rounds", type=int, default=100_000)
    p.add_argument("--record-selections", action="store_true")
    p.add_argument("--trace", help="write the per-round JSONL trace here")
    p.set_defaults(func=cmd_spread)

    p = sub.add_parser("phase", help="classify (tau, alpha) or emit a label raster")
    _common(p)
    p.add_argument("--tau", type=float)
    p.add_argument("--alpha", type=float)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--grid", action="store_true")
    p.add_argument("--tau-min", type=float, default=2.02)
    p.add_argument("--tau-max", type=float, default=3.5)
    p.add_argument("--alpha-min", type=float, default=1.02)
    p.add_argument("--alpha-max", type=float, default=6.0)
    p.add_argument("--steps", type=int, default=60)
    p.set_defaults(func=cmd_phase)

    p = sub.add_parser("census", help="count delta-long edges per slowdown level")
    _common(p)
    _model_opts(p)
    p.add_argument("--delta", type=float, default=None)
    p.set_defaults(func=cmd_census)

    p = sub.add_parser("path", help="search a weight-increasing path")
    _common(p)
    _model_opts(p)
    p.add_argument("--mechanism", default="direct",
                   choices=("direct", "via-low-weight", "relay3hop", "mcd-alt"))
    p.add_argument("--beta", type=float, default=None)
    p.add_argument("--target", type=float, default=None, help="target weight (default sqrt n)")
    p.add_argument("--start", type=int, default=None)
    p.add_argument("--eps", type=float, default=None)
    p.add_argument("--cap", type=float, default=8.0)
    p.set_defaults(func=cmd_path)

    p = sub.add_parser("hierarchy", help="search a bridge-edge hierarchy between two vertices")
    _common(p)
    _model_opts(p)
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--mode", default="weak", choices=("weak", "strong"))
    p.add_argument("--u", type=int, default=None)
    p.add_argument("--v", type=int, default=None)
    p.add_argument("--stop-dist", type=float, default=8.0)
    p.add_argument("--rcap", type=int, default=8)
    p.add_argument("--eps", type=float, default=None)
    p.set_defaults(func=cmd_hierarchy)

    p = sub.add_parser("scaling", help="run a scaling experiment and write CSV rows")
    _common(p)
    p.add_argument("--config", help="JSON experiment config; flags below override its keys")
    p.add_argument("--n-grid", dest="n_grid", type=float, nargs="+")
    for flag, kind in (("d", int), ("tau", float), ("alpha", float), ("theta", float),
                       ("graphs-per-n", int), ("trials-per-graph", int), ("fraction", float),
                       ("max-rounds", int)):
        p.add_argument(f"--{flag}", dest=flag.replace("-", "_"), type=kind, default=None)
    p.add_argument("--geom", dest="geometry", choices=("inf", "min"), default=None)
    p.add_argument("--engine", choices=("grid", "naive"), default=None)
    p.set_defaults(func=cmd_scaling)

    p = sub.add_parser("fit", help="fit growth models to scaling CSV rows")
    _common(p)
    p.add_argument("rows", help="CSV produced by the scaling subcommand")
    p.set_defaults(func=cmd_fit)

    return ap


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.threads < 1:
        ap.error("--threads must be >= 1")
    try:
        args.func(args)
    except (UsageError, ResourceError) as exc:
        print(f"girgspread: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DataError as exc:
        print(f"girgspread: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
