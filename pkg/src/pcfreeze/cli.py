"""Command-line front end.

Every command takes a mandatory ``--seed``, writes its result as CSV or JSON
to ``--output`` and a ``<output>.manifest.json`` next to it.  Options can
also come from ``--config``: either ``key = value`` lines (``#`` comments)
or a manifest written by an earlier run.  Command-line flags win.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import os
import sys
import time
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from .engine import run_pcf, run_warm_pcf, sample_clocks, write_trajectory
from .errors import PCFError
from .graph import (PriorityOrder, build_grid, build_rooted_tree, load_edge_list,
                    named_graph)

log = logging.getLogger("pcfreeze")

COMMANDS = ("simulate", "crossing-curve", "estimate-alpha-c", "tree-pmf", "tree-analytic",
            "oracle-check", "star-bound")


class UsageError(Exception):
    pass


# ---------------------------------------------------------------- parsing

def _float_list(text):
    """``0.45,0.5`` or ``lo:hi:step`` (inclusive of hi up to rounding)."""
    text = str(text).strip()
    if ":" in text:
        lo, hi, step = (float(x) for x in text.split(":"))
        if step <= 0 or hi < lo:
            raise argparse.ArgumentTypeError(f"bad range {text!r}")
        count = int(math.floor((hi - lo) / step + 1e-9)) + 1
        return [round(lo + i * step, 12) for i in range(count)]
    return [float(x) for x in text.split(",") if x.strip()]


def _int_list(text):
    return [int(x) for x in str(text).split(",") if x.strip()]


def _threads(text):
    if str(text) == "auto":
        return os.cpu_count() or 1
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError("threads must be >= 1 or 'auto'")
    return n


def _grid(text):
    try:
        w, h = (int(x) for x in str(text).lower().split("x"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"grid must look like WIDTHxHEIGHT, got {text!r}") from None
    return w, h


def _tree(text):
    try:
        d, depth = (int(x) for x in str(text).split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"tree must look like D:DEPTH, got {text!r}") from None
    return d, depth


def _add_common(p):
    p.add_argument("--seed", type=int, help="base seed (mandatory)")
    p.add_argument("--config", help="key = value file or an earlier manifest")
    p.add_argument("-o", "--output", help="result file (default: <command>.<format>)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--threads", type=_threads, default=1, help="worker threads or 'auto'")
    p.add_argument("--plot", action="store_true", help="also render PNG figures")
    p.add_argument("--gnuplot", action="store_true", help="also write a gnuplot script stub")
    p.add_argument("-v", "--verbose", action="store_true")


def _add_graph(p, default_grid=None):
    g = p.add_mutually_exclusive_group()
    g.add_argument("--grid", type=_grid, default=default_grid, help="WIDTHxHEIGHT")
    g.add_argument("--tree", type=_tree, help="D:DEPTH rooted tree")
    g.add_argument("--graph", help="edge-list file ('V E B' header)")
    g.add_argument("--named", help="small built-in graph (edge, p3, c4, ...)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="pcfreeze",
                                 description="Percolation with constant freezing: "
                                             "simulation and exact analysis.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="run replicas on one graph")
    _add_common(p)
    _add_graph(p)
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--replicas", type=int, default=1)
    p.add_argument("--variant", choices=("pcf", "warm", "percolation"), default="pcf")
    p.add_argument("--t", type=float, default=math.inf,
                   help="percolation time, or stopping time for pcf/warm")
    p.add_argument("--min-per-bin", type=int, default=100)
    p.add_argument("--weighting", choices=("vertex", "cluster"), default="vertex")
    p.add_argument("--fit-range", type=_float_list, default=[10.0, 1e4])
    p.add_argument("--trajectory", help="dump the event log of replica 0 here")

    p = sub.add_parser("crossing-curve", help="left-right crossing probability against alpha")
    _add_common(p)
    p.add_argument("--n", type=_int_list, default=[128])
    p.add_argument("--alpha", type=_float_list, default=_float_list("0.45:0.65:0.01"))
    p.add_argument("--replicas", type=int, default=2500)
    p.add_argument("--mode", choices=("pcf", "warm", "percolation"), default="pcf")
    p.add_argument("--t", type=float, default=math.log(2), help="percolation time")

    p = sub.add_parser("estimate-alpha-c", help="bisection for crossing probability 1/2")
    _add_common(p)
    p.add_argument("--n", type=int, default=128)
    p.add_argument("--bracket", type=_float_list, default=[0.45, 0.65])
    p.add_argument("--target-width", type=float, default=0.02)
    p.add_argument("--budget", type=int, default=100_000)
    p.add_argument("--batch", type=int, default=500)

    p = sub.add_parser("tree-pmf", help="exact root-cluster size distribution on the d-ary tree")
    _add_common(p)
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--k-max", type=int, default=1000)
    p.add_argument("--fit-range", type=_float_list, default=None,
                   help="k_lo,k_hi for the tail fit (default min(100, k_max/2),k_max)")

    p = sub.add_parser("tree-analytic", help="closed-form tree quantities")
    _add_common(p)
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--t", type=float, default=math.inf)

    p = sub.add_parser("oracle-check", help="exact final law against engine Monte Carlo")
    _add_common(p)
    _add_graph(p)
    p.add_argument("--alpha", default="1", help="rational or decimal, e.g. 1/4")
    p.add_argument("--replicas", type=int, default=100_000)

    p = sub.add_parser("star-bound", help="star-open bound f_d(alpha) and alpha*")
    _add_common(p)
    p.add_argument("--d", type=int, default=2, help="lattice dimension (degree 2d)")
    p.add_argument("--alpha", type=_float_list, default=[0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 50.0])
    p.add_argument("--p-c", type=float, default=None, help="site threshold for alpha*")
    return ap


def _read_config(path) -> dict:
    text = Path(path).read_text(encoding="utf-8")
    if text.lstrip().startswith("{"):
        data = json.loads(text)
        data = data.get("manifest", data)
        return dict(data.get("config", data))
    out = {}
    for num, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{num}: expected 'key = value'")
        k, v = (x.strip() for x in line.split("=", 1))
        out[k] = v
    return out


def _config_to_argv(cfg: dict, parser) -> list[str]:
    """Turn config entries into long options so they pass through the same
    type conversion and validation as real flags."""
    known = {a.dest: a for a in parser._actions}
    argv = []
    for key, val in cfg.items():
        dest = key.replace("-", "_")
        if dest in ("command", "config", "output") or val is None:
            continue
        act = known.get(dest)
        if act is None:
            raise UsageError(f"unknown config key {key!r}")
        flag = max(act.option_strings, key=len)
        if isinstance(act, argparse._StoreTrueAction):
            if str(val).lower() in ("1", "true", "yes", "on"):
                argv.append(flag)
            continue
        if isinstance(val, list):
            if dest in ("grid",):
                val = "x".join(str(x) for x in val)
            elif dest in ("tree",):
                val = ":".join(str(x) for x in val)
            else:
                val = ",".join(repr(x) if isinstance(x, float) else str(x) for x in val)
        argv += [flag, str(val)]
    return argv


def parse_args(argv=None) -> argparse.Namespace:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config:
        try:
            cfg = _read_config(args.config)
        except (OSError, ValueError, UsageError) as exc:
            parser.error(f"cannot read config: {exc}")
        if cfg.get("command", args.command) != args.command:
            parser.error(f"config is for command {cfg['command']!r}, not {args.command!r}")
        sub = parser._subparsers._group_actions[0].choices[args.command]
        try:
            file_argv = _config_to_argv(cfg, sub)
        except UsageError as exc:
            parser.error(str(exc))
        # file values first, command line second: later flags win
        args = parser.parse_args([args.command] + file_argv + argv[1:])
        if "output" in cfg and args.output is None:
            args.output = cfg["output"]
    if args.seed is None:
        parser.error("--seed is mandatory")
    _validate(parser, args)
    return args


def _validate(parser, a):
    def need(cond, msg):
        if not cond:
            parser.error(msg)

    if hasattr(a, "replicas"):
        need(a.replicas >= 1, "--replicas must be >= 1")
    if a.command in ("tree-pmf", "tree-analytic") or (
            a.command == "simulate" and a.variant != "percolation"):
        need(a.alpha > 0, "--alpha must be positive")
    if a.command == "simulate":
        need(a.min_per_bin >= 1, "--min-per-bin must be >= 1")
        need(a.t >= 0, "--t must be non-negative")
    if a.command == "crossing-curve":
        need(all(n >= 2 for n in a.n), "--n values must be >= 2")
        need(a.alpha and all(x > 0 for x in a.alpha), "--alpha values must be positive")
    if a.command == "estimate-alpha-c":
        need(len(a.bracket) == 2 and 0 < a.bracket[0] < a.bracket[1], "--bracket must be lo,hi")
        need(a.target_width > 0, "--target-width must be positive")
        need(a.budget >= 1 and a.batch >= 1, "--budget and --batch must be positive")
        need(a.n >= 2, "--n must be >= 2")
    if a.command in ("tree-pmf", "tree-analytic", "star-bound"):
        need(a.d >= (1 if a.command == "star-bound" else 2), "--d out of range")
    if a.command == "tree-pmf":
        need(a.k_max >= 1, "--k-max must be >= 1")
    if a.command == "oracle-check":
        try:
            a.alpha = Fraction(a.alpha)
        except (ValueError, ZeroDivisionError):
            parser.error("--alpha must be a rational or decimal number")
        need(a.alpha > 0, "--alpha must be positive")
    if a.command == "star-bound":
        need(all(x > 0 for x in a.alpha), "--alpha values must be positive")
        need(a.p_c is None or 0 < a.p_c < 1, "--p-c must lie in (0, 1)")


# --------------------------------------------------------------- commands

def _graph_of(a, default=None):
    if a.tree is not None:
        return build_rooted_tree(*a.tree)
    if a.graph is not None:
        return load_edge_list(a.graph)
    if a.named is not None:
        return named_graph(a.named)
    if a.grid is not None:
        return build_grid(*a.grid)
    if default is not None:
        return named_graph(default)
    raise PCFError("no graph given: use --grid, --tree, --graph or --named")


def _graph_desc(g):
    return {"kind": g.kind, **g.params, "vertices": g.vertex_count, "edges": g.edge_count}


def cmd_simulate(a, out):
    from .stats import ReplicaPlan, histogram_slope, run_replicas, size_counts, size_histogram

    g = _graph_of(a)
    plan = ReplicaPlan(g, a.alpha, a.replicas, a.seed, a.variant, a.t)
    rows = []
    sizes = []

    def summarise(r):
        return {"event_count": r.event_count, "clusters": int(r.cluster_sizes.size),
                "largest_cluster": int(r.cluster_sizes[-1]) if r.cluster_sizes.size else 0,
                "root_cluster_size": r.root_cluster_size,
                "root_touched_boundary": int(r.root_touched_boundary),
                "open_edges": int(r.final.edge_open.sum()),
                "frozen_vertices": int(r.final.frozen.sum())}, r.cluster_sizes

    for i, (row, cs) in enumerate(run_replicas(plan, a.threads, summarise)):
        rows.append({"replica": i, **row})
        sizes.append(cs)
    if a.trajectory:
        c = sample_clocks(g, a.alpha if a.variant != "percolation" else 1.0, a.seed, 0)
        if a.variant == "percolation":
            c = c.with_clocks(vertex_clock=np.full(g.vertex_count, np.inf))
        runner = run_warm_pcf if a.variant == "warm" else run_pcf
        res = runner(g, PriorityOrder.for_graph(g), c, a.t, record=True)
        write_trajectory(res, out.sibling(".trajectory.txt", a.trajectory))
    hist = size_histogram(size_counts(sizes), a.min_per_bin, a.weighting)
    try:
        fit = histogram_slope(hist, *a.fit_range)
        fit_info = {"slope": fit.slope, "intercept": fit.intercept,
                    "k_range": list(fit.k_range), "bins_used": fit.bins_used}
    except PCFError:
        fit, fit_info = None, None
    hist_rows = [{"k_center": float(x), "k_lo": lo, "k_hi": hi, "count": c, "density": float(d)}
                 for x, lo, hi, c, d in hist.rows()]
    out.table("replicas", rows)
    out.table("histogram", hist_rows, suffix=".hist")
    out.summary = {"graph": _graph_desc(g), "slope_fit": fit_info,
                   "total_clusters": hist.total_clusters, "weighting": hist.weighting}
    if a.plot:
        from .plotting import plot_histogram
        out.figure(lambda p: plot_histogram(hist, p, a.alpha, fit), ".hist")
    out.gnuplot(".hist", "set logscale xy\nset datafile separator ','\n"
                "plot '{data}' using 1:5 skip 1 with points title 'density'\n")


def cmd_crossing_curve(a, out):
    from .stats import estimate_crossing_prob

    rows = []
    for n in a.n:
        for alpha in a.alpha:
            e = estimate_crossing_prob(n, alpha, a.replicas, a.seed, a.mode,
                                       a.t if a.mode == "percolation" else None, a.threads)
            log.info("n=%d alpha=%.4f p=%.4f", n, alpha, e.p_hat)
            rows.append((alpha, n, e))
    out.table("crossing", [_crossing_row(al, n, e) for al, n, e in rows])
    if a.plot:
        from .plotting import plot_crossing_curve
        out.figure(lambda p: plot_crossing_curve(rows, p))
    out.gnuplot("", "set datafile separator ','\nset yrange [0:1]\n"
                "plot '{data}' using 1:5 skip 1 with linespoints title 'P(crossing)'\n")


def _crossing_row(alpha, n, e):
    return {"alpha": float(alpha), "n": n, "trials": e.trials, "successes": e.successes,
            "p_hat": e.p_hat, "ci_low": float(e.ci_low), "ci_high": float(e.ci_high)}


def cmd_estimate_alpha_c(a, out):
    from .stats import estimate_alpha_c

    r = estimate_alpha_c(a.n, tuple(a.bracket), a.target_width, a.budget, a.seed, a.batch,
                         a.threads)
    rows = [(al, a.n, r.points[al]) for al in sorted(r.points)]
    out.table("points", [_crossing_row(*x) for x in rows])
    out.summary = {"interval": [r.low, r.high], "width": r.width, "midpoint": r.midpoint,
                   "replicas_used": r.replicas_used, "budget_exhausted": r.budget_exhausted,
                   "undecided": r.undecided, "monotone": r.monotone, "path": r.path}
    if a.plot:
        from .plotting import plot_crossing_curve
        out.figure(lambda p: plot_crossing_curve(rows, p))


def cmd_tree_pmf(a, out):
    from .tree import TreeParams, fit_tail_exponent, root_cluster_size_pmf

    pmf = root_cluster_size_pmf(TreeParams(a.d, a.alpha), a.k_max)
    fit = None
    if a.fit_range:
        fit = fit_tail_exponent(pmf, int(a.fit_range[0]), int(a.fit_range[1]))
    elif a.k_max >= 20:
        fit = fit_tail_exponent(pmf, min(100, a.k_max // 2), a.k_max)
    out.table("pmf", [{"k": int(k), "p_k": float(math.exp(lp)), "log_p_k": float(lp)}
                      for k, lp in zip(pmf.k, pmf.log_p)])
    out.summary = {"d": a.d, "alpha": a.alpha, "k_max": pmf.k_max,
                   "mass_deficit": pmf.mass_deficit,
                   "extrapolated_deficit": pmf.extrapolated_deficit,
                   "tail_model": pmf.tail_model, "tail": pmf.meta,
                   "fit": None if fit is None else {"exponent": fit.exponent,
                                                    "intercept": fit.intercept,
                                                    "k_range": list(fit.k_range),
                                                    "residual": fit.residual}}
    if a.plot:
        from .plotting import plot_pmf
        out.figure(lambda p: plot_pmf(pmf, p, fit))
    out.gnuplot("", "set logscale xy\nset datafile separator ','\n"
                "plot '{data}' using 1:2 skip 1 with lines title 'p_k'\n")


def cmd_tree_analytic(a, out):
    from . import tree as T
    from .errors import DomainError

    try:
        t_c = T.critical_time(a.d, a.alpha)
    except DomainError:
        t_c = None
    rows = [
        ("alpha_c", T.critical_alpha(a.d)),
        ("t_c", t_c),
        ("open_prob", T.open_prob(a.alpha, a.t)),
        ("percolation_time", T.percolation_time(a.alpha, a.t)),
        ("meanfield_time", T.meanfield_time(a.alpha, a.t)),
        ("p_1", T.cluster_prob(a.alpha, 0, a.d)),
    ]
    out.table("quantities", [{"quantity": k, "value": v} for k, v in rows])
    out.summary = {"d": a.d, "alpha": a.alpha, "t": a.t,
                   "regime": ("subcritical" if a.alpha > a.d - 1 else
                              "critical" if a.alpha == a.d - 1 else "supercritical")}


def cmd_oracle_check(a, out):
    from .engine import final_edge_masks
    from .oracle import oracle_for

    g = _graph_of(a, default="edge")
    space, dist = oracle_for(g, a.alpha)
    exact = dist.by_open_mask(space)
    masks = final_edge_masks(g, float(a.alpha), a.seed, a.replicas)
    keys, counts = np.unique(masks, return_counts=True)
    observed = dict(zip(keys.tolist(), counts.tolist()))
    rows = []
    worst = 0.0
    for mask in sorted(exact):
        p = exact[mask]
        c = observed.get(mask, 0)
        est = c / a.replicas
        se = math.sqrt(float(p) * (1 - float(p)) / a.replicas)
        z = (est - float(p)) / se if se > 0 else 0.0
        worst = max(worst, abs(z))
        open_edges = " ".join(str(e) for e in range(g.edge_count) if mask >> e & 1)
        rows.append({"open_edges": open_edges, "exact": str(p), "exact_float": float(p),
                     "count": c, "estimate": est, "stderr": se, "z": z})
    unexpected = sorted(set(observed) - set(exact))
    out.table("states", rows)
    out.summary = {"graph": _graph_desc(g), "alpha": str(a.alpha), "states": len(space),
                   "absorbing": len(space.absorbing), "max_abs_z": worst,
                   "unexpected_masks": unexpected}
    if g.edge_count == 1:
        from .stats import BernoulliEstimate
        e = BernoulliEstimate.from_counts(observed.get(1, 0), a.replicas)
        out.summary["edge_open"] = {"exact": str(exact.get(1, 0)), "estimate": e.p_hat,
                                    "ci_low": float(e.ci_low), "ci_high": float(e.ci_high)}


def cmd_star_bound(a, out):
    from .tree import alpha_star, star_open_bound

    deg = 2 * a.d
    rows = [(deg, al, star_open_bound(deg, al)) for al in a.alpha]
    out.table("bound", [{"degree": d, "alpha": al, "f": f} for d, al, f in rows])
    out.summary = {"degree": deg}
    if a.p_c is not None:
        s = alpha_star(a.d, a.p_c)
        out.summary.update({"p_c": a.p_c, "alpha_star": s, "f_at_alpha_star": star_open_bound(deg, s)})
    if a.plot:
        from .plotting import plot_star_bound
        out.figure(lambda p: plot_star_bound(rows, p))


HANDLERS = {
    "simulate": cmd_simulate,
    "crossing-curve": cmd_crossing_curve,
    "estimate-alpha-c": cmd_estimate_alpha_c,
    "tree-pmf": cmd_tree_pmf,
    "tree-analytic": cmd_tree_analytic,
    "oracle-check": cmd_oracle_check,
    "star-bound": cmd_star_bound,
}


# ----------------------------------------------------------------- output

def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.floating, float)):
        x = float(x)
        return x if math.isfinite(x) else str(x)
    if isinstance(x, (np.bool_,)):
        return bool(x)
    if isinstance(x, Fraction):
        return str(x)
    return x


def _cell(v):
    if v is None:
        return ""
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


class Outputs:
    """Collects tables and side files; CSV puts each table in its own file,
    JSON puts everything in one object.  Tracks every written path so a
    failed run can clean up after itself."""

    def __init__(self, path: Path, fmt: str, want_gnuplot: bool):
        self.path = path
        self.fmt = fmt
        self.want_gnuplot = want_gnuplot
        self.tables = {}
        self.summary = {}
        self.written: list[Path] = []

    def sibling(self, suffix, explicit=None) -> Path:
        p = Path(explicit) if explicit else self.path.with_name(self.path.stem + suffix)
        self.written.append(p)
        return p

    def table(self, name, rows, suffix=""):
        self.tables[name] = (rows, suffix)

    def figure(self, draw, suffix=""):
        draw(self.sibling(suffix + ".png"))

    def gnuplot(self, suffix, body):
        if not self.want_gnuplot or self.fmt != "csv":
            return
        data = self.path.with_name(self.path.stem + suffix + ".csv").name
        script = self.sibling(suffix + ".gp")
        script.write_text("# gnuplot script stub\n" + body.format(data=data), encoding="ascii")

    def finish(self, manifest: dict) -> list[Path]:
        if self.fmt == "json":
            doc = {"manifest": manifest,
                   "results": {"summary": self.summary,
                               **{k: rows for k, (rows, _) in self.tables.items()}}}
            self.written.append(self.path)
            self.path.write_text(json.dumps(_jsonable(doc), indent=1) + "\n", encoding="utf-8")
        else:
            for i, (name, (rows, suffix)) in enumerate(self.tables.items()):
                p = self.path if i == 0 and not suffix else self.sibling(suffix + ".csv")
                if p == self.path:
                    self.written.append(p)
                buf = io.StringIO()
                if rows:
                    w = csv.writer(buf, lineterminator="\n")
                    w.writerow(list(rows[0]))
                    for r in rows:
                        w.writerow([_cell(v) for v in r.values()])
                p.write_text(buf.getvalue(), encoding="utf-8")
        man_path = self.sibling(".manifest.json")
        manifest = dict(manifest, outputs=[str(p) for p in self.written if p != man_path],
                        summary=self.summary)
        man_path.write_text(json.dumps(_jsonable(manifest), indent=1) + "\n", encoding="utf-8")
        return self.written

    def cleanup(self):
        for p in self.written:
            try:
                p.unlink()
            except FileNotFoundError:
                pass


def _config_of(a) -> dict:
    skip = {"config", "verbose"}
    return {k: _jsonable(v) for k, v in vars(a).items() if k not in skip}


def execute(a) -> int:
    out_path = Path(a.output or f"{a.command}.{a.format}")
    out = Outputs(out_path, a.format, a.gnuplot)
    start = time.perf_counter()
    try:
        HANDLERS[a.command](a, out)
        manifest = {"command": a.command, "config": _config_of(a), "version": __version__,
                    "elapsed_seconds": time.perf_counter() - start}
        out.finish(manifest)
    except BaseException:
        out.cleanup()
        raise
    return 0


def main(argv=None) -> int:
    try:
        args = parse_args(argv)
    except SystemExit as exc:  # argparse usage errors exit with status 2
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return execute(args)
    except PCFError as exc:
        print(f"pcfreeze: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"pcfreeze: {exc}", file=sys.stderr)
        return 7


if __name__ == "__main__":
    sys.exit(main())
