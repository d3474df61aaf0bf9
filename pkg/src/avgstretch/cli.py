"""Command-line interface.

Subcommands: gen (point-set generators), build (construct the graph),
eval (stretch measurement), props (partition property probes), bench
(experiment harness driven by a JSON spec).  All parameter formulas use
natural logarithms; duplicate input points are rejected.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import construct, evaluate, fairsplit, workbench
from ._kernels import prep
from .errors import DisconnectedGraphError, InvalidInputError, ParseError
from .geometry import PointSet


def _cmd_gen(args) -> int:
    if args.kind == "uniform":
        points = workbench.gen_uniform(args.n, args.d, args.seed)
    elif args.kind == "exp-grids":
        points = workbench.gen_exp_grids(args.grid_k, args.grid_count)
    elif args.kind == "two-columns":
        points = workbench.gen_two_columns(args.n)
    else:
        points = workbench.gen_cluster_trap(args.n)
    with open(args.out, "w") as fh:
        workbench.write_points(points, fh)
    print("wrote %d points (d=%d) to %s" % (points.n, points.d, args.out))
    return 0


def _load_points(path) -> PointSet:
    with open(path) as fh:
        return workbench.read_points(fh)


def _cmd_build(args) -> int:
    points = _load_points(args.infile)
    params = construct.select_parameters(
        max(points.n, 4), points.d, args.variant, kappa=args.kappa,
        seed=args.seed, alpha_samples=args.alpha_samples)
    if args.k is not None:
        params.k = args.k
    if args.c is not None:
        params.c = args.c
    if args.epsilon is not None:
        params.epsilon = args.epsilon
    params.validate()
    result = construct.build(points, params, rep_rule=args.rep_rule)
    report = result.report
    if args.graph_out:
        with open(args.graph_out, "w") as fh:
            workbench.write_graph(result.graph, fh)
    if args.report_out:
        with open(args.report_out, "w") as fh:
            fh.write("[build]\n")
            for key, val in vars(report).items():
                if key == "phase_seconds":
                    for phase, secs in val.items():
                        fh.write("phase_%s_seconds: %r\n" % (phase, secs))
                elif isinstance(val, float):
                    fh.write("%s: %r\n" % (key, val))
                else:
                    fh.write("%s: %s\n" % (key, val))
    print("built graph: n=%d edges=%d (roads=%d highways=%d representatives=%d)"
          % (report.n, report.edges_total, report.edges_roads,
             report.edges_highways, report.edges_representative))
    return 0


def _cmd_eval(args) -> int:
    points = _load_points(args.points)
    with open(args.graph) as fh:
        graph = workbench.read_graph(fh, points)
    if args.sample is not None:
        rep = evaluate.average_stretch_sampled(graph, points, args.sample,
                                               seed=args.seed)
    else:
        rep = evaluate.average_stretch_exact(graph, points,
                                             exact_override=args.exact_override)
    line = "asf=%r method=%s pairs=%d" % (rep.asf, rep.describe(), rep.pair_count)
    if rep.stderr is not None:
        line += " stderr=%r" % rep.stderr
    if rep.strf is not None:
        line += " strf=%r" % rep.strf
    print(line)
    if args.hist_out:
        hist = evaluate.stretch_histogram(graph, points, args.buckets,
                                          exact_override=args.exact_override)
        with open(args.hist_out, "w") as fh:
            hist.write_csv(fh)
    return 0


def _cmd_props(args) -> int:
    points = _load_points(args.infile)
    partition = fairsplit.k_partition(points, args.k)
    lo = points.coords.min(axis=0)
    hi = points.coords.max(axis=0)
    span = float(np.max(hi - lo)) or 1.0
    centers = lo + prep.draw_floats(args.seed, 0x9601, args.probes * points.d) \
        .reshape(args.probes, points.d) * (hi - lo)
    radii = span * np.exp(np.log(1e-3) * prep.draw_floats(args.seed, 0x9602, args.probes))
    report = fairsplit.probe_properties(partition, points,
                                        list(zip(centers, radii)))
    print("balls=%d alpha=%r" % (partition.n_balls, partition.alpha))
    print("max_overlap_count=%d max_density_ratio=%r"
          % (report.max_overlap, report.max_density))
    if args.out:
        with open(args.out, "w") as fh:
            partition.dump_csv(fh)
    return 0


def _cmd_bench(args) -> int:
    with open(args.spec) as fh:
        spec = workbench.ExperimentSpec.from_json(fh)
    records = workbench.run_experiment(spec)
    if args.out:
        with open(args.out, "w") as fh:
            workbench.write_report(records, fh)
    for rec in records:
        print("n=%d seed=%d asf=%r edges=%d method=%s"
              % (rec.n, rec.seed, rec.asf, rec.edges_total, rec.eval_method))
    if len({r.n for r in records}) >= 2 and len(records) >= 3:
        try:
            slope, intercept, r2 = workbench.fit_slope(records)
            print("log(asf-1) ~ %.4f * log n + %.4f (r2=%.4f)" % (slope, intercept, r2))
        except InvalidInputError as exc:
            print("slope fit skipped: %s" % exc)
    return 0


def make_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="avgstretch",
        description="Sparse geometric graphs with near-1 average stretch.")
    sub = ap.add_subparsers(dest="cmd", required=True)

    g = sub.add_parser("gen", help="generate a point set")
    g.add_argument("--kind", required=True,
                   choices=["uniform", "exp-grids", "two-columns", "cluster-trap"])
    g.add_argument("--n", type=int, default=1024)
    g.add_argument("--d", type=int, default=2)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--grid-k", type=int, default=64, help="points per grid (exp-grids)")
    g.add_argument("--grid-count", type=int, default=8, help="number of grids (exp-grids)")
    g.add_argument("--out", required=True)
    g.set_defaults(func=_cmd_gen)

    b = sub.add_parser("build", help="construct the low-average-stretch graph")
    b.add_argument("--in", dest="infile", required=True)
    b.add_argument("--variant", default="sampled",
                   choices=list(construct.VARIANTS))
    b.add_argument("--k", type=int)
    b.add_argument("--c", type=float)
    b.add_argument("--epsilon", type=float)
    b.add_argument("--kappa", type=int)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--alpha-samples", type=float, default=3.0)
    b.add_argument("--rep-rule", default="careful", choices=list(construct.REP_RULES))
    b.add_argument("--graph-out")
    b.add_argument("--report-out")
    b.set_defaults(func=_cmd_build)

    e = sub.add_parser("eval", help="measure stretch factors")
    e.add_argument("--points", required=True)
    e.add_argument("--graph", required=True)
    group = e.add_mutually_exclusive_group()
    group.add_argument("--exact", action="store_true", default=True)
    group.add_argument("--sample", type=int, help="number of sampled pairs")
    e.add_argument("--seed", type=int, default=0)
    e.add_argument("--exact-override", action="store_true",
                   help="allow exact evaluation beyond the n<=20000 budget")
    e.add_argument("--hist-out", help="write a stretch histogram CSV here")
    e.add_argument("--buckets", type=int, default=32)
    e.set_defaults(func=_cmd_eval)

    p = sub.add_parser("props", help="probe k-partition properties")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--probes", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="write the partition CSV here")
    p.set_defaults(func=_cmd_props)

    s = sub.add_parser("bench", help="run an experiment spec (JSON)")
    s.add_argument("--spec", required=True)
    s.add_argument("--out", help="write run records here")
    s.set_defaults(func=_cmd_bench)
    return ap


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InvalidInputError, ParseError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    except DisconnectedGraphError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 3
    except OSError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
