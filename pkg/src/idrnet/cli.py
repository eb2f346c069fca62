"""Command-line entry point: ``idrnet <verb> ...``.

Exit codes: 0 success, 2 config error, 3 data error, 4 numeric/degeneracy error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from functools import partial
from pathlib import Path

import numpy as np

from idrnet import community, corpus, decompose, diff, fits, graph, io, metrics, null
from idrnet.errors import ConfigError, DataError, IdrError, NumericError
from idrnet.pipeline import run_pipeline

log = logging.getLogger("idrnet")


def _print_json(obj):
    json.dump(io._jsonable(obj), sys.stdout, indent=2, sort_keys=True)
    sys.stdout.write("\n")


def _spec(args) -> null.EnsembleSpec:
    swaps = None if args.swaps == "auto" else int(args.swaps)
    return null.EnsembleSpec(args.replicates, swaps, args.seed, args.mode)


def _add_null_args(p, replicates=100):
    p.add_argument("--replicates", type=int, default=replicates)
    p.add_argument("--swaps", default="auto", help="swaps per replicate, or 'auto' (10 x links)")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--mode", choices=null.MODES, default="all-pairs")
    p.add_argument("--workers", type=int, default=1)


# --- verbs -------------------------------------------------------------------


def cmd_ingest(args):
    c = corpus.ingest_records(args.source, args.rollup_depth)
    if args.out:
        c.write(args.out)
    _print_json({
        "count": len(c),
        "per_year": c.count_by_year(),
        "duplicates": c.duplicates,
        "rejected": [{"line": r.line_no, "reason": r.reason} for r in c.rejections],
    })


def cmd_tiers(args):
    table = corpus.read_ranking(args.ranking, args.duplicates)
    w = sys.stdout
    w.write("year\tjournal_id\tpercentile\ttier\n")
    for year in sorted(table.table):
        if args.year is not None and year != args.year:
            continue
        for jid in sorted(table.table[year]):
            tier = corpus.classify_tier(table, jid, year, args.cutoff)
            w.write(f"{year}\t{jid}\t{table.table[year][jid]}\t{tier}\n")


def _view(args):
    c = corpus.ingest_records(args.corpus, getattr(args, "rollup_depth", None))
    table = corpus.read_ranking(args.ranking)
    tier, month = corpus.parse_tier(args.tier)
    month = args.month if args.month is not None else month
    return corpus.corpus_view(c, table, tier, args.year, month, args.cutoff)


def cmd_view(args):
    v = _view(args)
    if args.count:
        print(v.count)
        return
    out = open(args.out, "w", encoding="utf-8") if args.out else sys.stdout
    for r in v.records:
        out.write(r.to_line() + "\n")
    if args.out:
        out.close()


def cmd_build_net(args):
    v = _view(args)
    labels = corpus.read_labels(args.labels)
    net = graph.build_network(v, tuple(labels), labels)
    io.write_network(net, args.out)
    log.info("wrote %s (%d nodes, %d links, %d documents)", args.out, net.n, net.n_edges, v.count)


def cmd_metrics(args):
    net = io.read_network(args.net)
    q = None
    if net.total_weight > 0:
        best, _ = community.best_partition(net, community.seed_list(args.seeds, args.seed))
        q = best.modularity
    rep = metrics.global_report(net, args.component, q)
    io.dump_json(rep.to_dict(), args.out) if args.out else _print_json(rep.to_dict())


def cmd_rank(args):
    net = io.read_network(args.net)
    scores = net.strength if args.key == "strength" else metrics.betweenness(net)
    rows = [[k, code, net.label(code), io.fmt(v)]
            for k, (code, v) in enumerate(metrics.top_nodes(net, scores, args.top), start=1)]
    header = ["rank", "code", "label", args.key]
    if args.out:
        io.write_tsv(args.out, header, rows)
    else:
        print("\t".join(header))
        for r in rows:
            print("\t".join(map(str, r)))


def cmd_communities(args):
    net = io.read_network(args.net)
    best, runs = community.best_partition(
        net, community.seed_list(args.seeds, args.seed), args.resolution, args.workers)
    io.write_partition(net, best.membership, args.out)
    _print_json({"modularity": best.modularity, "seed": best.seed,
                 "n_communities": best.n_communities,
                 "runs": {p.seed: p.modularity for p in runs}})


def cmd_categories(args):
    net = io.read_network(args.net)
    cs = community.category_strengths(net)
    io.write_tsv(args.out, ["category", "s_c", "s_c_intra", "s_c_inter"],
                 [[c, io.fmt(a), io.fmt(b), io.fmt(d)] for c, a, b, d in cs.rows()])


def _mean_strength(net):
    return metrics.mean_strength(net)


def _node_count(net):
    return net.n


OBSERVABLES = {
    "mean-strength": _mean_strength,
    "node-count": _node_count,
    "edge-density": metrics.edge_density,
    "gcc": metrics.gcc,
    "assortativity": metrics.strength_assortativity,
}


def cmd_nullband(args):
    net = io.read_network(args.net)
    spec = _spec(args)
    if args.observable == "lcc-curve":
        grid = decompose.threshold_grid(net, args.points)
        obs = partial(decompose.lcc_observable, grid)
        empirical = decompose.lcc_curve(net, grid)
    else:
        obs = OBSERVABLES[args.observable]
        grid = np.array([np.nan])
        empirical = np.atleast_1d(obs(net))
    band = null.ensemble_band(net, spec, obs, args.workers)
    rows = [[io.fmt(grid[k]), io.fmt(empirical[k]), io.fmt(band.mean[k]),
             io.fmt(band.lower[k]), io.fmt(band.upper[k])] for k in range(len(band.mean))]
    io.write_csv(args.out, ["point", "empirical", "null_mean", "null_lo", "null_hi"], rows)
    if band.failures:
        log.warning("%d replicates failed", len(band.failures))


def cmd_decompose(args):
    net = io.read_network(args.net)
    spec = _spec(args) if args.replicates > 0 else None
    prof = decompose.decompose(net, spec, args.target, args.points, args.workers)
    profile_path = Path(args.out[0])
    core_path = Path(args.out[1]) if len(args.out) > 1 else profile_path.with_name("core.txt")
    header = ["threshold", "lcc_size"] + (["null_mean", "null_lo", "null_hi"] if spec else [])
    io.write_csv(profile_path, header, [[io.fmt(r[0]), r[1]] + [io.fmt(v) for v in r[2:]] for r in prof.rows()])
    with open(core_path, "w", encoding="utf-8") as fh:
        if prof.core is None:
            fh.write("# no inner core\n")
        else:
            c = prof.core
            fh.write(f"# size={c.size} target={c.target} t_lo={io.fmt(c.t_lo)} t_hi={io.fmt(c.t_hi)}\n")
            for note in prof.notes:
                fh.write(f"# {note}\n")
            for code in c.nodes:
                fh.write(f"{code}\t{net.label(code)}\n")
    if prof.core is None:
        raise NumericError(prof.notes[0] if prof.notes else "no inner core")


def read_diff(path) -> diff.SignedDifference:
    path = Path(path)
    meta = json.loads((path / "diff.json").read_text()) if (path / "diff.json").exists() else {}
    pos, neg = io.read_network(path / "positive"), io.read_network(path / "negative")
    return diff.SignedDifference(pos, neg, float(meta.get("scale", 1.0)))


def cmd_diff(args):
    a, b = io.read_network(args.a), io.read_network(args.b)
    d = diff.signed_difference(a, b, args.normalize)
    out = Path(args.out)
    io.write_network(d.positive, out / "positive")
    io.write_network(d.negative, out / "negative")
    io.dump_json({"scale": d.scale, "normalized": args.normalize,
                  "a": str(args.a), "b": str(args.b)}, out / "diff.json")


def cmd_colocate(args):
    d = read_diff(args.diff)
    c = diff.colocation_regression(d, args.mode, args.bins)
    io.write_csv(args.out, ["bin_lo", "bin_hi", "x_mean", "y_mean", "y_se", "n"],
                 [[io.fmt(v) for v in r[:5]] + [r[5]] for r in c.bins.rows()])
    summary = {"mode": args.mode, **c.regression.to_dict()}
    io.dump_json(summary, Path(args.out).with_suffix(".json"))
    _print_json(summary)


def cmd_scaling(args):
    years = [int(y) for y in args.years.split(",")] if args.years else None
    if len(args.diff) != len(args.ref) or (years and len(years) != len(args.diff)):
        raise ConfigError("--diff, --ref and --years must have the same length")
    ds = [read_diff(p) for p in args.diff]
    refs = [io.read_network(p) for p in args.ref]
    res = diff.diff_vs_reference_scaling(ds, refs, years)
    io.dump_json(res.to_dict(), args.out)


def cmd_dist(args):
    net = io.read_network(args.net)
    if args.what == "links":
        samples = net.edges()[2]
        h = fits.log_binned_histogram(samples, args.bins)
    else:
        samples = np.asarray(net.strength)
        h = (fits.log_binned_histogram if args.log else fits.linear_histogram)(samples, args.bins)
    io.write_csv(args.out, ["bin_lo", "bin_hi", "center", "count", "density"],
                 [[io.fmt(v) for v in r[:3]] + [r[3], io.fmt(r[4])] for r in h.rows()])
    summary = {"n_samples": h.n_samples, "excluded": h.excluded}
    if args.fit == "powerlaw":
        summary["fit"] = fits.fit_power_law_tail(samples, args.xmin).to_dict()
    elif args.fit == "exponential":
        a, b = (float(x) for x in args.range.split(","))
        summary["fit"] = fits.fit_exponential(samples, a, b).to_dict()
    io.dump_json(summary, Path(args.out).with_suffix(".json"))
    _print_json(summary)


def cmd_run(args):
    manifest = run_pipeline(args.config, args.out)
    print(json.dumps({"status": manifest["status"], "outputs": len(manifest["outputs"]),
                      "failed": manifest["failed"]}, indent=2))
    if manifest["failed"]:
        sys.exit(manifest["failed"][0]["exit_code"])


def cmd_export(args):
    net = io.read_network(args.net)
    comms = io.read_partition(args.partition) if args.partition else None
    io.export_graph(net, args.out, args.format, comms)


# --- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="idrnet", description=__doc__.splitlines()[0])
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="verb", required=True)

    def verb(name, fn, help_):
        p = sub.add_parser(name, help=help_)
        p.set_defaults(fn=fn)
        return p

    def view_args(p):
        p.add_argument("--corpus", required=True)
        p.add_argument("--ranking", required=True)
        p.add_argument("--tier", required=True, help="I, NI, NI-June or NI-<month number>")
        p.add_argument("--year", type=int, required=True)
        p.add_argument("--month", type=int)
        p.add_argument("--cutoff", type=float, default=0.10)
        p.add_argument("--rollup-depth", type=int)

    p = verb("ingest", cmd_ingest, "validate and normalise a corpus file")
    p.add_argument("source")
    p.add_argument("--rollup-depth", type=int)
    p.add_argument("--out")

    p = verb("tiers", cmd_tiers, "classify journals into I/NI tiers")
    p.add_argument("--ranking", required=True)
    p.add_argument("--cutoff", type=float, default=0.10)
    p.add_argument("--year", type=int)
    p.add_argument("--duplicates", choices=("error", "best", "worst"), default="error")

    p = verb("view", cmd_view, "filter the corpus by tier/year/month")
    view_args(p)
    p.add_argument("--count", action="store_true")
    p.add_argument("--out")

    p = verb("build-net", cmd_build_net, "build a cosine co-occurrence network")
    view_args(p)
    p.add_argument("--labels", required=True)
    p.add_argument("--out", required=True)

    p = verb("metrics", cmd_metrics, "global network metrics as JSON")
    p.add_argument("--net", required=True)
    p.add_argument("--component", choices=("all", "largest"), default="all")
    p.add_argument("--seeds", type=int, default=20)
    p.add_argument("--seed", type=int, default=community.DEFAULT_SEED)
    p.add_argument("--out")

    p = verb("rank", cmd_rank, "top nodes by strength or betweenness")
    p.add_argument("--net", required=True)
    p.add_argument("--key", choices=("strength", "betweenness"), default="strength")
    p.add_argument("--top", type=int, default=3)
    p.add_argument("--out")

    p = verb("communities", cmd_communities, "Louvain partition, best of several seeds")
    p.add_argument("--net", required=True)
    p.add_argument("--seeds", type=int, default=20)
    p.add_argument("--seed", type=int, default=community.DEFAULT_SEED)
    p.add_argument("--resolution", type=float, default=1.0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", required=True)

    p = verb("categories", cmd_categories, "first-level category strengths")
    p.add_argument("--net", required=True)
    p.add_argument("--out", required=True)

    p = verb("nullband", cmd_nullband, "rewired-ensemble band for an observable")
    p.add_argument("--net", required=True)
    p.add_argument("--observable", choices=["lcc-curve", *OBSERVABLES], default="lcc-curve")
    p.add_argument("--points", type=int, default=decompose.GRID_POINTS)
    _add_null_args(p)
    p.add_argument("--out", required=True)

    p = verb("decompose", cmd_decompose, "LCC-vs-threshold profile and inner core")
    p.add_argument("--net", required=True)
    p.add_argument("--target", type=int, default=10)
    p.add_argument("--points", type=int, default=decompose.GRID_POINTS)
    _add_null_args(p)
    p.add_argument("--out", nargs="+", required=True, metavar="PATH",
                   help="profile.csv [core.txt]")

    p = verb("diff", cmd_diff, "signed difference networks a - b")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--normalize", action="store_true")
    p.add_argument("--out", required=True)

    p = verb("colocate", cmd_colocate, "co-location regression on a difference directory")
    p.add_argument("--diff", required=True)
    p.add_argument("--mode", choices=("pos-pos", "neg-neg", "pos-neg", "neg-pos"), default="pos-pos")
    p.add_argument("--bins", type=int, default=15)
    p.add_argument("--out", required=True)

    p = verb("scaling", cmd_scaling, "power-law fits of differences against reference weights")
    p.add_argument("--diff", nargs="+", required=True)
    p.add_argument("--ref", nargs="+", required=True)
    p.add_argument("--years")
    p.add_argument("--out", required=True)

    p = verb("dist", cmd_dist, "link or node strength distribution and fit")
    p.add_argument("--net", required=True)
    p.add_argument("--what", choices=("links", "nodes"), default="links")
    p.add_argument("--bins", type=int, default=30)
    p.add_argument("--log", action="store_true", help="log bins for node strengths")
    p.add_argument("--fit", choices=("none", "powerlaw", "exponential"), default="none")
    p.add_argument("--xmin", type=float, default=10**-1.5)
    p.add_argument("--range", default="1,6")
    p.add_argument("--out", required=True)

    p = verb("run", cmd_run, "full pipeline from a config file")
    p.add_argument("--config", required=True)
    p.add_argument("--out")

    p = verb("export", cmd_export, "export a network as edge TSV or GraphML")
    p.add_argument("--net", required=True)
    p.add_argument("--format", choices=("edge-tsv", "graph-xml"), default="edge-tsv")
    p.add_argument("--partition")
    p.add_argument("--out", required=True)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        args.fn(args)
    except IdrError as exc:
        print(f"idrnet {args.verb}: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"idrnet {args.verb}: {exc}", file=sys.stderr)
        return DataError.exit_code
    return 0


if __name__ == "__main__":
    sys.exit(main())
