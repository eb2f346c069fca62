"""End-to-end run: corpus -> tiered networks -> every table and figure as data.

The configuration is an INI file (one section per stage). Relative paths are
resolved against the config file's directory. Identical config and inputs
give byte-identical outputs; the manifest lists every file with its digest.
"""

from __future__ import annotations

import configparser
import hashlib
import json
import logging
import platform
from dataclasses import dataclass, field
from pathlib import Path

import networkx
import numpy as np
import scipy

from idrnet import __version__
from idrnet.community import best_partition, category_strengths, seed_list
from idrnet.corpus import (
    TIER_I,
    TIER_NI,
    Corpus,
    corpus_view,
    ingest_records,
    parse_tier,
    read_labels,
    read_ranking,
    tier_label,
)
from idrnet.decompose import decompose
from idrnet.diff import colocation_regression, diff_vs_reference_scaling, signed_difference
from idrnet.errors import ConfigError, DataError, IdrError, UndefinedMetricError
from idrnet.fits import fit_exponential, fit_power_law_tail, linear_histogram, log_binned_histogram
from idrnet.graph import build_network, prune_shared_isolates
from idrnet.io import dump_json, fmt, write_csv, write_network, write_partition, write_tsv
from idrnet.metrics import betweenness, global_report, top_nodes
from idrnet.network import Network
from idrnet.null import EnsembleSpec

log = logging.getLogger(__name__)

COLOCATION_MODES = ("pos-pos", "neg-neg", "pos-neg", "neg-pos")


def _floats(text: str) -> list[float]:
    return [float(x) for x in text.replace(",", " ").split()]


@dataclass
class Config:
    corpus: Path
    ranking: Path
    labels: Path
    rollup_depth: int | None = None
    duplicate_rankings: str = "error"
    years: tuple[int, ...] = (1999, 2010, 2022)
    tiers: tuple[str, ...] = ("I", "NI-June", "NI")
    reference: str = "I"
    compare: str = "NI-June"
    cutoff: float = 0.10
    aspl_component: str = "all"
    top: int = 3
    seeds: int = 20
    base_seed: int = 42
    resolution: float = 1.0
    null: EnsembleSpec = field(default_factory=EnsembleSpec)
    target: int = 10
    grid_points: int = 400
    normalize: bool = True
    colocation_bins: int = 15
    bins: int = 30
    xmin: float = 10**-1.5
    exp_range: tuple[float, float] = (1.0, 6.0)
    workers: int = 1
    out: Path | None = None
    text: str = ""

    @classmethod
    def load(cls, path) -> "Config":
        path = Path(path)
        if not path.exists():
            raise ConfigError(f"config file not found: {path}")
        text = path.read_text()
        cp = configparser.ConfigParser()
        try:
            cp.read_string(text)
        except configparser.Error as exc:
            raise ConfigError(f"{path}: {exc}") from None
        base = path.parent
        get = lambda sec, key, default=None: cp.get(sec, key, fallback=default)
        try:
            data = cp["data"]
        except KeyError:
            raise ConfigError(f"{path}: missing [data] section") from None
        paths = {}
        for key in ("corpus", "ranking", "labels"):
            if key not in data:
                raise ConfigError(f"{path}: [data] {key} not set")
            p = (base / data[key]).resolve()
            if not p.exists():
                raise ConfigError(f"{key} file not found: {p}")
            paths[key] = p
        try:
            swaps = get("null", "swaps", "auto")
            spec = EnsembleSpec(
                replicates=int(get("null", "replicates", 100)),
                swaps=None if swaps == "auto" else int(swaps),
                seed=int(get("null", "seed", 42)),
                mode=get("null", "mode", "all-pairs"),
            )
            rollup = get("data", "rollup_depth", "")
            out = get("output", "dir")
            cfg = cls(
                **paths,
                rollup_depth=int(rollup) if rollup else None,
                duplicate_rankings=get("data", "duplicate_rankings", "error"),
                years=tuple(int(y) for y in _floats(get("study", "years", "1999 2010 2022"))),
                tiers=tuple(t.strip() for t in get("study", "tiers", "I, NI-June, NI").split(",")),
                reference=get("study", "reference", "I"),
                compare=get("study", "compare", "NI-June"),
                cutoff=float(get("study", "cutoff", 0.10)),
                aspl_component=get("metrics", "aspl_component", "all"),
                top=int(get("metrics", "top", 3)),
                seeds=int(get("community", "seeds", 20)),
                base_seed=int(get("community", "base_seed", 42)),
                resolution=float(get("community", "resolution", 1.0)),
                null=spec,
                target=int(get("decompose", "target", 10)),
                grid_points=int(get("decompose", "grid_points", 400)),
                normalize=cp.getboolean("diff", "normalize", fallback=True),
                colocation_bins=int(get("diff", "colocation_bins", 15)),
                bins=int(get("dist", "bins", 30)),
                xmin=float(get("dist", "xmin", 10**-1.5)),
                exp_range=tuple(_floats(get("dist", "exp_range", "1, 6"))),
                workers=int(get("run", "workers", 1)),
                out=(base / out).resolve() if out else None,
                text=text,
            )
        except ValueError as exc:
            raise ConfigError(f"{path}: {exc}") from None
        for t in cfg.tiers:
            parse_tier(t)
        for t in (cfg.reference, cfg.compare):
            if t not in cfg.tiers:
                raise ConfigError(f"tier {t!r} used for differences but not built")
        if len(cfg.exp_range) != 2:
            raise ConfigError("exp_range needs two numbers")
        return cfg

    def digest(self) -> str:
        # config identity excludes comments, whitespace and the output location
        cp = configparser.ConfigParser()
        cp.read_string(self.text)
        canon = {s: {k: v for k, v in cp[s].items()} for s in cp.sections() if s != "output"}
        return sha256_bytes(json.dumps(canon, sort_keys=True).encode())


def sha256_bytes(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def sha256_file(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 16), b""):
            h.update(block)
    return h.hexdigest()


def net_name(tier: str, year: int) -> str:
    return f"{tier}_{year}"


class Run:
    """Mutable state of one pipeline run; collects stage failures."""

    def __init__(self, cfg: Config, out: Path):
        self.cfg = cfg
        self.out = out
        self.failed: list[dict] = []

    def stage(self, name, fn, *args):
        try:
            return fn(*args)
        except IdrError as exc:
            log.error("stage %s failed: %s", name, exc)
            self.failed.append({"stage": name, "error": str(exc), "exit_code": exc.exit_code})
            return None


def load_inputs(cfg: Config):
    labels = read_labels(cfg.labels)
    ranking = read_ranking(cfg.ranking, cfg.duplicate_rankings)
    corpus = ingest_records(cfg.corpus, cfg.rollup_depth)
    return labels, ranking, corpus


def table1(corpus: Corpus, ranking, cfg: Config):
    rows = []
    for t in cfg.tiers:
        tier, month = parse_tier(t)
        rows.append([tier_label(tier, month)] + [
            corpus_view(corpus, ranking, tier, y, month, cfg.cutoff).count for y in cfg.years])
    return rows


def _dist(run: Run, name: str, net: Network, fits: dict):
    cfg = run.cfg
    _, _, w = net.edges()
    notes = []
    entry = {"links": None, "nodes": None, "notes": notes}
    try:
        h = log_binned_histogram(w, cfg.bins)
        write_csv(run.out / "dist" / f"links_{name}.csv",
                  ["bin_lo", "bin_hi", "center", "count", "density"],
                  [[fmt(v) if isinstance(v, float) else v for v in r] for r in h.rows()])
        entry["links"] = fit_power_law_tail(w, cfg.xmin).to_dict()
    except (DataError, UndefinedMetricError) as exc:
        notes.append(f"links: {exc}")
    s = np.asarray(net.strength)
    try:
        h = linear_histogram(s, cfg.bins)
        write_csv(run.out / "dist" / f"nodes_{name}.csv",
                  ["bin_lo", "bin_hi", "center", "count", "density"],
                  [[fmt(v) if isinstance(v, float) else v for v in r] for r in h.rows()])
        entry["nodes"] = fit_exponential(s, *cfg.exp_range).to_dict()
    except (DataError, UndefinedMetricError) as exc:
        notes.append(f"nodes: {exc}")
    fits[name] = entry


def _communities(run: Run, name: str, net: Network):
    cfg = run.cfg
    best, runs = best_partition(net, seed_list(cfg.seeds, cfg.base_seed), cfg.resolution, cfg.workers)
    write_partition(net, best.membership, run.out / "partitions" / f"{name}.tsv")
    qs = [p.modularity for p in runs]
    return best, {"modularity": best.modularity, "seed": best.seed, "n_communities": best.n_communities,
                  "seeds": [p.seed for p in runs], "q_min": min(qs), "q_max": max(qs)}


def _profile(run: Run, name: str, net: Network, cores: dict):
    cfg = run.cfg
    prof = decompose(net, cfg.null, cfg.target, cfg.grid_points, cfg.workers)
    write_csv(run.out / "profiles" / f"{name}.csv",
              ["threshold", "lcc_size", "null_mean", "null_lo", "null_hi"],
              [[fmt(r[0]), r[1]] + [fmt(v) for v in r[2:]] for r in prof.rows()])
    cores[name] = {"core": prof.core.to_dict() if prof.core else None, "notes": prof.notes,
                   "null_failures": len(prof.band.failures) if prof.band else 0,
                   "null_mode": cfg.null.mode, "replicates": cfg.null.replicates}


def _metrics(run: Run, name: str, net: Network, report: dict, rankings: list):
    cfg = run.cfg
    best, summary = _communities(run, name, net)
    rep = global_report(net, cfg.aspl_component, best.modularity)
    report[name] = {**rep.to_dict(), "louvain": summary, "n_docs": net.meta.get("n_docs")}
    bc = betweenness(net)
    for key, scores in (("strength", net.strength), ("betweenness", bc)):
        for rank, (code, val) in enumerate(top_nodes(net, scores, cfg.top), start=1):
            rankings.append([name, key, rank, code, fmt(val)])
    cs = category_strengths(net)
    write_tsv(run.out / "categories" / f"{name}.tsv", ["category", "s_c", "s_c_intra", "s_c_inter"],
              [[c, fmt(a), fmt(b), fmt(d)] for c, a, b, d in cs.rows()])
    for key, table in (("s_c", cs.total), ("s_c_intra", cs.intra), ("s_c_inter", cs.inter)):
        ranked = sorted(table.items(), key=lambda t: (-t[1], t[0]))[:cfg.top]
        for rank, (code, val) in enumerate(ranked, start=1):
            rankings.append([name, key, rank, code, fmt(val)])


def run_pipeline(config, out=None) -> dict:
    """Run every stage; returns the manifest (also written to ``manifest.json``).

    Stage failures are recorded in the manifest with ``status: partial``.
    """
    cfg = config if isinstance(config, Config) else Config.load(config)
    out = Path(out) if out is not None else cfg.out
    if out is None:
        raise ConfigError("no output directory given")
    out.mkdir(parents=True, exist_ok=True)
    run = Run(cfg, out)

    labels, ranking, corpus = load_inputs(cfg)
    universe = tuple(labels)
    write_tsv(out / "table1.tsv", ["tier"] + [str(y) for y in cfg.years], table1(corpus, ranking, cfg))

    names, nets = [], []
    for t in cfg.tiers:
        tier, month = parse_tier(t)
        for y in cfg.years:
            view = corpus_view(corpus, ranking, tier, y, month, cfg.cutoff)
            names.append(net_name(t, y))
            nets.append(build_network(view, universe, labels))
    pruned, removed = prune_shared_isolates(nets)
    byname = dict(zip(names, pruned))
    write_tsv(out / "pruned.tsv", ["code", "label"], [[c, labels.get(c, "")] for c in removed])

    report, rankings, cores, fits = {}, [], {}, {}
    for name, net in byname.items():
        write_network(net, out / "nets" / name)
        run.stage(f"metrics:{name}", _metrics, run, name, net, report, rankings)
        run.stage(f"decompose:{name}", _profile, run, name, net, cores)
        run.stage(f"dist:{name}", _dist, run, name, net, fits)

    diffs, refs, diff_years, coloc = [], [], [], {}
    for y in cfg.years:
        a, b = byname[net_name(cfg.reference, y)], byname[net_name(cfg.compare, y)]
        d = run.stage(f"diff:{y}", signed_difference, a, b, cfg.normalize)
        if d is None:
            continue
        diffs.append(d), refs.append(a), diff_years.append(y)
        base = out / "diff" / str(y)
        dump_json({"scale": d.scale, "normalized": cfg.normalize,
                   "a": net_name(cfg.reference, y), "b": net_name(cfg.compare, y)}, base / "diff.json")
        for sign, net in (("positive", d.positive), ("negative", d.negative)):
            write_network(net, base / sign)
            name = f"diff_{y}_{sign}"
            run.stage(f"communities:{name}", lambda n=name, x=net: report.__setitem__(
                n, {"louvain": _communities(run, n, x)[1]}))
            run.stage(f"decompose:{name}", _profile, run, name, net, cores)
            run.stage(f"dist:{name}", _dist, run, name, net, fits)
        coloc[str(y)] = {}
        for mode in COLOCATION_MODES:
            c = run.stage(f"colocate:{y}:{mode}", colocation_regression, d, mode, cfg.colocation_bins)
            if c is None:
                continue
            coloc[str(y)][mode] = c.regression.to_dict()
            write_csv(base / f"colocation_{mode}.csv",
                      ["bin_lo", "bin_hi", "x_mean", "y_mean", "y_se", "n"],
                      [[fmt(v) for v in r[:5]] + [r[5]] for r in c.bins.rows()])
    dump_json(coloc, out / "colocation.json")
    if diffs:
        sc = run.stage("scaling", diff_vs_reference_scaling, diffs, refs, diff_years)
        if sc is not None:
            dump_json(sc.to_dict(), out / "scaling.json")

    dump_json(report, out / "metrics.json")
    write_tsv(out / "rankings.tsv", ["network", "key", "rank", "code", "value"], rankings)
    dump_json(cores, out / "cores.json")
    dump_json(fits, out / "fits.json")
    return write_manifest(run, cfg)


def write_manifest(run: Run, cfg: Config) -> dict:
    out = run.out
    files = sorted(p for p in out.rglob("*") if p.is_file() and p.name != "manifest.json")
    manifest = {
        "config_sha256": cfg.digest(),
        "inputs": {k: sha256_file(getattr(cfg, k)) for k in ("corpus", "ranking", "labels")},
        "seed": {"louvain_base": cfg.base_seed, "null": cfg.null.seed},
        "versions": {"idrnet": __version__, "numpy": np.__version__, "scipy": scipy.__version__,
                     "networkx": networkx.__version__, "python": platform.python_version()},
        "outputs": {p.relative_to(out).as_posix(): sha256_file(p) for p in files},
        "status": "partial" if run.failed else "complete",
        "failed": run.failed,
    }
    dump_json(manifest, out / "manifest.json")
    return manifest
