"""Flat-file formats: network directories, partitions, graph exports.

A network directory holds ``nodes.tsv`` (code, label, strength),
``edges.tsv`` (code_i, code_j, w_ij; one row per positive unordered pair)
and ``meta.json``. Rows are sorted lexicographically so files diff cleanly.
Floats are written with 12 significant digits.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from idrnet.errors import ConfigError, DataError
from idrnet.network import Network


def fmt(x: float) -> str:
    x = float(x)
    if np.isnan(x):
        return "nan"
    return format(x, ".12g")


def write_tsv(path, header: Sequence[str], rows) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, delimiter="\t", lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def write_csv(path, header: Sequence[str], rows) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def read_tsv(path) -> list[dict[str, str]]:
    try:
        with open(path, encoding="utf-8", newline="") as fh:
            return list(csv.DictReader(fh, delimiter="\t"))
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc.strerror}") from exc


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return None if not np.isfinite(x) else x
    return obj


def dump_json(obj, path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(_jsonable(obj), fh, indent=2, sort_keys=True)
        fh.write("\n")


def edge_rows(net: Network):
    rows = []
    i, j, w = net.edges()
    for a, b, x in zip(i, j, w):
        p, q = sorted((net.nodes[a], net.nodes[b]))
        rows.append((p, q, fmt(x)))
    rows.sort()
    return rows


def write_network(net: Network, out) -> Path:
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    s = net.strength
    write_tsv(out / "nodes.tsv", ["code", "label", "strength"],
              sorted((c, net.label(c), fmt(s[k])) for k, c in enumerate(net.nodes)))
    write_tsv(out / "edges.tsv", ["code_i", "code_j", "w_ij"], edge_rows(net))
    dump_json(dict(net.meta), out / "meta.json")
    return out


def read_network(path) -> Network:
    """Read a network directory, or a bare ``edges.tsv`` file."""
    path = Path(path)
    if path.is_dir():
        nodes_path, edges_path = path / "nodes.tsv", path / "edges.tsv"
    else:
        nodes_path, edges_path = None, path
    if not edges_path.exists():
        raise DataError(f"no network at {path}")
    edges = [(r["code_i"], r["code_j"], float(r["w_ij"])) for r in read_tsv(edges_path)]
    labels = {}
    if nodes_path is not None and nodes_path.exists():
        rows = read_tsv(nodes_path)
        nodes = [r["code"] for r in rows]
        labels = {r["code"]: r.get("label", "") for r in rows if r.get("label")}
    else:
        nodes = sorted({c for e in edges for c in e[:2]})
    meta = {}
    if path.is_dir() and (path / "meta.json").exists():
        meta = json.loads((path / "meta.json").read_text())
    return Network.from_edges(sorted(nodes), edges, labels=labels, meta=meta)


# --- partitions ------------------------------------------------------------


def write_partition(net: Network, membership: Sequence[int], path) -> None:
    write_tsv(path, ["code", "community"],
              sorted((c, int(m)) for c, m in zip(net.nodes, membership)))


def read_partition(path) -> dict[str, int]:
    return {r["code"]: int(r["community"]) for r in read_tsv(path)}


# --- exports ---------------------------------------------------------------


def export_graph(net: Network, path, fmt_name: str = "edge-tsv",
                 communities: Mapping[str, int] | None = None) -> Path:
    """Write ``net`` as a sorted edge list or as GraphML with node attributes."""
    path = Path(path)
    if fmt_name == "edge-tsv":
        write_tsv(path, ["code_i", "code_j", "w_ij"], edge_rows(net))
        return path
    if fmt_name != "graph-xml":
        raise ConfigError(f"unknown export format {fmt_name!r}")
    import networkx as nx

    g = nx.Graph()
    s = net.strength
    for k in sorted(range(net.n), key=lambda k: net.nodes[k]):
        code = net.nodes[k]
        attrs = {"label": net.label(code), "strength": float(s[k])}
        if communities is not None:
            if code not in communities:
                raise DataError(f"node {code} has no community")
            attrs["community"] = int(communities[code])
        g.add_node(code, **attrs)
    for a, b, x in edge_rows(net):
        g.add_edge(a, b, weight=float(x))
    path.parent.mkdir(parents=True, exist_ok=True)
    try:
        nx.write_graphml(g, path)
    except OSError as exc:
        raise DataError(f"cannot write {path}: {exc.strerror}") from exc
    return path
