import xml.etree.ElementTree as ET

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from idrnet.errors import ConfigError
from idrnet.io import (
    export_graph,
    fmt,
    read_network,
    read_partition,
    read_tsv,
    write_network,
    write_partition,
)
from idrnet.synth import planted_partition, random_network

from helpers import net

TRI = net([("C", "A", 0.5), ("B", "C", 0.25), ("A", "B", 1.0)])


def test_triangle_edge_rows_sorted(tmp_path):
    export_graph(TRI, tmp_path / "e.tsv")
    lines = (tmp_path / "e.tsv").read_text().splitlines()
    assert lines == ["code_i\tcode_j\tw_ij", "A\tB\t1", "A\tC\t0.5", "B\tC\t0.25"]


def test_network_round_trip(tmp_path):
    g = random_network(20, 0.3, np.random.default_rng(0)).with_meta(n_docs=7)
    write_network(g, tmp_path / "n")
    h = read_network(tmp_path / "n")
    assert h.nodes == g.nodes
    assert np.allclose(h.weights, g.weights, rtol=1e-11, atol=0)
    assert h.meta["n_docs"] == 7


@settings(max_examples=30)
@given(st.floats(1e-9, 1.0))
def test_fmt_round_trip_precision(x):
    assert float(fmt(x)) == pytest.approx(x, rel=1e-11)


def test_edge_tsv_reimport(tmp_path):
    export_graph(TRI, tmp_path / "e.tsv")
    h = read_network(tmp_path / "e.tsv")
    assert h.nodes == TRI.nodes and np.array_equal(h.weights, TRI.weights)


def test_graphml_attributes_match_partition(tmp_path):
    g, block = planted_partition()
    write_partition(g, block, tmp_path / "partition.tsv")
    comms = read_partition(tmp_path / "partition.tsv")
    export_graph(g, tmp_path / "g.graphml", "graph-xml", comms)
    ns = {"g": "http://graphml.graphdrawing.org/xmlns"}
    root = ET.parse(tmp_path / "g.graphml").getroot()
    keys = {k.get("id"): k.get("attr.name") for k in root.findall("g:key", ns)}
    seen = {}
    for node in root.iter("{http://graphml.graphdrawing.org/xmlns}node"):
        attrs = {keys[d.get("key")]: d.text for d in node.findall("g:data", ns)}
        seen[node.get("id")] = int(attrs["community"])
        k = g.index[node.get("id")]
        assert float(attrs["strength"]) == pytest.approx(g.strength[k])
    assert seen == comms


def test_partition_file_sorted(tmp_path):
    g, block = planted_partition()
    write_partition(g, block, tmp_path / "p.tsv")
    codes = [r["code"] for r in read_tsv(tmp_path / "p.tsv")]
    assert codes == sorted(codes)


def test_unknown_format(tmp_path):
    with pytest.raises(ConfigError):
        export_graph(TRI, tmp_path / "x", "gexf")


def test_unwritable_path(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("")
    with pytest.raises(OSError):
        export_graph(TRI, blocker / "sub" / "e.tsv")
