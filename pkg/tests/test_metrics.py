import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from idrnet.errors import DataError, DisconnectedError, UndefinedMetricError
from idrnet.metrics import (
    aspl,
    betweenness,
    edge_density,
    gcc,
    global_report,
    mean_strength,
    shortest_paths,
    strength_assortativity,
    top_nodes,
)
from idrnet.network import Network
from idrnet.synth import random_network

import oracles


def net(edges, nodes=None):
    nodes = nodes or sorted({c for e in edges for c in e[:2]})
    return Network.from_edges(nodes, edges)


TRIANGLE = net([("A", "B", 1), ("B", "C", 1), ("A", "C", 1)])
PATH3 = net([("A", "B", 1), ("B", "C", 1)])


def star(n):
    return net([("H", f"L{k}", 1.0) for k in range(n)])


def test_mean_strength():
    assert mean_strength(TRIANGLE) == 2.0
    path4 = net([("A", "B", 0.5), ("B", "C", 0.5), ("C", "D", 0.5)])
    assert mean_strength(path4) == 0.75
    with pytest.raises(DataError):
        mean_strength(Network((), np.zeros((0, 0))))


def test_edge_density():
    assert edge_density(TRIANGLE) == 1.0
    assert edge_density(Network(tuple("ABCDE"), np.zeros((5, 5)))) == 0.0


def test_shortest_paths():
    assert shortest_paths(net([("A", "B", 0.5)]))[0, 1] == 2.0
    tri = net([("A", "B", 0.5), ("B", "C", 0.5), ("A", "C", 0.1)])
    assert shortest_paths(tri)[0, 2] == 4.0
    two = Network(("A", "B"), np.zeros((2, 2)))
    assert math.isinf(shortest_paths(two)[0, 1])


def test_aspl():
    assert aspl(net([("A", "B", 0.5)])) == 2.0
    assert aspl(PATH3) == pytest.approx(4 / 3)


def test_aspl_disconnected():
    g = net([("A", "B", 1), ("C", "D", 0.5), ("D", "E", 0.5)])
    with pytest.raises(DisconnectedError):
        aspl(g)
    assert aspl(g, "largest") == pytest.approx((2 + 2 + 4) / 3)


def test_betweenness_small():
    assert betweenness(PATH3).tolist() == [0.0, 1.0, 0.0]
    assert betweenness(TRIANGLE).tolist() == [0.0, 0.0, 0.0]


def test_betweenness_counts_tied_paths():
    # square A-B-C-D-A: two equal routes between opposite corners
    sq = net([("A", "B", 1), ("B", "C", 1), ("C", "D", 1), ("D", "A", 1)])
    assert np.allclose(betweenness(sq, normalized=False), [0.5] * 4)


def test_gcc():
    assert gcc(TRIANGLE) == 1.0
    assert gcc(PATH3) == 0.0
    with pytest.raises(UndefinedMetricError):
        gcc(net([("A", "B", 1)]))


def test_gcc_weighted_by_hand():
    # triangle A,B,C plus pendant D on C
    g = net([("A", "B", 0.2), ("B", "C", 0.4), ("A", "C", 0.6), ("C", "D", 0.8)])
    # closed triads: at A (B,C): .4, at B: .3, at C (A,B): .5; open at C: (A,D) .7, (B,D) .6
    assert gcc(g) == pytest.approx((0.4 + 0.3 + 0.5) / (0.4 + 0.3 + 0.5 + 0.7 + 0.6))


def test_assortativity_star():
    assert strength_assortativity(star(5)) == pytest.approx(-1.0)


def test_assortativity_regular_undefined():
    with pytest.raises(UndefinedMetricError):
        strength_assortativity(TRIANGLE)


def test_top_nodes_ties_lexicographic():
    g = Network(tuple("CAB"), np.zeros((3, 3)))
    assert [c for c, _ in top_nodes(g, [1.0, 1.0, 1.0], 3)] == ["A", "B", "C"]
    assert len(top_nodes(g, [1, 2, 3], 10)) == 3


def test_top_nodes_matches_sort_oracle():
    g = random_network(12, 0.4, np.random.default_rng(5))
    got = top_nodes(g, g.strength, 5)
    s = oracles.strengths_oracle(g.weights.tolist())
    want = sorted(range(12), key=lambda k: (-s[k], g.nodes[k]))[:5]
    assert [c for c, _ in got] == [g.nodes[k] for k in want]


def test_global_report_notes():
    rep = global_report(TRIANGLE)
    assert rep.assortativity is None and any("assortativity" in n for n in rep.notes)
    assert rep.gcc == 1.0 and rep.edge_density == 1.0


# --- oracle equivalence on small random graphs ----------------------------------


def small_graphs(count, seed):
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        n = int(rng.integers(3, 9))
        levels = [0.25, 0.5, 1.0] if rng.random() < 0.4 else None
        g = random_network(n, float(rng.uniform(0.35, 0.8)), rng, levels=levels)
        out.append(g)
    return out


@pytest.mark.parametrize("g", small_graphs(25, 11))
def test_betweenness_oracle(g):
    assert np.allclose(betweenness(g), oracles.betweenness_oracle(g.weights.tolist()), atol=1e-9)


@pytest.mark.parametrize("g", small_graphs(25, 12))
def test_distance_oracle(g):
    d = shortest_paths(g)
    w = g.weights.tolist()
    for i in range(g.n):
        for j in range(i + 1, g.n):
            assert d[i, j] == pytest.approx(oracles.shortest_by_enumeration(w, i, j)[0], rel=1e-12)


# --- invariants -------------------------------------------------------------------


weights_st = st.integers(3, 8).flatmap(
    lambda n: st.lists(st.one_of(st.just(0.0), st.floats(0.05, 1.0)),
                       min_size=n * (n - 1) // 2, max_size=n * (n - 1) // 2).map(lambda v: (n, v)))


def build(nv):
    n, vals = nv
    w = np.zeros((n, n))
    w[np.triu_indices(n, 1)] = vals
    return Network(tuple(f"C{k:02d}" for k in range(n)), w + w.T)


@given(weights_st)
def test_strength_sum_identity(nv):
    g = build(nv)
    assert g.strength.sum() == pytest.approx(2 * g.edges()[2].sum(), rel=1e-12, abs=1e-15)


@given(weights_st, st.floats(0.1, 10))
def test_scale_covariance(nv, lam):
    g = build(nv)
    h = g.with_weights(g.weights * lam)
    assert mean_strength(h) == pytest.approx(lam * mean_strength(g))
    dg, dh = shortest_paths(g), shortest_paths(h)
    fin = np.isfinite(dg)
    assert np.allclose(dh[fin], dg[fin] / lam)
    assert np.array_equal(np.argsort(-betweenness(g), kind="stable").size, g.n)
    assert np.allclose(betweenness(h), betweenness(g), atol=1e-9)
    try:
        r = strength_assortativity(g)
    except UndefinedMetricError:
        return
    assert strength_assortativity(h) == pytest.approx(r, abs=1e-9)
    try:
        c = gcc(g)
    except UndefinedMetricError:
        return
    assert gcc(h) == pytest.approx(c)


@given(weights_st, st.randoms(use_true_random=False))
def test_relabel_symmetry(nv, rnd):
    g = build(nv)
    perm = list(range(g.n))
    rnd.shuffle(perm)
    h = Network(tuple(g.nodes[p] for p in perm), g.weights[np.ix_(perm, perm)])
    assert np.allclose(h.strength, g.strength[perm])
    assert np.allclose(betweenness(h), betweenness(g)[perm], atol=1e-12)
    assert mean_strength(h) == pytest.approx(mean_strength(g))
    assert edge_density(h) == edge_density(g)
    for f in (gcc, strength_assortativity):
        try:
            v = f(g)
        except UndefinedMetricError:
            continue
        assert f(h) == pytest.approx(v, abs=1e-12)


@given(weights_st)
def test_metric_ranges(nv):
    g = build(nv)
    assert 0 <= edge_density(g) <= 1
    b = betweenness(g)
    assert np.all(b >= -1e-12) and np.all(b <= 1 + 1e-12)
    for f, lo, hi in ((gcc, 0, 1), (strength_assortativity, -1, 1)):
        try:
            v = f(g)
        except UndefinedMetricError:
            continue
        assert lo - 1e-12 <= v <= hi + 1e-12
