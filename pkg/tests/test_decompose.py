import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from idrnet.decompose import decompose, inner_core, lcc_curve, lcc_nodes, threshold_grid
from idrnet.errors import DataError, NumericError
from idrnet.network import Network
from idrnet.null import EnsembleSpec
from idrnet.synth import core_periphery, planted_partition, random_network

from helpers import net


TRI = net([("A", "B", 0.2), ("B", "C", 0.5), ("A", "C", 0.9)])


def test_triangle_example():
    assert lcc_curve(TRI, [0.0, 0.3, 0.6, 0.95]).tolist() == [3, 3, 2, 1]


def test_threshold_is_strict():
    assert lcc_curve(TRI, [0.5]).tolist() == [2]


def test_two_nodes():
    g = net([("A", "B", 0.4)])
    assert lcc_curve(g, [0.0, 0.39, 0.4, 0.5]).tolist() == [2, 2, 1, 1]


def test_grid_avoids_link_weights():
    g = net([("A", "B", 0.5), ("B", "C", 1.0)])
    grid = threshold_grid(g, 3)
    assert grid[0] == 0 and grid[-1] > 1.0
    assert not np.isin(grid, [0.5, 1.0]).any()
    assert np.all(np.diff(grid) > 0)


def test_unsorted_grid_rejected():
    with pytest.raises(DataError):
        lcc_curve(TRI, [0.5, 0.1])


def test_lcc_nodes_tie_lowest_index():
    g = net([("A", "B", 1.0), ("C", "D", 1.0)])
    assert lcc_nodes(g, 0.5) == (0, 1)


def test_triangle_core():
    core = inner_core(TRI, target=2)
    assert core.nodes == ("A", "C")
    assert core.t_lo < 0.9 <= core.t_hi + 1e-2


def test_core_interval():
    # eight strongly tied nodes (internal links >= 0.7) attached to twelve
    # others by links of at most 0.4: the eight form the LCC for t in [0.4, 0.7)
    rng = np.random.default_rng(0)
    n = 20
    w = np.zeros((n, n))
    for i in range(7):
        for j in range(i + 1, 7):
            w[i, j] = rng.uniform(0.75, 0.95)
    w[0, 7] = 0.7  # the eighth node hangs on by a single link
    for k in range(8, n):
        w[k, k % 8] = 0.4
        w[k, 8 + (k + 1) % 12] = 0.2
    w = np.maximum(w, w.T)
    g = Network(tuple(f"C{k:02d}" for k in range(n)), w)
    grid = np.linspace(0, 1, 1001)
    core = inner_core(g, 10, grid)
    assert core.nodes == tuple(f"C{k:02d}" for k in range(8))
    assert core.t_lo == pytest.approx(0.4, abs=1e-3)
    assert core.t_hi == pytest.approx(0.7, abs=1e-3)
    assert core.jump == (20, 8)


def test_no_core():
    with pytest.raises(NumericError):
        inner_core(Network(("A", "B"), np.zeros((2, 2))), 5)


def fixtures():
    rng = np.random.default_rng(4)
    return [TRI, random_network(30, 0.2, rng), planted_partition()[0], core_periphery().net]


@pytest.mark.parametrize("g", fixtures())
def test_non_increasing(g):
    sizes = lcc_curve(g, threshold_grid(g))
    assert np.all(np.diff(sizes) <= 0)
    assert sizes[-1] == 1


@settings(max_examples=40)
@given(st.integers(0, 10_000))
def test_curve_matches_direct_components(seed):
    g = random_network(12, 0.3, np.random.default_rng(seed))
    grid = threshold_grid(g, 25)
    sizes = lcc_curve(g, grid)
    for k, t in enumerate(grid):
        assert len(lcc_nodes(g, t)) == sizes[k]


def test_planted_core_recovered():
    cp = core_periphery()
    core = inner_core(cp.net, 10)
    assert set(core.nodes) == set(cp.core)
    assert core.size == 8


def test_planted_core_below_null():
    cp = core_periphery()
    g = cp.net
    prof = decompose(g, EnsembleSpec(replicates=100, seed=42))
    top = g.edges()[2].max()
    sel = prof.thresholds <= 0.25 * top
    below = prof.lcc_sizes[sel] < prof.band.lower[sel]
    assert below.mean() >= 0.2


def test_random_network_inside_band():
    g = random_network(40, 0.15, np.random.default_rng(2))
    prof = decompose(g, EnsembleSpec(replicates=100, seed=1), points=100)
    inside = (prof.lcc_sizes >= prof.band.lower) & (prof.lcc_sizes <= prof.band.upper)
    assert inside.mean() >= 0.9


def test_profile_rows():
    prof = decompose(TRI, EnsembleSpec(replicates=5), target=2, points=10)
    rows = list(prof.rows())
    assert len(rows) == 10 and len(rows[0]) == 5
