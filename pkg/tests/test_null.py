import numpy as np
import pytest

from idrnet.decompose import lcc_curve, threshold_grid
from idrnet.errors import ConfigError, DataError, UndefinedMetricError
from idrnet.metrics import mean_strength, strength_assortativity
from idrnet.network import Network
from idrnet.null import EnsembleSpec, default_swaps, ensemble_band, replicate_rng, rewire, swap_draws
from idrnet.synth import core_periphery, planted_partition, random_network

from helpers import net


def pair_multiset(g: Network):
    iu, ju = np.triu_indices(g.n, 1)
    return sorted(g.weights[iu, ju].tolist())


def fixtures():
    rng = np.random.default_rng(0)
    return [random_network(12, 0.3, rng), planted_partition()[0], core_periphery().net,
            net([("H", f"L{k}", 1.0) for k in range(6)])]


@pytest.mark.parametrize("g", fixtures())
@pytest.mark.parametrize("mode", ["all-pairs", "existing-links"])
def test_multiset_conserved(g, mode):
    r = rewire(g, default_swaps(g), 1, mode)
    assert pair_multiset(r) == pair_multiset(g)
    assert np.array_equal(r.weights, r.weights.T)
    assert np.all(np.diag(r.weights) == 0)


def test_existing_links_keeps_support():
    g = planted_partition()[0]
    r = rewire(g, 500, 2, "existing-links")
    assert np.array_equal(r.weights > 0, g.weights > 0)


def test_single_swap_replay():
    g = net([("A", "B", 0.3), ("B", "C", 0.7), ("C", "D", 0.1), ("D", "E", 0.9),
             ("E", "F", 0.5), ("A", "F", 0.2)])
    iu, ju = np.triu_indices(g.n, 1)
    before = g.weights[iu, ju]
    a, b = swap_draws(np.random.default_rng(7), len(before), 1)
    after = rewire(g, 1, 7).weights[iu, ju]
    expected = before.copy()
    expected[[a[0], b[0]]] = before[[b[0], a[0]]]
    assert np.array_equal(after, expected)
    changed = set(np.flatnonzero(after != before).tolist())
    assert changed <= {int(a[0]), int(b[0])}


def test_swap_draws_distinct():
    a, b = swap_draws(np.random.default_rng(1), 5, 10_000)
    assert np.all(a != b)
    assert set(a.tolist()) == set(b.tolist()) == set(range(5))


def test_star_degrees_not_preserved():
    g = net([("H", f"L{k}", 1.0) for k in range(8)])
    r = rewire(g, 200, 4)
    assert not np.array_equal(np.sort((r.weights > 0).sum(0)), np.sort((g.weights > 0).sum(0)))


def test_zero_iterations_identity():
    g = planted_partition()[0]
    assert np.array_equal(rewire(g, 0, 1).weights, g.weights)


def test_bad_inputs():
    with pytest.raises(DataError):
        rewire(Network(("A",), np.zeros((1, 1))), 3)
    with pytest.raises(ConfigError):
        EnsembleSpec(replicates=0)
    with pytest.raises(ConfigError):
        EnsembleSpec(mode="degree")


def test_replicate_streams_independent():
    a = replicate_rng(42, 0).random(4)
    b = replicate_rng(42, 1).random(4)
    assert not np.array_equal(a, b)
    assert np.array_equal(a, replicate_rng(42, 0).random(4))


def test_band_reproducible():
    g = core_periphery().net
    grid = threshold_grid(g, 50)
    spec = EnsembleSpec(replicates=100, seed=5)
    obs = lambda r: lcc_curve(r, grid)
    a = ensemble_band(g, spec, obs)
    b = ensemble_band(g, spec, obs)
    assert a.values.tobytes() == b.values.tobytes()
    assert a.lower.tobytes() == b.lower.tobytes()


def test_band_workers_identical():
    g = planted_partition()[0]
    spec = EnsembleSpec(replicates=12, seed=3)
    a = ensemble_band(g, spec, mean_strength)
    b = ensemble_band(g, spec, mean_strength, workers=2)
    assert a.values.tobytes() == b.values.tobytes()


def test_mean_strength_band_collapses():
    g = random_network(20, 0.3, np.random.default_rng(8))
    band = ensemble_band(g, EnsembleSpec(replicates=50), mean_strength)
    s = mean_strength(g)
    assert np.allclose([band.mean, band.lower, band.upper], s, rtol=1e-12)


def test_failures_recorded():
    g = net([("A", "B", 1.0), ("C", "D", 1.0)])
    # regular networks have undefined assortativity; rewiring may keep them regular
    spec = EnsembleSpec(replicates=20, seed=1, mode="existing-links")
    with pytest.raises(DataError):
        ensemble_band(g, spec, strength_assortativity)

    def flaky(r):
        if r.weights[0, 1] > 0:
            raise UndefinedMetricError("boom")
        return 1.0

    band = ensemble_band(g, EnsembleSpec(replicates=30, seed=1), flaky)
    assert band.failures and band.replicates + len(band.failures) == 30
