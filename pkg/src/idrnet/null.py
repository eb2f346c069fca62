"""Weight-rewired reference networks and ensemble bands."""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial
from typing import Callable

import numpy as np

from idrnet.errors import ConfigError, DataError, IdrError
from idrnet.network import Network

log = logging.getLogger(__name__)

MODES = ("all-pairs", "existing-links")


@dataclass(frozen=True)
class EnsembleSpec:
    replicates: int = 100
    swaps: int | None = None  # None: 10 x number of links
    seed: int = 42
    mode: str = "all-pairs"

    def __post_init__(self):
        if self.replicates < 1:
            raise ConfigError("replicates must be >= 1")
        if self.swaps is not None and self.swaps < 0:
            raise ConfigError("swaps must be >= 0")
        if self.mode not in MODES:
            raise ConfigError(f"unknown rewiring mode {self.mode!r}")

    def swaps_for(self, net: Network) -> int:
        return default_swaps(net) if self.swaps is None else self.swaps


def default_swaps(net: Network) -> int:
    return 10 * net.n_edges


def replicate_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng([seed, index])


def swap_draws(rng: np.random.Generator, m: int, iterations: int):
    """Two distinct slot indices per swap, uniform over ordered pairs of slots."""
    a = rng.integers(m, size=iterations)
    b = rng.integers(m - 1, size=iterations)
    b = b + (b >= a)
    return a, b


def rewire(net: Network, iterations: int, seed=None, mode: str = "all-pairs") -> Network:
    """Swap weights between randomly chosen node pairs ``iterations`` times.

    In ``all-pairs`` mode every unordered node pair is a slot, zero weights
    included, so links move to arbitrary pairs. ``existing-links`` only
    shuffles weights among pairs that already carry a link. Either way the
    multiset of slot weights is unchanged.
    """
    if net.n < 2:
        raise DataError("rewiring needs at least two nodes")
    if iterations < 0:
        raise ConfigError("iterations must be >= 0")
    if mode not in MODES:
        raise ConfigError(f"unknown rewiring mode {mode!r}")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    if mode == "all-pairs":
        iu, ju = np.triu_indices(net.n, 1)
    else:
        iu, ju, _ = net.edges()
    vals = net.weights[iu, ju].tolist()
    m = len(vals)
    if m >= 2 and iterations:
        a, b = swap_draws(rng, m, iterations)
        for x, y in zip(a.tolist(), b.tolist()):
            vals[x], vals[y] = vals[y], vals[x]
    w = np.zeros((net.n, net.n))
    w[iu, ju] = vals
    w[ju, iu] = vals
    return net.with_weights(w, rewired=mode)


@dataclass
class EnsembleBand:
    mean: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    values: np.ndarray  # replicates x points
    failures: list[str] = field(default_factory=list)

    @property
    def replicates(self) -> int:
        return len(self.values)


def _replicate(net: Network, spec: EnsembleSpec, observable: Callable, index: int):
    rng = replicate_rng(spec.seed, index)
    r = rewire(net, spec.swaps_for(net), rng, spec.mode)
    try:
        return np.atleast_1d(np.asarray(observable(r), dtype=np.float64))
    except (IdrError, ArithmeticError, ValueError) as exc:
        return f"replicate {index}: {exc}"


def ensemble_band(net: Network, spec: EnsembleSpec, observable: Callable,
                  workers: int = 1) -> EnsembleBand:
    """Apply ``observable`` to ``spec.replicates`` rewired copies of ``net``.

    Each replicate draws from its own stream keyed by (seed, index), so the
    result does not depend on ``workers``. Replicates where the observable
    fails are dropped and listed in ``failures``.
    """
    job = partial(_replicate, net, spec, observable)
    idx = range(spec.replicates)
    if workers > 1:
        with ProcessPoolExecutor(workers) as ex:
            results = list(ex.map(job, idx))
    else:
        results = [job(i) for i in idx]
    failures = [r for r in results if isinstance(r, str)]
    good = [r for r in results if not isinstance(r, str)]
    if failures:
        log.warning("%d of %d replicates failed", len(failures), spec.replicates)
    if not good:
        raise DataError("observable failed on every replicate")
    values = np.vstack(good)
    lower, upper = np.percentile(values, [2.5, 97.5], axis=0)
    return EnsembleBand(values.mean(axis=0), lower, upper, values, failures)
