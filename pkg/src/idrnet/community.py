"""Modularity, Louvain community detection and first-level category strengths."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable, Mapping, Sequence

import numpy as np

from idrnet.corpus import first_level
from idrnet.errors import DataError, NumericError
from idrnet.network import Network

DEFAULT_SEED = 42


@dataclass(frozen=True)
class Partition:
    membership: tuple[int, ...]
    modularity: float
    seed: int | None = None
    levels: tuple[float, ...] = ()

    @property
    def n_communities(self) -> int:
        return len(set(self.membership))

    def as_dict(self, net: Network) -> dict[str, int]:
        return dict(zip(net.nodes, self.membership))


def canonical(labels: Sequence[int]) -> tuple[int, ...]:
    """Relabel communities 0, 1, ... in order of first appearance."""
    seen: dict[int, int] = {}
    return tuple(seen.setdefault(int(c), len(seen)) for c in labels)


def _modularity(a: np.ndarray, comm: np.ndarray, resolution: float) -> float:
    two_m = a.sum()
    k = a.sum(axis=1)
    n_c = comm.max() + 1
    h = np.zeros((len(comm), n_c))
    h[np.arange(len(comm)), comm] = 1.0
    inner = np.trace(h.T @ a @ h)
    tot = k @ h
    return float(inner / two_m - resolution * np.sum(tot**2) / two_m**2)


def eval_modularity(net: Network, membership, resolution: float = 1.0) -> float:
    """Modularity over ordered node pairs with ``m`` the total link weight."""
    if isinstance(membership, Mapping):
        membership = [membership[c] for c in net.nodes]
    membership = np.asarray(membership)
    if membership.shape != (net.n,):
        raise DataError("partition does not cover every node")
    m = net.total_weight
    if m <= 0:
        raise NumericError("modularity undefined: network has no links")
    _, comm = np.unique(membership, return_inverse=True)
    return _modularity(np.asarray(net.weights), comm, resolution)


def _one_level(a: np.ndarray, rng: np.random.Generator, resolution: float) -> tuple[np.ndarray, bool]:
    """Greedy node moves until no single move raises modularity."""
    n = len(a)
    k = a.sum(axis=1)
    two_m = a.sum()
    comm = np.arange(n)
    tot = k.copy()
    order = rng.permutation(n)
    moved_any = False
    improved = True
    while improved:
        improved = False
        for i in order:
            nbrs = np.flatnonzero(a[i])
            nbrs = nbrs[nbrs != i]
            own = comm[i]
            tot[own] -= k[i]
            links = {}
            for j in nbrs:
                links[comm[j]] = links.get(comm[j], 0.0) + a[i, j]
            scale = resolution * k[i] / two_m
            best, best_gain = own, links.get(own, 0.0) - scale * tot[own]
            for c in sorted(links):
                gain = links[c] - scale * tot[c]
                if gain > best_gain + 1e-12:
                    best, best_gain = c, gain
            comm[i] = best
            tot[best] += k[i]
            if best != own:
                improved = moved_any = True
    _, comm = np.unique(comm, return_inverse=True)
    return comm, moved_any


def louvain(net: Network, seed: int = DEFAULT_SEED, resolution: float = 1.0) -> Partition:
    """Louvain local moving plus aggregation.

    The node sweep order at every level is a permutation drawn from a
    generator seeded with ``seed``, so results are reproducible per seed.
    """
    if net.total_weight <= 0:
        raise NumericError("Louvain needs at least one link")
    rng = np.random.default_rng(seed)
    a = np.array(net.weights)
    membership = np.arange(net.n)
    levels = [_modularity(a, membership, resolution)]
    while True:
        comm, moved = _one_level(a, rng, resolution)
        if not moved:
            break
        membership = comm[membership]
        h = np.zeros((len(comm), comm.max() + 1))
        h[np.arange(len(comm)), comm] = 1.0
        a = h.T @ a @ h
        levels.append(_modularity(np.array(net.weights), membership, resolution))
        if levels[-1] < levels[-2] - 1e-12:
            raise NumericError("modularity decreased between Louvain levels")
        if len(a) == 1:
            break
    membership = canonical(membership)
    q = eval_modularity(net, membership, resolution)
    return Partition(membership, q, seed, tuple(levels))


def best_partition(net: Network, seeds: Sequence[int], resolution: float = 1.0,
                   workers: int = 1) -> tuple[Partition, list[Partition]]:
    """Run Louvain for each seed; keep the highest modularity, lowest seed on ties."""
    seeds = list(seeds)
    if workers > 1:
        with ProcessPoolExecutor(workers) as ex:
            runs = list(ex.map(louvain, [net] * len(seeds), seeds, [resolution] * len(seeds)))
    else:
        runs = [louvain(net, s, resolution) for s in seeds]
    best = min(runs, key=lambda p: (-p.modularity, p.seed))
    return best, runs


def seed_list(n: int, base: int = DEFAULT_SEED) -> list[int]:
    return [base + k for k in range(n)]


# --- first-level aggregation -------------------------------------------------


@dataclass
class CategoryStrengths:
    total: dict[str, float]
    intra: dict[str, float]
    inter: dict[str, float]

    def categories(self) -> list[str]:
        return sorted(self.total)

    def rows(self):
        for c in self.categories():
            yield c, self.total[c], self.intra[c], self.inter[c]


def category_strengths(net: Network, category: Callable[[str], str] | Mapping[str, str] = first_level) -> CategoryStrengths:
    """Split each category's connection strength into intra and inter parts.

    An intra link adds its weight once to its category; an inter link adds
    its weight once to each endpoint category.
    """
    if isinstance(category, Mapping):
        missing = [c for c in net.nodes if c not in category]
        if missing:
            raise DataError(f"nodes without a category: {', '.join(missing)}")
        cat = [category[c] for c in net.nodes]
    else:
        cat = [category(c) for c in net.nodes]
    names = sorted(set(cat))
    intra = dict.fromkeys(names, 0.0)
    inter = dict.fromkeys(names, 0.0)
    i, j, w = net.edges()
    for a, b, x in zip(i.tolist(), j.tolist(), w.tolist()):
        if cat[a] == cat[b]:
            intra[cat[a]] += x
        else:
            inter[cat[a]] += x
            inter[cat[b]] += x
    total = {c: intra[c] + inter[c] for c in names}
    return CategoryStrengths(total, intra, inter)
