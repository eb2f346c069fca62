"""Global and node-level weighted network metrics.

Edge length for path-based metrics is the reciprocal weight ``1 / w_ij``;
pairs with zero weight are not linked.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from idrnet.errors import DataError, DisconnectedError, UndefinedMetricError
from idrnet.network import Network

TIE_RTOL = 1e-9
DISTANCE_CONVENTION = "reciprocal weight (1/w)"


def strengths(net: Network) -> np.ndarray:
    return np.asarray(net.strength)


def mean_strength(net: Network) -> float:
    if net.n == 0:
        raise DataError("mean strength of an empty network")
    return float(net.strength.sum() / net.n)


def edge_density(net: Network) -> float:
    if net.n < 2:
        raise DataError("edge density needs at least two nodes")
    return net.n_edges / (net.n * (net.n - 1) / 2)


def _adjacency(net: Network) -> list[list[tuple[int, float]]]:
    adj: list[list[tuple[int, float]]] = [[] for _ in range(net.n)]
    i, j, w = net.edges()
    for a, b, x in zip(i.tolist(), j.tolist(), w.tolist()):
        length = 1.0 / x
        adj[a].append((b, length))
        adj[b].append((a, length))
    return adj


def _tied(a: float, b: float) -> bool:
    return abs(a - b) <= TIE_RTOL * max(a, b)


def _sssp(adj, source: int):
    """Dijkstra from ``source`` with shortest-path counting.

    Returns distances (inf when unreachable), path counts, predecessor lists
    and nodes in order of settlement.
    """
    n = len(adj)
    dist = [math.inf] * n
    sigma = [0.0] * n
    preds: list[list[int]] = [[] for _ in range(n)]
    done = [False] * n
    order = []
    dist[source] = 0.0
    sigma[source] = 1.0
    heap = [(0.0, source)]
    while heap:
        d, u = heapq.heappop(heap)
        if done[u]:
            continue
        done[u] = True
        order.append(u)
        for v, length in adj[u]:
            if done[v]:
                continue
            alt = d + length
            if dist[v] == math.inf or (alt < dist[v] and not _tied(alt, dist[v])):
                dist[v] = alt
                sigma[v] = sigma[u]
                preds[v] = [u]
                heapq.heappush(heap, (alt, v))
            elif _tied(alt, dist[v]):
                sigma[v] += sigma[u]
                preds[v].append(u)
    return dist, sigma, preds, order


def shortest_paths(net: Network) -> np.ndarray:
    """All-pairs distance matrix; ``np.inf`` marks disconnected pairs."""
    adj = _adjacency(net)
    d = np.empty((net.n, net.n))
    for s in range(net.n):
        d[s] = _sssp(adj, s)[0]
    return d


def components(net: Network) -> list[list[int]]:
    """Connected components on positive-weight links, largest first."""
    parent = list(range(net.n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    i, j, _ = net.edges()
    for a, b in zip(i.tolist(), j.tolist()):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    groups: dict[int, list[int]] = {}
    for x in range(net.n):
        groups.setdefault(find(x), []).append(x)
    return sorted(groups.values(), key=lambda g: (-len(g), g[0]))


def largest_component(net: Network) -> Network:
    return net.subnetwork(components(net)[0])


def aspl(net: Network, component: str = "all") -> float:
    """Mean shortest distance over unordered node pairs.

    ``component="largest"`` restricts the average to the largest connected
    component; the default raises on disconnected input.
    """
    if component not in ("all", "largest"):
        raise DataError(f"unknown component mode {component!r}")
    if component == "largest":
        net = largest_component(net)
    if net.n < 2:
        raise UndefinedMetricError("ASPL needs at least two nodes")
    d = shortest_paths(net)
    iu = np.triu_indices(net.n, 1)
    vals = d[iu]
    if np.isinf(vals).any():
        raise DisconnectedError("network is disconnected; ASPL undefined (use component='largest')")
    return float(vals.mean())


def betweenness(net: Network, normalized: bool = True) -> np.ndarray:
    """Brandes accumulation over Dijkstra trees, counting tied paths exactly.

    Each unordered pair is counted once; with ``normalized`` the scores are
    divided by (N-1)(N-2)/2.
    """
    adj = _adjacency(net)
    n = net.n
    bc = np.zeros(n)
    for s in range(n):
        _, sigma, preds, order = _sssp(adj, s)
        delta = [0.0] * n
        for w in reversed(order):
            coeff = (1.0 + delta[w]) / sigma[w]
            for v in preds[w]:
                delta[v] += sigma[v] * coeff
            if w != s:
                bc[w] += delta[w]
    bc /= 2.0
    if normalized:
        pairs = (n - 1) * (n - 2) / 2
        bc = bc / pairs if pairs > 0 else np.zeros(n)
    return bc


def gcc(net: Network) -> float:
    """Weighted global clustering: closed-triad weight over all-triad weight.

    A triad centred on j with ends i, k carries weight (w_ij + w_jk) / 2.
    """
    w = net.weights
    a = (w > 0).astype(np.float64)
    k = a.sum(axis=1)
    total = 0.5 * float(np.sum((k - 1).clip(min=0) * net.strength))
    if total <= 0:
        raise UndefinedMetricError("GCC undefined: no triads")
    closed = 0.5 * float(np.sum(w * (a @ a)))
    return closed / total


def strength_assortativity(net: Network) -> float:
    """Pearson correlation of endpoint strengths over both orientations of every link."""
    i, j, _ = net.edges()
    if len(i) < 2:
        raise UndefinedMetricError("assortativity needs at least two links")
    s = net.strength
    x = np.concatenate([s[i], s[j]])
    y = np.concatenate([s[j], s[i]])
    mu = x.mean()
    var = float(np.sum((x - mu) ** 2))
    if var <= 1e-12 * float(np.sum(x * x)):
        raise UndefinedMetricError("assortativity undefined: all endpoint strengths equal")
    return float(np.sum((x - mu) * (y - mu)) / var)


def top_nodes(net: Network, scores, k: int = 3) -> list[tuple[str, float]]:
    """Highest-scoring nodes, ties broken by code."""
    if k < 1:
        raise DataError("k must be >= 1")
    ranked = sorted(zip(net.nodes, map(float, scores)), key=lambda t: (-t[1], t[0]))
    return ranked[:k]


@dataclass
class GlobalMetricsReport:
    mean_strength: float
    edge_density: float
    aspl: float | None
    gcc: float | None
    assortativity: float | None
    modularity: float | None
    node_count: int
    edge_count: int
    aspl_component: str = "all"
    distance_convention: str = DISTANCE_CONVENTION
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return asdict(self)


def global_report(net: Network, component: str = "all", modularity: float | None = None) -> GlobalMetricsReport:
    notes = []

    def attempt(name, fn):
        try:
            return fn()
        except UndefinedMetricError as exc:
            notes.append(f"{name}: {exc}")
            return None

    if component == "largest" and len(components(net)) > 1:
        notes.append("aspl: computed over the largest connected component")
    return GlobalMetricsReport(
        mean_strength=mean_strength(net),
        edge_density=edge_density(net),
        aspl=attempt("aspl", lambda: aspl(net, component)),
        gcc=attempt("gcc", lambda: gcc(net)),
        assortativity=attempt("assortativity", lambda: strength_assortativity(net)),
        modularity=modularity,
        node_count=net.n,
        edge_count=net.n_edges,
        aspl_component=component,
        notes=notes,
    )
