"""Threshold decomposition: LCC size against link-weight cutoff, and inner cores.

A link survives threshold ``t`` iff ``w > t``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import partial

import numpy as np

from idrnet.errors import DataError, NumericError
from idrnet.network import Network
from idrnet.null import EnsembleBand, EnsembleSpec, ensemble_band

GRID_POINTS = 400


def threshold_grid(net: Network, points: int = GRID_POINTS, eps: float = 1e-6) -> np.ndarray:
    """Evenly spaced cutoffs over [0, max weight + eps], nudged off link weights."""
    _, _, w = net.edges()
    top = float(w.max()) if len(w) else 1.0
    grid = np.linspace(0.0, top * (1 + eps) + eps, points)
    weights = np.unique(w)
    if len(weights):
        pos = np.searchsorted(weights, grid)
        for k, t in enumerate(grid):
            near = weights[max(pos[k] - 1, 0):pos[k] + 1]
            if len(near) and np.min(np.abs(near - t)) <= 1e-12 * max(top, 1.0):
                grid[k] = t + 1e-9 * max(top, 1.0)
    return grid


class _DSU:
    def __init__(self, n):
        self.parent = list(range(n))
        self.size = [1] * n
        self.largest = 1 if n else 0

    def find(self, x):
        p = self.parent
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        if self.size[ra] > self.largest:
            self.largest = self.size[ra]


def lcc_curve(net: Network, grid) -> np.ndarray:
    """Largest-component node count at each threshold in the ascending ``grid``."""
    grid = np.asarray(grid, dtype=np.float64)
    if np.any(np.diff(grid) < 0):
        raise DataError("threshold grid must be ascending")
    i, j, w = net.edges()
    order = np.argsort(-w, kind="stable")
    i, j, w = i[order].tolist(), j[order].tolist(), w[order].tolist()
    dsu = _DSU(net.n)
    sizes = np.zeros(len(grid), dtype=np.int64)
    e = 0
    # add links from strongest down while sweeping thresholds downwards
    for k in range(len(grid) - 1, -1, -1):
        t = grid[k]
        while e < len(w) and w[e] > t:
            dsu.union(i[e], j[e])
            e += 1
        sizes[k] = dsu.largest
    return sizes


def lcc_nodes(net: Network, t: float) -> tuple[int, ...]:
    """Node indices of the largest component at threshold ``t``.

    Equal-sized components are broken towards the one holding the lowest
    node index.
    """
    dsu = _DSU(net.n)
    i, j, w = net.edges()
    for a, b, x in zip(i.tolist(), j.tolist(), w.tolist()):
        if x > t:
            dsu.union(a, b)
    groups: dict[int, list[int]] = {}
    for x in range(net.n):
        groups.setdefault(dsu.find(x), []).append(x)
    best = min(groups.values(), key=lambda g: (-len(g), g[0]))
    return tuple(best)


@dataclass
class InnerCore:
    nodes: tuple[str, ...]
    size: int
    t_lo: float
    t_hi: float
    target: int
    jump: tuple[int, int] | None = None  # sizes straddling target when no exact hit

    def to_dict(self) -> dict:
        return {"nodes": list(self.nodes), "size": self.size, "t_lo": self.t_lo,
                "t_hi": self.t_hi, "target": self.target,
                "jump": list(self.jump) if self.jump else None}


def inner_core(net: Network, target: int = 10, grid=None) -> InnerCore:
    """Last small strongly-linked cluster that survives thresholding.

    Takes the largest LCC size in [2, target] seen on the grid, the node set
    at the smallest threshold reaching that size, and the contiguous run of
    thresholds over which that node set stays the LCC.
    """
    if target < 2:
        raise DataError("inner-core target must be >= 2")
    grid = threshold_grid(net) if grid is None else np.asarray(grid, dtype=np.float64)
    sizes = lcc_curve(net, grid)
    ok = (sizes >= 2) & (sizes <= target)
    if not ok.any():
        raise NumericError(f"no inner core: no LCC of size 2..{target} on the grid")
    size = int(sizes[ok].max())
    k0 = int(np.flatnonzero(sizes == size)[0])
    members = lcc_nodes(net, grid[k0])
    lo = hi = k0
    while lo > 0 and sizes[lo - 1] == size and lcc_nodes(net, grid[lo - 1]) == members:
        lo -= 1
    while hi + 1 < len(grid) and sizes[hi + 1] == size and lcc_nodes(net, grid[hi + 1]) == members:
        hi += 1
    jump = None
    if size < target:
        above = sizes[:k0][sizes[:k0] > target]
        if len(above):
            jump = (int(above[-1]), size)
    return InnerCore(
        nodes=tuple(sorted(net.nodes[x] for x in members)),
        size=size, t_lo=float(grid[lo]), t_hi=float(grid[hi]), target=target, jump=jump,
    )


@dataclass
class DecompositionProfile:
    thresholds: np.ndarray
    lcc_sizes: np.ndarray
    band: EnsembleBand | None = None
    core: InnerCore | None = None
    notes: list[str] = field(default_factory=list)

    def rows(self):
        for k, t in enumerate(self.thresholds):
            row = [float(t), int(self.lcc_sizes[k])]
            if self.band is not None:
                row += [float(self.band.mean[k]), float(self.band.lower[k]), float(self.band.upper[k])]
            yield row


def lcc_observable(grid, net: Network) -> np.ndarray:
    return lcc_curve(net, grid)


def compare_to_null(net: Network, spec: EnsembleSpec, grid=None, workers: int = 1) -> DecompositionProfile:
    """Empirical LCC curve alongside the rewired-ensemble band on the same grid."""
    grid = threshold_grid(net) if grid is None else np.asarray(grid, dtype=np.float64)
    band = ensemble_band(net, spec, partial(lcc_observable, grid), workers=workers)
    return DecompositionProfile(grid, lcc_curve(net, grid), band)


def decompose(net: Network, spec: EnsembleSpec | None = None, target: int = 10,
              points: int = GRID_POINTS, workers: int = 1) -> DecompositionProfile:
    grid = threshold_grid(net, points)
    if spec is not None:
        prof = compare_to_null(net, spec, grid, workers)
    else:
        prof = DecompositionProfile(grid, lcc_curve(net, grid))
    try:
        prof.core = inner_core(net, target, grid)
    except NumericError as exc:
        prof.notes.append(str(exc))
    if prof.core is not None and prof.core.jump:
        prof.notes.append("LCC size jumps from %d to %d across the target" % prof.core.jump)
    return prof
