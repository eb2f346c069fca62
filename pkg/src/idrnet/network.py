from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Mapping, Sequence

import numpy as np

from idrnet.errors import DataError


@dataclass(frozen=True, eq=False)
class Network:
    """Undirected weighted network on an ordered node list.

    Weights are held as a dense symmetric matrix with zero diagonal. The
    matrix is copied and frozen on construction, so instances can be shared
    freely between threads and stages.
    """

    nodes: tuple[str, ...]
    weights: np.ndarray
    labels: Mapping[str, str] = field(default_factory=dict)
    meta: Mapping[str, object] = field(default_factory=dict)

    def __post_init__(self):
        nodes = tuple(self.nodes)
        w = np.array(self.weights, dtype=np.float64, copy=True)
        n = len(nodes)
        if w.shape != (n, n):
            raise DataError(f"weight matrix shape {w.shape} does not match {n} nodes")
        if len(set(nodes)) != n:
            raise DataError("duplicate node codes")
        if not np.all(np.isfinite(w)):
            raise DataError("non-finite weights")
        if np.any(w < 0):
            raise DataError("negative weights")
        if not np.array_equal(w, w.T):
            raise DataError("weight matrix is not symmetric")
        if np.any(np.diag(w) != 0):
            raise DataError("self-loops are not allowed")
        w.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "labels", dict(self.labels))
        object.__setattr__(self, "meta", dict(self.meta))

    @property
    def n(self) -> int:
        return len(self.nodes)

    @cached_property
    def index(self) -> dict[str, int]:
        return {code: i for i, code in enumerate(self.nodes)}

    @cached_property
    def strength(self) -> np.ndarray:
        s = self.weights.sum(axis=1)
        s.setflags(write=False)
        return s

    @cached_property
    def _upper(self):
        iu, ju = np.triu_indices(self.n, 1)
        vals = self.weights[iu, ju]
        keep = vals > 0
        return iu[keep], ju[keep], vals[keep]

    def edges(self):
        """(i, j, w) arrays for every unordered pair with positive weight, i < j."""
        return self._upper

    @property
    def n_edges(self) -> int:
        return len(self._upper[2])

    @property
    def total_weight(self) -> float:
        """Sum of link weights, each undirected link counted once."""
        return float(self._upper[2].sum())

    def weight(self, a: str, b: str) -> float:
        return float(self.weights[self.index[a], self.index[b]])

    def label(self, code: str) -> str:
        return self.labels.get(code, "")

    def subnetwork(self, keep: Sequence[int]) -> "Network":
        keep = list(keep)
        return Network(
            nodes=tuple(self.nodes[i] for i in keep),
            weights=self.weights[np.ix_(keep, keep)],
            labels=self.labels,
            meta=self.meta,
        )

    def with_weights(self, weights: np.ndarray, **meta) -> "Network":
        return replace(self, weights=weights, meta={**self.meta, **meta})

    def with_meta(self, **meta) -> "Network":
        return replace(self, meta={**self.meta, **meta})

    def same_nodes(self, other: "Network") -> bool:
        return self.nodes == other.nodes

    def to_networkx(self):
        import networkx as nx

        g = nx.Graph()
        for code in self.nodes:
            g.add_node(code)
        i, j, w = self.edges()
        for a, b, x in zip(i, j, w):
            g.add_edge(self.nodes[a], self.nodes[b], weight=float(x))
        return g

    @classmethod
    def from_edges(cls, nodes, edges, **kwargs) -> "Network":
        """Build from ``(code_a, code_b, weight)`` triples."""
        nodes = tuple(nodes)
        idx = {c: i for i, c in enumerate(nodes)}
        w = np.zeros((len(nodes), len(nodes)))
        for a, b, x in edges:
            if a == b:
                raise DataError(f"self-loop on {a}")
            try:
                i, j = idx[a], idx[b]
            except KeyError as exc:
                raise DataError(f"edge references unknown node {exc.args[0]}") from None
            w[i, j] = w[j, i] = float(x)
        return cls(nodes=nodes, weights=w, **kwargs)
