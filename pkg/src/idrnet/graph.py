"""Co-occurrence counting and cosine-normalised concept networks."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from idrnet.corpus import CorpusView, DocumentRecord
from idrnet.errors import DataError
from idrnet.network import Network


@dataclass(frozen=True, eq=False)
class CooccurrenceCounts:
    """Symmetric document counts; ``counts[i, i]`` is the number of documents indexing i."""

    universe: tuple[str, ...]
    counts: np.ndarray
    n_docs: int = 0

    def __post_init__(self):
        c = np.asarray(self.counts, dtype=np.int64)
        c.setflags(write=False)
        object.__setattr__(self, "universe", tuple(self.universe))
        object.__setattr__(self, "counts", c)

    def merge(self, other: "CooccurrenceCounts") -> "CooccurrenceCounts":
        if self.universe != other.universe:
            raise DataError("cannot merge counts over different universes")
        return CooccurrenceCounts(self.universe, self.counts + other.counts, self.n_docs + other.n_docs)


def incidence(records: Iterable[DocumentRecord], universe: Sequence[str]) -> np.ndarray:
    """Binary documents-by-concepts matrix, ignoring out-of-universe codes."""
    idx = {c: i for i, c in enumerate(universe)}
    rows = []
    for rec in records:
        row = np.zeros(len(universe), dtype=np.int64)
        hits = [idx[c] for c in rec.concepts if c in idx]
        row[hits] = 1
        rows.append(row)
    if not rows:
        return np.zeros((0, len(universe)), dtype=np.int64)
    return np.vstack(rows)


def count_cooccurrences(view: CorpusView | Iterable[DocumentRecord], universe: Sequence[str],
                        shard_size: int = 5000) -> CooccurrenceCounts:
    universe = tuple(universe)
    if not universe:
        raise DataError("empty concept universe")
    records = list(view.records if isinstance(view, CorpusView) else view)
    total = CooccurrenceCounts(universe, np.zeros((len(universe),) * 2, dtype=np.int64))
    # shards bound the size of the dense incidence matrix
    for k in range(0, len(records), shard_size):
        x = incidence(records[k:k + shard_size], universe)
        total = total.merge(CooccurrenceCounts(universe, x.T @ x, len(x)))
    return total


def cosine_normalize(counts: CooccurrenceCounts, labels: Mapping[str, str] | None = None,
                     **meta) -> Network:
    raw = counts.counts
    diag = np.diag(raw)
    if np.any(raw > np.minimum.outer(diag, diag)) or np.any(raw < 0):
        raise DataError("co-occurrence count outside [0, marginal count]")
    c = raw.astype(np.float64)
    denom = np.sqrt(np.outer(diag, diag).astype(np.float64))
    w = np.divide(c, denom, out=np.zeros_like(c), where=denom > 0)
    np.fill_diagonal(w, 0.0)
    if np.any(w > 1.0):
        raise DataError("cosine weight above 1")
    zero = [counts.universe[i] for i in np.flatnonzero(diag == 0)]
    return Network(
        nodes=counts.universe,
        weights=w,
        labels=labels or {},
        meta={"n_docs": counts.n_docs, "zero_frequency": zero, **meta},
    )


def build_network(view: CorpusView, universe: Sequence[str], labels=None) -> Network:
    counts = count_cooccurrences(view, universe)
    return cosine_normalize(counts, labels, tier=view.label, year=view.year)


def prune_shared_isolates(networks: Sequence[Network]) -> tuple[list[Network], list[str]]:
    """Drop nodes whose strength is zero in every network; keep the rest in order."""
    if not networks:
        return [], []
    nodes = networks[0].nodes
    for net in networks[1:]:
        if net.nodes != nodes:
            raise DataError("networks do not share the same node order")
    active = np.zeros(len(nodes), dtype=bool)
    for net in networks:
        active |= net.strength > 0
    keep = np.flatnonzero(active)
    removed = [nodes[i] for i in np.flatnonzero(~active)]
    pruned = [net.subnetwork(keep).with_meta(pruned=len(removed)) for net in networks]
    return pruned, removed
