"""Small shared builders for the test modules."""

import numpy as np
from scipy.optimize import linear_sum_assignment

from idrnet.network import Network


def net(edges, nodes=None):
    nodes = nodes or sorted({c for e in edges for c in e[:2]})
    return Network.from_edges(nodes, edges)


def two_triangles():
    return net([("A", "B", 1), ("B", "C", 1), ("A", "C", 1),
                ("D", "E", 1), ("E", "F", 1), ("D", "F", 1)])


def agreement(found, truth) -> float:
    """Fraction of nodes on which two labelings agree under the best label matching."""
    found, truth = np.asarray(found), np.asarray(truth)
    a, b = np.unique(found), np.unique(truth)
    table = np.array([[np.sum((found == x) & (truth == y)) for y in b] for x in a])
    r, c = linear_sum_assignment(-table)
    return table[r, c].sum() / len(found)
