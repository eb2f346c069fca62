"""Signed difference networks, link co-location and difference scaling."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from idrnet.errors import DataError, UndefinedMetricError
from idrnet.network import Network


@dataclass(frozen=True)
class SignedDifference:
    positive: Network
    negative: Network
    scale: float  # weights are raw differences divided by this


def mean_link_strength(net: Network) -> float:
    _, _, w = net.edges()
    if not len(w):
        raise UndefinedMetricError("mean link strength of a network without links")
    return float(w.mean())


def signed_difference(a: Network, b: Network, normalize: bool = False) -> SignedDifference:
    """Split ``a - b`` into its positive and negative parts.

    With ``normalize`` both inputs are divided by the mean positive link
    weight of ``a`` first, so differences are fractions of that mean.
    """
    if not a.same_nodes(b):
        raise DataError("difference needs identical node sets and order")
    scale = mean_link_strength(a) if normalize else 1.0
    wa = np.asarray(a.weights) / scale
    wb = np.asarray(b.weights) / scale
    d = wa - wb
    meta = {"scale": scale, "normalized": normalize}
    pos = a.with_weights(np.where(d > 0, d, 0.0), sign="positive", **meta)
    neg = a.with_weights(np.where(d < 0, -d, 0.0), sign="negative", **meta)
    return SignedDifference(pos, neg, scale)


# --- co-location -------------------------------------------------------------


def _incident(net: Network):
    inc: list[list[tuple[int, float]]] = [[] for _ in range(net.n)]
    i, j, w = net.edges()
    for e, (a, b, x) in enumerate(zip(i.tolist(), j.tolist(), w.tolist())):
        inc[a].append((e, x))
        inc[b].append((e, x))
    return inc


def colocation_samples(focal: Network, neighbor: Network | None = None):
    """(focal strength, neighbouring-link strength) for every adjacent link pair.

    Links are adjacent when they share exactly one endpoint. With a single
    network each adjacency appears in both orientations. With two networks
    the focal link comes from ``focal`` and its neighbours from ``neighbor``.
    """
    same = neighbor is None
    neighbor = focal if same else neighbor
    if not focal.same_nodes(neighbor):
        raise DataError("co-location needs identical node sets")
    f_inc, n_inc = _incident(focal), (None if same else _incident(neighbor))
    fi, fj, _ = focal.edges()
    ends = list(zip(fi.tolist(), fj.tolist()))
    ni, nj, _ = neighbor.edges()
    n_ends = list(zip(ni.tolist(), nj.tolist()))
    xs, ys = [], []
    for u in range(focal.n):
        nbrs = f_inc[u] if same else n_inc[u]
        for e, x in f_inc[u]:
            for g, y in nbrs:
                if same and g == e:
                    continue
                if not same and n_ends[g] == ends[e]:
                    # same node pair: shares both endpoints
                    continue
                xs.append(x)
                ys.append(y)
    return np.array(xs), np.array(ys)


@dataclass
class Regression:
    slope: float
    intercept: float
    r2: float
    n: int
    pearson: float | None = None

    def to_dict(self) -> dict:
        return {"slope": self.slope, "intercept": self.intercept, "r2": self.r2,
                "n": self.n, "pearson": self.pearson}


def ols(x, y) -> Regression:
    """Least-squares line of ``y`` on ``x``.

    A constant ``y`` gives slope 0 and R^2 0. A constant ``x`` with varying
    ``y`` has no slope and raises.
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    n = len(x)
    if n < 2:
        raise UndefinedMetricError("regression needs at least two points")
    xm, ym = x.mean(), y.mean()
    sxx = float(np.sum((x - xm) ** 2))
    syy = float(np.sum((y - ym) ** 2))
    sxy = float(np.sum((x - xm) * (y - ym)))
    tiny = 1e-14 * max(1.0, float(np.sum(y * y)))
    if syy <= tiny:
        return Regression(0.0, float(ym), 0.0, n, None)
    if sxx <= 1e-14 * max(1.0, float(np.sum(x * x))):
        raise UndefinedMetricError("undefined slope: no variance in x")
    slope = sxy / sxx
    r = sxy / np.sqrt(sxx * syy)
    return Regression(slope, float(ym - slope * xm), float(r * r), n, float(r))


@dataclass
class BinnedMeans:
    edges: np.ndarray
    x_mean: np.ndarray
    y_mean: np.ndarray
    y_se: np.ndarray
    counts: np.ndarray

    def rows(self):
        for k in range(len(self.counts)):
            yield [float(self.edges[k]), float(self.edges[k + 1]), float(self.x_mean[k]),
                   float(self.y_mean[k]), float(self.y_se[k]), int(self.counts[k])]


def binned_means(x, y, bins: int = 15) -> BinnedMeans:
    """Means of ``y`` in log-spaced bins of ``x`` with one standard error."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    pos = x > 0
    x, y = x[pos], y[pos]
    if not len(x):
        raise UndefinedMetricError("no positive x values to bin")
    lo, hi = x.min(), x.max()
    if hi <= lo:
        hi = lo * 10 ** (1.0 / bins)
    edges = np.geomspace(lo, hi, bins + 1)
    idx = np.clip(np.searchsorted(edges, x, side="right") - 1, 0, bins - 1)
    xm, ym, se, cnt = (np.full(bins, np.nan) for _ in range(4))
    for k in range(bins):
        sel = idx == k
        c = int(sel.sum())
        cnt[k] = c
        if c:
            xm[k] = x[sel].mean()
            ym[k] = y[sel].mean()
            se[k] = y[sel].std(ddof=1) / np.sqrt(c) if c > 1 else np.nan
    return BinnedMeans(edges, xm, ym, se, cnt.astype(int))


@dataclass
class CoLocation:
    mode: str
    regression: Regression
    bins: BinnedMeans


def colocation_regression(diff: SignedDifference, mode: str = "pos-pos", bins: int = 15) -> CoLocation:
    """OLS of neighbouring-link strength on link strength for one pairing mode.

    Modes: ``pos-pos``, ``neg-neg``, ``pos-neg`` (focal positive, neighbours
    negative) and ``neg-pos``.
    """
    nets = {"pos": diff.positive, "neg": diff.negative}
    try:
        f, g = mode.split("-")
        focal, other = nets[f], nets[g]
    except (ValueError, KeyError):
        raise DataError(f"unknown co-location mode {mode!r}") from None
    x, y = colocation_samples(focal, None if f == g else other)
    reg = ols(x, y)
    return CoLocation(mode, reg, binned_means(x, y, bins))


# --- difference vs reference scaling ----------------------------------------


@dataclass
class PowerLawFit:
    alpha: float
    amplitude: float
    r2: float
    n: int
    excluded: int = 0

    def to_dict(self) -> dict:
        return {"alpha": self.alpha, "amplitude": self.amplitude, "r2": self.r2,
                "n": self.n, "excluded": self.excluded}


def fit_loglog(x, y, excluded: int = 0) -> PowerLawFit:
    """Fit ``y = c * x**alpha`` by least squares on log-transformed data."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if len(x) < 3:
        raise UndefinedMetricError(f"power-law fit needs at least 3 points, got {len(x)}")
    reg = ols(np.log(x), np.log(y))
    return PowerLawFit(reg.slope, float(np.exp(reg.intercept)), reg.r2, len(x), excluded)


def scaling_pairs(diff: SignedDifference, reference: Network):
    """Reference weights paired with positive and with negative differences.

    Pairs where the reference has no link or the difference is zero are
    dropped; the number dropped is returned alongside.
    """
    if not reference.same_nodes(diff.positive):
        raise DataError("reference and difference networks differ in nodes")
    iu, ju = np.triu_indices(reference.n, 1)
    ref = reference.weights[iu, ju]
    pos = diff.positive.weights[iu, ju]
    neg = diff.negative.weights[iu, ju]
    linked = ref > 0
    pos_sel = linked & (pos > 0)
    neg_sel = linked & (neg > 0)
    excluded = int(np.sum(linked & ~pos_sel & ~neg_sel))
    return (ref[pos_sel], pos[pos_sel]), (ref[neg_sel], neg[neg_sel]), excluded


def _try_fit(x, y, excluded):
    try:
        return fit_loglog(x, y, excluded)
    except UndefinedMetricError:
        return None


@dataclass
class ScalingResult:
    positive: PowerLawFit
    negative: PowerLawFit
    per_year: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "pooled": {"positive": self.positive.to_dict(), "negative": self.negative.to_dict()},
            "per_year": {str(y): {k: (v.to_dict() if v else None) for k, v in fits.items()}
                         for y, fits in self.per_year.items()},
        }


def diff_vs_reference_scaling(diffs: Sequence[SignedDifference], references: Sequence[Network],
                              years: Sequence | None = None) -> ScalingResult:
    """Power-law fits of |difference| against reference link weight, pooled and per year."""
    if len(diffs) != len(references):
        raise DataError("need one reference network per difference")
    years = list(years) if years is not None else list(range(len(diffs)))
    px, py, nx_, ny, excl = [], [], [], [], 0
    per_year = {}
    for year, d, ref in zip(years, diffs, references):
        (a, b), (c, e), dropped = scaling_pairs(d, ref)
        px.append(a), py.append(b), nx_.append(c), ny.append(e)
        excl += dropped
        per_year[year] = {"positive": _try_fit(a, b, dropped), "negative": _try_fit(c, e, dropped)}
    return ScalingResult(
        fit_loglog(np.concatenate(px), np.concatenate(py), excl),
        fit_loglog(np.concatenate(nx_), np.concatenate(ny), excl),
        per_year,
    )
