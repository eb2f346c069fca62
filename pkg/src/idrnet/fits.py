"""Log-binned histograms and maximum-likelihood tail fits.

Fits always use the raw samples; histograms are for plotting only.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np
from scipy.optimize import brentq

from idrnet.errors import DataError, UndefinedMetricError


@dataclass
class BinnedHistogram:
    edges: np.ndarray
    counts: np.ndarray
    density: np.ndarray
    n_samples: int  # positive samples, in range or not
    excluded: int  # non-positive samples dropped

    @property
    def centers(self) -> np.ndarray:
        return np.sqrt(self.edges[:-1] * self.edges[1:])

    def rows(self):
        for k in range(len(self.counts)):
            yield [float(self.edges[k]), float(self.edges[k + 1]), float(self.centers[k]),
                   int(self.counts[k]), float(self.density[k])]


def log_binned_histogram(samples, bins: int = 30, range=None) -> BinnedHistogram:
    """Histogram over geometric bins; density = count / (n * bin width)."""
    x = np.asarray(samples, dtype=np.float64).ravel()
    pos = x[x > 0]
    excluded = len(x) - len(pos)
    if not len(pos):
        raise DataError("no positive samples to bin")
    if bins < 1:
        raise DataError("bins must be >= 1")
    lo, hi = (pos.min(), pos.max()) if range is None else map(float, range)
    if lo <= 0 or hi < lo:
        raise DataError(f"bad histogram range [{lo}, {hi}]")
    if hi == lo:
        # degenerate span: everything lands in the first bin
        edges = lo * np.logspace(0, 1, bins + 1)
    else:
        edges = np.geomspace(lo, hi, bins + 1)
        edges[0], edges[-1] = lo, hi
    counts, _ = np.histogram(pos, bins=edges)
    density = counts / (len(pos) * np.diff(edges))
    return BinnedHistogram(edges, counts, density, len(pos), excluded)


def linear_histogram(samples, bins: int = 30, range=None) -> BinnedHistogram:
    x = np.asarray(samples, dtype=np.float64).ravel()
    if not len(x):
        raise DataError("no samples to bin")
    counts, edges = np.histogram(x, bins=bins, range=range)
    density = counts / (len(x) * np.diff(edges))
    return BinnedHistogram(edges, counts, density, len(x), 0)


@dataclass
class TailFit:
    family: str
    parameter: float
    stderr: float
    x_min: float
    x_max: float | None
    n: int
    ks: float

    def to_dict(self) -> dict:
        return asdict(self)


def ks_distance(sorted_x: np.ndarray, cdf) -> float:
    n = len(sorted_x)
    f = cdf(sorted_x)
    hi = np.arange(1, n + 1) / n
    lo = np.arange(0, n) / n
    return float(max(np.max(hi - f), np.max(f - lo)))


def fit_power_law_tail(samples, x_min: float, min_tail: int = 50) -> TailFit:
    """Continuous MLE of the exponent for samples at or above ``x_min``."""
    x = np.asarray(samples, dtype=np.float64).ravel()
    if x_min <= 0:
        raise DataError("x_min must be positive")
    tail = np.sort(x[x >= x_min])
    n = len(tail)
    if n < min_tail:
        raise DataError(f"insufficient tail: {n} samples >= x_min, need {min_tail}")
    logsum = float(np.sum(np.log(tail / x_min)))
    if logsum <= 0:
        raise UndefinedMetricError("degenerate tail: every sample equals x_min")
    alpha = 1.0 + n / logsum
    ks = ks_distance(tail, lambda v: 1.0 - (v / x_min) ** (1.0 - alpha))
    return TailFit("power-law", alpha, (alpha - 1.0) / np.sqrt(n), x_min, None, n, ks)


def _trunc_exp_mean(lam: float, width: float) -> float:
    """Mean offset from the lower bound of an exponential truncated to [0, width]."""
    z = lam * width
    if abs(z) < 1e-6:
        return width / 2 - lam * width**2 / 12
    return 1.0 / lam - width / np.expm1(z)


def _trunc_exp_cdf(v, lam, a, b):
    if abs(lam * (b - a)) < 1e-12:
        return (v - a) / (b - a)
    return -np.expm1(-lam * (v - a)) / -np.expm1(-lam * (b - a))


def fit_exponential(samples, a: float, b: float, min_samples: int = 20) -> TailFit:
    """MLE decay rate of an exponential density truncated to [a, b].

    The estimate matches the sample mean to the truncated mean; a flat sample
    gives a rate near zero and increasing densities give negative rates.
    """
    if not b > a:
        raise DataError("need a < b")
    x = np.asarray(samples, dtype=np.float64).ravel()
    x = np.sort(x[(x >= a) & (x <= b)])
    n = len(x)
    if n < min_samples:
        raise DataError(f"insufficient samples in [{a}, {b}]: {n}, need {min_samples}")
    width = b - a
    target = float(x.mean() - a)
    if not 0 < target < width:
        raise UndefinedMetricError("degenerate sample: mean at a range boundary")
    g = lambda lam: _trunc_exp_mean(lam, width) - target
    bound = 1.0 / width
    while g(bound) > 0:
        bound *= 2
    low = -1.0 / width
    while g(low) < 0:
        low *= 2
    lam = brentq(g, low, bound, xtol=1e-14, rtol=1e-12)
    # Fisher information of the truncated exponential
    z = lam * width
    info = 1 / lam**2 - width**2 * np.exp(z) / np.expm1(z) ** 2 if abs(z) > 1e-6 else width**2 / 12
    ks = ks_distance(x, lambda v: _trunc_exp_cdf(v, lam, a, b))
    return TailFit("exponential", float(lam), float(1 / np.sqrt(n * info)), a, b, n, ks)
