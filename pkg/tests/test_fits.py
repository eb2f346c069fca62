import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from idrnet.errors import DataError, UndefinedMetricError
from idrnet.fits import fit_exponential, fit_power_law_tail, linear_histogram, log_binned_histogram
from idrnet.synth import sample_power_law, sample_truncated_exponential

XMIN = 10 ** -1.5


def test_histogram_mass():
    x = np.random.default_rng(0).random(1000) + 0.01
    h = log_binned_histogram(x, bins=20)
    assert h.counts.sum() == 1000
    assert np.sum(h.density * np.diff(h.edges)) == pytest.approx(1.0)


def test_histogram_drops_nonpositive():
    h = log_binned_histogram([0.0, -1.0, 0.5, 1.0], bins=3)
    assert h.excluded == 2 and h.counts.sum() == 2


def test_histogram_constant_samples():
    h = log_binned_histogram([0.3] * 5, bins=4)
    assert h.counts[0] == 5 and h.counts.sum() == 5


def test_histogram_errors():
    with pytest.raises(DataError):
        log_binned_histogram([0.0, -2.0])
    with pytest.raises(DataError):
        log_binned_histogram([1.0], bins=0)


def test_histogram_slope():
    x = sample_power_law(1.9, XMIN, 100_000, np.random.default_rng(1))
    h = log_binned_histogram(x, bins=25, range=(XMIN, 10.0))
    ok = h.counts > 50
    slope = np.polyfit(np.log(h.centers[ok]), np.log(h.density[ok]), 1)[0]
    assert slope == pytest.approx(-1.9, abs=0.05)


def test_linear_histogram_mass():
    h = linear_histogram(np.linspace(0, 1, 101), bins=10)
    assert np.sum(h.density * np.diff(h.edges)) == pytest.approx(1.0)


def test_power_law_recovery():
    x = sample_power_law(1.9, XMIN, 100_000, np.random.default_rng(2))
    fit = fit_power_law_tail(x, XMIN)
    assert abs(fit.parameter - 1.9) <= 0.02
    assert fit.ks < 0.01
    assert fit.stderr == pytest.approx(0.9 / np.sqrt(100_000), rel=0.05)


def test_power_law_errors():
    with pytest.raises(DataError):
        fit_power_law_tail([0.5] * 10, 0.1)
    with pytest.raises(UndefinedMetricError):
        fit_power_law_tail([0.1] * 60, 0.1)
    with pytest.raises(DataError):
        fit_power_law_tail([1.0] * 60, 0.0)


def test_exponential_recovery():
    x = sample_truncated_exponential(0.6, 1.0, 6.0, 10_000, np.random.default_rng(3))
    fit = fit_exponential(x, 1.0, 6.0)
    assert abs(fit.parameter - 0.6) <= 0.03
    assert 0 < fit.stderr < 0.03


def test_exponential_uniform_near_zero():
    x = np.random.default_rng(4).uniform(1, 6, 20_000)
    fit = fit_exponential(x, 1, 6)
    assert abs(fit.parameter) < 3 * fit.stderr


def test_exponential_negative_rate():
    x = sample_truncated_exponential(-0.4, 1.0, 6.0, 10_000, np.random.default_rng(5))
    assert fit_exponential(x, 1, 6).parameter == pytest.approx(-0.4, abs=0.05)


def test_exponential_errors():
    with pytest.raises(DataError):
        fit_exponential([2.0] * 5, 1, 6)
    with pytest.raises(DataError):
        fit_exponential([2.0] * 50, 6, 1)


@settings(max_examples=10, deadline=None)
@given(st.integers(5, 60))
def test_fit_ignores_binning(bins):
    x = sample_power_law(2.2, 0.05, 5000, np.random.default_rng(6))
    log_binned_histogram(x, bins=bins)
    assert fit_power_law_tail(x, 0.05).parameter == fit_power_law_tail(x.copy(), 0.05).parameter
