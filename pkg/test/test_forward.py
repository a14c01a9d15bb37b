import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from tss.diffusion import diffuse, diffuse_array
from tss.errors import ShapeError, StepRangeError
from tss.model import TimeSeries
from tss.schedule import build_schedule


def test_diffuse_hand_value():
    # single step with alpha_bar = 0.25
    s = build_schedule(1, 0.75, 0.75)
    out = diffuse(TimeSeries([[2.0]]), 1, TimeSeries([[1.0]]), s)
    assert out.values[0, 0] == pytest.approx(0.5 * 2.0 + math.sqrt(0.75))
    assert out.values[0, 0] == pytest.approx(1.8660254037844386)


def test_diffuse_zero_signal(schedule, rng):
    eps = TimeSeries(rng.standard_normal((2, 5)))
    out = diffuse(TimeSeries.zeros(2, 5), 400, eps, schedule)
    assert np.allclose(out.values, math.sqrt(1.0 - schedule.alpha_bar(400)) * eps.values, rtol=0, atol=1e-15)


def test_diffuse_array_at_step_zero_is_identity(schedule, rng):
    x0 = rng.standard_normal((3, 4))
    eps = rng.standard_normal((3, 4))
    assert np.array_equal(diffuse_array(x0, 0, eps, schedule), x0)


def test_diffuse_errors(schedule):
    with pytest.raises(ShapeError):
        diffuse(TimeSeries.zeros(1, 4), 10, TimeSeries.zeros(1, 5), schedule)
    with pytest.raises(StepRangeError):
        diffuse(TimeSeries.zeros(1, 4), 0, TimeSeries.zeros(1, 4), schedule)
    with pytest.raises(StepRangeError):
        diffuse(TimeSeries.zeros(1, 4), 1001, TimeSeries.zeros(1, 4), schedule)


def test_diffuse_mean_converges(schedule):
    rng = np.random.default_rng(3)
    x0 = np.array([[1.5, -2.0]])
    t = 250
    n = 20000
    eps = rng.standard_normal((n, 1, 2))
    draws = diffuse_array(x0[np.newaxis], t, eps, schedule)
    ab = schedule.alpha_bar(t)
    expected = math.sqrt(ab) * x0
    sigma = math.sqrt(1.0 - ab) / math.sqrt(n)
    assert np.all(np.abs(draws.mean(axis=0) - expected) < 3 * sigma)


_values = arrays(np.float64, (2, 6), elements=st.floats(-10, 10, allow_nan=False))


@settings(deadline=None, max_examples=50)
@given(_values, _values, _values, _values, st.floats(-5, 5), st.floats(-5, 5), st.integers(1, 1000))
def test_diffuse_is_linear_in_signal_and_noise(x0, y0, e1, e2, a, b, t):
    s = build_schedule(1000)
    mixed = diffuse(TimeSeries(a * x0 + b * y0), t, TimeSeries(a * e1 + b * e2), s)
    parts = a * diffuse(TimeSeries(x0), t, TimeSeries(e1), s).values
    parts = parts + b * diffuse(TimeSeries(y0), t, TimeSeries(e2), s).values
    np.testing.assert_allclose(mixed.values, parts, rtol=0, atol=1e-9)
