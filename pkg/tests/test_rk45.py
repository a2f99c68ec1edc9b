import math

import numpy as np
import pytest
from scipy.integrate import solve_ivp

from demisurv.rk45 import Event, integrate, sample


def test_matches_scipy_on_smooth_problem():
    # Damped oscillator; cross-check the adaptive stepping against an
    # independently implemented solver of the same order.
    def rhs(t, y):
        return [y[1], -y[0] - 0.1 * y[1]]

    mine = integrate(rhs, 0.0, [1.0, 0.0], 20.0, rtol=1e-8, atol=1e-10)
    ref = solve_ivp(rhs, (0.0, 20.0), [1.0, 0.0], rtol=1e-8, atol=1e-10, dense_output=True)
    for t, y in zip(mine.ts[::5], mine.ys[::5]):
        expected = ref.sol(t)
        assert y[0] == pytest.approx(expected[0], abs=1e-6)
        assert y[1] == pytest.approx(expected[1], abs=1e-6)


def test_exponential_accuracy():
    res = integrate(lambda t, y: [y[0]], 0.0, [1.0], 1.0, rtol=1e-10, atol=1e-12)
    assert res.y_end[0] == pytest.approx(math.e, rel=1e-9)


def test_terminal_event_location():
    # y = sin(t): falling zero crossing at t = pi.
    res = integrate(
        lambda t, y: [math.cos(t)],
        0.0,
        [0.0],
        10.0,
        rtol=1e-9,
        atol=1e-12,
        events=[Event(lambda t, y: y[0] - 0.5, "half", direction=-1)],
    )
    assert res.event == "half"
    assert res.t_end == pytest.approx(math.pi - math.asin(0.5), abs=1e-6)
    assert res.y_end[0] == pytest.approx(0.5, abs=1e-7)


def test_event_direction_filter():
    # Rising-only event must ignore the falling crossing.
    res = integrate(
        lambda t, y: [math.cos(t)],
        1.8,  # past the peak: y starts above 0.5 and falls
        [math.sin(1.8)],
        10.0,
        rtol=1e-9,
        atol=1e-12,
        events=[Event(lambda t, y: y[0] - 0.5, "rise", direction=1)],
    )
    # sin crosses 0.5 upward again at 2*pi + asin(0.5).
    assert res.event == "rise"
    assert res.t_end == pytest.approx(2.0 * math.pi + math.asin(0.5), abs=1e-5)


def test_non_terminal_event_recorded():
    res = integrate(
        lambda t, y: [1.0],
        0.0,
        [0.0],
        2.0,
        events=[Event(lambda t, y: y[0] - 1.0, "mark", terminal=False)],
    )
    assert res.event is None
    assert res.t_end == pytest.approx(2.0)
    names = [n for n, _ in res.triggered]
    assert names == ["mark"]
    assert res.triggered[0][1] == pytest.approx(1.0, abs=1e-6)


def test_halving_tolerance_converges():
    def rhs(t, y):
        return [y[1], -math.sin(y[0])]

    coarse = integrate(rhs, 0.0, [1.0, 0.0], 10.0, rtol=1e-6, atol=1e-8)
    fine = integrate(rhs, 0.0, [1.0, 0.0], 10.0, rtol=5e-7, atol=5e-9)
    assert coarse.y_end[0] == pytest.approx(fine.y_end[0], abs=1e-5)


def test_sample_cadence():
    res = integrate(lambda t, y: [2.0], 0.0, [0.0], 5.0)
    ts, rows = sample(res, 1.0)
    assert ts[0] == 0.0 and ts[-1] == pytest.approx(5.0)
    assert np.allclose([r[0] for r in rows], [2.0 * t for t in ts], atol=1e-9)
