import json
import math

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from qpc_entropy.entropy import entropy_gaussian
from qpc_entropy.errors import ConfigError, DomainError
from qpc_entropy.schedule import (
    PulseTrain,
    SwitchingSchedule,
    c2_from_schedule,
    effective_temperature,
    entropy_rate,
    g_factor,
    noise_power,
    pulse_train_c2,
    quantum_temperature,
)


def g_loop(intervals, tau):
    """Double loop over switching times, one logarithm per term."""
    total = 0.0
    for i, (a_i, b_i) in enumerate(intervals):
        for j, (a_j, b_j) in enumerate(intervals):
            d0 = tau if i == j else abs(a_i - a_j)
            d1 = tau if i == j else abs(b_i - b_j)
            total += 2 * math.log(abs(b_i - a_j)) - math.log(d0) - math.log(d1)
    return total


def test_single_interval():
    s = SwitchingSchedule(((0.0, 100.0),), 1.0)
    assert g_factor(s) == pytest.approx(2 * math.log(100), rel=1e-14)
    assert g_factor(s) == pytest.approx(9.210340, abs=1e-6)
    assert c2_from_schedule(SwitchingSchedule(((0.0, math.e),), 1.0)) == pytest.approx(1 / math.pi**2, rel=1e-14)
    assert c2_from_schedule(s) == pytest.approx(math.log(100) / math.pi**2, rel=1e-14)


def test_two_intervals_against_loop():
    iv = ((0.0, 30.0), (50.0, 80.0))
    s = SwitchingSchedule(iv, 0.5)
    assert g_factor(s) == pytest.approx(g_loop(iv, 0.5), rel=1e-13)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(1.0, 50.0), min_size=2, max_size=8), st.floats(0.01, 0.9), st.floats(-1e3, 1e3))
def test_translation_invariance(steps, tau, dt):
    times = np.cumsum(steps)
    iv = tuple(zip(times[0::2], times[1::2]))
    assume(iv)
    s = SwitchingSchedule(iv, tau)
    g = g_factor(s)
    assert abs(g_factor(s.shifted(dt)) - g) <= 1e-12 * abs(g) + 1e-12
    assert g == pytest.approx(g_loop(s.intervals, tau), rel=1e-12, abs=1e-12)


@settings(max_examples=50, deadline=None)
@given(st.floats(1.5, 1e4), st.floats(1e-3, 1e3))
def test_single_interval_scale_invariance(ratio, kappa):
    a = g_factor(SwitchingSchedule(((0.0, ratio),), 1.0))
    b = g_factor(SwitchingSchedule(((0.0, kappa * ratio),), kappa))
    assert b == pytest.approx(a, rel=1e-12)


@settings(max_examples=50, deadline=None)
@given(st.floats(1.5, 1e6))
def test_single_interval_entropy(ratio):
    s = SwitchingSchedule(((0.0, ratio),), 1.0)
    assert abs(entropy_gaussian(c2_from_schedule(s)) - math.log(ratio) / 3) <= 1e-12 * max(1.0, math.log(ratio))


@settings(max_examples=50, deadline=None)
@given(st.floats(0.05, 0.95))
def test_pulse_width_reflection(x):
    nu, tau = 500e6, 20e-12
    T = 1 / nu
    a = pulse_train_c2(PulseTrain(nu, x * T, tau))
    # T - w is itself rounded, so the two inputs differ in the last bit
    assert pulse_train_c2(PulseTrain(nu, T - x * T, tau)) == pytest.approx(a, rel=1e-12)
    x = 0.375  # dyadic: both widths are exact
    assert pulse_train_c2(PulseTrain(1.0, x, 0.01)) == pulse_train_c2(PulseTrain(1.0, 1.0 - x, 0.01))


def test_pulse_train_values():
    nu, tau = 500e6, 20e-12
    w = 1 / nu / 2
    # sin(pi/2) / (pi * 500e6 * 20e-12) = 100 / pi
    expected = math.log(100 / math.pi) / math.pi**2
    assert pulse_train_c2(PulseTrain(nu, w, tau)) == pytest.approx(expected, rel=1e-13)
    assert expected == pytest.approx(0.350616, abs=1e-6)
    assert pulse_train_c2(PulseTrain(nu, w, tau, 7)) == pytest.approx(7 * expected, rel=1e-13)


def test_fifty_pulses_converge():
    p = PulseTrain(500e6, 1e-9, 20e-12, 50)
    explicit = c2_from_schedule(p.to_schedule())
    assert abs(explicit - pulse_train_c2(p)) / pulse_train_c2(p) < 0.05


def test_experimental_numbers():
    nu, tau, w = 500e6, 20e-12, 1e-9
    assert noise_power(nu, w, tau) == pytest.approx(4.50e-30, rel=1e-2)
    assert entropy_rate(nu, w, tau) == pytest.approx(5.77e8, rel=1e-2)
    assert effective_temperature(nu, w, tau) == pytest.approx(8.41e-3, rel=1e-2)
    assert quantum_temperature(nu) == pytest.approx(24.0e-3, abs=0.05e-3)


def test_units_are_consistent():
    nu, tau, w = 500e6, 20e-12, 1e-9
    e = 1.602176634e-19
    c2 = pulse_train_c2(PulseTrain(nu, w, tau))
    # one cycle per period: S2 = e^2 nu C2 and rate = nu pi^2/3 C2
    assert noise_power(nu, w, tau) == pytest.approx(e**2 * nu * c2, rel=1e-14)
    assert entropy_rate(nu, w, tau) == pytest.approx(nu * math.pi**2 / 3 * c2, rel=1e-14)


def test_validation():
    with pytest.raises(DomainError):
        SwitchingSchedule(((0.0, 1.0), (0.5, 2.0)), 0.1)
    with pytest.raises(DomainError):
        SwitchingSchedule(((0.0, 1.0),), 2.0)
    with pytest.raises(DomainError):
        SwitchingSchedule(((0.0, 1.0), (1.05, 2.0)), 0.1)
    with pytest.raises(DomainError):
        SwitchingSchedule((), 0.1)
    with pytest.raises(DomainError):
        PulseTrain(500e6, 3e-9, 20e-12)
    # sin(pi nu w) < pi nu tau: entropy production would be negative
    with pytest.raises(DomainError):
        PulseTrain(500e6, 1e-12, 20e-12)


def test_dict_roundtrip(tmp_path):
    s = SwitchingSchedule(((0.0, 3.0), (5.0, 9.0)), 0.25)
    path = tmp_path / "s.json"
    path.write_text(json.dumps(s.to_dict()))
    assert SwitchingSchedule.load(path) == s
    with pytest.raises(ConfigError) as err:
        SwitchingSchedule.from_dict({"intervals": [[0, 1]]})
    assert err.value.field == "tau"
    with pytest.raises(ConfigError):
        SwitchingSchedule.from_dict({"intervals": [[1, 0]], "tau": 0.1})
