"""Abrupt on/off switching protocols and their gaussian counting statistics.

All quantities here are in SI units (seconds, hertz, kelvin, A^2/Hz).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ConfigError, DomainError

ELEMENTARY_CHARGE = 1.602176634e-19  # C
PLANCK = 6.62607015e-34  # J s
BOLTZMANN = 1.380649e-23  # J / K


@dataclass(frozen=True)
class SwitchingSchedule:
    """Contact open during each ``(t0, t1)`` interval, closed otherwise.

    ``tau`` is the short-time cutoff (switching rapidity).  It must be
    shorter than every interval and every gap between intervals.
    """

    intervals: tuple
    tau: float

    def __post_init__(self):
        iv = tuple((float(a), float(b)) for a, b in self.intervals)
        if not iv:
            raise DomainError("schedule needs at least one interval")
        flat = [t for pair in iv for t in pair]
        if any(b <= a for a, b in zip(flat[:-1], flat[1:])):
            raise DomainError("switching times must be strictly increasing")
        if not self.tau > 0:
            raise DomainError("tau must be positive")
        lengths = [b - a for a, b in iv]
        gaps = [iv[k + 1][0] - iv[k][1] for k in range(len(iv) - 1)]
        if self.tau >= min(lengths):
            raise DomainError("tau must be shorter than every interval")
        if gaps and self.tau >= min(gaps):
            raise DomainError("tau must be shorter than every gap between intervals")
        object.__setattr__(self, "intervals", iv)

    @property
    def t0(self):
        return np.array([a for a, _ in self.intervals])

    @property
    def t1(self):
        return np.array([b for _, b in self.intervals])

    def shifted(self, dt):
        return SwitchingSchedule(tuple((a + dt, b + dt) for a, b in self.intervals), self.tau)

    @classmethod
    def from_dict(cls, data):
        try:
            intervals = data["intervals"]
            tau = data["tau"]
        except KeyError as exc:
            raise ConfigError("missing key", field=exc.args[0]) from None
        try:
            return cls(tuple(tuple(p) for p in intervals), float(tau))
        except (DomainError, TypeError, ValueError) as exc:
            raise ConfigError(str(exc), field="intervals") from None

    @classmethod
    def load(cls, path):
        with open(Path(path)) as fh:
            return cls.from_dict(json.load(fh))

    def to_dict(self):
        return {"intervals": [list(p) for p in self.intervals], "tau": self.tau}


def g_factor(s: SwitchingSchedule) -> float:
    """Logarithmic double sum over switching times.

    ``G = sum_ij ln|t1_i - t0_j| - ln|t0_i - t0_j| + ln|t1_i - t0_j| - ln|t1_i - t1_j|``
    with ``tau`` standing in for the vanishing ``i == j`` denominators.
    Absolute values keep every cross term real; signed differences would
    give negative ratios for some pairs.
    """
    t0, t1 = s.t0, s.t1
    num = np.abs(t1[:, None] - t0[None, :])
    d0 = np.abs(t0[:, None] - t0[None, :])
    d1 = np.abs(t1[:, None] - t1[None, :])
    np.fill_diagonal(d0, s.tau)
    np.fill_diagonal(d1, s.tau)
    return float(np.sum(2.0 * np.log(num) - np.log(d0) - np.log(d1)))


def c2_from_schedule(s: SwitchingSchedule) -> float:
    """Charge variance ``G / (2 pi^2)`` for perfect transmission."""
    return g_factor(s) / (2 * math.pi**2)


@dataclass(frozen=True)
class PulseTrain:
    """``cycles`` identical pulses of width ``width`` at repetition ``frequency``."""

    frequency: float
    width: float
    tau: float
    cycles: int = 1

    def __post_init__(self):
        if self.cycles < 1:
            raise DomainError("cycles must be >= 1")
        _log_argument(self.frequency, self.width, self.tau)

    @property
    def period(self):
        return 1.0 / self.frequency

    def to_schedule(self) -> SwitchingSchedule:
        T = self.period
        return SwitchingSchedule(
            tuple((k * T, k * T + self.width) for k in range(self.cycles)), self.tau
        )


def _log_argument(nu, w, tau):
    """``ln(sin(pi nu w) / (pi nu tau))``, validated to be >= 0."""
    if not (nu > 0 and tau > 0):
        raise DomainError("frequency and tau must be positive")
    x = nu * w
    if not 0.0 < x < 1.0:
        raise DomainError("pulse width must satisfy 0 < w < 1/nu")
    # sin(pi x) evaluated on the nearer half so that w and T - w agree
    ratio = math.sin(math.pi * min(x, 1.0 - x)) / (math.pi * nu * tau)
    if ratio < 1.0 - 1e-12:
        raise DomainError(
            "sin(pi nu w) must be at least pi nu tau (entropy production would be negative)"
        )
    return max(math.log(ratio), 0.0)


def pulse_train_c2(p: PulseTrain) -> float:
    """Large-N variance ``(N / pi^2) ln(sin(pi nu w) / (pi nu tau))``."""
    return p.cycles / math.pi**2 * _log_argument(p.frequency, p.width, p.tau)


def noise_power(nu: float, w: float, tau: float) -> float:
    """Low-frequency current noise ``e^2 nu / pi^2 * ln(...)`` in A^2/Hz."""
    return ELEMENTARY_CHARGE**2 * nu / math.pi**2 * _log_argument(nu, w, tau)


def entropy_rate(nu: float, w: float, tau: float) -> float:
    """Entanglement production rate ``(nu / 3) ln(...)`` in nats per second."""
    return nu / 3.0 * _log_argument(nu, w, tau)


def effective_temperature(nu: float, w: float, tau: float) -> float:
    """Noise temperature ``h nu / (pi^2 k_B) ln(...)`` in kelvin."""
    return PLANCK * nu / (math.pi**2 * BOLTZMANN) * _log_argument(nu, w, tau)


def quantum_temperature(nu: float) -> float:
    """``h nu / k_B`` in kelvin; the bare frequency scale without log factor."""
    return PLANCK * nu / BOLTZMANN
