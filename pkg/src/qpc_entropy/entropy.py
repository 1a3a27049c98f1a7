"""Entanglement entropy as a weighted sum of even charge cumulants.

    S = sum_{m even} (2 pi)^m |B_m| C_m / m!
      = pi^2/3 C_2 + pi^4/45 C_4 + 2 pi^6/945 C_6 + ...

The order-4 weight is pi^4/45.  Some printed versions of this expansion
show pi^4/15 for that term; pi^4/45 is what both the Bernoulli-number
formula and direct quadrature of the integral representation give (see
``series.alpha_via_integral``), and it is the only value consistent with
the order-6 weight 2 pi^6/945.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .series import CountingStatistics, alpha_closed_form

DEFAULT_TRUNCATION = 8

C4_WEIGHT = math.pi**4 / 45
C4_WEIGHT_MISPRINT = math.pi**4 / 15


def series_weight(m: int) -> float:
    """Coefficient multiplying ``C_m`` in the entropy series."""
    return alpha_closed_form(m) / math.factorial(m)


@dataclass(frozen=True)
class EntropyEstimate:
    value: float
    partial_sums: tuple
    truncation_order: int

    @property
    def orders(self):
        return tuple(range(2, self.truncation_order + 1, 2))


def entropy_from_cumulants(
    c: CountingStatistics, truncation_order: int = DEFAULT_TRUNCATION
) -> EntropyEstimate:
    """Sum the entropy series up to ``truncation_order`` (inclusive, even).

    Odd cumulants are never read.
    """
    if truncation_order % 2 or truncation_order < 2:
        raise DomainError("truncation_order must be a positive even integer")
    if truncation_order > c.max_order:
        raise DomainError(
            f"truncation_order {truncation_order} exceeds available cumulants ({c.max_order})"
        )
    total = 0.0
    partial = []
    for m in range(2, truncation_order + 1, 2):
        total += series_weight(m) * c[m]
        partial.append(total)
    return EntropyEstimate(total, tuple(partial), truncation_order)


def entropy_gaussian(c2: float) -> float:
    """Entropy for purely gaussian statistics, ``pi^2/3 * C_2``."""
    if c2 < 0:
        raise DomainError("variance must be non-negative")
    return math.pi**2 / 3 * c2


@dataclass(frozen=True)
class ConvergenceReport:
    orders: tuple
    increments: tuple
    partial_sums: tuple
    converged: bool

    def as_dict(self):
        return {
            "orders": list(self.orders),
            "increments": list(self.increments),
            "partial_sums": list(self.partial_sums),
            "converged": self.converged,
        }


def series_convergence_report(c: CountingStatistics, truncation_order=None) -> ConvergenceReport:
    """Per-order increments of the entropy series.

    ``converged`` is False as soon as a nonzero increment is not smaller in
    magnitude than the one before it.  This only describes the observed
    increments; nothing is claimed about orders beyond the truncation.
    """
    if c.max_order < 4:
        raise DomainError("need at least 4 cumulant orders")
    top = truncation_order or (c.max_order - c.max_order % 2)
    est = entropy_from_cumulants(c, top)
    inc = np.diff(np.concatenate([[0.0], est.partial_sums]))
    mags = np.abs(inc)
    converged = True
    for prev, cur in zip(mags[:-1], mags[1:]):
        if cur == 0.0:
            continue
        if cur >= prev:
            converged = False
            break
    return ConvergenceReport(est.orders, tuple(inc), est.partial_sums, converged)
