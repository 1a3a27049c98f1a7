"""Generating-function models for a driven point contact.

Three model families are supported:

* ``Gaussian(G)``: abrupt switching with perfect transmission,
  ``log chi = -lambda^2 G / (4 pi^2)`` so ``C_2 = G / (2 pi^2)``.
* ``ImperfectTransmission(G, D)``: the same with ``lambda`` replaced by
  ``lambda_*`` where ``sin(lambda_*/2) = sqrt(D) sin(lambda/2)``.
* ``BernoulliSet(levels, charge_offset)``: product of independent
  two-outcome factors ``1 - z + z e^{i lambda}`` times ``e^{-i lambda q}``,
  the form taken by a finite correlation matrix with eigenvalues ``z``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .errors import DomainError
from .series import (
    CountingStatistics,
    FormalSeries,
    bernoulli_log_chi_series,
    cumulants_from_log_series,
)

MAX_MODEL_ORDER = 20


@dataclass(frozen=True)
class Gaussian:
    G: float

    def __post_init__(self):
        if self.G < 0:
            raise DomainError("G must be non-negative")


@dataclass(frozen=True)
class ImperfectTransmission:
    G: float
    D: float

    def __post_init__(self):
        if self.G < 0:
            raise DomainError("G must be non-negative")
        if not 0.0 <= self.D <= 1.0:
            raise DomainError("transmission D must lie in [0, 1]")


@dataclass(frozen=True, eq=False)
class BernoulliSet:
    levels: np.ndarray
    charge_offset: float = 0.0

    def __post_init__(self):
        z = np.array(self.levels, dtype=float).ravel()
        if np.any(z < -1e-10) or np.any(z > 1 + 1e-10):
            raise DomainError("Bernoulli levels must lie in [0, 1]")
        z = np.clip(z, 0.0, 1.0)
        z.setflags(write=False)
        object.__setattr__(self, "levels", z)


FcsModel = Union[Gaussian, ImperfectTransmission, BernoulliSet]


def lambda_star(lam, D):
    """Deformed counting field, ``2 arcsin(sqrt(D) sin(lambda/2))``.

    Real ``lam`` must lie in ``[-pi, pi]``; complex arguments are passed
    through numpy's principal branches (used for analytic continuation).
    """
    if not 0.0 <= D <= 1.0:
        raise DomainError("transmission D must lie in [0, 1]")
    lam_arr = np.asarray(lam)
    if not np.iscomplexobj(lam_arr):
        if np.any(np.abs(lam_arr) > math.pi + 1e-12):
            raise DomainError("lambda must lie in [-pi, pi]")
        lam_arr = np.clip(lam_arr, -math.pi, math.pi)
    out = 2.0 * np.arcsin(math.sqrt(D) * np.sin(lam_arr / 2.0))
    return out[()] if out.ndim == 0 else out


def _log_level(z, lam):
    """``log(1 + w)`` with ``w = z (e^{i lambda} - 1)``, accurate for small ``lambda``.

    Built from real and imaginary parts because the complex log of a
    number close to 1 loses the small part.
    """
    if np.any(np.abs(lam.imag) > 0):
        return np.log(1.0 - z + z * np.exp(1j * lam))
    lr = lam.real
    re_w = -2.0 * z * np.sin(lr / 2.0) ** 2
    im_w = z * np.sin(lr)
    real = 0.5 * np.log1p(2.0 * re_w + re_w**2 + im_w**2)
    return real + 1j * np.arctan2(im_w, 1.0 + re_w)


def log_chi(model: FcsModel, lam):
    """``log chi(lambda)`` for the given model (complex)."""
    if isinstance(model, Gaussian):
        return -np.asarray(lam) ** 2 * model.G / (4 * math.pi**2) + 0j
    if isinstance(model, ImperfectTransmission):
        ls = lambda_star(lam, model.D)
        return -np.asarray(ls) ** 2 * model.G / (4 * math.pi**2) + 0j
    if isinstance(model, BernoulliSet):
        lam = np.asarray(lam, dtype=complex)
        z = model.levels.reshape((-1,) + (1,) * lam.ndim)
        terms = _log_level(z, lam)
        out = terms.sum(axis=0) - 1j * lam * model.charge_offset
        return out[()] if out.ndim == 0 else out
    raise TypeError(f"unknown model {model!r}")


def log_chi_series(model: FcsModel, max_order: int = MAX_MODEL_ORDER) -> FormalSeries:
    """``log chi`` as a truncated series in ``lambda``."""
    x = FormalSeries.variable(max_order)
    if isinstance(model, Gaussian):
        return x * x * (-model.G / (4 * math.pi**2))
    if isinstance(model, ImperfectTransmission):
        ls = ((x / 2).sin() * math.sqrt(model.D)).arcsin() * 2
        return ls * ls * (-model.G / (4 * math.pi**2))
    if isinstance(model, BernoulliSet):
        total = x * (-1j * model.charge_offset)
        for z in model.levels:
            if 0.0 < z < 1.0:
                total = total + bernoulli_log_chi_series(z, max_order)
            elif z == 1.0:
                total = total + x * 1j
        return total
    raise TypeError(f"unknown model {model!r}")


def model_cumulants(model: FcsModel, max_order: int = 8) -> CountingStatistics:
    """Exact (series-truncated) cumulants ``C_1 .. C_max_order``."""
    if max_order % 2 or not 2 <= max_order <= MAX_MODEL_ORDER:
        raise DomainError(f"max_order must be even and <= {MAX_MODEL_ORDER}")
    return cumulants_from_log_series(log_chi_series(model, max_order))


def finite_difference_cumulants(model: FcsModel, orders=(2, 4), step=1e-2):
    """Cumulants from central differences of ``log chi`` at 0.

    Uses the ``m``-th central difference with steps ``step`` and ``step/2``
    and one Richardson extrapolation.  Cross-check only: unreliable beyond
    order ~6.
    """

    def central(m, h):
        k = np.arange(m + 1)
        binom = np.array([math.comb(m, int(j)) for j in k])
        pts = (m / 2.0 - k) * h
        vals = log_chi(model, pts)
        return np.sum((-1.0) ** k * binom * vals) / h**m

    out = {}
    for m in orders:
        d = (4.0 * central(m, step / 2) - central(m, step)) / 3.0
        out[m] = float((d / (1j) ** m).real)
    return out
