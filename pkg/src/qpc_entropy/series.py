"""Exact kernels: truncated power series, Bernoulli numbers, entropy coefficients.

Everything in here is a pure function of its arguments.  ``FormalSeries``
objects are immutable; arithmetic returns new objects.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Mapping, Sequence

import numpy as np
from scipy import integrate, special

from .errors import DomainError, NumericalError

DEFAULT_ORDER = 20
BERNOULLI_TABLE_MAX = 32


# ---------------------------------------------------------------------------
# Formal power series
# ---------------------------------------------------------------------------


def _frozen(arr):
    arr = np.array(arr, dtype=complex)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class FormalSeries:
    """Power series ``sum_k c_k x^k`` truncated after ``x**max_order``.

    Coefficients may be complex.  Terms beyond ``max_order`` are dropped by
    every operation and never folded back into lower orders.  Binary
    operations between series of different ``max_order`` raise instead of
    silently truncating to the smaller order.
    """

    coeffs: np.ndarray
    max_order: int = DEFAULT_ORDER

    def __post_init__(self):
        if self.max_order < 2:
            raise DomainError("max_order must be >= 2")
        c = np.zeros(self.max_order + 1, dtype=complex)
        src = np.asarray(self.coeffs, dtype=complex).ravel()
        n = min(src.size, self.max_order + 1)
        c[:n] = src[:n]
        object.__setattr__(self, "coeffs", _frozen(c))

    # constructors ---------------------------------------------------------

    @classmethod
    def constant(cls, value, max_order=DEFAULT_ORDER):
        return cls([value], max_order)

    @classmethod
    def variable(cls, max_order=DEFAULT_ORDER):
        """The expansion variable ``x`` itself."""
        return cls([0.0, 1.0], max_order)

    # helpers ----------------------------------------------------------------

    def _check(self, other):
        if isinstance(other, FormalSeries):
            if other.max_order != self.max_order:
                raise DomainError(
                    f"series order mismatch: {self.max_order} vs {other.max_order}"
                )
            return other
        if np.isscalar(other):
            return FormalSeries.constant(other, self.max_order)
        return NotImplemented

    def __getitem__(self, k):
        return self.coeffs[k]

    def __len__(self):
        return self.max_order + 1

    def __repr__(self):
        nz = [f"{c:.6g}*x^{k}" for k, c in enumerate(self.coeffs) if c != 0]
        return f"FormalSeries({' + '.join(nz) or '0'}; order {self.max_order})"

    def allclose(self, other, atol=1e-12):
        other = self._check(other)
        return bool(np.allclose(self.coeffs, other.coeffs, rtol=0, atol=atol))

    # ring operations ----------------------------------------------------------

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return FormalSeries(self.coeffs + other.coeffs, self.max_order)

    __radd__ = __add__

    def __neg__(self):
        return FormalSeries(-self.coeffs, self.max_order)

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return FormalSeries(self.coeffs - other.coeffs, self.max_order)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if np.isscalar(other):
            return FormalSeries(self.coeffs * other, self.max_order)
        other = self._check(other)
        if other is NotImplemented:
            return other
        prod = np.convolve(self.coeffs, other.coeffs)[: self.max_order + 1]
        return FormalSeries(prod, self.max_order)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if np.isscalar(other):
            return FormalSeries(self.coeffs / other, self.max_order)
        other = self._check(other)
        return self * other.reciprocal()

    def reciprocal(self):
        a = self.coeffs
        if a[0] == 0:
            raise DomainError("reciprocal of a series with zero constant term")
        b = np.zeros_like(a)
        b[0] = 1.0 / a[0]
        for m in range(1, self.max_order + 1):
            b[m] = -np.dot(a[1 : m + 1], b[m - 1 :: -1][:m]) / a[0]
        return FormalSeries(b, self.max_order)

    # calculus -----------------------------------------------------------------

    def derivative(self):
        k = np.arange(1, self.max_order + 1)
        return FormalSeries(self.coeffs[1:] * k, self.max_order)

    def integral(self, constant=0.0):
        k = np.arange(1, self.max_order + 1)
        c = np.concatenate([[constant], self.coeffs[:-1] / k])
        return FormalSeries(c, self.max_order)

    def compose(self, inner: "FormalSeries"):
        """Return ``self(inner(x))``; ``inner`` must have zero constant term."""
        inner = self._check(inner)
        if abs(inner.coeffs[0]) != 0:
            raise DomainError("composition requires inner series with zero constant term")
        out = FormalSeries.constant(self.coeffs[-1], self.max_order)
        for c in self.coeffs[-2::-1]:
            out = out * inner + c
        return out

    # elementary functions -----------------------------------------------------

    def exp(self):
        # E' = f' E  =>  m e_m = sum_{k=1}^m k f_k e_{m-k}
        f = self.coeffs
        e = np.zeros_like(f)
        e[0] = np.exp(f[0])
        k = np.arange(1, self.max_order + 1)
        kf = k * f[1:]
        for m in range(1, self.max_order + 1):
            e[m] = np.dot(kf[:m], e[m - 1 :: -1][:m]) / m
        return FormalSeries(e, self.max_order)

    def log(self):
        # L' = s'/s  =>  m s0 l_m = m s_m - sum_{k=1}^{m-1} k l_k s_{m-k}
        s = self.coeffs
        if s[0] == 0:
            raise DomainError("log of a series with zero constant term")
        lg = np.zeros_like(s)
        lg[0] = np.log(s[0])
        for m in range(1, self.max_order + 1):
            k = np.arange(1, m)
            acc = np.dot(k * lg[1:m], s[m - 1 : 0 : -1]) if m > 1 else 0.0
            lg[m] = (m * s[m] - acc) / (m * s[0])
        return FormalSeries(lg, self.max_order)

    def power(self, exponent):
        """``self**exponent`` on the principal branch of the constant term."""
        return (self.log() * exponent).exp()

    def sqrt(self):
        return self.power(0.5)

    def sin(self):
        a, b = (self * 1j).exp(), (self * -1j).exp()
        return (a - b) / 2j

    def cos(self):
        a, b = (self * 1j).exp(), (self * -1j).exp()
        return (a + b) / 2

    def arcsin(self):
        # arcsin(f)' = f' / sqrt(1 - f^2)
        f0 = self.coeffs[0]
        if abs(f0) >= 1:
            raise DomainError("arcsin expansion requires |constant term| < 1")
        d = self.derivative() * (1 - self * self).power(-0.5)
        return d.integral(np.arcsin(f0))


def exp_series(max_order=DEFAULT_ORDER, scale=1.0):
    """Series of ``exp(scale * x)``."""
    k = np.arange(max_order + 1)
    return FormalSeries(scale**k / special.factorial(k), max_order)


# ---------------------------------------------------------------------------
# Bernoulli numbers
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _bernoulli_list(n):
    B = [Fraction(1)]
    for m in range(1, n + 1):
        acc = sum(math.comb(m + 1, k) * B[k] for k in range(m))
        B.append(-acc / (m + 1))
    return tuple(B)


def bernoulli(m: int) -> Fraction:
    """Exact Bernoulli number ``B_m`` (convention ``B_1 = -1/2``)."""
    if m < 0:
        raise DomainError("bernoulli index must be >= 0")
    n = max(m, BERNOULLI_TABLE_MAX)
    return _bernoulli_list(n)[m]


@dataclass(frozen=True)
class BernoulliTable:
    """Exact even-index Bernoulli numbers up to ``max_index``."""

    max_index: int = BERNOULLI_TABLE_MAX
    values: Mapping[int, Fraction] = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(
            self, "values", {m: bernoulli(m) for m in range(0, self.max_index + 1, 2)}
        )

    def __getitem__(self, m):
        if m % 2 and m >= 3:
            return Fraction(0)
        return self.values[m] if m in self.values else bernoulli(m)

    def as_float(self, m):
        return float(self[m])


# ---------------------------------------------------------------------------
# Entropy kernel and series coefficients
# ---------------------------------------------------------------------------


def binary_entropy(z):
    """``-z ln z - (1-z) ln(1-z)`` in nats, with ``0 ln 0 = 0``.

    Accepts scalars or arrays.  Values outside ``[0, 1]`` by more than 1e-12
    raise ``DomainError``; smaller excursions are clamped.
    """
    z = np.asarray(z, dtype=float)
    if np.any(z < -1e-12) or np.any(z > 1 + 1e-12):
        raise DomainError("binary_entropy argument outside [0, 1]")
    z = np.clip(z, 0.0, 1.0)
    h = special.entr(z) + special.entr(1.0 - z)
    return float(h) if h.ndim == 0 else h


def alpha_closed_form(m: int) -> float:
    """Weight of ``C_m / m!`` in the entropy series: ``(2 pi)^m |B_m|`` or 0."""
    if m < 1:
        raise DomainError("alpha index must be >= 1")
    if m % 2:
        return 0.0
    return float((2 * math.pi) ** m * abs(bernoulli(m)))


ALPHA_CUTOFF = 21.0  # sech^2(21) ~ 2e-18


def _alpha_cutoff(m):
    # the integrand grows like |u|^(m+1) sech^2(u); push the cutoff out until
    # that envelope is below 1e-18
    u = ALPHA_CUTOFF
    while (m + 1) * math.log(u) + math.log(4.0) - 2.0 * u > math.log(1e-18):
        u += 1.0
    return u


def alpha_via_integral(m: int, tol: float = 1e-8) -> float:
    """Entropy-series weight by quadrature of its integral representation.

    ``alpha_m = ((-2)^m / pi) * int u sech^2(u) Im (i pi/2 + u)^m du`` over
    the real line, truncated where the envelope ``|u|^(m+1) sech^2(u)`` drops below 1e-18
    (never closer than ``|u| = 21``).
    """
    if m < 2:
        raise DomainError("alpha_via_integral requires m >= 2")
    shift = 0.5j * math.pi

    def integrand(u):
        return u / math.cosh(u) ** 2 * ((u + shift) ** m).imag

    cut = _alpha_cutoff(m)
    pieces = [
        integrate.quad(integrand, a, b, epsabs=tol * 1e-3, epsrel=1e-13, limit=400)
        for a, b in ((-cut, 0.0), (0.0, cut))
    ]
    value = sum(p[0] for p in pieces)
    err = sum(p[1] for p in pieces)
    prefactor = (-2.0) ** m / math.pi
    achieved = abs(prefactor) * err
    if achieved > max(tol, 1e-10 * abs(prefactor * value)):
        raise NumericalError(
            f"alpha_via_integral({m}) did not converge", achieved=achieved
        )
    return prefactor * value


# ---------------------------------------------------------------------------
# Cumulants
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class CountingStatistics:
    """Cumulants ``C_1 .. C_M`` of transferred charge (units of one electron)."""

    cumulants: np.ndarray

    def __post_init__(self):
        c = np.array(self.cumulants, dtype=float).ravel()
        if c.size < 1:
            raise DomainError("need at least one cumulant")
        if c.size >= 2 and c[1] < -1e-12:
            raise DomainError(f"negative variance C2 = {c[1]}")
        c.setflags(write=False)
        object.__setattr__(self, "cumulants", c)

    @classmethod
    def from_mapping(cls, values: Mapping[int, float], max_order: int):
        c = np.zeros(max_order)
        for m, v in values.items():
            if not 1 <= m <= max_order:
                raise DomainError(f"cumulant index {m} outside 1..{max_order}")
            c[m - 1] = v
        return cls(c)

    @property
    def max_order(self) -> int:
        return self.cumulants.size

    def __getitem__(self, m: int) -> float:
        """Cumulant ``C_m`` (1-based)."""
        if not 1 <= m <= self.max_order:
            raise IndexError(m)
        return float(self.cumulants[m - 1])

    def __add__(self, other):
        if other.max_order != self.max_order:
            raise DomainError("cumulant vectors of different length")
        return CountingStatistics(self.cumulants + other.cumulants)

    def as_dict(self):
        return {m: self[m] for m in range(1, self.max_order + 1)}


def cumulants_from_log_series(s: FormalSeries, imag_tol: float = 1e-12) -> CountingStatistics:
    """Read cumulants off ``log chi(lambda)`` expanded in ``lambda``.

    ``log chi = sum (i lambda)^m C_m / m!`` so ``C_m = m! c_m / i^m``.
    """
    c = s.coeffs
    if abs(c[0]) > imag_tol:
        raise DomainError("log chi series must vanish at lambda = 0")
    m = np.arange(1, s.max_order + 1)
    raw = special.factorial(m) * c[1:] / (1j) ** m
    scale = np.maximum(1.0, np.abs(raw))
    if np.any(np.abs(raw.imag) > imag_tol * scale):
        worst = int(np.argmax(np.abs(raw.imag) / scale)) + 1
        raise DomainError(f"cumulant C_{worst} has imaginary residue {raw[worst - 1].imag:.3e}")
    return CountingStatistics(raw.real)


def bernoulli_log_chi_series(z: float, max_order: int = DEFAULT_ORDER) -> FormalSeries:
    """``log(1 - z + z e^{i lambda})`` as a series in ``lambda``."""
    e = exp_series(max_order, scale=1j)
    return ((e - 1.0) * z + 1.0).log()
