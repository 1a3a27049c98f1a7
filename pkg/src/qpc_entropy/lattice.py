"""Exact free-fermion simulation of a switched point contact.

Two open tight-binding chains of ``L`` sites each (the left lead occupies
sites ``0..L-1``) are joined by a single bond of strength ``J_c`` while the
contact is open.  The initial state is the half-filled ground state of the
disconnected chains, so the initial entanglement is exactly zero.

Natural units: hbar = 1, lattice spacing 1, Fermi velocity ``2 J``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from pathlib import Path
from typing import Optional

import numpy as np
import scipy.linalg as sla

from .errors import ConfigError, DataIntegrityError, DomainError
from .models import BernoulliSet, model_cumulants
from .series import CountingStatistics, binary_entropy

EIG_TOL = 1e-10
SNAP_TOL = 1e-12  # round-off floor of eigvalsh on these matrices
INTERIOR_DELTA = 1e-6


@dataclass(frozen=True)
class LatticeConfig:
    L: int
    J: float = 1.0
    J_c: float = 1.0
    intervals: tuple = ()
    times: tuple = ()
    max_order: int = 8
    dump_eigenvalues: bool = False

    def __post_init__(self):
        if self.L < 2 or self.L % 2:
            raise ConfigError("must be an even integer >= 2", field="L")
        if not self.J > 0:
            raise ConfigError("must be positive", field="J")
        if not 0.0 <= self.J_c <= self.J:
            raise ConfigError("must satisfy 0 <= J_c <= J", field="J_c")
        iv = tuple((float(a), float(b)) for a, b in self.intervals)
        flat = [t for p in iv for t in p]
        if flat and (flat[0] < 0 or any(b <= a for a, b in zip(flat[:-1], flat[1:]))):
            raise ConfigError("switching times must be >= 0 and strictly increasing", field="intervals")
        ts = tuple(float(t) for t in self.times)
        if any(t < 0 for t in ts) or any(b <= a for a, b in zip(ts[:-1], ts[1:])):
            raise ConfigError("must be non-negative and strictly increasing", field="times")
        if self.max_order % 2 or not 2 <= self.max_order <= 20:
            raise ConfigError("must be even, between 2 and 20", field="max_order")
        object.__setattr__(self, "intervals", iv)
        object.__setattr__(self, "times", ts)

    @property
    def fermi_velocity(self):
        return 2.0 * self.J

    @property
    def horizon(self):
        """Latest contact time free of reflections from the outer chain ends."""
        return self.L / self.fermi_velocity

    @property
    def bond_ratio(self):
        return self.J_c / self.J

    @classmethod
    def from_dict(cls, data):
        data = dict(data)
        if "r" in data:
            if "J_c" in data:
                raise ConfigError("give either r or J_c, not both", field="r")
            data["J_c"] = float(data.pop("r")) * float(data.get("J", 1.0))
        known = {f for f in cls.__dataclass_fields__}
        extra = set(data) - known
        if extra:
            raise ConfigError(f"unknown keys {sorted(extra)}", field=sorted(extra)[0])
        if "L" not in data:
            raise ConfigError("missing key", field="L")
        try:
            return cls(**data)
        except TypeError as exc:
            raise ConfigError(str(exc)) from None

    @classmethod
    def load(cls, path):
        with open(Path(path)) as fh:
            return cls.from_dict(json.load(fh))


# ---------------------------------------------------------------------------
# Hamiltonians and projectors
# ---------------------------------------------------------------------------


def hamiltonian(L: int, J: float, J_c: float) -> np.ndarray:
    """Single-particle hopping matrix on ``2L`` sites, contact bond ``J_c``."""
    N = 2 * L
    H = np.zeros((N, N))
    idx = np.arange(N - 1)
    H[idx, idx + 1] = H[idx + 1, idx] = -J
    H[L - 1, L] = H[L, L - 1] = -J_c
    return H


@lru_cache(maxsize=32)
def _eigensystem(L, J, J_c):
    return np.linalg.eigh(hamiltonian(L, J, J_c))


def ground_state_projector(L: int, J: float = 1.0) -> np.ndarray:
    """Fermi projector (E_F = 0) of the two disconnected half-filled chains."""
    if L < 2 or L % 2:
        raise DomainError("L must be an even integer >= 2")
    E, V = _eigensystem(L, J, 0.0)
    occ = V[:, E < 0]
    return occ @ occ.T.conj()


def _propagator(L, J, J_c, dt):
    E, V = _eigensystem(L, J, J_c)
    return (V * np.exp(-1j * E * dt)) @ V.T.conj()


def _segments(intervals, t):
    """Piecewise-constant ``(is_on, duration)`` segments covering ``[0, t]``."""
    segs = []
    now = 0.0
    for a, b in intervals:
        if a >= t:
            break
        if a > now:
            segs.append((False, a - now))
        end = min(b, t)
        segs.append((True, end - a))
        now = end
    if t > now:
        segs.append((False, t - now))
    return segs


@dataclass(frozen=True, eq=False)
class Evolution:
    n_U: np.ndarray
    U: np.ndarray
    contact_time: float  # latest instant the contact was open
    beyond_horizon: bool


def evolve_projector(n: np.ndarray, config: LatticeConfig, t: float) -> Evolution:
    """``U n U^dagger`` for the protocol up to time ``t``.

    ``U`` is the ordered product of exact segment exponentials.
    """
    if t < 0:
        raise DomainError("time must be non-negative")
    N = 2 * config.L
    U = np.eye(N, dtype=complex)
    contact_time = 0.0
    now = 0.0
    for on, dt in _segments(config.intervals, t):
        Jc = config.J_c if on else 0.0
        U = _propagator(config.L, config.J, Jc, dt) @ U
        now += dt
        if on:
            contact_time = now
    n_U = U @ n @ U.T.conj()
    return Evolution(n_U, U, contact_time, contact_time > config.horizon)


# ---------------------------------------------------------------------------
# Correlation matrix and entropy
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class CorrelationMatrix:
    """``M = P_L n_U P_L`` restricted to the left-lead sites."""

    entries: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.entries, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DomainError("correlation matrix must be square")
        dev = np.max(np.abs(m - m.T.conj())) if m.size else 0.0
        if dev > 1e-12:
            raise DataIntegrityError(f"correlation matrix not Hermitian (deviation {dev:.2e})")
        m = 0.5 * (m + m.T.conj())
        m.setflags(write=False)
        object.__setattr__(self, "entries", m)

    @classmethod
    def from_projector(cls, n_U, L):
        return cls(np.asarray(n_U)[:L, :L])

    @property
    def dim(self):
        return self.entries.shape[0]

    @cached_property
    def eigenvalues(self):
        z = np.linalg.eigvalsh(self.entries)
        if z.size and (z.min() < -EIG_TOL or z.max() > 1 + EIG_TOL):
            raise DataIntegrityError(
                f"eigenvalues outside [0, 1]: min {z.min():.3e}, max {z.max():.3e}"
            )
        z = np.clip(z, 0.0, 1.0)
        z[z < SNAP_TOL] = 0.0
        z[z > 1.0 - SNAP_TOL] = 1.0
        z.setflags(write=False)
        return z

    def interior(self, delta=INTERIOR_DELTA):
        z = self.eigenvalues
        return z[(z > delta) & (z < 1 - delta)]


def entropy_eig(M: CorrelationMatrix) -> float:
    """``sum_j h(z_j)`` over the eigenvalues of ``M``, in nats."""
    return float(np.sum(binary_entropy(M.eigenvalues)))


def entropy_matrix_function(M: CorrelationMatrix, eps: float = 1e-13) -> float:
    """Same entropy via matrix logarithms, ``-Tr[M ln M + (1-M) ln(1-M)]``.

    Independent of ``entropy_eig`` (Schur-based ``logm``); ``eps`` regularizes
    the zero eigenvalues and biases the result by roughly ``dim * eps``.
    """
    m = M.entries
    eye = np.eye(M.dim)
    t = m @ sla.logm(m + eps * eye) + (eye - m) @ sla.logm(eye - m + eps * eye)
    return float(-np.trace(t).real)


# ---------------------------------------------------------------------------
# Counting statistics
# ---------------------------------------------------------------------------


def left_projector_phase(n: np.ndarray, L: int) -> float:
    """``Tr(n P_L)``: initial number of particles in the left lead."""
    return float(np.trace(n[:L, :L]).real)


def fcs_determinant(n: np.ndarray, U: np.ndarray, lam: float) -> complex:
    """``det(1 - n + n U^dag e^{i lam P_L} U e^{-i lam P_L})`` by LU.

    The left lead is the first half of the basis.
    """
    N = n.shape[0]
    L = N // 2
    phase = np.ones(N, dtype=complex)
    phase[:L] = np.exp(1j * lam)
    # U^dag diag(phase) U diag(conj(phase))
    R = (U.T.conj() * phase) @ U * phase.conj()
    A = np.eye(N) - n + n @ R
    return complex(np.linalg.det(A))


def chi_from_M(M: CorrelationMatrix, charge_offset: float, lam: float) -> complex:
    """``e^{-i lam q} prod_j (1 - z_j + z_j e^{i lam})``."""
    z = M.eigenvalues
    factors = 1.0 - z + z * np.exp(1j * lam)
    return complex(np.exp(-1j * lam * charge_offset) * np.prod(factors))


def cumulants_from_M(M: CorrelationMatrix, charge_offset: float, max_order: int = 8) -> CountingStatistics:
    """Cumulants of transferred charge; ``C_1 = Tr M - charge_offset``."""
    return model_cumulants(BernoulliSet(M.eigenvalues, charge_offset), max_order)


def bond_transmission(r: float) -> float:
    """Fermi-level transmission ``4 r^2 / (1 + r^2)^2`` of a weak bond ``r = J_c/J``."""
    if not 0.0 <= r <= 1.0:
        raise DomainError("bond ratio must lie in [0, 1]")
    return 4 * r * r / (1 + r * r) ** 2


def eigenvalue_histogram(M, bins: int = 50, delta: float = INTERIOR_DELTA):
    """Count density of interior eigenvalues on ``bins`` equal bins of (0, 1).

    Returns ``(edges, density)`` where ``density * bin_width`` are counts.
    """
    if bins < 20:
        raise DomainError("need at least 20 bins")
    z = M.interior(delta) if isinstance(M, CorrelationMatrix) else np.asarray(M)
    counts, edges = np.histogram(z, bins=bins, range=(0.0, 1.0))
    return edges, counts / np.diff(edges)


# ---------------------------------------------------------------------------
# Protocol runs
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class TimePoint:
    t: float
    entropy: float
    cumulants: CountingStatistics
    eigenvalues: np.ndarray
    beyond_horizon: bool

    def record(self, with_eigenvalues=False):
        row = {"t": self.t, "S": self.entropy}
        for m in range(1, self.cumulants.max_order + 1):
            row[f"C{m}"] = self.cumulants[m]
        row["beyond_horizon"] = int(self.beyond_horizon)
        if with_eigenvalues:
            row["eigenvalues"] = " ".join(f"{z:.12g}" for z in self.eigenvalues)
        return row


def evaluate(config: LatticeConfig, t: float, n: Optional[np.ndarray] = None) -> TimePoint:
    if n is None:
        n = ground_state_projector(config.L, config.J)
    ev = evolve_projector(n, config, t)
    M = CorrelationMatrix.from_projector(ev.n_U, config.L)
    q = left_projector_phase(n, config.L)
    return TimePoint(
        t=t,
        entropy=entropy_eig(M),
        cumulants=cumulants_from_M(M, q, config.max_order),
        eigenvalues=M.eigenvalues,
        beyond_horizon=ev.beyond_horizon,
    )


def run_protocol(config: LatticeConfig):
    """Evaluate every time in ``config.times``; rows in time order."""
    n = ground_state_projector(config.L, config.J)
    return [evaluate(config, t, n) for t in config.times]


def single_switch(L: int, durations, J: float = 1.0, J_c: Optional[float] = None, max_order: int = 8):
    """Contact open on ``[0, d]``, evaluated at ``t = d`` for each duration."""
    durations = tuple(float(d) for d in durations)
    cfg = LatticeConfig(
        L=L, J=J, J_c=J if J_c is None else J_c,
        intervals=((0.0, max(durations)),), times=durations, max_order=max_order,
    )
    return run_protocol(cfg)


def fit_log_slope(t, y):
    """Least-squares ``y = slope * ln t + intercept``; returns (slope, intercept)."""
    slope, intercept = np.polyfit(np.log(np.asarray(t, dtype=float)), np.asarray(y, dtype=float), 1)
    return float(slope), float(intercept)
