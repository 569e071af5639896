"""Mandel Q, population inversion, atomic entropy and revival diagnostics."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from . import dynamics
from .dynamics import BlochVector, CouplingConfig, Model
from .squeezed_state import PhotonDistribution


class UndefinedMandelError(ValueError):
    """Mean excitation number is zero, so Q is 0/0."""


class Statistics(str, enum.Enum):
    SUB = "sub"
    SUPER = "super"


@dataclass(frozen=True)
class TimeSeries:
    taus: np.ndarray
    values: np.ndarray
    label: str

    def __post_init__(self):
        taus = np.asarray(self.taus, dtype=float)
        values = np.asarray(self.values, dtype=float)
        if taus.shape != values.shape or taus.ndim != 1:
            raise ValueError("taus and values must be 1-d arrays of equal length")
        if taus.size > 1 and not np.all(np.diff(taus) > 0):
            raise ValueError("taus must be strictly increasing")
        if not np.all(np.isfinite(values)):
            raise ValueError(f"non-finite values in series {self.label!r}")
        object.__setattr__(self, "taus", taus)
        object.__setattr__(self, "values", values)

    def __len__(self):
        return self.taus.size


@dataclass(frozen=True)
class MandelSample:
    tau: float
    mean: float
    variance: float
    q: float


def _mandel_moments(p: np.ndarray, kind: Model):
    p = np.asarray(p, dtype=float)
    eta = np.arange(p.shape[-1], dtype=float)
    if Model(kind) is Model.AJC:
        eta = eta + 1.0
    # numpy reduces the contiguous last axis pairwise, so the result does not
    # depend on how the time axis is chunked
    mean = np.sum(eta * p, axis=-1)
    second = np.sum(eta * eta * p, axis=-1)
    return mean, second - mean * mean


def mandel_q(p, kind: Model, tau: float = 0.0) -> MandelSample:
    """Q = Var(eta)/<eta> - 1 with eta = a^dag a (JC) or a a^dag (AJC)."""
    mean, var = _mandel_moments(p, kind)
    mean, var = float(mean), float(var)
    if mean <= 1e-15:
        raise UndefinedMandelError(f"mean excitation {mean:g} too small for Mandel Q")
    return MandelSample(tau, mean, var, var / mean - 1.0)


def mandel_q_values(p: np.ndarray, kind: Model) -> np.ndarray:
    """Vectorised Q over a leading time axis of ``p``."""
    mean, var = _mandel_moments(p, kind)
    if np.any(mean <= 1e-15):
        raise UndefinedMandelError("mean excitation vanishes on part of the grid")
    return var / mean - 1.0


def inversion(dist: PhotonDistribution, cfg: CouplingConfig, tau) -> float:
    """W(tau) = <sigma_z>, the z component of the Bloch vector."""
    _, _, rz = dynamics.bloch_components(dist, cfg, tau)
    return float(rz) if np.ndim(rz) == 0 else rz


def binary_entropy_of_norm(norm):
    """Base-2 von Neumann entropy of a qubit with Bloch length ``norm``."""
    r = np.clip(np.asarray(norm, dtype=float), 0.0, 1.0)
    eta1 = 0.5 * (1.0 - r)
    eta2 = 0.5 * (1.0 + r)
    with np.errstate(divide="ignore", invalid="ignore"):
        h1 = np.where(eta1 > 0, -eta1 * np.log2(eta1), 0.0)
        h2 = np.where(eta2 > 0, -eta2 * np.log2(eta2), 0.0)
    out = h1 + h2
    return float(out) if out.ndim == 0 else out


def entropy(b: BlochVector) -> float:
    return binary_entropy_of_norm(b.norm)


def revival_time(intensity: float) -> float:
    if intensity <= 0:
        raise ValueError("intensity must be positive")
    return 2 * math.pi * math.sqrt(intensity)


def dominant_statistics(series: TimeSeries) -> Statistics:
    """``sub`` when more than half the samples have Q < 0, else ``super``."""
    if len(series) == 0:
        raise ValueError("empty series")
    frac = np.count_nonzero(series.values < 0) / len(series)
    return Statistics.SUB if frac > 0.5 else Statistics.SUPER


def inversion_envelope(series: TimeSeries, window: float = 2.0) -> np.ndarray:
    """Smooth upper envelope of |W|: running max, then running mean, over ``window``."""
    from scipy.ndimage import maximum_filter1d, uniform_filter1d

    dt = series.taus[1] - series.taus[0]
    width = max(1, int(round(window / dt)))
    env = maximum_filter1d(np.abs(series.values), size=width, mode="nearest")
    return uniform_filter1d(env, size=width, mode="nearest")


def revival_peak(series: TimeSeries, tau_min: float = 10.0, window: float = 2.0) -> float:
    """Time of the largest envelope value of |W| at tau >= ``tau_min``."""
    env = inversion_envelope(series, window)
    mask = series.taus >= tau_min
    if not np.any(mask):
        raise ValueError(f"no samples beyond tau_min={tau_min}")
    idx = np.flatnonzero(mask)[np.argmax(env[mask])]
    return float(series.taus[idx])


def nearest_local_minimum(series: TimeSeries, tau0: float) -> tuple[float, float]:
    """(tau, value) of the interior local minimum closest to ``tau0``."""
    v = series.values
    idx = np.flatnonzero((v[1:-1] <= v[:-2]) & (v[1:-1] <= v[2:])) + 1
    if idx.size == 0:
        raise ValueError("series has no interior local minimum")
    best = idx[np.argmin(np.abs(series.taus[idx] - tau0))]
    return float(series.taus[best]), float(v[best])


def observable_series(dist: PhotonDistribution, cfg: CouplingConfig, taus) -> dict[str, TimeSeries]:
    """Q, W, S_a and the Bloch components over a grid, chunked to bound memory."""
    taus = np.asarray(taus, dtype=float)
    out = {k: np.empty(taus.size) for k in ("mandel", "inversion", "entropy", "rx", "ry")}
    chunk = max(1, 2_000_000 // (dist.n_max + 2))
    for lo in range(0, taus.size, chunk):
        sl = slice(lo, lo + chunk)
        t = taus[sl]
        p = dynamics.reduced_field_diagonal(dist, cfg, t)
        rx, ry, rz = dynamics.bloch_components(dist, cfg, t)
        out["mandel"][sl] = mandel_q_values(p, cfg.kind)
        out["inversion"][sl] = rz
        out["entropy"][sl] = binary_entropy_of_norm(np.sqrt(rx * rx + ry * ry + rz * rz))
        out["rx"][sl] = rx
        out["ry"][sl] = ry
    return {k: TimeSeries(taus, v, k) for k, v in out.items()}
