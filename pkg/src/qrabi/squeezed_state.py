"""Squeezed coherent state amplitudes and photon-number distributions.

Everything that can overflow (Hermite values, factorials, powers of
``tanh(r)/2``) is accumulated as a sign plus a natural-log magnitude and
exponentiated once per Fock level.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

R_MIN = 1e-8
N_CAP = 4096
DEFAULT_EPS_TRUNC = 1e-12


class SqueezeDomainError(ValueError):
    """Raised for field parameters outside the physical domain."""


class TruncationError(RuntimeError):
    """Raised when the Fock cap is hit before the requested mass is retained."""

    def __init__(self, message: str, achieved_mass: float, n_max: int):
        super().__init__(message)
        self.achieved_mass = achieved_mass
        self.n_max = n_max


@dataclass(frozen=True)
class SqueezeSpec:
    alpha: float
    r: float
    theta: float = 0.0

    def __post_init__(self):
        if not math.isfinite(self.alpha):
            raise SqueezeDomainError(f"alpha must be finite, got {self.alpha}")
        if not (math.isfinite(self.r) and self.r >= 0):
            raise SqueezeDomainError(f"squeeze parameter must be >= 0, got {self.r}")
        if self.theta != 0:
            raise SqueezeDomainError("squeeze phase unsupported: theta must be 0")

    @property
    def intensity(self) -> float:
        return intensity(self.alpha, self.r)

    @property
    def variance(self) -> float:
        """Photon-number variance of the theta=0 state (amplitude squeezed)."""
        sh2 = math.sinh(self.r) ** 2
        return self.alpha**2 * math.exp(-2 * self.r) + 2 * sh2 * (1 + sh2)


@dataclass(frozen=True)
class LogScaledValue:
    """``sign * exp(log_magnitude)``; zero is ``sign == 0`` with ``-inf``."""

    sign: int
    log_magnitude: float

    @classmethod
    def from_float(cls, x: float) -> "LogScaledValue":
        if x == 0:
            return cls(0, -math.inf)
        return cls(1 if x > 0 else -1, math.log(abs(x)))

    @property
    def value(self) -> float:
        if self.sign == 0:
            return 0.0
        return self.sign * math.exp(self.log_magnitude)


@dataclass(frozen=True)
class PhotonDistribution:
    spec: SqueezeSpec
    amplitudes: np.ndarray = field(repr=False)
    probs: np.ndarray = field(repr=False)
    n_max: int
    tail_mass: float

    @property
    def n(self) -> np.ndarray:
        return np.arange(self.n_max + 1)


def intensity(alpha: float, r: float) -> float:
    return alpha * alpha + math.sinh(r) ** 2


def coherent_amplitude_for_intensity(intensity: float, r: float) -> float:
    """Real coherent amplitude giving mean photon number ``intensity`` at squeeze ``r``."""
    squeeze_photons = math.sinh(r) ** 2
    if intensity < squeeze_photons:
        raise SqueezeDomainError(
            f"squeeze photons exceed target intensity: sinh^2({r}) = "
            f"{squeeze_photons:.6g} > {intensity}"
        )
    return math.sqrt(intensity - squeeze_photons)


# Rescale whenever the running Hermite values leave [2**-600, 2**600].
_RESCALE_HI = 2.0**600
_RESCALE_LO = 2.0**-600
_LN2 = math.log(2.0)


def hermite_log_scaled_sequence(n_max: int, x: float) -> tuple[np.ndarray, np.ndarray]:
    """Signs and log-magnitudes of the physicists' H_0(x) ... H_{n_max}(x).

    Forward three-term recurrence; both carried values are rescaled by the
    same power of two (exact in binary) whenever they drift out of range.
    """
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    signs = np.zeros(n_max + 1, dtype=np.int8)
    logs = np.full(n_max + 1, -math.inf)
    signs[0], logs[0] = 1, 0.0
    if n_max == 0:
        return signs, logs

    h_prev, h_curr = 1.0, 2.0 * x
    exp2 = 0  # common binary exponent of h_prev and h_curr
    for k in range(1, n_max + 1):
        if k > 1:
            h_prev, h_curr = h_curr, 2.0 * x * h_curr - 2.0 * (k - 1) * h_prev
        big = max(abs(h_prev), abs(h_curr))
        if big > _RESCALE_HI or (0 < big < _RESCALE_LO):
            shift = math.frexp(big)[1]
            h_prev = math.ldexp(h_prev, -shift)
            h_curr = math.ldexp(h_curr, -shift)
            exp2 += shift
        if h_curr != 0.0:
            signs[k] = 1 if h_curr > 0 else -1
            logs[k] = math.log(abs(h_curr)) + exp2 * _LN2
    return signs, logs


def hermite_log_scaled(n: int, x: float) -> LogScaledValue:
    """H_n(x) as a :class:`LogScaledValue`."""
    signs, logs = hermite_log_scaled_sequence(n, x)
    return LogScaledValue(int(signs[n]), float(logs[n]))


def _log_amplitudes(n_max: int, spec: SqueezeSpec) -> tuple[np.ndarray, np.ndarray]:
    n = np.arange(n_max + 1)
    log_fact = np.array([math.lgamma(k + 1) for k in range(n_max + 1)])
    alpha, r = spec.alpha, spec.r
    if r < R_MIN:
        # coherent limit, avoids the 1/sqrt(sinh 2r) singularity
        if alpha == 0:
            signs = (n == 0).astype(np.int8)
            logs = np.where(n == 0, 0.0, -math.inf)
            return signs, logs
        signs = np.where((alpha < 0) & (n % 2 == 1), -1, 1).astype(np.int8)
        logs = -0.5 * alpha * alpha + n * math.log(abs(alpha)) - 0.5 * log_fact
        return signs, logs

    th = math.tanh(r)
    x = alpha * math.exp(r) / math.sqrt(math.sinh(2 * r))
    h_signs, h_logs = hermite_log_scaled_sequence(n_max, x)
    log_prefactor = -0.5 * math.log(math.cosh(r)) - 0.5 * alpha * alpha * (1 + th)
    with np.errstate(invalid="ignore"):
        logs = log_prefactor + 0.5 * n * math.log(0.5 * th) - 0.5 * log_fact + h_logs
    logs = np.where(h_signs == 0, -math.inf, logs)
    return h_signs, logs


def amplitude(n: int, spec: SqueezeSpec) -> float:
    """Fock amplitude <n|alpha, r> (real for theta = 0)."""
    signs, logs = _log_amplitudes(n, spec)
    return float(LogScaledValue(int(signs[n]), float(logs[n])).value)


def minimum_cutoff(spec: SqueezeSpec) -> int:
    mean = spec.intensity
    floor = math.ceil(mean + 10 * math.sqrt(mean) + 20)
    spread = math.ceil(mean + 10 * math.sqrt(spec.variance))
    return max(floor, spread)


def photon_number_distribution(
    spec: SqueezeSpec, eps_trunc: float = DEFAULT_EPS_TRUNC
) -> PhotonDistribution:
    """Truncated P_n = |<n|alpha, r>|^2 retaining at least ``1 - eps_trunc`` of the mass."""
    if not (0 < eps_trunc <= 1e-6):
        raise ValueError(f"eps_trunc must be in (0, 1e-6], got {eps_trunc}")
    n_min = min(minimum_cutoff(spec), N_CAP)

    # The Hermite recurrence is sequential anyway, so evaluate the whole capped
    # range in one pass and cut it afterwards.
    signs, logs = _log_amplitudes(N_CAP, spec)
    amps = np.where(signs == 0, 0.0, signs * np.exp(logs))
    probs = amps * amps
    cumulative = np.cumsum(probs)
    reached = np.nonzero(cumulative >= 1.0 - eps_trunc)[0]
    reached = reached[reached >= n_min]
    if reached.size == 0:
        raise TruncationError(
            f"retained mass {math.fsum(probs):.15g} < 1 - {eps_trunc} at N_CAP={N_CAP}",
            achieved_mass=math.fsum(probs),
            n_max=N_CAP,
        )
    n_max = int(reached[0])
    amps = amps[: n_max + 1].copy()
    probs = probs[: n_max + 1].copy()
    amps.flags.writeable = False
    probs.flags.writeable = False
    tail = max(0.0, 1.0 - math.fsum(probs))
    return PhotonDistribution(spec, amps, probs, n_max, tail)


def moments(dist: PhotonDistribution) -> tuple[float, float]:
    """Mean and variance of the retained photon-number distribution."""
    n = dist.n.astype(float)
    mean = math.fsum(n * dist.probs)
    second = math.fsum(n * n * dist.probs)
    return mean, second - mean * mean
