"""Closed-form JC and AJC evolution from an initial |g> x squeezed coherent field.

Time is the scaled time ``tau = lambda * t``; every Rabi frequency below is
measured in units of lambda so the trigonometric arguments are ``R * tau``.
The JC dynamics live in the invariant blocks {|e,n>, |g,n+1>}, the AJC ones in
{|g,n>, |e,n+1>}. The constant ``-omega/2`` energy shift is a global phase and
is dropped.

All functions accept a scalar ``tau`` or a 1-d array of them; array input
yields arrays with a leading time axis.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .squeezed_state import PhotonDistribution


class Model(str, enum.Enum):
    JC = "JC"
    AJC = "AJC"


@dataclass(frozen=True)
class CouplingConfig:
    kind: Model
    beta: float = 0.0
    xi: float = 0.0
    lam: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "kind", Model(self.kind))
        if self.xi < 0:
            raise ValueError(f"xi must be >= 0, got {self.xi}")
        if self.lam <= 0:
            raise ValueError(f"lambda must be > 0, got {self.lam}")

    @property
    def delta(self) -> float:
        return self.beta * self.lam

    @property
    def omega(self) -> float:
        return self.xi * self.lam

    @property
    def delta_bar(self) -> float:
        return self.delta + 2 * self.omega

    @property
    def effective_detuning(self) -> float:
        """Dimensionless detuning entering the model's Rabi frequencies."""
        if self.kind is Model.JC:
            return self.beta
        return self.beta + 2 * self.xi


@dataclass(frozen=True)
class EvolvedJointState:
    """Amplitudes on |g,n> and |e,n>; both arrays have length ``n_max + 2``."""

    tau: float
    g_amp: np.ndarray
    e_amp: np.ndarray
    n_max: int

    @property
    def norm(self) -> float:
        return math.fsum(np.abs(self.g_amp) ** 2) + math.fsum(np.abs(self.e_amp) ** 2)


@dataclass(frozen=True)
class AtomDensity:
    rho_gg: float
    rho_ee: float
    rho_ge: complex  # <g|rho|e>

    @property
    def trace(self) -> float:
        return self.rho_gg + self.rho_ee

    @property
    def det(self) -> float:
        return self.rho_gg * self.rho_ee - abs(self.rho_ge) ** 2

    def matrix(self) -> np.ndarray:
        """2x2 matrix in the (|e>, |g>) basis."""
        return np.array(
            [[self.rho_ee, np.conj(self.rho_ge)], [self.rho_ge, self.rho_gg]], dtype=complex
        )


@dataclass(frozen=True)
class BlochVector:
    rx: float
    ry: float
    rz: float

    @property
    def norm(self) -> float:
        return math.sqrt(self.rx**2 + self.ry**2 + self.rz**2)


def rabi_frequency(n, cfg: CouplingConfig):
    """JC: (lam/2) sqrt(4n + beta^2); AJC: (lam/2) sqrt(4n + 4 + (beta + 2 xi)^2)."""
    n = np.asarray(n, dtype=float)
    d = cfg.effective_detuning
    shift = 0.0 if cfg.kind is Model.JC else 4.0
    out = 0.5 * cfg.lam * np.sqrt(4 * n + shift + d * d)
    return float(out) if out.ndim == 0 else out


def dressing_coefficients(n, cfg: CouplingConfig):
    """Dressed-state mixing (c, s) with c^2 + s^2 = 1.

    For JC at n = 0 and beta = 0 the ratio is 0/0; (0, 0) is returned since
    that term has zero Rabi frequency and never moves.
    """
    n = np.asarray(n, dtype=float)
    d = cfg.effective_detuning
    excitations = n if cfg.kind is Model.JC else n + 1
    root = np.sqrt(4 * excitations + d * d)
    with np.errstate(invalid="ignore", divide="ignore"):
        c = np.where(root > 0, d / root, 0.0)
        s = np.where(root > 0, 2 * np.sqrt(excitations) / root, 0.0)
    if c.ndim == 0:
        return float(c), float(s)
    return c, s


def _dressed_tables(dist: PhotonDistribution, cfg: CouplingConfig):
    """Per-level S, R, c, s over n = 0 .. n_max + 1 with S_{n_max+1} = 0."""
    n = np.arange(dist.n_max + 2)
    amps = np.zeros(dist.n_max + 2)
    amps[:-1] = dist.amplitudes
    R = rabi_frequency(n, cfg) / cfg.lam
    c, s = dressing_coefficients(n, cfg)
    return n, amps, R, c, s


def _taus(tau):
    t = np.asarray(tau, dtype=float)
    return t, t.ndim == 0


def evolve_amplitudes(dist: PhotonDistribution, cfg: CouplingConfig, tau):
    """Complex amplitude arrays (g, e), shape ``(..., n_max + 2)``."""
    t, _ = _taus(tau)
    t = t[..., None]
    n, S, R, c, s = _dressed_tables(dist, cfg)
    xi = cfg.xi
    cos_t = np.cos(R * t)
    sin_t = np.sin(R * t)
    ground = S * (cos_t + 1j * c * sin_t)
    if cfg.kind is Model.JC:
        g_amp = np.exp(-1j * n * xi * t) * ground
        # |e,n> is fed by |g,n+1>
        feed = S * s * sin_t
        e_amp = np.zeros_like(g_amp)
        e_amp[..., :-1] = -1j * np.exp(-1j * n[1:] * xi * t) * feed[..., 1:]
    else:
        g_amp = np.exp(-1j * (n + 1) * xi * t) * ground
        # |e,n> is fed by |g,n-1>
        feed = S * s * sin_t
        e_amp = np.zeros_like(g_amp)
        e_amp[..., 1:] = -1j * np.exp(-1j * n[1:] * xi * t) * feed[..., :-1]
    return g_amp, e_amp


def evolve(dist: PhotonDistribution, cfg: CouplingConfig, tau: float) -> EvolvedJointState:
    if tau < 0:
        raise ValueError(f"tau must be >= 0, got {tau}")
    g_amp, e_amp = evolve_amplitudes(dist, cfg, float(tau))
    return EvolvedJointState(float(tau), g_amp, e_amp, dist.n_max)


def reduced_field_diagonal(dist: PhotonDistribution, cfg: CouplingConfig, tau) -> np.ndarray:
    """Photon-number probabilities p_n(tau), n = 0 .. n_max + 1."""
    t, _ = _taus(tau)
    t = t[..., None]
    _, S, R, c, s = _dressed_tables(dist, cfg)
    sin2 = np.sin(R * t) ** 2
    stay = S**2 * (np.cos(R * t) ** 2 + c**2 * sin2)
    moved = (S * s) ** 2 * sin2
    p = stay.copy()
    if cfg.kind is Model.JC:
        p[..., :-1] += moved[..., 1:]
    else:
        p[..., 1:] += moved[..., :-1]
    return p


def _atom_sums(dist: PhotonDistribution, cfg: CouplingConfig, tau):
    """(rho_gg, rho_ee, rho_ge) summed over photon number."""
    t, _ = _taus(tau)
    t = t[..., None]
    _, S, R, c, s = _dressed_tables(dist, cfg)
    cos_t = np.cos(R * t)
    sin_t = np.sin(R * t)
    stay = S**2 * (cos_t**2 + c**2 * sin_t**2)
    moved = (S * s) ** 2 * sin_t**2
    rho_gg = np.sum(stay, axis=-1)
    rho_ee = np.sum(moved, axis=-1)
    # coherence pairs ground amplitude n with the excited partner sharing |n>
    feed = S * s * sin_t
    ground = S * (cos_t + 1j * c * sin_t)
    phase = np.exp(1j * cfg.xi * t[..., 0])
    if cfg.kind is Model.JC:
        terms = 1j * ground[..., :-1] * feed[..., 1:]
        rho_ge = phase * np.sum(terms, axis=-1)
    else:
        terms = 1j * ground[..., 1:] * feed[..., :-1]
        rho_ge = np.conj(phase) * np.sum(terms, axis=-1)
    return rho_gg, rho_ee, rho_ge


def atom_density(dist: PhotonDistribution, cfg: CouplingConfig, tau: float) -> AtomDensity:
    gg, ee, ge = _atom_sums(dist, cfg, float(tau))
    return AtomDensity(float(gg), float(ee), complex(ge))


def bloch_components(dist: PhotonDistribution, cfg: CouplingConfig, tau):
    """(rx, ry, rz) arrays; rx + i ry = 2 <g|rho|e>, rz = rho_ee - rho_gg."""
    t, _ = _taus(tau)
    tt = t[..., None]
    _, S, R, c, s = _dressed_tables(dist, cfg)
    cos_t = np.cos(R * tt)
    sin_t = np.sin(R * tt)
    wt = cfg.xi * t
    sin_w, cos_w = np.sin(wt), np.cos(wt)
    stay = S**2 * (cos_t**2 + c**2 * sin_t**2)
    moved = (S * s) ** 2 * sin_t**2
    rz = np.sum(moved, axis=-1) - np.sum(stay, axis=-1)
    if cfg.kind is Model.JC:
        # partner of level n is n + 1
        a = S[:-1] * S[1:] * 2 * s[1:] * sin_t[..., 1:]
        pc = a * cos_t[..., :-1]
        ps = a * c[:-1] * sin_t[..., :-1]
        x_c, x_s = np.sum(pc, axis=-1), np.sum(ps, axis=-1)
        rx = -x_c * sin_w - x_s * cos_w
        ry = x_c * cos_w - x_s * sin_w
    else:
        # partner of level n is n - 1
        a = S[1:] * S[:-1] * 2 * s[:-1] * sin_t[..., :-1]
        pc = a * cos_t[..., 1:]
        ps = a * c[1:] * sin_t[..., 1:]
        x_c, x_s = np.sum(pc, axis=-1), np.sum(ps, axis=-1)
        rx = x_c * sin_w - x_s * cos_w
        ry = x_c * cos_w + x_s * sin_w
    return rx, ry, rz


def bloch_vector(dist: PhotonDistribution, cfg: CouplingConfig, tau: float) -> BlochVector:
    rx, ry, rz = bloch_components(dist, cfg, float(tau))
    return BlochVector(float(rx), float(ry), float(rz))
