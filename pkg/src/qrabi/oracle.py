"""Brute-force truncated-Fock validator for the closed-form dynamics.

Basis ordering is interleaved: index ``2n`` is |g,n>, index ``2n+1`` is |e,n>.
The interaction matrix element between the coupled pair of each block is
``coupling_prefactor * lam * sqrt(n+1)``. The default prefactor 1 is the
normalisation under which the closed-form Rabi frequencies
``(lam/2) sqrt(4n + beta^2)`` hold; see ``test_oracle.py`` for what the literal
prefactor 2 would do.
"""
from __future__ import annotations

import csv
import enum
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .dynamics import CouplingConfig, Model
from .observables import TimeSeries, binary_entropy_of_norm, mandel_q_values
from .squeezed_state import PhotonDistribution

ORACLE_MARGIN = 8


class OracleKind(str, enum.Enum):
    JC = "JC"
    AJC = "AJC"
    RABI = "RABI"


class OracleError(RuntimeError):
    pass


class GridMismatchError(ValueError):
    pass


@dataclass(frozen=True)
class TruncatedHamiltonian:
    kind: OracleKind
    entries: np.ndarray
    n_cut: int

    @property
    def dim(self) -> int:
        return 2 * (self.n_cut + 1)

    def to_csv(self, path) -> Path:
        """Nonzero entries as ``row,col,value`` lines."""
        path = Path(path)
        rows, cols = np.nonzero(self.entries)
        with path.open("w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["row", "col", "value"])
            for i, j in zip(rows, cols):
                w.writerow([int(i), int(j), f"{self.entries[i, j]:.12g}"])
        return path


@dataclass(frozen=True)
class PropagatedState:
    tau: float
    coeffs: np.ndarray
    leakage: float

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.coeffs))


def _g(n):
    return 2 * n


def _e(n):
    return 2 * n + 1


def excitation_number(kind: OracleKind, n_cut: int) -> np.ndarray:
    """Diagonal of the conserved excitation operator (JC: N, AJC: N-bar)."""
    n = np.arange(n_cut + 1, dtype=float)
    diag = np.empty(2 * (n_cut + 1))
    if OracleKind(kind) is OracleKind.JC:
        diag[0::2] = n
        diag[1::2] = n + 1
    elif OracleKind(kind) is OracleKind.AJC:
        diag[0::2] = n + 2
        diag[1::2] = n + 1
    else:
        raise ValueError("the Rabi Hamiltonian has no conserved excitation number")
    return diag


def build_hamiltonian(
    kind: OracleKind, cfg: CouplingConfig, n_cut: int, coupling_prefactor: float = 1.0
) -> TruncatedHamiltonian:
    kind = OracleKind(kind)
    if n_cut < 1:
        raise ValueError(f"n_cut must be >= 1, got {n_cut}")
    if kind is OracleKind.RABI:
        jc = build_hamiltonian(OracleKind.JC, cfg, n_cut, coupling_prefactor)
        ajc = build_hamiltonian(OracleKind.AJC, cfg, n_cut, coupling_prefactor)
        return TruncatedHamiltonian(kind, 0.5 * (jc.entries + ajc.entries), n_cut)

    dim = 2 * (n_cut + 1)
    H = np.zeros((dim, dim))
    omega = cfg.omega
    detuning = cfg.delta if kind is OracleKind.JC else cfg.delta_bar
    sz = np.tile([-0.5, 0.5], n_cut + 1)
    H[np.diag_indices(dim)] = omega * excitation_number(kind, n_cut) + detuning * sz - 0.5 * omega
    for n in range(n_cut):
        g = coupling_prefactor * cfg.lam * math.sqrt(n + 1)
        if kind is OracleKind.JC:
            i, j = _e(n), _g(n + 1)
        else:
            i, j = _g(n), _e(n + 1)
        H[i, j] = H[j, i] = g
    return TruncatedHamiltonian(kind, H, n_cut)


class Propagator:
    """exp(-i H tau / lam) from a single Hermitian eigendecomposition."""

    def __init__(self, H: TruncatedHamiltonian, lam: float = 1.0):
        try:
            self.evals, self.evecs = np.linalg.eigh(H.entries)
        except np.linalg.LinAlgError as exc:
            raise OracleError(
                f"eigendecomposition failed for {H.kind.value} dim={H.dim} "
                f"max|H|={np.abs(H.entries).max():.3g}"
            ) from exc
        self.H = H
        self.lam = lam

    def coefficients(self, initial: np.ndarray, taus) -> np.ndarray:
        """State vectors, shape ``(len(taus), dim)``."""
        initial = np.asarray(initial, dtype=complex)
        if abs(np.linalg.norm(initial) - 1) > 1e-12:
            raise ValueError("initial state must be normalised")
        taus = np.atleast_1d(np.asarray(taus, dtype=float))
        proj = self.evecs.conj().T @ initial
        phases = np.exp(-1j * np.outer(taus / self.lam, self.evals))
        return (phases * proj) @ self.evecs.T

    def leakage(self, coeffs: np.ndarray) -> np.ndarray:
        return np.sum(np.abs(coeffs[..., -4:]) ** 2, axis=-1)


def propagate(H: TruncatedHamiltonian, initial, tau: float, lam: float = 1.0) -> PropagatedState:
    prop = Propagator(H, lam)
    coeffs = prop.coefficients(initial, [tau])[0]
    return PropagatedState(float(tau), coeffs, float(prop.leakage(coeffs)))


def initial_state(dist: PhotonDistribution, n_cut: int) -> np.ndarray:
    """sum_n S_n |g,n>, exactly the closed form's (truncated) initial state."""
    if n_cut < dist.n_max:
        raise ValueError("n_cut below the distribution's n_max")
    psi = np.zeros(2 * (n_cut + 1), dtype=complex)
    psi[0 : 2 * (dist.n_max + 1) : 2] = dist.amplitudes
    return psi


def field_probabilities(coeffs: np.ndarray) -> np.ndarray:
    c2 = np.abs(coeffs) ** 2
    return c2[..., 0::2] + c2[..., 1::2]


def bloch_from_coeffs(coeffs: np.ndarray):
    cg = coeffs[..., 0::2]
    ce = coeffs[..., 1::2]
    rho_ge = np.sum(cg * ce.conj(), axis=-1)
    rz = np.sum(np.abs(ce) ** 2, axis=-1) - np.sum(np.abs(cg) ** 2, axis=-1)
    return 2 * rho_ge.real, 2 * rho_ge.imag, rz


@dataclass
class OracleRun:
    taus: np.ndarray
    coeffs: np.ndarray
    leakage: np.ndarray
    n_cut: int
    kind: Model

    @property
    def field(self) -> np.ndarray:
        return field_probabilities(self.coeffs)

    def series(self) -> dict[str, TimeSeries]:
        rx, ry, rz = bloch_from_coeffs(self.coeffs)
        norm = np.sqrt(rx * rx + ry * ry + rz * rz)
        vals = {
            "mandel": mandel_q_values(self.field, self.kind),
            "inversion": rz,
            "entropy": binary_entropy_of_norm(norm),
            "rx": rx,
            "ry": ry,
        }
        return {k: TimeSeries(self.taus, v, k) for k, v in vals.items()}


def run_oracle(
    dist: PhotonDistribution, cfg: CouplingConfig, taus, n_cut: int | None = None
) -> OracleRun:
    """Propagate the closed form's initial state under the matching truncated Hamiltonian."""
    n_cut = dist.n_max + ORACLE_MARGIN if n_cut is None else n_cut
    H = build_hamiltonian(OracleKind(cfg.kind.value), cfg, n_cut)
    prop = Propagator(H, cfg.lam)
    taus = np.asarray(taus, dtype=float)
    coeffs = prop.coefficients(initial_state(dist, n_cut), taus)
    return OracleRun(taus, coeffs, prop.leakage(coeffs), n_cut, cfg.kind)


@dataclass(frozen=True)
class CompareReport:
    label: str
    max_abs_diff: float
    argmax_tau: float

    def passed(self, tol: float) -> bool:
        return self.max_abs_diff < tol

    def line(self, tol: float) -> str:
        verdict = "PASS" if self.passed(tol) else "FAIL"
        return (
            f"{verdict} {self.label:<12} max|diff|={self.max_abs_diff:.3e} "
            f"at tau={self.argmax_tau:.6g} (tol {tol:g})"
        )


def compare(closed: TimeSeries, oracle: TimeSeries) -> CompareReport:
    if closed.taus.shape != oracle.taus.shape or not np.array_equal(closed.taus, oracle.taus):
        raise GridMismatchError(f"tau grids differ for {closed.label!r}")
    diff = np.abs(closed.values - oracle.values)
    i = int(np.argmax(diff))
    return CompareReport(closed.label, float(diff[i]), float(closed.taus[i]))


def compare_field(closed_p: np.ndarray, oracle_p: np.ndarray, taus) -> CompareReport:
    """Max difference over every p_n(tau); arrays are zero-padded to a common width."""
    width = max(closed_p.shape[-1], oracle_p.shape[-1])
    a = np.zeros((closed_p.shape[0], width))
    b = np.zeros((oracle_p.shape[0], width))
    a[:, : closed_p.shape[-1]] = closed_p
    b[:, : oracle_p.shape[-1]] = oracle_p
    diff = np.abs(a - b)
    t, _ = np.unravel_index(np.argmax(diff), diff.shape)
    return CompareReport("p_n", float(diff.max()), float(np.asarray(taus)[t]))


def validate(dist: PhotonDistribution, cfg: CouplingConfig, taus) -> list[CompareReport]:
    """Closed form versus oracle for Q, W, S_a, rx, ry and every p_n."""
    from . import dynamics
    from .observables import observable_series

    taus = np.asarray(taus, dtype=float)
    run = run_oracle(dist, cfg, taus)
    closed = observable_series(dist, cfg, taus)
    oracle = run.series()
    reports = [compare(closed[k], oracle[k]) for k in ("inversion", "mandel", "entropy", "rx", "ry")]
    reports.append(compare_field(dynamics.reduced_field_diagonal(dist, cfg, taus), run.field, taus))
    return reports
