"""Scenario documents, figure presets and the end-to-end run pipeline."""
from __future__ import annotations

import json
import os
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path

import numpy as np

from . import observables, oracle
from .dynamics import CouplingConfig, Model
from .squeezed_state import (
    DEFAULT_EPS_TRUNC,
    SqueezeSpec,
    coherent_amplitude_for_intensity,
    photon_number_distribution,
)

EPS_ENV = "QRABI_EPS_TRUNC"
OUTPUTS = ("mandel", "inversion", "entropy", "bloch", "photon_distribution")
MODELS = ("JC", "AJC", "BOTH")


class ScenarioError(ValueError):
    """Invalid scenario document (exit code 2)."""


class RunIOError(OSError):
    """Failure writing an output file (exit code 4)."""


def default_eps_trunc() -> float:
    raw = os.environ.get(EPS_ENV)
    if raw is None:
        return DEFAULT_EPS_TRUNC
    try:
        return float(raw)
    except ValueError as exc:
        raise ScenarioError(f"{EPS_ENV}={raw!r} is not a number") from exc


@dataclass(frozen=True)
class Scenario:
    model: str
    r: float
    intensity: float | None = None
    alpha: float | None = None
    beta: float = 0.0
    xi: float = 0.0001
    theta: float = 0.0
    tau_min: float = 0.0
    tau_max: float = 100.0
    steps: int = 5001
    eps_trunc: float = field(default_factory=default_eps_trunc)
    outputs: tuple[str, ...] = ("mandel", "inversion", "entropy")
    oracle_check: bool = False
    name: str | None = None

    def __post_init__(self):
        if self.model not in MODELS:
            raise ScenarioError(f"model must be one of {MODELS}, got {self.model!r}")
        if (self.intensity is None) == (self.alpha is None):
            raise ScenarioError("exactly one of 'intensity' or 'alpha' must be given")
        if self.theta != 0:
            raise ScenarioError("squeeze phase unsupported: theta must be 0")
        if not self.r >= 0:
            raise ScenarioError(f"r must be >= 0, got {self.r}")
        if self.steps < 2:
            raise ScenarioError("steps must be >= 2")
        if not self.tau_max > self.tau_min >= 0:
            raise ScenarioError("need 0 <= tau_min < tau_max")
        if self.xi < 0:
            raise ScenarioError("xi must be >= 0")
        bad = [o for o in self.outputs if o not in OUTPUTS]
        if bad or not self.outputs:
            raise ScenarioError(f"outputs must be a nonempty subset of {OUTPUTS}, got {bad}")
        if not 0 < self.eps_trunc <= 1e-6:
            raise ScenarioError("eps_trunc must be in (0, 1e-6]")
        if self.intensity is not None:
            # surfaces the domain error at parse time
            try:
                coherent_amplitude_for_intensity(self.intensity, self.r)
            except ValueError as exc:
                raise ScenarioError(str(exc)) from exc

    @property
    def coherent_amplitude(self) -> float:
        if self.alpha is not None:
            return self.alpha
        return coherent_amplitude_for_intensity(self.intensity, self.r)

    @property
    def squeeze(self) -> SqueezeSpec:
        return SqueezeSpec(self.coherent_amplitude, self.r, self.theta)

    @property
    def models(self) -> list[Model]:
        return [Model.JC, Model.AJC] if self.model == "BOTH" else [Model(self.model)]

    def taus(self) -> np.ndarray:
        return np.linspace(self.tau_min, self.tau_max, self.steps)

    def coupling(self, kind: Model) -> CouplingConfig:
        return CouplingConfig(kind, beta=self.beta, xi=self.xi)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["outputs"] = list(self.outputs)
        return d


_FIELDS = set(Scenario.__dataclass_fields__)


def scenario_from_dict(doc: dict) -> Scenario:
    if not isinstance(doc, dict):
        raise ScenarioError("scenario document must be a JSON object")
    unknown = set(doc) - _FIELDS
    if unknown:
        raise ScenarioError(f"unknown keys: {sorted(unknown)}")
    for key in ("model", "r"):
        if key not in doc:
            raise ScenarioError(f"missing required key {key!r}")
    doc = dict(doc)
    if "outputs" in doc:
        doc["outputs"] = tuple(doc["outputs"])
    if "steps" in doc:
        if int(doc["steps"]) != doc["steps"]:
            raise ScenarioError("steps must be an integer")
        doc["steps"] = int(doc["steps"])
    try:
        return Scenario(**doc)
    except TypeError as exc:
        raise ScenarioError(str(exc)) from exc


def parse_scenario(text: str) -> Scenario:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"malformed scenario JSON: {exc}") from exc
    return scenario_from_dict(doc)


# (output, r) per figure; panel a is JC, panel b is AJC.
_FIGURES = {
    1: ("mandel", 1.0),
    2: ("mandel", 1.3),
    3: ("mandel", 1.4),
    4: ("mandel", 1.5),
    5: ("inversion", 1.0),
    6: ("inversion", 1.5),
    7: ("inversion", 1.5),
    9: ("entropy", 1.0),
    10: ("entropy", 1.5),
}
# Figure 8 is the shared photon-number distribution, one r per panel.
_DISTRIBUTION_R = {"a": 1.0, "b": 1.5}
FIG_INTENSITY = 40.0
FIG_XI = 0.0001


def _ringing_window() -> tuple[float, float]:
    half = observables.revival_time(FIG_INTENSITY) / 2
    return half - 10.0, half + 10.0


def preset_names() -> list[str]:
    return [f"fig{i}{p}" for i in range(1, 11) for p in "ab"]


def preset(name: str) -> Scenario:
    if name not in preset_names():
        raise ScenarioError(f"unknown preset {name!r}; valid: {', '.join(preset_names())}")
    fig, panel = int(name[3:-1]), name[-1]
    model = "JC" if panel == "a" else "AJC"
    common = dict(model=model, intensity=FIG_INTENSITY, beta=0.0, xi=FIG_XI, name=name)
    if fig == 8:
        return Scenario(r=_DISTRIBUTION_R[panel], outputs=("photon_distribution",), **common)
    output, r = _FIGURES[fig]
    if fig == 7:
        lo, hi = _ringing_window()
        return Scenario(r=r, outputs=(output,), tau_min=lo, tau_max=hi, steps=2001, **common)
    return Scenario(r=r, outputs=(output,), **common)


def oracle_tolerance(intensity: float) -> float:
    return 1e-8 if intensity <= 10 else 1e-6


_AXIS = {
    "mandel": "Q(tau)",
    "inversion": "W(tau)",
    "entropy": "S_a(tau)",
    "bloch_rx": "r_x(tau)",
    "bloch_ry": "r_y(tau)",
    "bloch_rz": "r_z(tau)",
}


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def _write(path: Path, text: str) -> None:
    try:
        path.write_text(text)
    except OSError as exc:
        raise RunIOError(f"cannot write {path}: {exc.strerror or exc}") from exc


def write_series_csv(path: Path, taus, values) -> None:
    lines = ["tau,value"]
    lines += [f"{_fmt(t)},{_fmt(v)}" for t, v in zip(taus, values)]
    _write(path, "\n".join(lines) + "\n")


def write_distribution_csv(path: Path, probs) -> None:
    lines = ["n,P_n"] + [f"{n},{_fmt(p)}" for n, p in enumerate(probs)]
    _write(path, "\n".join(lines) + "\n")


def plot_script(csv_name: str, ylabel: str, xlabel: str = "tau", title: str = "", style="lines") -> str:
    return (
        "set datafile separator ','\n"
        f"set title '{title}'\n"
        f"set xlabel '{xlabel}'\n"
        f"set ylabel '{ylabel}'\n"
        "set key off\n"
        f"plot '{csv_name}' every ::1 using 1:2 with {style}\n"
    )


def run(scenario: Scenario, out_dir) -> dict:
    """Evaluate a scenario, write CSVs, plot scripts and ``manifest.json``.

    Returns the manifest. ``manifest["oracle"]["passed"]`` is False when the
    closed form disagrees with the matrix oracle beyond tolerance.
    """
    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise RunIOError(f"cannot create {out}: {exc.strerror or exc}") from exc

    dist = photon_number_distribution(scenario.squeeze, scenario.eps_trunc)
    taus = scenario.taus()
    files: list[str] = []
    title_base = scenario.name or "scenario"

    def emit(stem: str, ylabel: str, values=None, probs=None) -> None:
        csv_name = f"{stem}.csv"
        if probs is not None:
            write_distribution_csv(out / csv_name, probs)
            script = plot_script(csv_name, "P(n)", "n", f"{title_base}: {stem}", "impulses")
        else:
            write_series_csv(out / csv_name, taus, values)
            script = plot_script(csv_name, ylabel, "tau", f"{title_base}: {stem}")
        _write(out / f"{stem}.gp", script)
        files.extend([csv_name, f"{stem}.gp"])

    if "photon_distribution" in scenario.outputs:
        emit("photon_distribution", "P(n)", probs=dist.probs)

    oracle_reports = []
    for kind in scenario.models:
        cfg = scenario.coupling(kind)
        tag = kind.value.lower()
        needs_series = any(o in scenario.outputs for o in ("mandel", "inversion", "entropy", "bloch"))
        if needs_series:
            series = observables.observable_series(dist, cfg, taus)
            for name in ("mandel", "inversion", "entropy"):
                if name in scenario.outputs:
                    emit(f"{tag}_{name}", _AXIS[name], series[name].values)
            if "bloch" in scenario.outputs:
                emit(f"{tag}_bloch_rx", _AXIS["bloch_rx"], series["rx"].values)
                emit(f"{tag}_bloch_ry", _AXIS["bloch_ry"], series["ry"].values)
                emit(f"{tag}_bloch_rz", _AXIS["bloch_rz"], series["inversion"].values)
        if scenario.oracle_check:
            tol = oracle_tolerance(scenario.squeeze.intensity)
            for rep in oracle.validate(dist, cfg, taus):
                oracle_reports.append(
                    {
                        "model": kind.value,
                        "observable": rep.label,
                        "max_abs_diff": rep.max_abs_diff,
                        "argmax_tau": rep.argmax_tau,
                        "tolerance": tol,
                        "passed": rep.passed(tol),
                    }
                )

    manifest = {
        "scenario": scenario.to_dict(),
        "alpha": scenario.coherent_amplitude,
        "intensity": scenario.squeeze.intensity,
        "n_max": dist.n_max,
        "tail_mass": dist.tail_mass,
        "files": files + ["manifest.json"],
    }
    if scenario.oracle_check:
        manifest["oracle"] = {
            "passed": all(r["passed"] for r in oracle_reports),
            "reports": oracle_reports,
        }
    _write(out / "manifest.json", json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return manifest


def with_oracle(scenario: Scenario) -> Scenario:
    return replace(scenario, oracle_check=True)


__all__ = [
    "Scenario",
    "ScenarioError",
    "RunIOError",
    "parse_scenario",
    "scenario_from_dict",
    "preset",
    "preset_names",
    "run",
    "oracle_tolerance",
]
