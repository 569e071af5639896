import functools

import pytest

from qrabi.squeezed_state import SqueezeSpec, coherent_amplitude_for_intensity, photon_number_distribution


@functools.lru_cache(maxsize=None)
def dist_for(intensity: float, r: float, eps: float = 1e-12):
    alpha = coherent_amplitude_for_intensity(intensity, r)
    return photon_number_distribution(SqueezeSpec(alpha, r), eps)


@functools.lru_cache(maxsize=None)
def dist_alpha(alpha: float, r: float, eps: float = 1e-12):
    return photon_number_distribution(SqueezeSpec(alpha, r), eps)


@pytest.fixture
def vacuum():
    return dist_alpha(0.0, 0.0)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
