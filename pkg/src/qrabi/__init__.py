"""Exact Jaynes-Cummings and anti-Jaynes-Cummings dynamics of a two-level atom
driven by a squeezed coherent field, with a truncated-Fock matrix oracle."""
from .dynamics import (
    AtomDensity,
    BlochVector,
    CouplingConfig,
    EvolvedJointState,
    Model,
    atom_density,
    bloch_vector,
    dressing_coefficients,
    evolve,
    rabi_frequency,
    reduced_field_diagonal,
)
from .observables import (
    MandelSample,
    Statistics,
    TimeSeries,
    dominant_statistics,
    entropy,
    inversion,
    mandel_q,
    observable_series,
    revival_time,
)
from .squeezed_state import (
    LogScaledValue,
    PhotonDistribution,
    SqueezeSpec,
    amplitude,
    coherent_amplitude_for_intensity,
    hermite_log_scaled,
    moments,
    photon_number_distribution,
)

__version__ = "0.1.0"
