"""Symmetric qubit signal sets, optimal detection strategies, information
maximization, and a polarization Mach-Zehnder detector model with Poisson
photon-counting simulation.
"""

from .ensemble import RealQubit, SignalEnsemble, make_signal_set, overlap, state_vector
from .pom import (
    ChannelMatrix,
    Pom,
    PomElement,
    channel_matrix,
    davies_pom,
    gamma_angle,
    gamma_halves,
    min_error_pom,
    min_error_probability,
    projective_pom,
    validate_pom,
)
from .info import (
    C1Result,
    ConvergenceError,
    OptimizationResult,
    OptimizerOptions,
    accessible_information,
    best_von_neumann,
    blahut_arimoto,
    c1_alternating,
    conditional_entropy,
    entropy,
    mutual_information,
    mutual_information_direct,
    output_distribution,
    posterior,
)
from .interferometer import (
    ImperfectionParams,
    MzSetting,
    ideal_channel,
    imperfect_rates,
    mz_unitary,
    port_amplitudes,
    rates_to_channel,
)
from .experiment import (
    CountRecord,
    SweepResult,
    estimate_channel,
    rms_deviation,
    simulate_counts,
    sweep_offset,
)

__version__ = "0.1.0"
