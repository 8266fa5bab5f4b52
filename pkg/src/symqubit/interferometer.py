"""Polarization Mach-Zehnder detector model.

The ideal device maps an input polarization qubit (plus a vacuum port) onto
three output ports whose click probabilities realize the three-outcome
optimum POM.  The imperfection model covers finite interference contrast,
polarizing-beam-splitter extinction, and additive dark/background counts.
"""

import math
from dataclasses import dataclass, asdict

import numpy as np

from .ensemble import RealQubit, SignalEnsemble
from .pom import ChannelMatrix


@dataclass(frozen=True)
class MzSetting:
    """Interferometer rotation angle; HWP1 sits at a quarter of it."""

    gamma: float

    @property
    def hwp1_angle(self) -> float:
        return self.gamma / 4.0


@dataclass(frozen=True)
class ImperfectionParams:
    """Detector nonidealities and source parameters.

    visibility: interference contrast (P_max - P_min)/(P_max + P_min)
    extinction: intensity fraction of the wrong polarization leaking
        through the output polarizing beam splitters
    dark_rate, background_rate: additive per-port count rates, counts/s
    flux: photons/s at the interferometer input
    coupling: fiber coupling efficiency into the counting detectors
    """

    visibility: float = 0.98
    extinction: float = 0.001
    dark_rate: float = 100.0
    background_rate: float = 200.0
    flux: float = 3e5
    coupling: float = 0.775

    def __post_init__(self):
        for name in ("visibility", "extinction", "coupling"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"invalid params: {name}={v} outside [0, 1]")
        for name in ("dark_rate", "background_rate", "flux"):
            if getattr(self, name) < 0:
                raise ValueError(f"invalid params: {name} must be >= 0")

    @classmethod
    def nominal(cls) -> "ImperfectionParams":
        return cls()

    @classmethod
    def ideal(cls, flux: float = 3e5, coupling: float = 1.0) -> "ImperfectionParams":
        """All nonidealities switched off; flux and coupling kept as scale."""
        return cls(visibility=1.0, extinction=0.0, dark_rate=0.0,
                   background_rate=0.0, flux=flux, coupling=coupling)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "ImperfectionParams":
        return cls(**d)


def mz_unitary(gamma: float) -> np.ndarray:
    """4x4 orthogonal matrix of the Mach-Zehnder stage on (A_H, A_V, B_H, B_V)."""
    c, s = math.cos(gamma / 2.0), math.sin(gamma / 2.0)
    return np.array([
        [1.0, 0.0, 0.0, 0.0],
        [0.0, c, s, 0.0],
        [0.0, -s, c, 0.0],
        [0.0, 0.0, 0.0, 1.0],
    ])


def port_amplitudes(q: RealQubit, gamma: float) -> tuple:
    """Output amplitudes (b0, b1, b2) for a single input photon, vacuum at b.

    b0 = -sin(gamma/2) A_V;  b1,2 = (A_H -/+ cos(gamma/2) A_V)/sqrt(2).
    """
    ah, av = math.cos(q.theta), math.sin(q.theta)
    c, s = math.cos(gamma / 2.0), math.sin(gamma / 2.0)
    r2 = math.sqrt(2.0)
    return (-s * av, (ah - c * av) / r2, (ah + c * av) / r2)


def ideal_channel(e: SignalEnsemble, gamma: float) -> ChannelMatrix:
    """Per-photon port probabilities (squared amplitudes) for every signal."""
    from .ensemble import state_vector

    probs = np.empty((e.M, 3))
    for i in range(e.M):
        b = port_amplitudes(state_vector(e, i), gamma)
        probs[i] = np.square(b)
    return ChannelMatrix(probs)


def imperfect_rates(
    e: SignalEnsemble, gamma: float, imp: ImperfectionParams
) -> np.ndarray:
    """Expected count rates (counts/s), shape (M, 3), under the imperfection model.

    Finite visibility degrades only the interference cross-term at ports 1/2;
    extinction leaks a fraction of the interfering-path power into port 0 and
    a fraction of the port-0 power back into ports 1/2 (split equally); dark
    and background counts are additive per port.
    """
    c = math.cos(gamma / 2.0)
    s = math.sin(gamma / 2.0)
    rates = np.empty((e.M, 3))
    add = imp.dark_rate + imp.background_rate
    scale = imp.flux * imp.coupling
    for i, theta in enumerate(e.angles):
        ah, av = math.cos(theta), math.sin(theta)
        interfering = ah * ah + c * c * av * av  # power reaching the output PBS
        cross = ah * c * av
        p_null = s * s * av * av
        p0 = p_null + imp.extinction * interfering
        p1 = 0.5 * interfering - imp.visibility * cross + 0.5 * imp.extinction * p_null
        p2 = 0.5 * interfering + imp.visibility * cross + 0.5 * imp.extinction * p_null
        rates[i] = scale * np.array([p0, p1, p2]) + add
    return rates


def rates_to_channel(rates: np.ndarray) -> ChannelMatrix:
    """Row-normalize a rate table into a channel matrix of outcome ratios."""
    rates = np.asarray(rates, dtype=float)
    sums = rates.sum(axis=1, keepdims=True)
    if np.any(sums <= 0):
        raise ValueError("cannot normalize a signal with zero total rate")
    return ChannelMatrix(rates / sums)
