"""Real symmetric qubit signal sets.

The letter states are linear polarizations in the {|H>, |V>} plane,
spaced by pi/M and optionally rotated by a global offset angle.
"""

import math
from dataclasses import dataclass

import numpy as np

PI = math.pi


def _canonical_angle(theta: float) -> float:
    """Reduce an angle to [0, pi); a real qubit ray is pi-periodic up to sign."""
    t = math.fmod(theta, PI)
    if t < 0.0:
        t += PI
    # fmod of a tiny negative can round up to exactly pi
    if t >= PI:
        t = 0.0
    return t


@dataclass(frozen=True)
class RealQubit:
    """A real linear-polarization state, stored as a planar angle."""

    theta: float

    def __post_init__(self):
        object.__setattr__(self, "theta", _canonical_angle(float(self.theta)))

    @property
    def vector(self) -> np.ndarray:
        """Unit vector (cos theta, sin theta)."""
        return np.array([math.cos(self.theta), math.sin(self.theta)])


@dataclass(frozen=True)
class SignalEnsemble:
    """M letter states at angles i*pi/M + theta0 with prior probabilities."""

    M: int
    theta0: float
    priors: tuple

    def __post_init__(self):
        if self.M < 2:
            raise ValueError(f"invalid M: need M >= 2, got {self.M}")
        p = np.asarray(self.priors, dtype=float)
        if p.shape != (self.M,):
            raise ValueError(f"invalid priors: expected length {self.M}, got {p.shape}")
        if np.any(p < 0):
            raise ValueError("invalid priors: negative entry")
        if abs(p.sum() - 1.0) > 1e-9:
            raise ValueError(f"invalid priors: sum {p.sum()} != 1")
        object.__setattr__(self, "priors", tuple(p))

    @property
    def angles(self) -> np.ndarray:
        """Raw (non-canonicalized) state angles i*pi/M + theta0."""
        return np.arange(self.M) * PI / self.M + self.theta0

    @property
    def prior_vector(self) -> np.ndarray:
        return np.asarray(self.priors)


def make_signal_set(M: int, theta0: float = 0.0, priors=None) -> SignalEnsemble:
    """Build the symmetric ensemble of M states spaced pi/M, rotated by theta0.

    Priors default to uniform 1/M.
    """
    if M < 2:
        raise ValueError(f"invalid M: need M >= 2, got {M}")
    if priors is None:
        priors = tuple(1.0 / M for _ in range(M))
    return SignalEnsemble(M=int(M), theta0=float(theta0), priors=tuple(priors))


def state_vector(e: SignalEnsemble, i: int) -> RealQubit:
    """The i-th letter state, with canonical angle."""
    if not 0 <= i < e.M:
        raise IndexError(f"state index {i} out of range for M={e.M}")
    return RealQubit(i * PI / e.M + e.theta0)


def overlap(a: RealQubit, b: RealQubit) -> float:
    """Inner product of the two unit vectors, cos(theta_a - theta_b)."""
    return math.cos(a.theta - b.theta)
