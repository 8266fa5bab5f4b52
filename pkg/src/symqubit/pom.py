"""Probability operator measures (POMs) on a real qubit and their channel matrices.

A POM is a list of 2x2 real symmetric positive-semidefinite elements that
resolve the identity.  The constructors here cover the square-root
(minimum-error) measurement, the three-outcome strategy that maximizes
mutual information for odd M, and plain projective measurements.
"""

import math
from dataclasses import dataclass

import numpy as np

from .ensemble import PI, SignalEnsemble, state_vector

# Completeness residual allowed when checking sum of elements against I.
COMPLETENESS_TOL = 1e-10
# PSD slack: diagonal entries and determinant may dip this far below zero.
PSD_DIAG_TOL = 1e-12
PSD_DET_TOL = 1e-10
ROW_SUM_TOL = 1e-9


@dataclass(frozen=True)
class PomElement:
    """2x2 real symmetric matrix [[a, b], [b, c]]."""

    a: float
    b: float
    c: float

    @classmethod
    def rank_one(cls, weight: float, angle: float) -> "PomElement":
        """weight * |angle><angle| for a real unit vector at the given angle."""
        x, y = math.cos(angle), math.sin(angle)
        return cls(weight * x * x, weight * x * y, weight * y * y)

    @classmethod
    def from_vector(cls, v) -> "PomElement":
        """Outer product v v^T of a (generally unnormalized) real 2-vector."""
        x, y = float(v[0]), float(v[1])
        return cls(x * x, x * y, y * y)

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.b, self.c]])

    def psd_residual(self) -> float:
        """How far the element is from positive semidefinite (0 if PSD)."""
        return max(0.0, -self.a, -self.c, -(self.a * self.c - self.b * self.b))


@dataclass(frozen=True)
class Pom:
    """Ordered list of POM elements."""

    elements: tuple

    def __post_init__(self):
        elems = tuple(self.elements)
        if len(elems) < 1:
            raise ValueError("a POM needs at least one element")
        object.__setattr__(self, "elements", elems)

    def __len__(self):
        return len(self.elements)

    def to_json(self) -> list:
        return [[el.a, el.b, el.c] for el in self.elements]

    @classmethod
    def from_json(cls, data) -> "Pom":
        return cls(tuple(PomElement(*triple) for triple in data))


@dataclass(frozen=True)
class PomReport:
    """Result of checking a POM against its defining constraints."""

    psd_residuals: tuple
    completeness_residual: float

    @property
    def passed(self) -> bool:
        psd_ok = all(
            el_res <= max(PSD_DIAG_TOL, PSD_DET_TOL) for el_res in self.psd_residuals
        )
        return psd_ok and self.completeness_residual <= COMPLETENESS_TOL


def validate_pom(p: Pom) -> PomReport:
    """Check PSD of every element and the resolution of the identity."""
    total = np.zeros((2, 2))
    residuals = []
    for el in p.elements:
        total += el.matrix
        residuals.append(el.psd_residual())
    completeness = float(np.abs(total - np.eye(2)).max())
    return PomReport(tuple(residuals), completeness)


class ChannelMatrix:
    """M x N row-stochastic matrix of conditional probabilities P(y_j | x_i)."""

    def __init__(self, probs):
        probs = np.array(probs, dtype=float)
        if probs.ndim != 2:
            raise ValueError("channel matrix must be 2-D")
        if np.any(probs < -1e-12) or np.any(probs > 1 + 1e-12):
            raise ValueError("channel entries outside [0, 1] beyond tolerance")
        probs = np.clip(probs, 0.0, 1.0)
        row_sums = probs.sum(axis=1)
        if np.any(np.abs(row_sums - 1.0) > ROW_SUM_TOL):
            raise ValueError(f"channel rows must sum to 1, got {row_sums}")
        probs.flags.writeable = False
        self.probs = probs

    @property
    def rows(self) -> int:
        return self.probs.shape[0]

    @property
    def cols(self) -> int:
        return self.probs.shape[1]

    def __getitem__(self, idx):
        return self.probs[idx]

    def to_json(self) -> list:
        return self.probs.tolist()

    @classmethod
    def from_json(cls, data) -> "ChannelMatrix":
        return cls(np.asarray(data))


def min_error_pom(M: int) -> Pom:
    """Square-root measurement: M rank-one elements (2/M)|a_j><a_j| at j*pi/M."""
    if M < 2:
        raise ValueError(f"invalid M: need M >= 2, got {M}")
    return Pom(tuple(PomElement.rank_one(2.0 / M, j * PI / M) for j in range(M)))


def min_error_probability(M: int) -> float:
    """Minimum average error probability for the symmetric set, 1 - 2/M."""
    if M < 2:
        raise ValueError(f"invalid M: need M >= 2, got {M}")
    return 1.0 - 2.0 / M


def gamma_halves(M: int, m: int) -> tuple:
    """(cos(gamma/2), sin(gamma/2)) for the three-outcome optimum.

    cos(gamma/2) = cot(m*pi/M), sin(gamma/2) = -sqrt(1 - cot^2(m*pi/M)),
    defined for odd M >= 3 and integer m strictly inside (M/4, M/2).
    """
    if M < 3 or M % 2 == 0:
        raise ValueError(f"invalid M: need odd M >= 3, got {M}")
    if not (M / 4 < m < M / 2):
        raise ValueError(f"m out of range (M/4, M/2): m={m}, M={M}")
    cot = 1.0 / math.tan(m * PI / M)
    radicand = 1.0 - cot * cot
    if radicand < 0 or cot >= 1:
        raise ValueError(f"m out of range (M/4, M/2): m={m}, M={M}")
    return cot, -math.sqrt(radicand)


def gamma_angle(M: int, m: int) -> float:
    """The rotation angle gamma whose half-angle satisfies gamma_halves(M, m)."""
    c, s = gamma_halves(M, m)
    return 2.0 * math.atan2(s, c)


def davies_pom(M: int, m: int) -> Pom:
    """Three-outcome POM maximizing mutual information for odd M.

    Built from the measurement state-vectors
    w0 = -sin(gamma/2) |V|,  w1 = (-|H> + cos(gamma/2)|V>)/sqrt(2),
    w2 = (|H> + cos(gamma/2)|V>)/sqrt(2).
    """
    c, s = gamma_halves(M, m)
    r2 = math.sqrt(2.0)
    w0 = (0.0, -s)
    w1 = (-1.0 / r2, c / r2)
    w2 = (1.0 / r2, c / r2)
    return Pom(tuple(PomElement.from_vector(v) for v in (w0, w1, w2)))


def projective_pom(phi: float) -> Pom:
    """Von Neumann measurement: orthogonal unit projectors at phi and phi + pi/2."""
    return Pom((PomElement.rank_one(1.0, phi), PomElement.rank_one(1.0, phi + PI / 2)))


def channel_matrix(e: SignalEnsemble, p: Pom) -> ChannelMatrix:
    """Quantum-limited channel matrix P(y_j | x_i) = <psi_i| Pi_j |psi_i>."""
    report = validate_pom(p)
    if not report.passed:
        raise ValueError(
            f"invalid POM: completeness residual {report.completeness_residual:.2e}, "
            f"max PSD residual {max(report.psd_residuals):.2e}"
        )
    out = np.empty((e.M, len(p)))
    for i in range(e.M):
        v = state_vector(e, i).vector
        for j, el in enumerate(p.elements):
            out[i, j] = v @ el.matrix @ v
    return ChannelMatrix(out)
