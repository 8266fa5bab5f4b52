"""Monte Carlo photon counting, channel estimation from counts, and the
offset-angle sweeps that map mutual information against detector rotation.
"""

import math
from dataclasses import dataclass

import numpy as np

from .ensemble import PI, make_signal_set
from .info import mutual_information
from .interferometer import (
    ImperfectionParams,
    ideal_channel,
    imperfect_rates,
)
from .pom import ChannelMatrix
from . import info as _info


@dataclass(frozen=True)
class CountRecord:
    """Raw counter reading for one signal, one port, one repeat window."""

    signal_index: int
    port: int
    repeat: int
    counts: int
    window: float

    def __post_init__(self):
        if self.counts < 0:
            raise ValueError("counts must be nonnegative")
        if self.window <= 0:
            raise ValueError("window must be positive")


@dataclass(frozen=True)
class SweepResult:
    """Mutual-information curves over a grid of offset angles."""

    theta0_grid: np.ndarray
    mi_mean: np.ndarray
    mi_std: np.ndarray
    ideal_mi: np.ndarray
    von_neumann_mi: np.ndarray

    def to_rows(self) -> list:
        return [
            (float(t), float(m), float(s), float(i), float(v))
            for t, m, s, i, v in zip(
                self.theta0_grid, self.mi_mean, self.mi_std,
                self.ideal_mi, self.von_neumann_mi,
            )
        ]


def simulate_counts(rates, window: float, repeats: int, seed) -> list:
    """Draw independent Poisson counts for every (signal, port, repeat).

    rates: array of shape (M, n_ports), counts/s.  Identical inputs and seed
    reproduce identical counts.
    """
    rates = np.asarray(rates, dtype=float)
    if np.any(rates < 0):
        raise ValueError("rates must be nonnegative")
    if window <= 0:
        raise ValueError(f"invalid window: {window}")
    if repeats < 1:
        raise ValueError(f"invalid repeats: {repeats}")
    rng = np.random.default_rng(seed)
    records = []
    for r in range(repeats):
        counts = rng.poisson(rates * window)
        for i in range(rates.shape[0]):
            for j in range(rates.shape[1]):
                records.append(CountRecord(i, j, r, int(counts[i, j]), window))
    return records


def estimate_channel(records, subtract_background: float | None = None) -> tuple:
    """Channel matrix from count ratios, with per-entry standard errors.

    Entry (i, j) is the mean count at port j divided by the total mean count
    for signal i.  Optional background subtraction removes
    subtract_background * window counts per record, floored at 0.  Standard
    errors are propagated from the across-repeat variance of the counts.
    """
    if not records:
        raise ValueError("no count records")
    M = max(r.signal_index for r in records) + 1
    N = max(r.port for r in records) + 1
    cells = [[[] for _ in range(N)] for _ in range(M)]
    for rec in records:
        sub = 0.0 if subtract_background is None else subtract_background * rec.window
        cells[rec.signal_index][rec.port].append(max(0.0, rec.counts - sub))

    mean = np.zeros((M, N))
    var_of_mean = np.zeros((M, N))
    for i in range(M):
        for j in range(N):
            cell = cells[i][j]
            if not cell:
                raise ValueError(f"no records for signal {i}, port {j}")
            cell = np.asarray(cell)
            mean[i, j] = cell.mean()
            if len(cell) > 1:
                var_of_mean[i, j] = cell.var(ddof=1) / len(cell)

    totals = mean.sum(axis=1)
    if np.any(totals <= 0):
        raise ValueError("a signal has zero total counts after subtraction")
    probs = mean / totals[:, None]

    # p_ij = m_ij / S_i; first-order propagation over the independent m_ik
    stderr = np.zeros((M, N))
    for i in range(M):
        for j in range(N):
            grad = -mean[i, j] / totals[i] ** 2 * np.ones(N)
            grad[j] += 1.0 / totals[i]
            stderr[i, j] = math.sqrt(float(grad**2 @ var_of_mean[i]))
    return ChannelMatrix(probs), stderr


def rms_deviation(estimated: ChannelMatrix, ideal: ChannelMatrix) -> float:
    """Root-mean-square entrywise difference, in percent."""
    if estimated.probs.shape != ideal.probs.shape:
        raise ValueError(
            f"shape mismatch: {estimated.probs.shape} vs {ideal.probs.shape}"
        )
    return float(np.sqrt(np.mean((estimated.probs - ideal.probs) ** 2)) * 100.0)


def _per_repeat_mi(records, priors) -> np.ndarray:
    """Mutual information of the channel estimated from each repeat alone."""
    repeats = sorted({r.repeat for r in records})
    vals = []
    for rep in repeats:
        ch, _ = estimate_channel([r for r in records if r.repeat == rep])
        vals.append(mutual_information(ch, priors))
    return np.asarray(vals)


def sweep_offset(
    M: int,
    m: int,
    theta0_range: tuple = (-PI / 2, PI / 2),
    step: float = PI / 90,
    imp: ImperfectionParams | None = None,
    window: float = 1.0,
    repeats: int = 5,
    seed: int = 0,
    vn_grid: int = 720,
) -> SweepResult:
    """Mutual information vs. offset angle for the three-outcome detector.

    At each grid point: rotate the ensemble, compute expected rates under the
    imperfection model, simulate Poisson counting, estimate the channel from
    the count ratios, and evaluate the mutual information with uniform
    priors.  The exact (imperfection-free) curve and the best projective
    value are computed alongside for comparison.  With imp=None the Monte
    Carlo stage is skipped and the simulated curve equals the ideal one.

    Each grid point uses an independent random substream spawned from the
    seed, so results do not depend on evaluation order.
    """
    from .pom import gamma_angle

    if step <= 0:
        raise ValueError(f"invalid step: {step}")
    gamma = gamma_angle(M, m)
    start, stop = theta0_range
    n_points = int(math.floor((stop - start) / step + 1e-9)) + 1
    grid = start + step * np.arange(n_points)
    streams = np.random.SeedSequence(seed).spawn(n_points)

    mi_mean = np.empty(n_points)
    mi_std = np.empty(n_points)
    ideal_mi = np.empty(n_points)
    vn_mi = np.empty(n_points)
    for k, theta0 in enumerate(grid):
        e = make_signal_set(M, theta0)
        priors = e.prior_vector
        ideal_mi[k] = mutual_information(ideal_channel(e, gamma), priors)
        vn_mi[k] = _info.best_von_neumann(e, grid=vn_grid)[1]
        if imp is None:
            mi_mean[k] = ideal_mi[k]
            mi_std[k] = 0.0
            continue
        rates = imperfect_rates(e, gamma, imp)
        records = simulate_counts(rates, window, repeats, streams[k])
        vals = _per_repeat_mi(records, priors)
        mi_mean[k] = vals.mean()
        mi_std[k] = vals.std(ddof=1) if len(vals) > 1 else 0.0
    return SweepResult(grid, mi_mean, mi_std, ideal_mi, vn_mi)
