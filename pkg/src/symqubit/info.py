"""Shannon information quantities and the two maximizations built on them:
accessible information (over measurements) and channel capacity (over priors).
"""

import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.optimize import minimize, minimize_scalar

from .ensemble import PI, SignalEnsemble
from .pom import ChannelMatrix, Pom, PomElement, channel_matrix, projective_pom, validate_pom

# Probabilities below this are treated as exact zeros inside logarithms.
LOG_EPS = 1e-15


class ConvergenceError(RuntimeError):
    """An iterative routine hit its iteration cap before reaching tolerance."""


def _check_distribution(p) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    if p.ndim != 1 or np.any(p < -1e-12) or abs(p.sum() - 1.0) > 1e-9:
        raise ValueError(f"invalid probability distribution: {p}")
    return np.clip(p, 0.0, None)


def _plogp(p: np.ndarray) -> np.ndarray:
    """p * log2(p) with the 0 log 0 = 0 convention."""
    return np.where(p > LOG_EPS, p * np.log2(np.where(p > LOG_EPS, p, 1.0)), 0.0)


def entropy(p) -> float:
    """Shannon entropy -sum p log2 p in bits."""
    p = _check_distribution(p)
    return float(-_plogp(p).sum())


def output_distribution(ch: ChannelMatrix, priors) -> np.ndarray:
    """P(y_j) = sum_i P(y_j | x_i) P(x_i)."""
    priors = _check_distribution(priors)
    if len(priors) != ch.rows:
        raise ValueError(f"priors length {len(priors)} != channel rows {ch.rows}")
    return priors @ ch.probs


def posterior(ch: ChannelMatrix, priors, j: int) -> np.ndarray:
    """Bayes rule P(x_i | y_j) = P(y_j | x_i) P(x_i) / P(y_j)."""
    priors = _check_distribution(priors)
    py = output_distribution(ch, priors)
    if py[j] <= LOG_EPS:
        raise ValueError(f"output {j} has zero probability")
    return ch.probs[:, j] * priors / py[j]


def conditional_entropy(ch: ChannelMatrix, priors) -> float:
    """H(X|Y): residual uncertainty about the input after seeing the output."""
    priors = _check_distribution(priors)
    if len(priors) != ch.rows:
        raise ValueError(f"priors length {len(priors)} != channel rows {ch.rows}")
    joint = priors[:, None] * ch.probs  # P(x_i, y_j)
    py = joint.sum(axis=0)
    h = 0.0
    for j in range(ch.cols):
        if py[j] <= LOG_EPS:
            continue
        post = joint[:, j] / py[j]
        h -= py[j] * _plogp(post).sum()
    return float(h)


def mutual_information(ch: ChannelMatrix, priors) -> float:
    """I(X:Y) = H(X) - H(X|Y), in bits; clamped at 0 against roundoff."""
    priors = _check_distribution(priors)
    return max(0.0, entropy(priors) - conditional_entropy(ch, priors))


def mutual_information_direct(ch: ChannelMatrix, priors) -> float:
    """Double-sum form sum_ij P(x_i) P(y_j|x_i) log2 [P(y_j|x_i) / P(y_j)].

    Algebraically identical to mutual_information; kept as an independent
    cross-check path.
    """
    priors = _check_distribution(priors)
    py = output_distribution(ch, priors)
    total = 0.0
    for i in range(ch.rows):
        for j in range(ch.cols):
            pji = ch.probs[i, j]
            if priors[i] <= LOG_EPS or pji <= LOG_EPS:
                continue
            total += priors[i] * pji * math.log2(pji / py[j])
    return max(0.0, total)


def _mi_of_angles_weights(angles, weights, state_angles, priors) -> float:
    """Mutual information for rank-one elements w_j |phi_j><phi_j| without
    building POM objects; rows sum to 1 when the completeness constraints hold."""
    d = state_angles[:, None] - angles[None, :]
    probs = weights[None, :] * np.cos(d) ** 2
    probs = np.clip(probs, 0.0, None)
    py = priors @ probs
    hx = float(-_plogp(priors).sum())
    hxy = 0.0
    for j in range(probs.shape[1]):
        if py[j] <= LOG_EPS:
            continue
        post = probs[:, j] * priors / py[j]
        hxy -= py[j] * _plogp(post).sum()
    return max(0.0, hx - hxy)


def best_von_neumann(e: SignalEnsemble, grid: int = 1024) -> tuple:
    """Maximize mutual information over projective measurements.

    Grid scan over phi in [0, pi) followed by golden-section refinement.
    Returns (phi_star, bits).
    """
    if grid <= 0:
        raise ValueError("grid resolution must be positive")
    priors = e.prior_vector
    angles = e.angles

    def value(phi):
        probs = np.stack(
            [np.cos(angles - phi) ** 2, np.sin(angles - phi) ** 2], axis=1
        )
        return _mi_plain(probs, priors)

    phis = np.arange(grid) * PI / grid
    vals = np.array([value(p) for p in phis])
    k = int(vals.argmax())
    h = PI / grid
    res = minimize_scalar(
        lambda p: -value(p),
        bracket=(phis[k] - h, phis[k], phis[k] + h),
        method="golden",
        options={"xtol": 1e-10},
    )
    phi_star = float(res.x) % PI
    return phi_star, float(-res.fun)


def _mi_plain(probs: np.ndarray, priors: np.ndarray) -> float:
    py = priors @ probs
    hx = float(-_plogp(priors).sum())
    hxy = 0.0
    for j in range(probs.shape[1]):
        if py[j] <= LOG_EPS:
            continue
        post = probs[:, j] * priors / py[j]
        hxy -= py[j] * _plogp(post).sum()
    return max(0.0, hx - hxy)


@dataclass(frozen=True)
class OptimizerOptions:
    """Settings for the accessible-information search."""

    tol: float = 1e-8
    restarts: int = 32
    seed: int = 0
    max_iter: int = 400


@dataclass(frozen=True)
class OptimizationResult:
    pom: Pom
    mutual_info: float
    iterations: int
    converged: bool


def _solve_weights(angles: np.ndarray) -> np.ndarray:
    """Weights making sum_j w_j |phi_j><phi_j| = I, from the three linear
    completeness constraints.  Raises LinAlgError if the angles are degenerate."""
    c, s = np.cos(angles), np.sin(angles)
    A = np.stack([c * c, s * s, c * s])
    return np.linalg.solve(A, np.array([1.0, 1.0, 0.0]))


def accessible_information(
    e: SignalEnsemble, N: int = 3, opts: OptimizerOptions | None = None
) -> OptimizationResult:
    """Maximize mutual information over POMs with N rank-one outcomes.

    For a real qubit three outputs always suffice, so N is restricted to
    {2, 3}.  N = 2 completeness forces orthogonal projectors, which reduces
    to the projective scan.  N = 3 runs a seeded multi-start Nelder-Mead
    search over the element angles, with the weights pinned exactly to the
    completeness constraints at every iterate.
    """
    if opts is None:
        opts = OptimizerOptions()
    if N not in (2, 3):
        raise ValueError(f"invalid N: need 2 <= N <= 3, got {N}")

    if N == 2:
        phi, val = best_von_neumann(e, grid=2048)
        return OptimizationResult(projective_pom(phi), val, 2048, True)

    priors = e.prior_vector
    state_angles = e.angles

    def neg_mi(phis):
        try:
            w = _solve_weights(phis)
        except np.linalg.LinAlgError:
            return 10.0
        if w.min() < -1e-9:
            return 1.0 - 10.0 * w.min()
        return -_mi_of_angles_weights(phis, np.clip(w, 0.0, None), state_angles, priors)

    rng = np.random.default_rng(opts.seed)
    best_val = -np.inf
    best_x = None
    total_iters = 0
    for _ in range(opts.restarts):
        x0 = rng.uniform(0.0, PI, size=3)
        res = minimize(
            neg_mi,
            x0,
            method="Nelder-Mead",
            options={"maxiter": opts.max_iter, "xatol": 1e-9, "fatol": 1e-11},
        )
        total_iters += res.nit
        if -res.fun > best_val:
            best_val = -res.fun
            best_x = res.x
    # polish from the best start; the improvement it finds decides convergence
    res = minimize(
        neg_mi,
        best_x,
        method="Nelder-Mead",
        options={"maxiter": 4 * opts.max_iter, "xatol": 1e-11, "fatol": 1e-13},
    )
    total_iters += res.nit
    improvement = max(0.0, -res.fun - best_val)
    if -res.fun > best_val:
        best_val = -res.fun
        best_x = res.x
    converged = improvement < opts.tol

    w = np.clip(_solve_weights(best_x), 0.0, None)
    pom = Pom(tuple(PomElement.rank_one(wj, pj) for wj, pj in zip(w, best_x)))
    report = validate_pom(pom)
    if not report.passed:
        converged = False
    return OptimizationResult(pom, float(best_val), int(total_iters), converged)


def blahut_arimoto(
    ch: ChannelMatrix, tol: float = 1e-9, max_iter: int = 100_000,
    trace: list | None = None,
) -> tuple:
    """Channel capacity C = max over priors of I(X:Y), by alternating
    maximization.  Stops when the standard upper/lower capacity bound gap
    drops below tol.  Returns (priors, capacity_bits).

    If a list is passed as trace, the per-iteration lower bound (bits) is
    appended to it; the sequence is nondecreasing.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    P = ch.probs
    M = ch.rows
    r = np.full(M, 1.0 / M)
    logP = np.where(P > LOG_EPS, np.log(np.where(P > LOG_EPS, P, 1.0)), 0.0)
    for _ in range(max_iter):
        q = r[:, None] * P
        py = q.sum(axis=0)
        with np.errstate(divide="ignore"):
            logpy = np.where(py > LOG_EPS, np.log(py), 0.0)
        # D(p(.|x) || p_Y) in nats for each input
        d = (P * (logP - logpy[None, :])).sum(axis=1)
        c = np.exp(d)
        lower = math.log((r * c).sum())
        upper = math.log(c.max())
        if trace is not None:
            trace.append(lower / math.log(2))
        if upper - lower < tol * math.log(2):
            r = r * c
            r /= r.sum()
            return r, lower / math.log(2)
        r = r * c
        r /= r.sum()
    raise ConvergenceError(
        f"Blahut-Arimoto did not reach tol={tol} within {max_iter} iterations"
    )


@dataclass(frozen=True)
class C1Result:
    priors: np.ndarray
    pom: Pom
    value: float
    converged: bool
    iterations: int


def c1_alternating(
    e: SignalEnsemble, N: int = 3, opts: OptimizerOptions | None = None,
    max_rounds: int = 50,
) -> C1Result:
    """Lower bound on the prior-optimized accessible information.

    Alternates the measurement search (priors fixed) with Blahut-Arimoto
    (measurement fixed).  The value sequence is monotone nondecreasing by
    construction; alternating ascent need not reach the global optimum, so
    the result is reported as a lower bound.
    """
    if opts is None:
        opts = OptimizerOptions()
    best_value = -np.inf
    best_pom = None
    priors = e.prior_vector
    converged = False
    rounds = 0
    for rounds in range(1, max_rounds + 1):
        res = accessible_information(replace(e, priors=tuple(priors)), N, opts)
        candidate = res.mutual_info
        if candidate > best_value:
            best_value = candidate
            best_pom = res.pom
        ch = channel_matrix(replace(e, priors=tuple(priors)), best_pom)
        new_priors, cap = blahut_arimoto(ch, tol=min(opts.tol, 1e-10))
        improvement = cap - best_value
        if cap > best_value:
            best_value = cap
            priors = new_priors
        if improvement < opts.tol:
            converged = True
            break
    return C1Result(np.asarray(priors), best_pom, float(best_value), converged, rounds)
