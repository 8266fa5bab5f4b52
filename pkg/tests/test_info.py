import math

import numpy as np
import pytest

from symqubit import (
    ChannelMatrix,
    OptimizerOptions,
    accessible_information,
    best_von_neumann,
    blahut_arimoto,
    c1_alternating,
    channel_matrix,
    conditional_entropy,
    davies_pom,
    entropy,
    make_signal_set,
    mutual_information,
    mutual_information_direct,
    output_distribution,
    posterior,
    validate_pom,
)
from symqubit.info import ConvergenceError

PI = math.pi
TRINE_MI = math.log2(3) - 1  # 0.5849625007211562
# mutual information of the exact quinary three-outcome channel (unrounded
# counterpart of the 0.471 table value); frozen from the double-sum oracle
QUINARY_MI = 0.4714384697852008
# same for the two septenary strategies
SEPTENARY_MI = 0.4529886267561722


def trine_channel():
    e = make_signal_set(3)
    return e, channel_matrix(e, davies_pom(3, 1))


def random_channel(rng, M, N):
    return ChannelMatrix(rng.dirichlet(np.ones(N), size=M))


def test_entropy_examples():
    assert entropy([1.0, 0.0]) == pytest.approx(0.0, abs=1e-15)
    assert entropy([0.5, 0.5]) == pytest.approx(1.0, abs=1e-12)
    assert entropy([1 / 3] * 3) == pytest.approx(math.log2(3), abs=1e-12)


def test_entropy_bounds():
    rng = np.random.default_rng(0)
    for _ in range(20):
        p = rng.dirichlet(np.ones(5))
        h = entropy(p)
        assert 0.0 <= h <= math.log2(5) + 1e-12


def test_entropy_invalid():
    with pytest.raises(ValueError):
        entropy([0.5, 0.6])
    with pytest.raises(ValueError):
        entropy([1.2, -0.2])


def test_output_distribution_trine():
    e, ch = trine_channel()
    assert np.allclose(output_distribution(ch, e.priors), 1 / 3, atol=1e-12)


def test_output_distribution_quinary():
    e = make_signal_set(5)
    ch = channel_matrix(e, davies_pom(5, 2))
    py = output_distribution(ch, e.priors)
    assert np.allclose(py, [0.4472, 0.2764, 0.2764], atol=5e-4)


def test_output_distribution_identity():
    ch = ChannelMatrix(np.eye(2))
    assert np.allclose(output_distribution(ch, [0.3, 0.7]), [0.3, 0.7])


def test_output_distribution_mismatch():
    e, ch = trine_channel()
    with pytest.raises(ValueError):
        output_distribution(ch, [0.5, 0.5])


def test_posterior_trine():
    e, ch = trine_channel()
    assert np.allclose(posterior(ch, e.priors, 0), [0, 0.5, 0.5], atol=1e-12)


def test_posterior_identity_point_mass():
    ch = ChannelMatrix(np.eye(2))
    assert np.allclose(posterior(ch, [0.5, 0.5], 0), [1, 0], atol=1e-12)


def test_posterior_uninformative():
    ch = ChannelMatrix([[0.2, 0.8], [0.2, 0.8]])
    priors = [0.4, 0.6]
    for j in range(2):
        assert np.allclose(posterior(ch, priors, j), priors, atol=1e-12)


def test_posterior_zero_output():
    ch = ChannelMatrix([[1.0, 0.0], [1.0, 0.0]])
    with pytest.raises(ValueError, match="zero probability"):
        posterior(ch, [0.5, 0.5], 1)


def test_conditional_entropy_identity():
    assert conditional_entropy(ChannelMatrix(np.eye(2)), [0.5, 0.5]) == pytest.approx(
        0.0, abs=1e-12
    )


def test_conditional_entropy_uninformative():
    ch = ChannelMatrix([[0.5, 0.5], [0.5, 0.5]])
    assert conditional_entropy(ch, [0.5, 0.5]) == pytest.approx(1.0, abs=1e-12)


def test_conditional_entropy_trine():
    e, ch = trine_channel()
    assert conditional_entropy(ch, e.priors) == pytest.approx(1.0, abs=1e-12)


def test_mutual_information_trine():
    e, ch = trine_channel()
    assert mutual_information(ch, e.priors) == pytest.approx(TRINE_MI, abs=1e-12)


def test_mutual_information_quinary():
    e = make_signal_set(5)
    ch = channel_matrix(e, davies_pom(5, 2))
    mi = mutual_information(ch, e.priors)
    assert mi == pytest.approx(0.471, abs=0.005)
    assert mi == pytest.approx(QUINARY_MI, abs=1e-12)
    # independent double-sum evaluation agrees
    assert mutual_information_direct(ch, e.priors) == pytest.approx(mi, abs=1e-10)


def test_mutual_information_uninformative():
    ch = ChannelMatrix([[0.5, 0.5], [0.5, 0.5]])
    assert mutual_information(ch, [0.5, 0.5]) == pytest.approx(0.0, abs=1e-12)


def test_mutual_information_forms_agree():
    rng = np.random.default_rng(7)
    for _ in range(25):
        M, N = rng.integers(2, 6), rng.integers(2, 6)
        ch = random_channel(rng, M, N)
        priors = rng.dirichlet(np.ones(M))
        a = mutual_information(ch, priors)
        b = mutual_information_direct(ch, priors)
        assert a == pytest.approx(b, abs=1e-10)
        assert a >= 0
        assert a <= min(entropy(priors), entropy(output_distribution(ch, priors))) + 1e-10


def test_mi_zero_iff_rows_equal():
    rng = np.random.default_rng(3)
    row = rng.dirichlet(np.ones(3))
    same = ChannelMatrix(np.tile(row, (3, 1)))
    priors = rng.dirichlet(np.ones(3))
    assert mutual_information(same, priors) < 1e-12
    for _ in range(10):
        ch = random_channel(rng, 3, 3)
        spread = np.abs(ch.probs - ch.probs.mean(axis=0)).max()
        if spread > 1e-3:
            assert mutual_information(ch, np.ones(3) / 3) > 1e-9


def test_merging_outputs_never_increases_mi():
    rng = np.random.default_rng(11)
    for _ in range(20):
        ch = random_channel(rng, 3, 4)
        priors = rng.dirichlet(np.ones(3))
        full = mutual_information(ch, priors)
        j, k = rng.choice(4, size=2, replace=False)
        keep = [c for c in range(4) if c not in (j, k)]
        merged = np.column_stack(
            [ch.probs[:, keep], ch.probs[:, j] + ch.probs[:, k]]
        )
        assert mutual_information(ChannelMatrix(merged), priors) <= full + 1e-10


def test_best_von_neumann_trine():
    e = make_signal_set(3)
    phi, val = best_von_neumann(e)
    assert val == pytest.approx(0.4591, abs=5e-4)
    # the optimum sits at a multiple of pi/6
    assert min(phi % (PI / 6), PI / 6 - phi % (PI / 6)) < 1e-6


def test_best_von_neumann_orthogonal_pair():
    e = make_signal_set(2)
    _, val = best_von_neumann(e)
    assert val == pytest.approx(1.0, abs=1e-9)


def test_best_von_neumann_below_davies_quinary():
    e = make_signal_set(5)
    _, val = best_von_neumann(e)
    assert val < QUINARY_MI


def test_best_von_neumann_invalid_grid():
    with pytest.raises(ValueError):
        best_von_neumann(make_signal_set(3), grid=0)


def test_accessible_information_trine():
    res = accessible_information(make_signal_set(3), 3, OptimizerOptions(seed=0))
    assert res.mutual_info >= 0.5849
    assert res.mutual_info == pytest.approx(TRINE_MI, abs=1e-4)
    assert res.converged
    assert validate_pom(res.pom).passed


def test_accessible_information_quinary():
    res = accessible_information(make_signal_set(5), 3, OptimizerOptions(seed=0))
    assert res.mutual_info == pytest.approx(QUINARY_MI, abs=1e-3)


def test_accessible_information_even_m_two_outputs():
    e = make_signal_set(4)
    res = accessible_information(e, 2)
    _, vn = best_von_neumann(e, grid=2048)
    assert res.mutual_info == pytest.approx(vn, abs=1e-6)


def test_accessible_information_rotation_invariant():
    base = accessible_information(make_signal_set(3), 3, OptimizerOptions(seed=2))
    rot = accessible_information(make_signal_set(3, 0.41), 3, OptimizerOptions(seed=2))
    assert rot.mutual_info == pytest.approx(base.mutual_info, abs=1e-6)


def test_accessible_information_invalid_n():
    with pytest.raises(ValueError, match="invalid N"):
        accessible_information(make_signal_set(3), 4)
    with pytest.raises(ValueError, match="invalid N"):
        accessible_information(make_signal_set(3), 1)


@pytest.mark.parametrize("M,m", [(3, 1), (5, 2), (7, 2)])
def test_davies_beats_von_neumann(M, m):
    e = make_signal_set(M)
    ch = channel_matrix(e, davies_pom(M, m))
    davies_mi = mutual_information(ch, e.priors)
    _, vn = best_von_neumann(e)
    assert davies_mi > vn


def test_septenary_degeneracy():
    e = make_signal_set(7)
    mi2 = mutual_information(channel_matrix(e, davies_pom(7, 2)), e.priors)
    mi3 = mutual_information(channel_matrix(e, davies_pom(7, 3)), e.priors)
    assert mi2 == pytest.approx(mi3, abs=1e-9)
    assert mi2 == pytest.approx(SEPTENARY_MI, abs=1e-12)


def test_blahut_arimoto_bsc():
    ch = ChannelMatrix([[0.89, 0.11], [0.11, 0.89]])
    priors, cap = blahut_arimoto(ch, tol=1e-10)
    h2 = -(0.11 * math.log2(0.11) + 0.89 * math.log2(0.89))
    assert cap == pytest.approx(1 - h2, abs=1e-6)
    assert np.allclose(priors, 0.5, atol=1e-4)


def test_blahut_arimoto_trine_channel():
    e, ch = trine_channel()
    priors, cap = blahut_arimoto(ch, tol=1e-10)
    assert np.abs(priors - 1 / 3).max() < 1e-4
    assert cap == pytest.approx(TRINE_MI, abs=1e-6)


def test_blahut_arimoto_identity():
    priors, cap = blahut_arimoto(ChannelMatrix(np.eye(2)), tol=1e-10)
    assert cap == pytest.approx(1.0, abs=1e-9)
    assert np.allclose(priors, 0.5, atol=1e-6)


def test_blahut_arimoto_monotone_trace():
    rng = np.random.default_rng(5)
    ch = random_channel(rng, 4, 3)
    trace = []
    blahut_arimoto(ch, tol=1e-10, trace=trace)
    diffs = np.diff(trace)
    assert np.all(diffs >= -1e-10)


def test_blahut_arimoto_iteration_cap():
    # asymmetric channel so the bound gap cannot close in one step
    ch = ChannelMatrix([[0.9, 0.1], [0.4, 0.6], [0.2, 0.8]])
    with pytest.raises(ConvergenceError):
        blahut_arimoto(ch, tol=1e-13, max_iter=2)


def test_c1_trine():
    res = c1_alternating(make_signal_set(3), 3, OptimizerOptions(seed=0))
    assert res.value >= 0.5849
    assert res.converged
    assert abs(res.priors.sum() - 1) < 1e-9


def test_c1_orthogonal_pair():
    res = c1_alternating(make_signal_set(2), 2)
    assert res.value == pytest.approx(1.0, abs=1e-6)
    assert np.allclose(res.priors, 0.5, atol=1e-4)


def test_c1_degenerate_m_rejected():
    with pytest.raises(ValueError, match="invalid M"):
        make_signal_set(1)
