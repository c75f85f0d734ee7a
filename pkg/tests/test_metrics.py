import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from somfrechet.core import DistanceMatrix, MetricKind, ValidationError
from somfrechet.metrics import (distance, hamming_distance, metric_closure, pairwise_distances,
                                s_smd, st_smd, t_smd)

from _support import ORACLES, make_som, oracle_closure, random_som


@st.composite
def som_pairs(draw, same_shape=True):
    seed = draw(st.integers(0, 2**32 - 1))
    k1, k2 = draw(st.integers(1, 3)), draw(st.integers(1, 3))
    V, T = draw(st.integers(1, 15)), draw(st.integers(1, 5))
    rng = np.random.default_rng(seed)
    a = random_som(rng, k1, k2, V, T)
    if not same_shape:
        k1, k2 = draw(st.integers(1, 3)), draw(st.integers(1, 3))
    b = random_som(rng, k1, k2, V, T)
    return a, b


def test_t_smd_hand_example():
    a = make_som([[0.0, 0.0]], [0] * 10)
    b = make_som([[3.0, 0.0]], [0] * 10)
    assert t_smd(a, b, V=10) == pytest.approx(0.3, abs=1e-15)
    assert t_smd(a, a) == 0.0


def test_hamming_examples():
    x = np.array([1, 0, 1, 1, 0, 0, 1, 0])
    assert hamming_distance(x, x) == 0.0
    assert hamming_distance(x, 1 - x) == 1.0
    y = x.copy()
    y[[0, 5]] ^= 1
    assert hamming_distance(x, y) == 0.25


def test_s_smd_examples():
    rng = np.random.default_rng(0)
    a = make_som(rng.normal(size=(1, 3)), [0] * 6)
    b = make_som(rng.normal(size=(1, 3)), [0] * 6)
    assert s_smd(a, b) == 0.0
    x = make_som(np.eye(2), [0, 0, 1, 1])
    y = make_som(np.eye(2), [0, 1, 0, 1])
    # every entry of the 2x2 Hamming table is 2/4
    assert s_smd(x, y) == (2 * 0.5 + 2 * 0.5) / (2 * 4) == 0.25


def test_st_smd_examples():
    w = np.array([[0.0, 0.0], [5.0, 5.0]])
    a = make_som(w, [0, 0, 1, 1])
    b = make_som(w, [1, 1, 0, 0])
    assert st_smd(a, a) == 0.0
    assert st_smd(a, b) > 0
    # units pair with themselves in time; each disagrees on all 4 voxels
    assert st_smd(a, b) == ORACLES["ST-SMD"](a, b) == (1.0 + 1.0 + 1.0 + 1.0) / 2


@pytest.mark.parametrize("kind", list(MetricKind))
@given(pair=som_pairs(same_shape=False))
def test_scalar_metrics_match_oracles(kind, pair):
    a, b = pair
    assert distance(a, b, kind) == pytest.approx(ORACLES[kind.value](a, b), rel=1e-12, abs=1e-15)


@pytest.mark.parametrize("kind", list(MetricKind))
@given(pair=som_pairs())
def test_axioms_before_closure(kind, pair):
    a, b = pair
    d_ab, d_ba = distance(a, b, kind), distance(b, a, kind)
    assert d_ab >= 0
    assert d_ab == d_ba
    assert distance(a, a, kind) == 0.0


@pytest.mark.parametrize("kind", list(MetricKind))
def test_pairwise_matches_scalar(kind):
    rng = np.random.default_rng(11)
    sample = [random_som(rng) for _ in range(4)]
    D = pairwise_distances(sample, kind)
    for i, j in itertools.product(range(4), repeat=2):
        assert D.values[i, j] == pytest.approx(distance(sample[i], sample[j], kind),
                                               rel=1e-12, abs=1e-15)


def test_pairwise_mixed_shapes_uses_scalar_path():
    rng = np.random.default_rng(12)
    sample = [random_som(rng, 3, 3), random_som(rng, 2, 2), random_som(rng, 1, 4)]
    D = pairwise_distances(sample, "st-smd")
    assert D.values[0, 2] == pytest.approx(st_smd(sample[0], sample[2]), rel=1e-12)


def test_pairwise_degenerate():
    rng = np.random.default_rng(1)
    s = random_som(rng)
    assert pairwise_distances([s], "t-smd").values.tolist() == [[0.0]]
    assert not pairwise_distances([s, s, s], "st-smd").values.any()
    with pytest.raises(ValidationError):
        pairwise_distances([], "t-smd")
    with pytest.raises(ValidationError, match="SOM 1"):
        pairwise_distances([s, random_som(rng, V=7)], "s-smd")


def test_closure_hand_example():
    D = DistanceMatrix(np.array([[0, 1, 5.0], [1, 0, 1.0], [5.0, 1, 0]]), "custom")
    assert metric_closure(D).values[0, 2] == 2.0


def test_closure_of_metric_is_identity():
    x = np.random.default_rng(3).normal(size=(7, 2))
    M = np.sqrt(((x[:, None] - x[None]) ** 2).sum(-1))
    M = oracle_closure(M)  # remove rounding-level triangle slack
    D = DistanceMatrix(np.array(M), "custom")
    assert np.array_equal(metric_closure(D).values, D.values)


@given(st.integers(0, 2**32 - 1), st.integers(1, 9))
def test_closure_properties(seed, n):
    rng = np.random.default_rng(seed)
    R = rng.exponential(size=(n, n)) * rng.integers(0, 2, size=(n, n))
    R = R + R.T
    np.fill_diagonal(R, 0)
    D = DistanceMatrix(R, "custom")
    C = metric_closure(D)
    assert C.closed
    assert np.all(C.values <= D.values)
    assert np.allclose(C.values, oracle_closure(R), rtol=1e-12, atol=0)
    assert np.array_equal(metric_closure(C).values, C.values)


@pytest.mark.parametrize("kind", list(MetricKind))
def test_closure_triangle_on_twenty_soms(kind):
    rng = np.random.default_rng(20)
    C = metric_closure(pairwise_distances([random_som(rng) for _ in range(20)], kind)).values
    for i, j, k in itertools.product(range(20), repeat=3):
        assert C[i, j] <= C[i, k] + C[k, j] + 1e-9
