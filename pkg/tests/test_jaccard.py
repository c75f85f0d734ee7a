import numpy as np
import pytest
from hypothesis import given, strategies as st

from somfrechet.core import GridSpec, ValidationError, Volume
from somfrechet.jaccard import (UnitRanking, global_jaccard, jaccard_distance, overlap_report,
                                sample_jaccard_index)
from somfrechet.trainer import TrainingSchedule, train_batch

from _support import make_som


def _indicator(idx, n=6):
    x = np.zeros(n, dtype=int)
    x[list(idx)] = 1
    return x


def test_jaccard_examples():
    a = _indicator([1, 2, 3])
    assert jaccard_distance(a, a) == 0.0
    assert jaccard_distance(a, _indicator([0, 4])) == 1.0
    assert jaccard_distance(a, _indicator([2, 3, 4])) == 0.5
    assert jaccard_distance(np.zeros(4), np.zeros(4)) == 0.0


@given(st.lists(st.booleans(), min_size=1, max_size=30), st.data())
def test_jaccard_is_bounded_and_symmetric(x, data):
    y = data.draw(st.lists(st.booleans(), min_size=len(x), max_size=len(x)))
    d = jaccard_distance(x, y)
    assert 0.0 <= d <= 1.0
    assert d == jaccard_distance(y, x)


def _toy():
    # prototypes at 0 and 10, voxels 0, 0, 10, 10
    som = make_som([[0.0, 0.0], [10.0, 10.0]], [0, 0, 1, 1])
    return som, _vol([0, 0, 10, 10])


def _vol(levels):
    return Volume(np.repeat(np.asarray(levels, dtype=float)[:, None], 2, axis=1))


def test_global_jaccard_self_is_zero():
    som, vol = _toy()
    assert [global_jaccard(som, vol, k) for k in range(2)] == [0.0, 0.0]


def test_global_jaccard_one_reassigned_voxel():
    som, _ = _toy()
    moved = _vol([0, 10, 10, 10])
    # unit 0: C11=1, C10=1, C01=0; unit 1: C11=2, C10=0, C01=1
    assert global_jaccard(som, moved, 0) == 1 / 2
    assert global_jaccard(som, moved, 1) == 1 / 3


def test_global_jaccard_empty_unit():
    som = make_som([[0.0, 0.0], [10.0, 10.0], [99.0, 99.0]], [0, 0, 1, 1])
    assert global_jaccard(som, _vol([0, 1, 9, 10]), 2) == 0.0
    with pytest.raises(ValidationError):
        global_jaccard(som, _vol([0, 0, 0, 0]), 3)


def test_sample_index_examples():
    som, vol = _toy()
    assert sample_jaccard_index(som, [vol]).values.tolist() == [0.0, 0.0]
    moved = _vol([0, 10, 10, 10])
    r = sample_jaccard_index(som, [vol, moved])
    assert r.values.tolist() == [(0 + 1 / 2) / 2, (0 + 1 / 3) / 2]
    assert r.best(2) == [1, 0]


def test_sample_index_matches_recomputation():
    rng = np.random.default_rng(4)
    vols = [Volume(rng.normal(size=(30, 5))) for _ in range(3)]
    mean = train_batch(vols[0], GridSpec(2, 2), TrainingSchedule(Gamma=10))
    r = sample_jaccard_index(mean, vols)
    expect = [np.mean([global_jaccard(mean, v, k) for v in vols]) for k in range(4)]
    assert r.values.tolist() == pytest.approx(expect, abs=1e-15)
    assert list(r.order) == sorted(range(4), key=lambda k: (r.values[k], k))


def test_overlap_examples():
    som = make_som(np.zeros((3, 1)), [0, 0, 1, 1, 2, 2])
    ranking = UnitRanking(np.array([0.2, 0.1, 0.3]), np.array([1, 0, 2]))
    assert overlap_report(som, ranking, _indicator([2, 3])) == [(1, 1.0), (0, 0.0), (2, 0.0)]
    assert overlap_report(som, ranking, _indicator([0, 2])) == [(1, 0.5), (0, 0.5), (2, 0.0)]
    with pytest.raises(ValidationError):
        overlap_report(som, ranking, np.zeros(6))


@given(st.integers(0, 2**32 - 1), st.integers(1, 9), st.integers(1, 60))
def test_overlap_columns_sum_to_one(seed, K, V):
    rng = np.random.default_rng(seed)
    som = make_som(np.zeros((K, 1)), rng.integers(0, K, size=V))
    ref = rng.integers(0, 2, size=V)
    ref[rng.integers(V)] = 1
    ranking = UnitRanking(np.zeros(K), rng.permutation(K))
    fractions = [f for _, f in overlap_report(som, ranking, ref)]
    assert abs(sum(fractions) - 1.0) <= 1e-12
