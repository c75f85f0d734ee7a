"""Sum-of-minimum-distance functions between SOMs and their metric closure.

Three variants are provided:

* T-SMD compares prototype time series (Euclidean),
* S-SMD compares the voxel sets allocated to units (Hamming),
* ST-SMD compares voxel sets of the units that are nearest in time-series space.

None of them satisfies the triangle inequality in general;
:func:`metric_closure` replaces a distance matrix by shortest-path
distances over the sample so that it does.
"""
from __future__ import annotations

from typing import Sequence

import numpy as np

from . import kernels
from .core import DistanceMatrix, MetricKind, Som, ValidationError

_KIND_CODE = {MetricKind.T_SMD: kernels.KIND_T,
              MetricKind.S_SMD: kernels.KIND_S,
              MetricKind.ST_SMD: kernels.KIND_ST}


def _euclid_table(Mx: Som, My: Som) -> np.ndarray:
    if Mx.T != My.T:
        raise ValidationError(f"maps have different series lengths ({Mx.T} vs {My.T})")
    diff = Mx.weights[:, None, :] - My.weights[None, :, :]
    return np.sqrt((diff ** 2).sum(axis=-1))


def _hamming_table(Mx: Som, My: Som) -> np.ndarray:
    if Mx.V != My.V:
        raise ValidationError(f"maps cover different voxel counts ({Mx.V} vs {My.V})")
    Sx = Mx.assignment.indicator_matrix()
    Sy = My.assignment.indicator_matrix()
    return (Sx[:, None, :] != Sy[None, :, :]).sum(axis=-1) / Mx.V


def t_smd(Mx: Som, My: Som, V: int | None = None) -> float:
    """Temporal SMD: nearest-prototype Euclidean distances, both directions, over 2V.

    ``V`` defaults to the number of voxels the maps were trained on.
    """
    V = Mx.V if V is None else int(V)
    if V < 1:
        raise ValidationError("V must be at least 1")
    E = _euclid_table(Mx, My)
    return float((E.min(axis=1).sum() + E.min(axis=0).sum()) / (2.0 * V))


def hamming_distance(Sx, Sy) -> float:
    """Proportion of positions at which two binary vectors disagree."""
    Sx = np.asarray(Sx).astype(bool)
    Sy = np.asarray(Sy).astype(bool)
    if Sx.shape != Sy.shape or Sx.ndim != 1:
        raise ValidationError(f"binary vectors must share one length, got {Sx.shape} and {Sy.shape}")
    return float(np.count_nonzero(Sx != Sy) / Sx.size)


def s_smd(Mx: Som, My: Som) -> float:
    """Spatial SMD: nearest voxel-set Hamming distances, both directions, over 2V."""
    H = _hamming_table(Mx, My)
    return float((H.min(axis=1).sum() + H.min(axis=0).sum()) / (2.0 * Mx.V))


def st_smd(Mx: Som, My: Som) -> float:
    """Spatio-temporal SMD.

    Each unit is paired with the unit of the other map whose prototype is
    Euclidean-nearest (lowest index on ties); the Hamming distances between
    the voxel sets of paired units are summed over both directions and halved.
    """
    E = _euclid_table(Mx, My)
    H = _hamming_table(Mx, My)
    fwd = H[np.arange(Mx.K), E.argmin(axis=1)].sum()
    bwd = H[E.argmin(axis=0), np.arange(My.K)].sum()
    return float((fwd + bwd) / 2.0)


SCALAR = {MetricKind.T_SMD: t_smd, MetricKind.S_SMD: s_smd, MetricKind.ST_SMD: st_smd}


def distance(Mx: Som, My: Som, kind) -> float:
    return SCALAR[MetricKind.parse(kind)](Mx, My)


def _check_sample(sample: Sequence[Som], kind: MetricKind):
    ref = sample[0]
    for i, som in enumerate(sample[1:], start=1):
        if som.T != ref.T:
            raise ValidationError(f"SOM {i} has T={som.T}, expected {ref.T}")
        if kind is not MetricKind.T_SMD and som.V != ref.V:
            raise ValidationError(f"SOM {i} covers V={som.V} voxels, expected {ref.V}")


def pairwise_distances(sample: Sequence[Som], kind, ids=None) -> DistanceMatrix:
    """Raw (unclosed) distance matrix over a sample of SOMs."""
    kind = MetricKind.parse(kind)
    sample = list(sample)
    if not sample:
        raise ValidationError("cannot build a distance matrix over an empty sample")
    _check_sample(sample, kind)
    n = len(sample)
    same_shape = all(s.K == sample[0].K and s.V == sample[0].V for s in sample)
    if same_shape:
        W = np.stack([s.weights for s in sample])
        A = np.stack([s.assignment.bmu_of for s in sample])
        D = kernels.smd_matrix(W, A, _KIND_CODE[kind])
    else:
        D = np.zeros((n, n))
        f = SCALAR[kind]
        for i in range(n):
            for j in range(i + 1, n):
                D[i, j] = D[j, i] = f(sample[i], sample[j])
    return DistanceMatrix(D, kind.value, closed=False, ids=ids)


def metric_closure(D: DistanceMatrix) -> DistanceMatrix:
    """Shortest-path distances on the complete graph over the sample.

    The result never exceeds the input, satisfies the triangle inequality
    and is a fixed point of this function.
    """
    if not isinstance(D, DistanceMatrix):
        D = DistanceMatrix(np.asarray(D, dtype=float), "custom")
    closed = kernels.floyd_warshall(D.values)
    return DistanceMatrix(closed, D.metric_name, closed=True, ids=D.ids)
