"""Representativeness of mean-SOM units and overlap with reference maps."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import kernels
from .core import Som, ValidationError, Volume


def jaccard_distance(x, y) -> float:
    """Disagreements over union size for two binary vectors.

    Two all-zero vectors are treated as identical (distance 0).
    """
    x = np.asarray(x).astype(bool)
    y = np.asarray(y).astype(bool)
    if x.shape != y.shape:
        raise ValidationError(f"length mismatch: {x.shape} vs {y.shape}")
    c11 = np.count_nonzero(x & y)
    c10 = np.count_nonzero(x & ~y)
    c01 = np.count_nonzero(~x & y)
    union = c11 + c10 + c01
    if union == 0:
        return 0.0
    return (c10 + c01) / union


def _check(mean_som: Som, volume: Volume):
    if mean_som.T != volume.T or mean_som.V != volume.V:
        raise ValidationError(
            f"mean SOM is {mean_som.V}x{mean_som.T} but volume "
            f"{volume.subject_id!r} is {volume.V}x{volume.T}")


def _projected(mean_som: Som, volume: Volume) -> np.ndarray:
    _check(mean_som, volume)
    return kernels.bmu_assign(volume.data, mean_som.weights)


def global_jaccard(mean_som: Som, subject_volume: Volume, k: int) -> float:
    """Jaccard distance between unit k's voxels in the mean SOM and the
    voxels of ``subject_volume`` whose BMU in the mean SOM is k."""
    if not 0 <= k < mean_som.K:
        raise ValidationError(f"unit {k} outside [0, {mean_som.K})")
    subj = _projected(mean_som, subject_volume)
    return jaccard_distance(mean_som.assignment.bmu_of == k, subj == k)


@dataclass(frozen=True)
class UnitRanking:
    values: np.ndarray  # sample Jaccard index per unit
    order: np.ndarray   # unit indices, most representative first

    def best(self, n: int = 3) -> list[int]:
        return [int(k) for k in self.order[:n]]


def sample_jaccard_index(mean_som: Som, group_volumes: Sequence[Volume]) -> UnitRanking:
    """Average per-unit global Jaccard distance over a group of subjects.

    Units are ranked ascending (smallest = most representative), ties by
    unit index.
    """
    if len(group_volumes) == 0:
        raise ValidationError("group is empty")
    own = mean_som.assignment.bmu_of
    totals = np.zeros(mean_som.K)
    for vol in group_volumes:
        subj = _projected(mean_som, vol)
        for k in range(mean_som.K):
            totals[k] += jaccard_distance(own == k, subj == k)
    values = totals / len(group_volumes)
    return UnitRanking(values, np.argsort(values, kind="stable"))


def overlap_report(som: Som, ranking: UnitRanking, reference) -> list[tuple[int, float]]:
    """Fraction of the reference map's active voxels falling in each unit.

    Returned as ``(unit, fraction)`` pairs in ranking order. Because the
    assignment partitions all voxels, the fractions sum to one.
    """
    ref = np.asarray(reference).astype(bool)
    if ref.shape != (som.V,):
        raise ValidationError(f"reference map must have length {som.V}, got {ref.shape}")
    total = np.count_nonzero(ref)
    if total == 0:
        raise ValidationError("reference map has no active voxels")
    counts = np.bincount(som.assignment.bmu_of[ref], minlength=som.K)
    return [(int(k), counts[k] / total) for k in ranking.order]
