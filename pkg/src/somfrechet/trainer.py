"""Batch and sequential SOM training on a single subject volume."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from . import kernels
from .core import Assignment, GridSpec, Som, ValidationError, Volume

DEFAULT_GAMMA = 100
DEFAULT_SIGMA_MIN = 0.1
DEFAULT_ALPHA0 = 0.1
# the sequential learning rate decays to this fraction of alpha0 at gamma = Gamma
ALPHA_FLOOR_RATIO = 0.01


@dataclass(frozen=True)
class TrainingSchedule:
    """Iteration count, neighbourhood radius schedule and learning rate.

    ``sigma0`` defaults to the map height ``k1`` when left as ``None``;
    use :meth:`resolved` to obtain a schedule with it filled in.
    """

    Gamma: int = DEFAULT_GAMMA
    sigma0: Optional[float] = None
    sigma_min: float = DEFAULT_SIGMA_MIN
    alpha0: float = DEFAULT_ALPHA0
    seed: int = 0

    def __post_init__(self):
        if int(self.Gamma) != self.Gamma or self.Gamma < 1:
            raise ValidationError(f"Gamma must be a positive integer, got {self.Gamma!r}")
        if self.sigma0 is not None and not self.sigma0 > 0:
            raise ValidationError(f"sigma0 must be positive, got {self.sigma0!r}")
        if not self.sigma_min > 0:
            raise ValidationError(f"sigma_min must be positive, got {self.sigma_min!r}")
        if self.sigma0 is not None and self.sigma_min > self.sigma0:
            raise ValidationError("sigma_min may not exceed sigma0")
        if not 0 < self.alpha0 <= 1:
            raise ValidationError(f"alpha0 must lie in (0, 1], got {self.alpha0!r}")

    def resolved(self, grid: GridSpec) -> "TrainingSchedule":
        if self.sigma0 is not None:
            return self
        return TrainingSchedule(self.Gamma, float(grid.k1),
                                min(self.sigma_min, float(grid.k1)), self.alpha0, self.seed)

    def sigma(self, gamma: int) -> float:
        """Neighbourhood radius used at iteration ``gamma`` (0-based).

        Linear decay ``sigma(g + 1) = sigma0 * (1 - g / Gamma)`` clamped
        below at ``sigma_min`` so the kernel stays defined at the end.
        """
        if self.sigma0 is None:
            raise ValidationError("sigma0 unresolved; call resolved(grid) first")
        if gamma <= 0:
            return float(self.sigma0)
        return max(self.sigma0 * (1.0 - (gamma - 1) / self.Gamma), self.sigma_min)

    def alpha(self, gamma: int) -> float:
        return self.alpha0 * ALPHA_FLOOR_RATIO ** (gamma / self.Gamma)


def bmu_index(x, som: Som) -> int:
    """Unit whose weight vector is Euclidean-nearest to ``x``; ties go to the lowest index."""
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.shape[0] != som.T:
        raise ValidationError(f"input of length {x.shape} does not match SOM length {som.T}")
    if not np.all(np.isfinite(x)):
        raise ValidationError("input vector must be finite")
    return int(kernels.bmu_assign(x[None, :], som.weights)[0])


def neighborhood_kernel(k: int, c: int, sigma: float, grid: GridSpec) -> float:
    """Gaussian kernel on grid coordinates between units ``k`` and ``c``."""
    if not sigma > 0:
        raise ValidationError(f"sigma must be positive, got {sigma!r}")
    (r1, c1), (r2, c2) = grid.coord(k), grid.coord(c)
    return float(np.exp(-((r1 - r2) ** 2 + (c1 - c2) ** 2) / (2.0 * sigma ** 2)))


def _check_T(som: Som, volume: Volume):
    if som.T != volume.T:
        raise ValidationError(f"SOM has T={som.T} but volume has T={volume.T}")


def assign(weights, grid: GridSpec, volume: Volume) -> Som:
    """Wrap ``weights`` in a :class:`Som` whose assignment comes from ``volume``."""
    bmu = kernels.bmu_assign(volume.data, weights)
    return Som(grid, weights, Assignment(bmu, grid.K))


def batch_step(som: Som, volume: Volume, sigma: float) -> Som:
    """One batch update using the BMUs of the current weights.

    The returned SOM carries the assignment induced by its new weights.
    """
    _check_T(som, volume)
    if not sigma > 0:
        raise ValidationError(f"sigma must be positive, got {sigma!r}")
    bmu = kernels.bmu_assign(volume.data, som.weights)
    new_w = kernels.batch_update(volume.data, bmu, som.grid.sq_grid_distances(), float(sigma))
    return assign(new_w, som.grid, volume)


def init_weights(volume: Volume, grid: GridSpec, rng: np.random.Generator) -> np.ndarray:
    """Uniform draws over each time point's observed data range."""
    lo = volume.data.min(axis=0)
    hi = volume.data.max(axis=0)
    return lo + (hi - lo) * rng.random((grid.K, volume.T))


def initial_som(volume: Volume, grid: GridSpec, seed: int) -> Som:
    rng = np.random.default_rng(seed)
    return assign(init_weights(volume, grid, rng), grid, volume)


def train_batch(volume: Volume, grid: GridSpec,
                schedule: Optional[TrainingSchedule] = None) -> Som:
    """Train a SOM with the batch algorithm.

    Parameters
    ----------
    volume : Volume
        Voxel time series; one input vector per row.
    grid : GridSpec
    schedule : TrainingSchedule, optional
        Defaults to 100 iterations with ``sigma0 = grid.k1`` and seed 0.

    Returns
    -------
    Som
        Final weights and the voxel assignment they induce.
    """
    schedule = (schedule or TrainingSchedule()).resolved(grid)
    rng = np.random.default_rng(schedule.seed)
    W = init_weights(volume, grid, rng)
    X = volume.data
    sq = grid.sq_grid_distances()
    for gamma in range(schedule.Gamma):
        bmu = kernels.bmu_assign(X, W)
        W = kernels.batch_update(X, bmu, sq, schedule.sigma(gamma))
    return assign(W, grid, volume)


def sequential_update(weights: np.ndarray, x: np.ndarray, bmu: int, alpha: float,
                      sigma: float, grid: GridSpec) -> np.ndarray:
    """Move every unit towards ``x`` by ``alpha`` times its kernel weight to the BMU."""
    h = np.exp(-grid.sq_grid_distances()[bmu] / (2.0 * sigma ** 2))
    return weights + (alpha * h)[:, None] * (x[None, :] - weights)


def train_sequential(volume: Volume, grid: GridSpec,
                     schedule: Optional[TrainingSchedule] = None,
                     alpha: Optional[Callable[[int], float]] = None) -> Som:
    """Train a SOM with the online (sequential) algorithm.

    At each iteration all voxels are presented once, in a seeded random
    order. ``alpha`` overrides the learning-rate schedule (a function of
    the iteration index); by default ``schedule.alpha`` decays
    exponentially from ``alpha0`` to 1% of it.
    """
    schedule = (schedule or TrainingSchedule()).resolved(grid)
    alpha = alpha or schedule.alpha
    rng = np.random.default_rng(schedule.seed)
    W = init_weights(volume, grid, rng)
    X = volume.data
    sq = grid.sq_grid_distances()
    for gamma in range(schedule.Gamma):
        a = float(alpha(gamma))
        if not 0.0 <= a <= 1.0:
            raise ValidationError(f"learning rate {a} at iteration {gamma} outside [0, 1]")
        sigma = schedule.sigma(gamma)
        h_all = np.exp(-sq / (2.0 * sigma ** 2))
        for v in rng.permutation(volume.V):
            x = X[v]
            c = int(kernels.bmu_assign(x[None, :], W)[0])
            W = W + (a * h_all[c])[:, None] * (x[None, :] - W)
    return assign(W, grid, volume)


def quantization_error(som: Som, volume: Volume) -> float:
    """Summed Euclidean distance from each voxel series to its BMU prototype."""
    _check_T(som, volume)
    bmu = kernels.bmu_assign(volume.data, som.weights)
    return float(np.linalg.norm(volume.data - som.weights[bmu], axis=1).sum())
