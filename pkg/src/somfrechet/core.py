"""Domain data model shared by the trainer, metrics and inference modules.

All containers are frozen dataclasses over read-only numpy arrays, so they
can be shared freely between threads and worker processes.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Sequence

import numpy as np

TRIANGLE_TOL = 1e-9


class ValidationError(ValueError):
    """Raised when input data violates a domain invariant."""


def _frozen(a, dtype=float) -> np.ndarray:
    arr = np.array(a, dtype=dtype, copy=True)
    arr.setflags(write=False)
    return arr


class MetricKind(str, Enum):
    T_SMD = "T-SMD"
    S_SMD = "S-SMD"
    ST_SMD = "ST-SMD"

    @classmethod
    def parse(cls, name) -> "MetricKind":
        if isinstance(name, cls):
            return name
        key = str(name).strip().upper().replace("_", "-")
        for kind in cls:
            if kind.value == key:
                return kind
        raise ValueError(f"unknown metric {name!r}; expected one of "
                         f"{', '.join(k.value for k in cls)}")


@dataclass(frozen=True)
class Volume:
    """A subject's V x T matrix of voxel time series.

    ``width`` and ``height`` are optional grid extents; when given,
    ``width * height`` must equal the number of voxels.
    """

    data: np.ndarray
    width: Optional[int] = None
    height: Optional[int] = None
    subject_id: str = ""

    def __post_init__(self):
        data = np.asarray(self.data, dtype=float)
        if data.ndim != 2:
            raise ValidationError(f"volume data must be 2-D, got shape {data.shape}")
        V, T = data.shape
        if V < 1 or T < 2:
            raise ValidationError(f"volume needs V >= 1 and T >= 2, got V={V}, T={T}")
        bad = np.argwhere(~np.isfinite(data))
        if bad.size:
            v, t = bad[0]
            raise ValidationError(f"non-finite value {float(data[v, t])} at voxel {v}, time {t}")
        if (self.width is None) != (self.height is None):
            raise ValidationError("width and height must be given together")
        if self.width is not None and self.width * self.height != V:
            raise ValidationError(
                f"extent mismatch: {self.width}x{self.height} = "
                f"{self.width * self.height} voxels but data has {V} rows")
        object.__setattr__(self, "data", _frozen(data))

    @property
    def V(self) -> int:
        return self.data.shape[0]

    @property
    def T(self) -> int:
        return self.data.shape[1]


def validate_volume(raw, extents: Optional[tuple[int, int]] = None,
                    subject_id: str = "") -> Volume:
    """Build a :class:`Volume` from a rectangular array, checking invariants.

    Parameters
    ----------
    raw : array_like, shape (V, T)
    extents : (width, height), optional
    subject_id : str
    """
    try:
        arr = np.asarray(raw, dtype=float)
    except ValueError as exc:  # ragged nested lists
        raise ValidationError(f"volume data is not rectangular: {exc}") from None
    width, height = extents if extents is not None else (None, None)
    return Volume(arr, width, height, subject_id)


@dataclass(frozen=True)
class GridSpec:
    """Rectangular map of ``k1`` rows by ``k2`` columns.

    Units are indexed row-major from 0, left to right and top to bottom.
    """

    k1: int
    k2: int

    def __post_init__(self):
        for name in ("k1", "k2"):
            val = getattr(self, name)
            if isinstance(val, bool) or not isinstance(val, (int, np.integer)) or val < 1:
                raise ValidationError(f"{name} must be a positive integer, got {val!r}")
        object.__setattr__(self, "k1", int(self.k1))
        object.__setattr__(self, "k2", int(self.k2))

    @property
    def K(self) -> int:
        return self.k1 * self.k2

    def coord(self, k: int) -> tuple[int, int]:
        if not 0 <= k < self.K:
            raise IndexError(f"unit index {k} outside [0, {self.K})")
        return divmod(int(k), self.k2)

    def index(self, row: int, col: int) -> int:
        if not (0 <= row < self.k1 and 0 <= col < self.k2):
            raise IndexError(f"coordinate ({row}, {col}) outside {self.k1}x{self.k2} grid")
        return row * self.k2 + col

    def coords(self) -> np.ndarray:
        """(K, 2) array of unit coordinates in index order."""
        k = np.arange(self.K)
        return np.stack([k // self.k2, k % self.k2], axis=1).astype(float)

    def sq_grid_distances(self) -> np.ndarray:
        """(K, K) squared Euclidean distances between unit coordinates."""
        c = self.coords()
        diff = c[:, None, :] - c[None, :, :]
        return (diff ** 2).sum(axis=-1)

    @classmethod
    def parse(cls, text: str) -> "GridSpec":
        try:
            a, b = str(text).lower().split("x")
            return cls(int(a), int(b))
        except ValueError:
            raise ValidationError(f"grid must look like '3x3', got {text!r}") from None

    def __str__(self):
        return f"{self.k1}x{self.k2}"


@dataclass(frozen=True)
class Assignment:
    """Hard voxel-to-unit assignment; ``bmu_of[v]`` is the unit of voxel v."""

    bmu_of: np.ndarray
    K: int

    def __post_init__(self):
        b = np.asarray(self.bmu_of)
        if b.ndim != 1 or b.size < 1:
            raise ValidationError("assignment must be a non-empty 1-D vector")
        if not np.issubdtype(b.dtype, np.integer):
            if not np.all(b == np.round(b)):
                raise ValidationError("assignment entries must be integers")
        b = b.astype(np.int64)
        if b.min() < 0 or b.max() >= self.K:
            raise ValidationError(f"assignment entries must lie in [0, {self.K})")
        object.__setattr__(self, "bmu_of", _frozen(b, np.int64))

    @property
    def V(self) -> int:
        return self.bmu_of.size

    def voxels_of(self, k: int) -> np.ndarray:
        """Binary indicator of length V for the voxels assigned to unit k."""
        return (self.bmu_of == k).astype(np.uint8)

    def indicator_matrix(self) -> np.ndarray:
        """(K, V) boolean matrix whose rows are the unit indicators."""
        return self.bmu_of[None, :] == np.arange(self.K)[:, None]

    def counts(self) -> np.ndarray:
        return np.bincount(self.bmu_of, minlength=self.K)


@dataclass(frozen=True)
class Som:
    """A trained map: K prototype time series plus the assignment they induce."""

    grid: GridSpec
    weights: np.ndarray
    assignment: Assignment

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        if w.ndim != 2 or w.shape[0] != self.grid.K:
            raise ValidationError(
                f"expected {self.grid.K} weight vectors, got array of shape {w.shape}")
        if not np.all(np.isfinite(w)):
            raise ValidationError("SOM weights must be finite")
        if self.assignment.K != self.grid.K:
            raise ValidationError("assignment unit count does not match grid")
        object.__setattr__(self, "weights", _frozen(w))

    @property
    def K(self) -> int:
        return self.grid.K

    @property
    def T(self) -> int:
        return self.weights.shape[1]

    @property
    def source_T(self) -> int:
        return self.weights.shape[1]

    @property
    def V(self) -> int:
        return self.assignment.V


@dataclass(frozen=True)
class DistanceMatrix:
    """Symmetric n x n matrix of pairwise distances between SOMs.

    ``closed`` records that the shortest-path closure was applied, in which
    case the triangle inequality is checked on construction.
    """

    values: np.ndarray
    metric_name: str
    closed: bool = False
    ids: Optional[tuple] = None

    def __post_init__(self):
        D = np.asarray(self.values, dtype=float)
        if D.ndim != 2 or D.shape[0] != D.shape[1]:
            raise ValidationError(f"distance matrix must be square, got {D.shape}")
        if not np.all(np.isfinite(D)):
            raise ValidationError("distance matrix contains non-finite entries")
        if not np.array_equal(D, D.T):
            i, j = np.argwhere(D != D.T)[0]
            raise ValidationError(f"distance matrix not symmetric at ({i}, {j})")
        if np.any(np.diag(D) != 0):
            raise ValidationError("distance matrix must have a zero diagonal")
        if np.any(D < 0):
            raise ValidationError("distance matrix has negative entries")
        if self.closed:
            for k in range(D.shape[0]):
                if np.any(D > D[:, k:k + 1] + D[k:k + 1, :] + TRIANGLE_TOL):
                    raise ValidationError(
                        f"closed matrix violates the triangle inequality via {k}")
        try:
            object.__setattr__(self, "metric_name", MetricKind.parse(self.metric_name).value)
        except ValueError:
            pass  # toy/custom metrics keep their own label
        object.__setattr__(self, "values", _frozen(D))
        if self.ids is not None:
            ids = tuple(str(i) for i in self.ids)
            if len(ids) != D.shape[0]:
                raise ValidationError("ids length does not match matrix size")
            object.__setattr__(self, "ids", ids)

    @property
    def n(self) -> int:
        return self.values.shape[0]


@dataclass(frozen=True)
class GroupedSample:
    """Condition label for each sample index; labels are 0..J-1."""

    labels: np.ndarray
    names: Optional[tuple] = None

    def __post_init__(self):
        lab = np.asarray(self.labels)
        if lab.ndim != 1 or lab.size == 0:
            raise ValidationError("labels must be a non-empty 1-D vector")
        lab = lab.astype(np.int64)
        J = int(lab.max()) + 1
        if lab.min() < 0:
            raise ValidationError("labels must be non-negative")
        sizes = np.bincount(lab, minlength=J)
        if np.any(sizes == 0):
            raise ValidationError(f"every condition must be non-empty, sizes={sizes.tolist()}")
        object.__setattr__(self, "labels", _frozen(lab, np.int64))
        if self.names is not None:
            if len(self.names) != J:
                raise ValidationError("one name per condition required")
            object.__setattr__(self, "names", tuple(str(n) for n in self.names))

    @classmethod
    def from_sizes(cls, sizes: Sequence[int], names=None) -> "GroupedSample":
        return cls(np.repeat(np.arange(len(sizes)), sizes), names)

    @property
    def J(self) -> int:
        return int(self.labels.max()) + 1

    @property
    def N(self) -> int:
        return self.labels.size

    @property
    def group_sizes(self) -> np.ndarray:
        return np.bincount(self.labels, minlength=self.J)

    def members(self, j: int) -> np.ndarray:
        return np.flatnonzero(self.labels == j)

    def name(self, j: int) -> str:
        return self.names[j] if self.names is not None else str(j)


@dataclass(frozen=True)
class TestResult:
    """Observed statistic with its permutation null distribution."""

    __test__ = False  # not a pytest class

    statistic: float
    null_distribution: np.ndarray
    p_value: float
    metric_name: str
    seed: int
    B: int
    delta0: float = 0.0
    statistic_kind: str = "t"
    add_one: bool = False
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        null = _frozen(self.null_distribution)
        if null.ndim != 1 or null.size != self.B or self.B < 1:
            raise ValidationError("null distribution must hold exactly B >= 1 values")
        if not 0.0 <= self.p_value <= 1.0:
            raise ValidationError(f"p-value {self.p_value} outside [0, 1]")
        object.__setattr__(self, "null_distribution", null)
