"""Seeded generator for the three two-group simulation scenarios.

Each subject is a ``height x width`` image (default 10 x 10) over ``T``
time points. Voxels carry one of three profiles: a 0.1 Hz sinusoid, a
0.05 Hz sinusoid, or a flat background; Gaussian noise is added to every
voxel. Sampling is at 1 s, so the periods are 10 and 20 samples.

Signals occupy square blocks of side ``block`` (default 5) placed in the
image corners. With the default 10 x 10 image the layouts are
(rows/cols, 0-based, inclusive)::

    SC1  A: signal1 at 0-4/0-4          B: signal2 at 5-9/5-9
    SC2  A: signal1 at 0-4/0-4          B: signal2 at 0-4/0-4
    SC3  A: signal1 at 0-4/0-4,         B: signal1 at 0-4/0-4,
            signal2 at 0-4/5-9             signal2 at 5-9/0-4

so SC2 differs only in time, SC3 only in space and SC1 in both. All
other voxels are background.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum

import numpy as np

from .core import ValidationError, Volume

AMPLITUDE = 2.0  # peak-to-peak of the unit sinusoids
FREQ = {"signal1": 0.1, "signal2": 0.05}
GROUPS = ("A", "B")
DEFAULT_BLOCK = 5


class Scenario(str, Enum):
    SC1 = "SC1"
    SC2 = "SC2"
    SC3 = "SC3"


def noise_sigma(snr: float) -> float:
    """Noise standard deviation giving ``snr = amplitude / (2 sigma)``."""
    if not snr > 0:
        raise ValidationError(f"SNR must be positive, got {snr!r}")
    return AMPLITUDE / (2.0 * snr)


@dataclass(frozen=True)
class ScenarioSpec:
    scenario: Scenario = Scenario.SC1
    snr: float = 2.0
    width: int = 10
    height: int = 10
    T: int = 50
    n_per_group: int = 20
    seed: int = 0
    block: int = DEFAULT_BLOCK

    def __post_init__(self):
        name = getattr(self.scenario, "value", self.scenario)
        object.__setattr__(self, "scenario", Scenario(str(name).upper()))
        noise_sigma(self.snr)
        if self.T < 2:
            raise ValidationError("T must be at least 2")
        if self.n_per_group < 1:
            raise ValidationError("n_per_group must be at least 1")
        if self.block < 1:
            raise ValidationError("block must be at least 1")
        if self.width < 2 * self.block or self.height < 2 * self.block:
            raise ValidationError(f"a {self.width}x{self.height} image cannot hold two "
                                  f"disjoint {self.block}x{self.block} blocks")

    @property
    def noise_sigma(self) -> float:
        return noise_sigma(self.snr)

    @property
    def V(self) -> int:
        return self.width * self.height

    def with_seed(self, seed: int) -> "ScenarioSpec":
        return replace(self, seed=int(seed))


def signal_value(kind: str, t):
    """Noiseless profile value at time(s) ``t`` in seconds."""
    t = np.asarray(t, dtype=float)
    if kind == "background":
        return np.zeros_like(t)
    try:
        f = FREQ[kind]
    except KeyError:
        raise ValidationError(f"unknown profile {kind!r}") from None
    return np.sin(2.0 * np.pi * f * t)


def make_profile(kind: str, T: int, noise_sigma: float = 0.0,
                 seed=None, rng: np.random.Generator | None = None) -> np.ndarray:
    """Length-T profile sampled at t = 1..T plus i.i.d. Gaussian noise."""
    if T < 2:
        raise ValidationError("T must be at least 2")
    if noise_sigma < 0:
        raise ValidationError("noise_sigma must be non-negative")
    base = signal_value(kind, np.arange(1, T + 1))
    if noise_sigma == 0:
        return base
    rng = rng if rng is not None else np.random.default_rng(seed)
    return base + rng.normal(0.0, noise_sigma, size=T)


def _block(spec: ScenarioSpec, top: bool, left: bool) -> np.ndarray:
    b = spec.block
    rows = np.arange(b) if top else np.arange(spec.height - b, spec.height)
    cols = np.arange(b) if left else np.arange(spec.width - b, spec.width)
    return (rows[:, None] * spec.width + cols[None, :]).ravel()


def layout(spec: ScenarioSpec, group: str) -> dict:
    """Voxel indices carrying each signal profile for ``group``."""
    if group not in GROUPS:
        raise ValidationError(f"group must be one of {GROUPS}, got {group!r}")
    a = group == "A"
    sc = spec.scenario
    if sc is Scenario.SC1:
        return {"signal1": _block(spec, True, True)} if a else \
               {"signal2": _block(spec, False, False)}
    if sc is Scenario.SC2:
        return {"signal1" if a else "signal2": _block(spec, True, True)}
    return {"signal1": _block(spec, True, True),
            "signal2": _block(spec, True, False) if a else _block(spec, False, True)}


def noiseless_labels(spec: ScenarioSpec, group: str) -> np.ndarray:
    """Profile name of every voxel in row-major order."""
    labels = np.full(spec.V, "background", dtype=object)
    for kind, idx in layout(spec, group).items():
        labels[idx] = kind
    return labels


def subject_seed(seed: int, group: str, subject_index: int) -> np.random.SeedSequence:
    """Seed stream for one subject, mixed from (study seed, group, subject index)."""
    return np.random.SeedSequence([int(seed), GROUPS.index(group), int(subject_index)])


def subject_id(group: str, subject_index: int) -> str:
    return f"{group}{subject_index:03d}"


def generate_subject(spec: ScenarioSpec, group: str, subject_index: int) -> Volume:
    labels = noiseless_labels(spec, group)
    t = np.arange(1, spec.T + 1)
    clean = np.stack([signal_value(k, t) for k in labels])
    rng = np.random.default_rng(subject_seed(spec.seed, group, subject_index))
    data = clean + rng.normal(0.0, spec.noise_sigma, size=clean.shape)
    return Volume(data, spec.width, spec.height, subject_id(group, subject_index))


@dataclass(frozen=True)
class Study:
    volumes: tuple
    groups: tuple  # "A" / "B" per volume
    spec: ScenarioSpec

    @property
    def labels(self) -> np.ndarray:
        return np.array([GROUPS.index(g) for g in self.groups])


def generate_study(spec: ScenarioSpec) -> Study:
    """Both groups, group A first, subjects in index order."""
    vols, groups = [], []
    for g in GROUPS:
        for i in range(spec.n_per_group):
            vols.append(generate_subject(spec, g, i))
            groups.append(g)
    return Study(tuple(vols), tuple(groups), spec)
