"""End-to-end runs: simulate, train, measure, close, test.

Everything is keyed on integer seeds mixed through
:class:`numpy.random.SeedSequence`, so results do not depend on the
number of worker processes.
"""
from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .core import GridSpec, GroupedSample, MetricKind, Som, Volume
from .inference import permutation_test
from .metrics import metric_closure, pairwise_distances
from .synth import DEFAULT_BLOCK, Scenario, ScenarioSpec, generate_study
from .trainer import TrainingSchedule, train_batch

WORKERS_ENV = "SOMFRECHET_WORKERS"
ALL_METRICS = tuple(MetricKind)


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get(WORKERS_ENV, "1")))
    except ValueError:
        return 1


def derive_seed(*parts: int) -> int:
    """Mix integers into one 63-bit seed."""
    state = np.random.SeedSequence([int(p) for p in parts]).generate_state(2, dtype=np.uint32)
    return int((int(state[0]) << 31) ^ int(state[1])) & ((1 << 63) - 1)


def parallel_map(fn: Callable, items: Iterable, workers: int = 1) -> list:
    """Ordered map, in-process for one worker, else over a process pool."""
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items, chunksize=max(1, len(items) // (4 * workers))))


def subject_schedule(schedule: TrainingSchedule, subject_index: int) -> TrainingSchedule:
    return TrainingSchedule(schedule.Gamma, schedule.sigma0, schedule.sigma_min,
                            schedule.alpha0, derive_seed(schedule.seed, subject_index))


def _train_one(args) -> Som:
    volume, grid, schedule = args
    return train_batch(volume, grid, schedule)


def train_all(volumes: Sequence[Volume], grid: GridSpec, schedule: TrainingSchedule,
              workers: int = 1) -> list[Som]:
    """Train one SOM per volume; subject i uses a seed mixed from (schedule.seed, i)."""
    jobs = [(v, grid, subject_schedule(schedule, i)) for i, v in enumerate(volumes)]
    return parallel_map(_train_one, jobs, workers)


@dataclass
class MetricOutcome:
    metric: str
    statistic: float
    p_value: float
    null_distribution: np.ndarray = field(repr=False)


def evaluate_metrics(soms: Sequence[Som], labels, B: int, seed: int,
                     metrics: Sequence[MetricKind] = ALL_METRICS,
                     statistic: str = "t") -> dict[str, MetricOutcome]:
    groups = GroupedSample(np.asarray(labels))
    out = {}
    for kind in metrics:
        kind = MetricKind.parse(kind)
        D = metric_closure(pairwise_distances(soms, kind))
        res = permutation_test(D, groups, B=B, seed=seed, statistic=statistic)
        out[kind.value] = MetricOutcome(kind.value, res.statistic, res.p_value,
                                        res.null_distribution)
    return out


@dataclass(frozen=True)
class ReplicateConfig:
    scenario: str = "SC1"
    snr: float = 2.0
    grid: str = "3x3"
    n_per_group: int = 20
    T: int = 50
    Gamma: int = 100
    sigma0: float | None = None
    sigma_min: float = 0.1
    B: int = 100
    seed: int = 0
    block: int = DEFAULT_BLOCK
    metrics: tuple = tuple(m.value for m in ALL_METRICS)

    def cell(self) -> str:
        return f"{self.scenario}_snr{self.snr:g}_grid{self.grid}"

    def replicate_seed(self, rep: int) -> int:
        sc = list(Scenario).index(Scenario(self.scenario))
        g = GridSpec.parse(self.grid)
        return derive_seed(self.seed, sc, round(self.snr * 1000), g.k1, g.k2, rep)


def run_replicate(cfg: ReplicateConfig, rep: int) -> dict:
    """Simulate one study, train all SOMs and test every metric.

    Returns a plain dict (JSON-ready) with the p-value and observed
    statistic per metric.
    """
    base = cfg.replicate_seed(rep)
    spec = ScenarioSpec(cfg.scenario, cfg.snr, T=cfg.T, n_per_group=cfg.n_per_group,
                        seed=derive_seed(base, 1), block=cfg.block)
    study = generate_study(spec)
    grid = GridSpec.parse(cfg.grid)
    schedule = TrainingSchedule(cfg.Gamma, cfg.sigma0, cfg.sigma_min, seed=derive_seed(base, 2))
    soms = train_all(study.volumes, grid, schedule)
    outcomes = evaluate_metrics(soms, study.labels, cfg.B, derive_seed(base, 3), cfg.metrics)
    return {
        "cell": cfg.cell(), "scenario": cfg.scenario, "snr": cfg.snr, "grid": cfg.grid,
        "replicate": rep, "seed": base,
        "p_values": {k: o.p_value for k, o in outcomes.items()},
        "statistics": {k: o.statistic for k, o in outcomes.items()},
    }


def _run_replicate_job(args) -> dict:
    return run_replicate(*args)


def run_replicates(cfg: ReplicateConfig, reps: Sequence[int], workers: int = 1) -> list[dict]:
    return parallel_map(_run_replicate_job, [(cfg, r) for r in reps], workers)


def summarize(records: Sequence[dict]) -> dict[str, tuple[float, float, int]]:
    """Mean, standard deviation (ddof=1) and count of p-values per metric."""
    by_metric: dict[str, list[float]] = {}
    for rec in records:
        for k, p in rec["p_values"].items():
            by_metric.setdefault(k, []).append(p)
    out = {}
    for k, ps in by_metric.items():
        a = np.asarray(ps)
        sd = float(a.std(ddof=1)) if a.size > 1 else 0.0
        out[k] = (float(a.mean()), sd, int(a.size))
    return out
