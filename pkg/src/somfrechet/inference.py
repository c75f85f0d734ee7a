"""Group inference on a finite metric space of SOMs.

Group centres are restricted Fréchet means: the sample element minimising
the summed squared distances to the rest of its group. They only need
the margins of the distance matrix, so recomputing them under thousands
of label permutations is cheap.

Within-group sums always run over members in sample-index order, and
sums that combine groups use :func:`math.fsum`, which is exactly rounded
and so independent of order. A permutation that reproduces the observed
partition (possibly with the groups swapped) thus yields the observed
statistic bit for bit.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import DistanceMatrix, GroupedSample, TestResult, ValidationError


def _values(D) -> np.ndarray:
    return np.asarray(D.values if isinstance(D, DistanceMatrix) else D, dtype=float)


def _members(members, n: int) -> np.ndarray:
    m = np.unique(np.asarray(members, dtype=np.int64))
    if m.size == 0:
        raise ValidationError("member set is empty")
    if m[0] < 0 or m[-1] >= n:
        raise ValidationError(f"member indices must lie in [0, {n})")
    return m


def _sq_sum(values) -> float:
    return math.fsum(np.square(values))


def restricted_frechet_mean(D, members) -> int:
    """Sample index of the member minimising squared distances to all members.

    Ties are broken towards the lowest sample index. The Bessel factor
    ``1/(n-1)`` is a positive constant and does not affect the choice.
    """
    M = _values(D)
    m = _members(members, M.shape[0])
    if m.size == 1:
        return int(m[0])
    sub = M[np.ix_(m, m)]
    crit = np.square(sub).sum(axis=0) / (m.size - 1)
    return int(m[int(np.argmin(crit))])


def frechet_variance(D, members, mean_index: int) -> float:
    """Bessel-corrected mean squared distance of the members to ``mean_index``."""
    M = _values(D)
    m = _members(members, M.shape[0])
    if m.size < 2:
        raise ValidationError("Fréchet variance needs at least two members")
    if int(mean_index) not in set(m.tolist()):
        raise ValidationError(f"mean index {mean_index} is not a group member")
    return _sq_sum(M[m, int(mean_index)]) / (m.size - 1)


@dataclass(frozen=True)
class GroupStats:
    mean_index: tuple
    variance: tuple
    group_sizes: tuple


def group_stats(D, groups: GroupedSample) -> GroupStats:
    means, variances = [], []
    for j in range(groups.J):
        m = groups.members(j)
        mu = restricted_frechet_mean(D, m)
        means.append(mu)
        variances.append(frechet_variance(D, m, mu) if m.size > 1 else float("nan"))
    return GroupStats(tuple(means), tuple(variances), tuple(groups.group_sizes.tolist()))


def _ratio(num: float, den: float) -> float:
    if den > 0:
        return num / den
    if num == 0:
        return 0.0
    return math.copysign(math.inf, num)


def t_statistic(D, groups: GroupedSample, delta0: float = 0.0,
                equal_size_form: bool = False) -> float:
    """Two-sample Fréchet t statistic.

    General form::

        (d(mean1, mean2) - delta0) / (S_p * sqrt(1/n1 + 1/n2)),
        S_p^2 = ((n1 - 1) S1^2 + (n2 - 1) S2^2) / (n1 + n2 - 2)

    With ``equal_size_form`` the statistic is ``d(mean1, mean2) / (S_p / sqrt(N))``
    with ``S_p^2 = S1^2 + S2^2`` and ``N = n1 + n2``; ``delta0`` is ignored.
    A zero denominator gives an infinite statistic (or 0 when the
    numerator is 0 too).
    """
    if groups.J != 2:
        raise ValidationError(f"t statistic needs exactly 2 groups, got {groups.J}")
    M = _values(D)
    m1, m2 = groups.members(0), groups.members(1)
    mu1, mu2 = restricted_frechet_mean(M, m1), restricted_frechet_mean(M, m2)
    s1, s2 = frechet_variance(M, m1, mu1), frechet_variance(M, m2, mu2)
    n1, n2 = m1.size, m2.size
    d = M[mu1, mu2]
    if equal_size_form:
        sp = math.sqrt(math.fsum([s1, s2]))
        return _ratio(d, sp / math.sqrt(n1 + n2))
    # (n1-1) S1^2 + (n2-1) S2^2 is the pooled sum of squared distances to the means
    pooled = np.concatenate([M[m1, mu1], M[m2, mu2]])
    sp2 = _sq_sum(pooled) / (n1 + n2 - 2)
    return _ratio(d - delta0, math.sqrt(sp2) * math.sqrt((n1 + n2) / (n1 * n2)))


@dataclass(frozen=True)
class FTestResult:
    ss_between: float
    ss_within: float
    statistic: float
    grand_mean_index: int
    group_means: tuple
    null_distribution: np.ndarray | None = None
    p_value: float | None = None


def f_statistic(D, groups: GroupedSample) -> FTestResult:
    """Fréchet F statistic: between-group over within-group spread."""
    M = _values(D)
    J, N = groups.J, groups.N
    if J < 2:
        raise ValidationError("F statistic needs at least 2 groups")
    if N <= J:
        raise ValidationError("F statistic needs more samples than groups")
    grand = restricted_frechet_mean(M, np.arange(N))
    means, between, within = [], [], []
    for j in range(J):
        m = groups.members(j)
        mu = restricted_frechet_mean(M, m)
        means.append(mu)
        between.append(m.size * M[mu, grand] ** 2)
        within.extend(M[m, mu] ** 2)
    ss1 = math.fsum(between) / (J - 1)
    ss0 = math.fsum(within) / (N - J)
    return FTestResult(ss1, ss0, _ratio(ss1, ss0), grand, tuple(means))


def _statistic_fn(statistic: str, delta0: float, equal_size_form: bool):
    kind = statistic.lower()
    if kind == "t":
        return lambda M, g: t_statistic(M, g, delta0, equal_size_form)
    if kind == "f":
        return lambda M, g: f_statistic(M, g).statistic
    raise ValidationError(f"statistic must be 't' or 'F', got {statistic!r}")


def permuted_labels(labels: np.ndarray, seed: int, b: int) -> np.ndarray:
    """Label shuffle number ``b``; each replicate has its own seeded stream."""
    return np.random.default_rng([int(seed), int(b)]).permutation(labels)


def permutation_test(D, groups: GroupedSample, B: int = 100, seed: int = 0,
                     statistic: str = "t", delta0: float = 0.0,
                     equal_size_form: bool = False, add_one: bool = False) -> TestResult:
    """Permutation test of a group statistic over a (closed) distance matrix.

    Group labels are shuffled ``B`` times, preserving group sizes, and the
    statistic is recomputed from the same matrix. The p-value is the
    upper-tail proportion ``#{null >= observed} / B``; with ``add_one``
    it becomes ``(1 + #) / (1 + B)``.
    """
    if int(B) != B or B < 1:
        raise ValidationError(f"B must be a positive integer, got {B!r}")
    B = int(B)
    M = _values(D)
    if M.shape[0] != groups.N:
        raise ValidationError(f"distance matrix has {M.shape[0]} rows but {groups.N} labels")
    fn = _statistic_fn(statistic, delta0, equal_size_form)
    observed = fn(M, groups)
    null = np.empty(B)
    for b in range(B):
        null[b] = fn(M, GroupedSample(permuted_labels(groups.labels, seed, b)))
    exceed = int(np.count_nonzero(null >= observed))
    p = (1 + exceed) / (1 + B) if add_one else exceed / B
    name = D.metric_name if isinstance(D, DistanceMatrix) else "custom"
    return TestResult(float(observed), null, float(p), name, int(seed), B,
                      float(delta0), statistic.lower(), add_one)


@dataclass(frozen=True)
class BonferroniResult:
    threshold: float
    significant: tuple
    p_values: tuple

    @property
    def m(self) -> int:
        return len(self.p_values)


def bonferroni_adjust(p_values: Sequence[float], alpha: float = 0.05) -> BonferroniResult:
    """Flag each p-value as significant when it falls below ``alpha / m``."""
    p = [float(x) for x in p_values]
    if not p:
        raise ValidationError("no p-values to adjust")
    if not 0 < alpha < 1:
        raise ValidationError(f"alpha must lie in (0, 1), got {alpha!r}")
    if any(not 0 <= x <= 1 for x in p):
        raise ValidationError("p-values must lie in [0, 1]")
    thr = alpha / len(p)
    return BonferroniResult(thr, tuple(x < thr for x in p), tuple(p))
