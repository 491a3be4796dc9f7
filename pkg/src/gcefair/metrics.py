"""Top-K accuracy metrics, their per-group means, and MAD baselines.

Only users that appear in the run and have at least one relevant item are
evaluated. Overall values are macro-averages over those users.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .core import GroupPartition, RecRun
from .errors import DomainError
from .gain import RelevanceJudgments, _check_cutoff, dcg_term, ideal_dcg

MAD_VARIANTS = ("rating", "ranking")


@dataclass(frozen=True)
class GroupMetricTable:
    """Mean of a per-user metric, overall and per group.

    A group with no evaluated users maps to ``None``.
    """

    metric_name: str
    cutoff: int
    per_group: Mapping[str, float | None] = field(default_factory=dict)
    overall: float | None = None


@dataclass(frozen=True)
class MadResult:
    variant: str
    value: float

    def __post_init__(self):
        if self.variant not in MAD_VARIANTS:
            raise DomainError(f"MAD variant must be one of {MAD_VARIANTS}")
        if not self.value >= 0:
            raise DomainError(f"MAD must be non-negative, got {self.value}")


def _evaluated_users(run: RecRun, judgments: RelevanceJudgments) -> list[str]:
    return [u for u in run.users if judgments.relevant(u)]


def _hits(run, judgments, user, k):
    rel = judgments.relevant(user)
    return sum(1 for item in run.lists[user].items(k) if item in rel)


def per_user_precision(run: RecRun, judgments: RelevanceJudgments, k: int) -> dict[str, float]:
    _check_cutoff(k)
    return {u: _hits(run, judgments, u, k) / k for u in _evaluated_users(run, judgments)}


def per_user_recall(run: RecRun, judgments: RelevanceJudgments, k: int) -> dict[str, float]:
    _check_cutoff(k)
    return {
        u: _hits(run, judgments, u, k) / len(judgments.relevant(u))
        for u in _evaluated_users(run, judgments)
    }


def per_user_ndcg(run: RecRun, judgments: RelevanceJudgments, k: int,
                  convention: str = "standard") -> dict[str, float]:
    _check_cutoff(k)
    out = {}
    for u in _evaluated_users(run, judgments):
        dcg = math.fsum(
            dcg_term(judgments.rel(u, e.item_id), e.rank, convention)
            for e in run.lists[u].top(k)
        )
        out[u] = dcg / ideal_dcg(judgments, u, k, convention)
    return out


def _mean(values):
    values = list(values)
    return math.fsum(values) / len(values) if values else None


def group_table(metric_name: str, k: int, per_user: Mapping[str, float],
                partition: GroupPartition | None = None) -> GroupMetricTable:
    """Aggregate per-user values into overall and per-group means."""
    per_group = {}
    if partition is not None:
        for cat in partition.categories:
            members = sorted(u for u in partition.members[cat] if u in per_user)
            per_group[cat] = _mean(per_user[u] for u in members)
    overall = _mean(per_user[u] for u in sorted(per_user))
    return GroupMetricTable(metric_name, k, per_group, overall)


def precision_at_k(run, judgments, k, partition=None) -> GroupMetricTable:
    return group_table(f"P@{k}", k, per_user_precision(run, judgments, k), partition)


def recall_at_k(run, judgments, k, partition=None) -> GroupMetricTable:
    return group_table(f"R@{k}", k, per_user_recall(run, judgments, k), partition)


def ndcg_at_k(run, judgments, k, convention="standard", partition=None) -> GroupMetricTable:
    return group_table(f"NDCG@{k}", k, per_user_ndcg(run, judgments, k, convention), partition)


def mad(group_values: Mapping[str, Sequence[float]], variant: str) -> MadResult:
    """Mean absolute deviation between group means, averaged over all pairs.

    ``group_values`` maps each group to its raw values: predicted scores for
    ``variant="rating"``, per-user NDCG for ``variant="ranking"``. Empty
    groups are skipped.

    Raises:
        DomainError: fewer than two non-empty groups.
    """
    means = [
        math.fsum(vals) / len(vals)
        for _, vals in sorted(group_values.items())
        if len(vals) > 0
    ]
    if len(means) < 2:
        raise DomainError("MAD needs at least two non-empty groups")
    diffs = [abs(a - b) for a, b in itertools.combinations(means, 2)]
    return MadResult(variant, math.fsum(diffs) / len(diffs))
