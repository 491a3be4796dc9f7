"""Recommendation gain per item and per user, and the performance distribution.

Item gain sums, over every user whose top-K list contains the item, the gain
``g(u, i, r)`` of showing item ``i`` to ``u`` at rank ``r``. User gain sums the
same terms over the user's own list. Aggregating gains over a group
partition and normalising gives the performance distribution that gets
compared with the fair one.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable, Mapping

from .core import Distribution, GroupPartition, Interaction, RecRun, normalize_distribution
from .errors import ConfigError, DomainError, SchemaError, ZeroMassError

GAIN_KINDS = ("count", "binary_relevance", "dcg", "ndcg")
DCG_CONVENTIONS = ("standard", "paper_literal")


@dataclass(frozen=True)
class GainFunction:
    """Which per-slot gain to accumulate.

    ``dcg_exponent_convention`` selects the DCG numerator: ``standard`` is
    ``2**rel - 1``; ``paper_literal`` is ``2**(rel - 1)``, which also credits
    non-relevant slots with 0.5.
    """

    kind: str = "binary_relevance"
    dcg_exponent_convention: str = "standard"

    def __post_init__(self):
        if self.kind not in GAIN_KINDS:
            raise ConfigError(f"unknown gain kind {self.kind!r}; expected one of {GAIN_KINDS}")
        if self.dcg_exponent_convention not in DCG_CONVENTIONS:
            raise ConfigError(
                f"unknown DCG convention {self.dcg_exponent_convention!r}; "
                f"expected one of {DCG_CONVENTIONS}"
            )


class RelevanceJudgments:
    """Graded relevance per (user, item); missing pairs have relevance 0."""

    def __init__(self, grades: Mapping[tuple[str, str], float] | None = None):
        by_user: dict[str, dict[str, float]] = defaultdict(dict)
        for (user, item), rel in (grades or {}).items():
            rel = float(rel)
            if not math.isfinite(rel) or rel < 0:
                raise DomainError(f"relevance must be finite and >= 0, got {rel} for {user},{item}")
            if rel > 0:
                by_user[user][item] = rel
        self._by_user = dict(by_user)

    @classmethod
    def from_interactions(cls, interactions: Iterable[Interaction],
                          threshold: float | None = None) -> "RelevanceJudgments":
        """Binary judgments: rel = 1 for every (user, item) with an interaction.

        With ``threshold`` set, only interactions whose rating (implicit read
        as 1.0) is at least ``threshold`` count as relevant.
        """
        grades = {}
        for x in interactions:
            if threshold is None or x.value >= threshold:
                grades[(x.user_id, x.item_id)] = 1.0
        return cls(grades)

    def rel(self, user: str, item: str) -> float:
        return self._by_user.get(user, {}).get(item, 0.0)

    def relevant(self, user: str) -> Mapping[str, float]:
        return self._by_user.get(user, {})

    @property
    def users(self) -> list[str]:
        return sorted(self._by_user)

    def __len__(self):
        return sum(len(v) for v in self._by_user.values())


@dataclass(frozen=True)
class GainVector:
    side: str
    values: Mapping[str, float]

    def __post_init__(self):
        for entity, g in self.values.items():
            if not math.isfinite(g) or g < 0:
                raise DomainError(f"gain for {entity} must be finite and >= 0, got {g}")

    def total(self) -> float:
        return math.fsum(self.values[e] for e in sorted(self.values))


def dcg_term(rel: float, rank: int, convention: str = "standard") -> float:
    """Discounted gain of relevance ``rel`` at 1-based ``rank`` (log base 2)."""
    if convention == "standard":
        numerator = 2.0 ** rel - 1.0
    else:
        numerator = 2.0 ** (rel - 1.0)
    return numerator / math.log2(rank + 1)


def ideal_dcg(judgments: RelevanceJudgments, user: str, k: int, convention: str = "standard") -> float:
    """DCG@k of the user's relevant items ranked by grade."""
    grades = sorted(judgments.relevant(user).values(), reverse=True)[:k]
    return math.fsum(dcg_term(g, r, convention) for r, g in enumerate(grades, start=1))


def _check_cutoff(k):
    if int(k) != k or k < 1:
        raise DomainError(f"cutoff K must be a positive integer, got {k}")


def _slot_gains(run: RecRun, judgments: RelevanceJudgments | None, gain: GainFunction, k: int):
    """Yield (user, item, g) for every slot in every user's top-k."""
    for user in run.users:
        entries = run.lists[user].top(k)
        idcg = None
        if gain.kind == "ndcg":
            idcg = ideal_dcg(judgments, user, k, gain.dcg_exponent_convention)
            if idcg == 0:
                # no relevant items: this user contributes nothing
                for e in entries:
                    yield user, e.item_id, 0.0
                continue
        for e in entries:
            if gain.kind == "count":
                g = 1.0
            else:
                rel = judgments.rel(user, e.item_id)
                if gain.kind == "binary_relevance":
                    g = 1.0 if rel > 0 else 0.0
                else:
                    g = dcg_term(rel, e.rank, gain.dcg_exponent_convention)
                    if idcg is not None:
                        g /= idcg
            yield user, e.item_id, g


def _require_judgments(judgments, gain):
    if gain.kind != "count" and judgments is None:
        raise ConfigError(f"gain kind {gain.kind!r} needs relevance judgments")


def item_gain(run: RecRun, judgments: RelevanceJudgments | None, gain: GainFunction, k: int) -> GainVector:
    """Per-item gain accumulated over every user's top-``k`` list.

    With ``gain.kind == "count"`` this is the number of lists the item
    appears in, and ``judgments`` may be ``None``.
    """
    _check_cutoff(k)
    _require_judgments(judgments, gain)
    acc: dict[str, list[float]] = defaultdict(list)
    for _, item, g in _slot_gains(run, judgments, gain, k):
        acc[item].append(g)
    return GainVector("item", {i: math.fsum(v) for i, v in sorted(acc.items())})


def user_gain(run: RecRun, judgments: RelevanceJudgments, gain: GainFunction, k: int) -> GainVector:
    """Per-user gain over the user's own top-``k`` list.

    Raises:
        ConfigError: ``gain.kind == "count"``; every user would receive the
            same gain (their list length), so the measure carries no signal.
    """
    if gain.kind == "count":
        raise ConfigError(
            "count gain cannot be used on the user side: every user would get the "
            "same gain; pick binary_relevance, dcg or ndcg"
        )
    _check_cutoff(k)
    _require_judgments(judgments, gain)
    acc: dict[str, list[float]] = {u: [] for u in run.users}
    for user, _, g in _slot_gains(run, judgments, gain, k):
        acc[user].append(g)
    return GainVector("user", {u: math.fsum(v) for u, v in acc.items()})


def estimate_performance_distribution(gains: GainVector, partition: GroupPartition) -> Distribution:
    """Share of the total gain earned by each group of ``partition``.

    Entities outside the partition are left out of the normaliser.

    Raises:
        SchemaError: the partition belongs to the other side.
        ZeroMassError: the partition members earned no gain at all.
    """
    if partition.side is not None and partition.side != gains.side:
        raise SchemaError(f"partition side {partition.side!r} does not match gains side {gains.side!r}")
    totals = []
    for cat in partition.categories:
        members = sorted(e for e in partition.members[cat] if e in gains.values)
        totals.append(math.fsum(gains.values[e] for e in members))
    if math.fsum(totals) <= 0:
        raise ZeroMassError("no gain inside the partition; performance distribution undefined")
    return normalize_distribution(totals, partition.categories)
