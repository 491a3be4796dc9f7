"""Domain types shared by every module, plus distribution and partition builders.

All containers are frozen dataclasses; mappings they hold are treated as
read-only after construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Hashable, Iterable, Mapping, Sequence

from .errors import DomainError, SchemaError, ZeroMassError

UNKNOWN = "UNKNOWN"
SIDES = ("user", "item")

# Absolute tolerance on the unit-sum check of a Distribution.
SUM_TOLERANCE = 1e-9


@dataclass(frozen=True)
class Interaction:
    """A single (user, item, rating, timestamp) event.

    ``rating`` is ``None`` for implicit feedback.
    """

    user_id: str
    item_id: str
    rating: float | None
    timestamp: int

    def __post_init__(self):
        if not self.user_id or not self.item_id:
            raise DomainError("user_id and item_id must be non-empty")
        if self.timestamp < 0:
            raise DomainError(f"negative timestamp {self.timestamp}")

    @property
    def value(self) -> float:
        """Rating with implicit feedback read as 1.0."""
        return 1.0 if self.rating is None else float(self.rating)


@dataclass(frozen=True)
class RankedEntry:
    item_id: str
    rank: int
    score: float


@dataclass(frozen=True)
class RankedList:
    """Top-n list for one user, ordered by rank."""

    user_id: str
    entries: tuple[RankedEntry, ...]

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(self.entries))
        seen = set()
        prev_score = math.inf
        for expected, entry in enumerate(self.entries, start=1):
            if entry.rank != expected:
                raise DomainError(
                    f"user {self.user_id}: expected rank {expected}, got {entry.rank}"
                )
            if entry.item_id in seen:
                raise DomainError(f"user {self.user_id}: duplicate item {entry.item_id}")
            if entry.score > prev_score:
                raise DomainError(
                    f"user {self.user_id}: score increases at rank {entry.rank}"
                )
            seen.add(entry.item_id)
            prev_score = entry.score

    @classmethod
    def from_items(cls, user_id, items: Sequence[str], scores: Sequence[float] | None = None):
        """Build a list from items in rank order; default scores are n..1."""
        if scores is None:
            scores = [float(len(items) - r) for r in range(len(items))]
        entries = tuple(
            RankedEntry(item, rank, float(score))
            for rank, (item, score) in enumerate(zip(items, scores), start=1)
        )
        return cls(user_id, entries)

    def top(self, k: int) -> tuple[RankedEntry, ...]:
        return self.entries[:k]

    def items(self, k: int | None = None) -> list[str]:
        entries = self.entries if k is None else self.entries[:k]
        return [e.item_id for e in entries]

    def __len__(self):
        return len(self.entries)


@dataclass(frozen=True)
class RecRun:
    """The output of one recommender: a ranked list per user."""

    run_tag: str
    lists: Mapping[str, RankedList]

    def __post_init__(self):
        for user, ranked in self.lists.items():
            if ranked.user_id != user:
                raise SchemaError(f"list keyed by {user} belongs to {ranked.user_id}")

    @property
    def users(self) -> list[str]:
        return sorted(self.lists)


@dataclass(frozen=True)
class AttributeMap:
    """Assignment of entities to a single category of one attribute."""

    attribute_name: str
    side: str
    assignment: Mapping[str, str]

    def __post_init__(self):
        if self.side not in SIDES:
            raise DomainError(f"side must be one of {SIDES}, got {self.side!r}")


@dataclass(frozen=True)
class GroupPartition:
    """Disjoint groups of entities, one per category, in a fixed order."""

    attribute_name: str
    categories: tuple[str, ...]
    members: Mapping[str, frozenset]
    side: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "categories", tuple(self.categories))
        if len(set(self.categories)) != len(self.categories):
            raise SchemaError("duplicate category labels")
        missing = [c for c in self.categories if c not in self.members]
        if missing:
            raise SchemaError(f"categories without a member entry: {missing}")
        seen: set = set()
        for cat in self.categories:
            overlap = seen & self.members[cat]
            if overlap:
                raise SchemaError(f"entities in more than one group: {sorted(overlap)[:5]}")
            seen |= self.members[cat]

    def group_of(self) -> dict[str, str]:
        """Inverse mapping entity -> category."""
        return {e: cat for cat in self.categories for e in self.members[cat]}

    def universe(self) -> frozenset:
        return frozenset().union(*(self.members[c] for c in self.categories))

    def select(self, categories: Sequence[str]) -> "GroupPartition":
        """Re-order (and restrict) to ``categories``; unlisted ones are dropped.

        Categories absent from this partition are added with no members.
        """
        members = {c: self.members.get(c, frozenset()) for c in categories}
        return GroupPartition(self.attribute_name, tuple(categories), members, self.side)


@dataclass(frozen=True)
class Distribution:
    """A probability vector over ordered category labels."""

    categories: tuple[str, ...]
    weights: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "categories", tuple(self.categories))
        object.__setattr__(self, "weights", tuple(float(w) for w in self.weights))
        if len(self.categories) != len(self.weights):
            raise SchemaError(
                f"{len(self.weights)} weights for {len(self.categories)} categories"
            )
        if any(not math.isfinite(w) or w < 0 for w in self.weights):
            raise DomainError(f"weights must be finite and non-negative: {self.weights}")
        total = math.fsum(self.weights)
        if abs(total - 1.0) > SUM_TOLERANCE:
            raise DomainError(f"weights sum to {total!r}, not 1")

    def __getitem__(self, category: str) -> float:
        return self.weights[self.categories.index(category)]

    def as_dict(self) -> dict[str, float]:
        return dict(zip(self.categories, self.weights))


@dataclass(frozen=True)
class GceParams:
    alpha: float = -1.0
    report_absolute: bool = True

    def __post_init__(self):
        if not math.isfinite(self.alpha):
            raise DomainError(f"alpha must be finite, got {self.alpha}")


def normalize_distribution(weights: Sequence[float], categories: Sequence[Hashable]) -> Distribution:
    """Scale non-negative weights to unit sum.

    Raises:
        SchemaError: lengths differ.
        DomainError: a weight is negative or not finite.
        ZeroMassError: the weights sum to zero.
    """
    weights = [float(w) for w in weights]
    categories = tuple(categories)
    if len(weights) != len(categories):
        raise SchemaError(f"{len(weights)} weights for {len(categories)} categories")
    if not weights:
        raise ZeroMassError("empty weight vector")
    for w in weights:
        if not math.isfinite(w):
            raise DomainError(f"non-finite weight {w}")
        if w < 0:
            raise DomainError(f"negative weight {w}")
    total = math.fsum(weights)
    if total <= 0:
        raise ZeroMassError("weights sum to zero")
    return Distribution(categories, tuple(w / total for w in weights))


def partition_by_attribute(amap: AttributeMap, universe: Iterable[str]) -> GroupPartition:
    """Group ``universe`` by the attribute in ``amap``.

    Entities without an assignment land in the ``UNKNOWN`` category, which is
    placed last. Assignments for entities outside ``universe`` are ignored.
    Category order follows first appearance in the attribute map, so all
    declared categories are present even when empty.
    """
    universe = set(universe)
    if not universe:
        raise DomainError("universe must be non-empty")
    order: list[str] = []
    members: dict[str, set] = {}
    for entity, cat in amap.assignment.items():
        if cat not in members:
            order.append(cat)
            members[cat] = set()
        if entity in universe:
            members[cat].add(entity)
    unassigned = {e for e in universe if e not in amap.assignment}
    if unassigned:
        if UNKNOWN in members:
            members[UNKNOWN] |= unassigned
            order.remove(UNKNOWN)
        else:
            members[UNKNOWN] = unassigned
        order.append(UNKNOWN)
    return GroupPartition(
        amap.attribute_name,
        tuple(order),
        {c: frozenset(members[c]) for c in order},
        amap.side,
    )
