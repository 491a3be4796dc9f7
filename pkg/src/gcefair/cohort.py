"""Fixed-timestamp temporal splitting and activity-quartile user groups."""

from __future__ import annotations

import bisect
from collections import Counter, defaultdict
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .core import GroupPartition, Interaction
from .errors import DomainError, EmptySplitError

ACTIVITY_GROUPS = ("VIA", "SIA", "SA", "VA")
ACTIVITY_ATTRIBUTE = "activity"


@dataclass(frozen=True)
class SplitSpec:
    min_train: int = 15
    min_test: int = 5

    def __post_init__(self):
        if self.min_train < 1 or self.min_test < 1:
            raise DomainError("min_train and min_test must both be >= 1")


@dataclass(frozen=True)
class SplitResult:
    """Outcome of a fixed-timestamp split at ``split_timestamp``.

    ``train`` holds every interaction strictly before the cut. ``test`` holds
    the at-or-after interactions of retained users only; later interactions
    of other users are discarded.
    """

    split_timestamp: int
    train: tuple[Interaction, ...]
    test: tuple[Interaction, ...]
    retained_users: frozenset


@dataclass(frozen=True)
class ActivityPartition:
    partition: GroupPartition
    scores: Mapping[str, int]


def _retention_window(times: Sequence[int], spec: SplitSpec):
    """Half-open window (lo, hi] of cut times that retain a user.

    With sorted times s, a cut t keeps the user iff #{s < t} >= min_train and
    #{s >= t} >= min_test, i.e. s[min_train - 1] < t <= s[n - min_test].
    """
    n = len(times)
    if n < spec.min_train + spec.min_test:
        return None
    lo, hi = times[spec.min_train - 1], times[n - spec.min_test]
    return (lo, hi) if lo < hi else None


def retained_at(interactions: Iterable[Interaction], tau: int, spec: SplitSpec) -> set[str]:
    """Users meeting both thresholds when cutting at ``tau``."""
    before, after = Counter(), Counter()
    for x in interactions:
        (before if x.timestamp < tau else after)[x.user_id] += 1
    return {u for u in before if before[u] >= spec.min_train and after[u] >= spec.min_test}


def fixed_timestamp_split(interactions: Sequence[Interaction], spec: SplitSpec = SplitSpec()) -> SplitResult:
    """Pick the single cut time that retains the most users, and split there.

    Candidate cuts are the distinct interaction timestamps. Each user is
    retained on a contiguous range of cuts, so one sweep over range endpoints
    finds the best cut. Ties go to the earliest timestamp.

    Raises:
        DomainError: no interactions.
        EmptySplitError: no cut retains anyone.
    """
    if not interactions:
        raise DomainError("cannot split an empty interaction log")
    per_user: dict[str, list[int]] = defaultdict(list)
    for x in interactions:
        per_user[x.user_id].append(x.timestamp)
    candidates = sorted({x.timestamp for x in interactions})

    delta = [0] * (len(candidates) + 1)
    for times in per_user.values():
        window = _retention_window(sorted(times), spec)
        if window is None:
            continue
        lo, hi = window
        first = bisect.bisect_right(candidates, lo)
        last = bisect.bisect_right(candidates, hi)
        delta[first] += 1
        delta[last] -= 1

    best_count, best_idx, running = 0, None, 0
    for idx in range(len(candidates)):
        running += delta[idx]
        if running > best_count:
            best_count, best_idx = running, idx
    if best_idx is None:
        raise EmptySplitError(
            f"no timestamp retains a user with >= {spec.min_train} train and "
            f">= {spec.min_test} test interactions"
        )
    tau = candidates[best_idx]
    retained = frozenset(retained_at(interactions, tau, spec))
    train = tuple(x for x in interactions if x.timestamp < tau)
    test = tuple(x for x in interactions if x.timestamp >= tau and x.user_id in retained)
    return SplitResult(tau, train, test, retained)


def activity_quartiles(train_interactions: Iterable[Interaction],
                       users: Iterable[str] | None = None) -> ActivityPartition:
    """Group users into activity quartiles by training interaction count.

    Users are ranked by (count, user_id) and cut into four near-equal blocks
    VIA, SIA, SA, VA. ``users`` restricts ranking to a subset; users in it
    with no training interactions count as zero.

    Raises:
        DomainError: fewer than four users.
    """
    counts = Counter(x.user_id for x in train_interactions)
    if users is not None:
        counts = Counter({u: counts.get(u, 0) for u in users})
    if len(counts) < 4:
        raise DomainError(f"activity quartiles need at least 4 users, got {len(counts)}")
    ranked = sorted(counts, key=lambda u: (counts[u], u))
    n = len(ranked)
    members = {g: set() for g in ACTIVITY_GROUPS}
    for pos, user in enumerate(ranked):
        members[ACTIVITY_GROUPS[4 * pos // n]].add(user)
    partition = GroupPartition(
        ACTIVITY_ATTRIBUTE,
        ACTIVITY_GROUPS,
        {g: frozenset(m) for g, m in members.items()},
        side="user",
    )
    return ActivityPartition(partition, dict(counts))
