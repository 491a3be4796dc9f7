"""Readers and writers for interaction logs, TREC runs and attribute tables.

Formats:

* interactions: ``user<TAB>item<TAB>rating<TAB>timestamp``; rating ``-``
  means implicit feedback.
* run: ``user Q0 item rank score tag`` (whitespace separated).
* attributes: ``entity<TAB>attribute<TAB>category``.

Lines starting with ``#`` and blank lines are ignored everywhere.
"""

from __future__ import annotations

import hashlib
import math
from collections import defaultdict
from typing import Iterable, Iterator

from .core import AttributeMap, Interaction, RankedEntry, RankedList, RecRun
from .errors import ConflictError, DomainError, EmptyInputError, ParseError

IMPLICIT = "-"


def file_digest(path) -> str:
    """SHA-256 hex digest of a file's bytes."""
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def _data_lines(path) -> Iterator[tuple[int, str]]:
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\r\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            yield lineno, line


def parse_interactions(path) -> list[Interaction]:
    """Read an interaction TSV.

    Raises:
        ParseError: a row has the wrong arity or unparseable fields.
        EmptyInputError: the file contains no data rows.
    """
    out = []
    for lineno, line in _data_lines(path):
        fields = line.split("\t")
        if len(fields) != 4:
            raise ParseError(f"expected 4 tab-separated fields, got {len(fields)}", lineno, path)
        user, item, rating, ts = fields
        try:
            value = None if rating == IMPLICIT else float(rating)
            if value is not None and not math.isfinite(value):
                raise ValueError("non-finite rating")
            timestamp = int(ts)
            out.append(Interaction(user, item, value, timestamp))
        except (ValueError, DomainError) as exc:
            raise ParseError(str(exc), lineno, path) from None
    if not out:
        raise EmptyInputError(f"{path}: no interactions")
    return out


def format_interaction(x: Interaction) -> str:
    rating = IMPLICIT if x.rating is None else repr(float(x.rating))
    return f"{x.user_id}\t{x.item_id}\t{rating}\t{x.timestamp}"


def write_interactions(interactions: Iterable[Interaction], path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for x in interactions:
            fh.write(format_interaction(x) + "\n")


def parse_run(path) -> RecRun:
    """Read a TREC-style run file.

    Rows of one user need not be contiguous; they are ordered by rank. Ranks
    must be exactly 1..n per user and scores must not increase with rank.

    Raises:
        ParseError: malformed row, duplicate (user, item), rank gap or
            duplicate rank, increasing score, or mixed run tags.
        EmptyInputError: no rows.
    """
    rows: dict[str, list] = defaultdict(list)
    seen_pairs: dict[tuple[str, str], int] = {}
    tag = None
    for lineno, line in _data_lines(path):
        fields = line.split()
        if len(fields) != 6:
            raise ParseError(f"expected 6 fields 'user Q0 item rank score tag', got {len(fields)}", lineno, path)
        user, _q0, item, rank_s, score_s, row_tag = fields
        try:
            rank = int(rank_s)
            score = float(score_s)
        except ValueError as exc:
            raise ParseError(str(exc), lineno, path) from None
        if rank < 1:
            raise ParseError(f"rank must be >= 1, got {rank}", lineno, path)
        if (user, item) in seen_pairs:
            raise ParseError(
                f"duplicate item {item} for user {user} (first on line {seen_pairs[(user, item)]})",
                lineno, path,
            )
        if tag is None:
            tag = row_tag
        elif row_tag != tag:
            raise ParseError(f"run tag {row_tag!r} differs from {tag!r}", lineno, path)
        seen_pairs[(user, item)] = lineno
        rows[user].append((rank, score, item, lineno))
    if tag is None:
        raise EmptyInputError(f"{path}: empty run")

    lists = {}
    for user, entries in rows.items():
        entries.sort()
        prev_score = math.inf
        for expected, (rank, score, item, lineno) in enumerate(entries, start=1):
            if rank != expected:
                raise ParseError(f"user {user}: rank {rank} where {expected} was expected", lineno, path)
            if score > prev_score:
                raise ParseError(f"user {user}: score rises at rank {rank}", lineno, path)
            prev_score = score
        lists[user] = RankedList(user, tuple(RankedEntry(i, r, s) for r, s, i, _ in entries))
    return RecRun(tag, lists)


def write_run(run: RecRun, path) -> None:
    """Write ``run`` in TREC format, users in sorted order, scores lossless."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for user in run.users:
            for e in run.lists[user].entries:
                fh.write(f"{user} Q0 {e.item_id} {e.rank} {e.score!r} {run.run_tag}\n")


def parse_attribute_table(path) -> dict[str, dict[str, str]]:
    """All attributes in a table: attribute -> {entity: category}.

    Raises:
        ParseError: a row does not have three fields.
        ConflictError: an entity gets two categories for one attribute.
    """
    table: dict[str, dict[str, str]] = defaultdict(dict)
    for lineno, line in _data_lines(path):
        fields = line.split("\t")
        if len(fields) != 3 or not all(fields):
            raise ParseError("expected 'entity<TAB>attribute<TAB>category'", lineno, path)
        entity, attribute, category = fields
        current = table[attribute].get(entity)
        if current is not None and current != category:
            raise ConflictError(
                f"{path}:line {lineno}: {entity} has {attribute}={current!r} and {category!r}"
            )
        table[attribute][entity] = category
    return dict(table)


def parse_attributes(path, attribute: str, side: str = "user") -> AttributeMap:
    """The ``attribute`` column of an attribute table as an AttributeMap.

    An attribute missing from the file gives an empty map, so every entity
    ends up in the UNKNOWN group downstream.
    """
    table = parse_attribute_table(path)
    return AttributeMap(attribute, side, dict(table.get(attribute, {})))
