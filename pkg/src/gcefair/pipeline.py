"""Evaluation configuration, the fairness report, and the evaluate step."""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Mapping, Sequence

from .cohort import activity_quartiles
from .core import (
    SIDES,
    AttributeMap,
    Distribution,
    GroupPartition,
    Interaction,
    RecRun,
    normalize_distribution,
    partition_by_attribute,
)
from .errors import ConfigError, DomainError, GceFairError
from .gain import (
    GainFunction,
    RelevanceJudgments,
    estimate_performance_distribution,
    item_gain,
    user_gain,
)
from .gce import GceResult, gce_sweep
from .metrics import (
    GroupMetricTable,
    MadResult,
    group_table,
    mad,
    per_user_ndcg,
    per_user_precision,
    per_user_recall,
)

_log = logging.getLogger(__name__)

ATTRIBUTE_SOURCES = ("file", "activity")


def _weight(value) -> float:
    # fractions such as "1/3" keep fair distributions exact in JSON configs
    if isinstance(value, str):
        return float(Fraction(value))
    return float(value)


@dataclass(frozen=True)
class FairnessConfig:
    """What to measure and against which fair distributions.

    ``attribute_source="activity"`` groups users into training-activity
    quartiles instead of reading ``attribute_name`` from an attribute table.
    """

    attribute_name: str
    side: str
    category_order: tuple[str, ...]
    fair_distributions: tuple[tuple[str, Distribution], ...]
    alphas: tuple[float, ...] = (-1.0,)
    gain: GainFunction = GainFunction()
    cutoff: int = 10
    report_absolute: bool = True
    attribute_source: str = "file"
    rating_threshold: float | None = None

    def __post_init__(self):
        if self.side not in SIDES:
            raise ConfigError(f"side must be one of {SIDES}, got {self.side!r}")
        if self.attribute_source not in ATTRIBUTE_SOURCES:
            raise ConfigError(f"attribute_source must be one of {ATTRIBUTE_SOURCES}")
        if self.attribute_source == "activity" and self.side != "user":
            raise ConfigError("activity groups are defined for users only")
        if not self.category_order or len(set(self.category_order)) != len(self.category_order):
            raise ConfigError("category_order must be a non-empty list of distinct labels")
        if int(self.cutoff) != self.cutoff or self.cutoff < 1:
            raise ConfigError(f"cutoff must be a positive integer, got {self.cutoff}")
        if self.side == "user" and self.gain.kind == "count":
            raise ConfigError("count gain is only meaningful for item-side fairness")
        labels = [label for label, _ in self.fair_distributions]
        if not labels or len(set(labels)) != len(labels):
            raise ConfigError("fair_distributions need distinct labels")
        for label, dist in self.fair_distributions:
            if dist.categories != tuple(self.category_order):
                raise ConfigError(f"fair distribution {label!r} is not over category_order")

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "FairnessConfig":
        try:
            categories = tuple(str(c) for c in data["category_order"])
            fair = []
            for entry in data["fair_distributions"]:
                weights = [_weight(w) for w in entry["weights"]]
                if len(weights) != len(categories):
                    raise ConfigError(
                        f"fair distribution {entry['label']!r} has {len(weights)} weights "
                        f"for {len(categories)} categories"
                    )
                fair.append((str(entry["label"]), normalize_distribution(weights, categories)))
            gain = data.get("gain", {})
            if isinstance(gain, str):
                gain = {"kind": gain}
            return cls(
                attribute_name=str(data["attribute_name"]),
                side=str(data.get("side", "user")),
                category_order=categories,
                fair_distributions=tuple(fair),
                alphas=tuple(float(a) for a in data.get("alphas", [-1.0])),
                gain=GainFunction(**gain),
                cutoff=int(data.get("cutoff", 10)),
                report_absolute=bool(data.get("report_absolute", True)),
                attribute_source=str(data.get("attribute_source", "file")),
                rating_threshold=data.get("rating_threshold"),
            )
        except KeyError as exc:
            raise ConfigError(f"missing config field {exc.args[0]!r}") from None
        except (GceFairError, ValueError, TypeError, ZeroDivisionError) as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(f"invalid config: {exc}") from None

    @classmethod
    def load(cls, path) -> "FairnessConfig":
        with open(path, encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))

    def to_dict(self) -> dict[str, Any]:
        return {
            "attribute_name": self.attribute_name,
            "side": self.side,
            "attribute_source": self.attribute_source,
            "category_order": list(self.category_order),
            "fair_distributions": [
                {"label": label, "weights": list(dist.weights)} for label, dist in self.fair_distributions
            ],
            "alphas": list(self.alphas),
            "gain": {
                "kind": self.gain.kind,
                "dcg_exponent_convention": self.gain.dcg_exponent_convention,
            },
            "cutoff": self.cutoff,
            "report_absolute": self.report_absolute,
            "rating_threshold": self.rating_threshold,
        }


@dataclass(frozen=True)
class FairnessReport:
    """Everything computed for one run under one configuration."""

    run_tag: str
    attribute_name: str
    side: str
    cutoff: int
    gain_kind: str
    categories: tuple[str, ...]
    group_sizes: Mapping[str, int]
    performance: Distribution
    gce: tuple[GceResult, ...]
    metrics: tuple[GroupMetricTable, ...]
    mad: Mapping[str, MadResult | None]
    report_absolute: bool = True
    provenance: Mapping[str, Any] = field(default_factory=dict)

    def gce_value(self, fair_label: str, alpha: float = -1.0, absolute: bool | None = None) -> float:
        if absolute is None:
            absolute = self.report_absolute
        for cell in self.gce:
            if cell.fair_label == fair_label and cell.alpha == alpha:
                return cell.value(absolute)
        raise KeyError((fair_label, alpha))

    def metric(self, name: str) -> GroupMetricTable:
        for table in self.metrics:
            if table.metric_name == name:
                return table
        raise KeyError(name)


def run_universe(run: RecRun, side: str, k: int) -> set[str]:
    """Entities a run exposes on ``side``: its users, or items in any top-k."""
    if side == "user":
        return set(run.lists)
    return {e.item_id for ranked in run.lists.values() for e in ranked.top(k)}


def build_partition(config: FairnessConfig, run: RecRun, train: Sequence[Interaction] | None,
                    attributes: AttributeMap | None) -> GroupPartition:
    universe = run_universe(run, config.side, config.cutoff)
    if not universe:
        raise DomainError(f"run {run.run_tag!r} exposes no {config.side}s")
    if config.attribute_source == "activity":
        if train is None:
            raise ConfigError("activity groups need the training interactions")
        partition = activity_quartiles(train, users=universe).partition
    else:
        if attributes is None:
            attributes = AttributeMap(config.attribute_name, config.side, {})
        if attributes.side != config.side:
            raise ConfigError(f"attribute map is for {attributes.side}s, config wants {config.side}s")
        partition = partition_by_attribute(attributes, universe)
    return partition.select(config.category_order)


def _user_partition(config, partition):
    return partition if config.side == "user" else None


def _mad_or_none(values, variant):
    try:
        return mad(values, variant)
    except DomainError:
        return None


def evaluate(config: FairnessConfig, run: RecRun, train: Sequence[Interaction] | None,
             test: Sequence[Interaction], attributes: AttributeMap | None = None,
             digests: Mapping[str, str] | None = None) -> FairnessReport:
    """Score ``run`` for fairness and accuracy.

    Relevance is binary: a test interaction (optionally with rating at or
    above ``config.rating_threshold``) marks the pair relevant. MAD baselines
    are computed for user-side groups only and are ``None`` when fewer than
    two groups have data.
    """
    judgments = RelevanceJudgments.from_interactions(test, config.rating_threshold)
    partition = build_partition(config, run, train, attributes)
    k = config.cutoff

    if config.side == "item":
        gains = item_gain(run, judgments, config.gain, k)
    else:
        gains = user_gain(run, judgments, config.gain, k)
    performance = estimate_performance_distribution(gains, partition)
    cells = gce_sweep(config.fair_distributions, performance, config.alphas)

    groups = _user_partition(config, partition)
    ndcg_values = per_user_ndcg(run, judgments, k, config.gain.dcg_exponent_convention)
    metrics = (
        group_table(f"P@{k}", k, per_user_precision(run, judgments, k), groups),
        group_table(f"R@{k}", k, per_user_recall(run, judgments, k), groups),
        group_table(f"NDCG@{k}", k, ndcg_values, groups),
    )

    mad_results: dict[str, MadResult | None] = {"rating": None, "ranking": None}
    if groups is not None:
        ranking_values = {
            c: [ndcg_values[u] for u in sorted(groups.members[c]) if u in ndcg_values]
            for c in groups.categories
        }
        test_pairs = {(x.user_id, x.item_id) for x in test}
        rating_values = {
            c: [
                e.score
                for u in sorted(groups.members[c]) if u in run.lists
                for e in run.lists[u].entries
                if (u, e.item_id) in test_pairs
            ]
            for c in groups.categories
        }
        mad_results = {
            "rating": _mad_or_none(rating_values, "rating"),
            "ranking": _mad_or_none(ranking_values, "ranking"),
        }

    provenance = {
        "inputs": dict(sorted((digests or {}).items())),
        "config": config.to_dict(),
    }
    _log.info("evaluated run %s: %d gce cells", run.run_tag, len(cells))
    return FairnessReport(
        run_tag=run.run_tag,
        attribute_name=config.attribute_name,
        side=config.side,
        cutoff=k,
        gain_kind=config.gain.kind,
        categories=partition.categories,
        group_sizes={c: len(partition.members[c]) for c in partition.categories},
        performance=performance,
        gce=tuple(cells),
        metrics=metrics,
        mad=mad_results,
        report_absolute=config.report_absolute,
        provenance=provenance,
    )
