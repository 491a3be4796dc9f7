"""Fairness evaluation of recommender runs via generalized cross entropy."""

from .core import (
    UNKNOWN,
    AttributeMap,
    Distribution,
    GceParams,
    GroupPartition,
    Interaction,
    RankedEntry,
    RankedList,
    RecRun,
    normalize_distribution,
    partition_by_attribute,
)
from .gain import (
    GainFunction,
    GainVector,
    RelevanceJudgments,
    estimate_performance_distribution,
    item_gain,
    user_gain,
)
from .gce import GceResult, gce, gce_sweep
from .metrics import GroupMetricTable, MadResult, mad, ndcg_at_k, precision_at_k, recall_at_k
from .cohort import SplitSpec, SplitResult, activity_quartiles, fixed_timestamp_split
from .recommenders import KnnConfig, knn_rec, most_popular, random_rec
from .pipeline import FairnessConfig, FairnessReport, evaluate
from .report import emit_report, parse_report

__version__ = "0.1.0"

__all__ = [
    "UNKNOWN",
    "AttributeMap",
    "Distribution",
    "GceParams",
    "GroupPartition",
    "Interaction",
    "RankedEntry",
    "RankedList",
    "RecRun",
    "normalize_distribution",
    "partition_by_attribute",
    "GainFunction",
    "GainVector",
    "RelevanceJudgments",
    "estimate_performance_distribution",
    "item_gain",
    "user_gain",
    "GceResult",
    "gce",
    "gce_sweep",
    "GroupMetricTable",
    "MadResult",
    "mad",
    "ndcg_at_k",
    "precision_at_k",
    "recall_at_k",
    "SplitSpec",
    "SplitResult",
    "activity_quartiles",
    "fixed_timestamp_split",
    "KnnConfig",
    "knn_rec",
    "most_popular",
    "random_rec",
    "FairnessConfig",
    "FairnessReport",
    "evaluate",
    "emit_report",
    "parse_report",
]
