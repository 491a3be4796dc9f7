"""Command-line pipeline: split -> recommend -> evaluate -> report."""

from __future__ import annotations

import argparse
import logging
import sys

from . import io as gio
from .cohort import SplitSpec, fixed_timestamp_split
from .errors import GceFairError
from .pipeline import FairnessConfig, evaluate
from .recommenders import KnnConfig, knn_rec, most_popular, random_rec
from .report import FORMATS, emit_report, load_report

_log = logging.getLogger("gcefair")


def cmd_split(args) -> int:
    interactions = gio.parse_interactions(args.interactions)
    result = fixed_timestamp_split(interactions, SplitSpec(args.min_train, args.min_test))
    gio.write_interactions(result.train, args.out_train)
    gio.write_interactions(result.test, args.out_test)
    print(
        f"split at t={result.split_timestamp}: {len(result.retained_users)} users retained, "
        f"{len(result.train)} train / {len(result.test)} test interactions",
        file=sys.stderr,
    )
    return 0


def cmd_recommend(args) -> int:
    train = gio.parse_interactions(args.train)
    if args.users_from:
        users = {x.user_id for x in gio.parse_interactions(args.users_from)}
    else:
        users = {x.user_id for x in train}
    tag = args.run_tag
    if args.model == "random":
        run = random_rec(train, users, args.k, seed=args.seed, run_tag=tag or "random")
    elif args.model == "pop":
        run = most_popular(train, users, args.k, run_tag=tag or "pop")
    else:
        side = "user" if args.model == "userknn" else "item"
        config = KnnConfig(neighborhood_size=args.neighbors, similarity=args.sim, side=side)
        run = knn_rec(train, users, args.k, config, run_tag=tag or f"{args.model}-{args.sim}")
    gio.write_run(run, args.out)
    print(f"wrote {len(run.lists)} ranked lists to {args.out}", file=sys.stderr)
    return 0


def cmd_evaluate(args) -> int:
    config = FairnessConfig.load(args.config)
    run = gio.parse_run(args.run)
    test = gio.parse_interactions(args.test)
    train = gio.parse_interactions(args.train) if args.train else None
    attributes = None
    if args.attributes:
        attributes = gio.parse_attributes(args.attributes, config.attribute_name, config.side)
    digests = {"config": gio.file_digest(args.config), "run": gio.file_digest(args.run),
               "test": gio.file_digest(args.test)}
    if args.train:
        digests["train"] = gio.file_digest(args.train)
    if args.attributes:
        digests["attributes"] = gio.file_digest(args.attributes)
    report = evaluate(config, run, train, test, attributes, digests)
    payload = emit_report(report, "json")
    if args.out:
        with open(args.out, "wb") as fh:
            fh.write(payload)
    else:
        sys.stdout.buffer.write(payload)
    return 0


def cmd_report(args) -> int:
    reports = [load_report(p) for p in args.inputs]
    if args.format == "json" and len(reports) > 1:
        raise GceFairError("json output takes a single --in report")
    sys.stdout.buffer.write(emit_report(reports, args.format))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gcefair",
        description="Offline fairness evaluation of recommender runs with generalized cross entropy.",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("split", help="fixed-timestamp train/test split")
    p.add_argument("--interactions", required=True)
    p.add_argument("--min-train", type=int, default=15)
    p.add_argument("--min-test", type=int, default=5)
    p.add_argument("--out-train", required=True)
    p.add_argument("--out-test", required=True)
    p.set_defaults(func=cmd_split)

    p = sub.add_parser("recommend", help="generate a baseline run")
    p.add_argument("--model", choices=["random", "pop", "userknn", "itemknn"], required=True)
    p.add_argument("--sim", choices=["cosine", "jaccard", "pearson"], default="cosine")
    p.add_argument("--neighbors", type=int, default=50)
    p.add_argument("--k", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--train", required=True)
    p.add_argument("--users-from", help="interaction file whose users get lists (default: train users)")
    p.add_argument("--run-tag")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_recommend)

    p = sub.add_parser("evaluate", help="compute a fairness report for a run")
    p.add_argument("--train", help="needed for activity groups")
    p.add_argument("--test", required=True)
    p.add_argument("--run", required=True)
    p.add_argument("--attributes")
    p.add_argument("--config", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("report", help="render stored reports")
    p.add_argument("--in", dest="inputs", nargs="+", required=True)
    p.add_argument("--format", choices=FORMATS, default="table")
    p.set_defaults(func=cmd_report)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (GceFairError, OSError) as exc:
        print(f"gcefair {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
