"""Command-line pipelines over thread corpora.

Every command reads files, writes files into ``--out``, and echoes its
fully resolved configuration to ``<out>/run_config.json``; rerunning a
command with identical inputs and arguments reproduces every output file
byte for byte.  Failures print a single ``error: <kind>: <message>`` line
on stderr and exit nonzero.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import sys
from pathlib import Path

from threadinfluence import __version__, synth
from threadinfluence.corpus import (
    Corpus,
    IngestionError,
    eligible_threads,
    issue_counts,
    load_corpus,
    write_corpus,
)
from threadinfluence.dynamics import (
    MissingScoreError,
    delta_histogram_negative_start,
    delta_vs_reply_sentiment,
    interval_cdf,
    sentiment_by_position,
    transition_rates,
    write_series,
)
from threadinfluence.graph import PageRankConvergenceError, build_post_reply_graph
from threadinfluence.influence import irr_counts, threshold_sensitivity, write_counts
from threadinfluence.profiler import (
    RANKING_METRICS,
    augment_with_clusters,
    compute_metric,
    load_label_file,
    rank_users,
    read_ranking,
    topk_precision,
    topk_recall,
    user_features,
    write_feature_table,
    write_ranking,
)
from threadinfluence.sentiment import (
    TrainConfig,
    cross_validate,
    default_lexicons,
    extract_features,
    load_model,
    read_scores,
    save_model,
    score_posts,
    train_classifier,
    write_scores,
)

DEFAULT_K = (50, 100, 150)
DEFAULT_THRESHOLDS = (0.3, 0.4, 0.5, 0.6, 0.7)


class CliError(Exception):
    """A named failure; rendered as ``error: <kind>: <message>``."""

    def __init__(self, kind: str, message: str):
        super().__init__(message)
        self.kind = kind


# ---------------------------------------------------------------------------
# Shared plumbing


def _sig6(value):
    """Floats rounded to 6 significant digits, recursively."""
    if isinstance(value, float):
        return value if math.isnan(value) or math.isinf(value) else float(f"{value:.6g}")
    if isinstance(value, dict):
        return {k: _sig6(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_sig6(v) for v in value]
    return value


def _write_json(payload, path: Path) -> None:
    text = json.dumps(_sig6(payload), indent=2, sort_keys=True)
    path.write_text(text + "\n", encoding="utf-8")


def _out_dir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _record_run(args, out: Path) -> None:
    skip = {"func", "command"}
    params = {
        key: (str(value) if isinstance(value, Path) else value)
        for key, value in sorted(vars(args).items())
        if key not in skip
    }
    payload = {"command": args.command, "version": __version__, "parameters": params}
    _write_json(payload, out / "run_config.json")


def _load_corpus(path: str) -> Corpus:
    return load_corpus(path)


def _load_scores(path: str):
    try:
        return read_scores(path)
    except (KeyError, ValueError) as exc:
        raise CliError("invalid-scores", f"{path}: {exc}") from exc


def _int_list(text: str) -> list[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated ints: {text!r}") from exc


def _float_list(text: str) -> list[float]:
    try:
        return [float(part) for part in text.split(",") if part.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated floats: {text!r}") from exc


# ---------------------------------------------------------------------------
# Commands


def cmd_generate(args) -> None:
    overrides = {
        "user_count": args.users,
        "thread_count": args.threads,
        "influencer_count": args.influencers,
        "influence_uplift": args.uplift,
        "labeled_sample_size": args.labeled,
        "seed": args.seed,
    }
    config = dataclasses.replace(
        synth.SynthConfig(), **{k: v for k, v in overrides.items() if v is not None}
    )
    corpus, truth = synth.generate(config)
    out = _out_dir(args)
    write_corpus(corpus, out / "corpus.jsonl")
    synth.write_influencers(truth, out / "influencers.txt")
    synth.write_post_labels(truth, out / "post_labels.csv")
    synth.write_labeled_sample(truth, out / "labeled_posts.csv")
    _record_run(args, out)
    print(
        f"generated {len(corpus.threads)} threads, "
        f"{sum(len(t.posts) for t in corpus.threads)} posts, "
        f"{len(corpus.users)} users -> {out}"
    )


def cmd_ingest(args) -> None:
    corpus = _load_corpus(args.corpus)
    out = _out_dir(args)
    write_corpus(corpus, out / "corpus.jsonl")
    report = {
        "threads": len(corpus.threads),
        "posts": sum(len(t.posts) for t in corpus.threads),
        "users": len(corpus.users),
        "eligible_threads": len(eligible_threads(corpus)),
    }
    _write_json(report, out / "report.json")
    _record_run(args, out)
    print(f"ingested {report['posts']} posts in {report['threads']} threads -> {out}")


def _labeled_features(corpus: Corpus, labels_path: str):
    labeled = synth.read_labeled_posts(labels_path)
    if not labeled:
        raise CliError("invalid-labels", f"{labels_path}: no labeled posts")
    posts = {p.post_id: p for p in corpus.iter_posts()}
    lexicons = default_lexicons()
    pairs = []
    for post_id, label in labeled:
        if post_id not in posts:
            raise CliError("invalid-labels", f"labeled post {post_id!r} not in corpus")
        pairs.append((extract_features(posts[post_id], lexicons), label))
    return pairs


def cmd_train_sentiment(args) -> None:
    corpus = _load_corpus(args.corpus)
    pairs = _labeled_features(corpus, args.labels)
    config = TrainConfig(kind=args.model_kind, seed=args.seed)
    metrics = cross_validate(pairs, k=args.folds, config=config)
    model = train_classifier(pairs, config)
    out = _out_dir(args)
    save_model(model, out / "model.json")
    report = {
        "accuracy": metrics.accuracy,
        "roc_area": metrics.roc_area,
        "folds": [
            {"fold": f.fold, "accuracy": f.accuracy, "roc_area": f.roc_area}
            for f in metrics.per_fold
        ],
        "labeled_posts": len(pairs),
        "model_kind": args.model_kind,
    }
    _write_json(report, out / "cv_report.json")
    _record_run(args, out)
    print(
        f"{args.model_kind}: CV accuracy {metrics.accuracy:.3f}, "
        f"ROC area {metrics.roc_area:.3f} over {len(pairs)} labeled posts"
    )


def cmd_score(args) -> None:
    corpus = _load_corpus(args.corpus)
    try:
        model = load_model(args.model)
    except (KeyError, ValueError, json.JSONDecodeError) as exc:
        raise CliError("invalid-model", f"{args.model}: {exc}") from exc
    scores = score_posts(corpus, model, default_lexicons(), args.threshold)
    out = _out_dir(args)
    write_scores(scores, out / "scores.csv")
    _record_run(args, out)
    positive = sum(1 for s in scores.values() if s.label == "positive")
    print(f"scored {len(scores)} posts ({positive} positive) -> {out}")


def cmd_dynamics(args) -> None:
    corpus = _load_corpus(args.corpus)
    scores = _load_scores(args.scores)
    out = _out_dir(args)

    write_series(sentiment_by_position(corpus, scores), out / "position_sentiment.csv")

    reply = delta_vs_reply_sentiment(corpus, scores, bin_count=args.bins)
    write_series(reply.series, out / "delta_by_reply_sentiment.csv")

    negative = delta_histogram_negative_start(
        corpus, scores, threshold=args.threshold, bin_count=args.bins
    )
    write_series(negative.series, out / "negative_start_histogram.csv")

    transitions = transition_rates(corpus, scores, threshold=args.threshold)

    stats = {
        "threads": len(corpus.threads),
        "eligible_threads": reply.thread_count,
        "delta_vs_reply": {
            "r_binned": reply.r,
            "p_binned": reply.p,
            "r_threads": reply.r_threads,
            "p_threads": reply.p_threads,
        },
        "negative_start": {
            "defined": negative.defined,
            "mean_delta": negative.mean,
            "frac_negative_delta": negative.frac_negative,
            "t_statistic": negative.t_test.statistic if negative.t_test else None,
            "p_value": negative.t_test.p_value if negative.t_test else None,
            "degenerate": negative.t_test.degenerate if negative.t_test else None,
            "threads": negative.thread_count,
        },
        "transitions": {
            "neg_start_turned_pos": transitions.neg_start_turned_pos,
            "pos_start_stayed_pos": transitions.pos_start_stayed_pos,
            "neg_start_count": transitions.neg_start_count,
            "pos_start_count": transitions.pos_start_count,
        },
    }
    try:
        intervals = interval_cdf(corpus)
    except ValueError:
        stats["median_first_self_reply_hours"] = None
    else:
        write_series(intervals.first, out / "first_self_reply_cdf.csv")
        write_series(intervals.last, out / "last_self_reply_cdf.csv")
        stats["median_first_self_reply_hours"] = intervals.median_first_hours

    _write_json(stats, out / "stats.json")
    _record_run(args, out)
    print(f"dynamics over {reply.thread_count} eligible threads -> {out}")


def cmd_profile(args) -> None:
    corpus = _load_corpus(args.corpus)
    scores = _load_scores(args.scores)
    graph = build_post_reply_graph(corpus)
    counts = irr_counts(corpus, scores, args.threshold)
    features = user_features(corpus, graph, counts, topic_count=args.topics)
    out = _out_dir(args)
    write_feature_table(features, out / "features.csv")
    if args.clusters:
        assignments = _read_clusters(args.clusters)
        users, X, names = augment_with_clusters(features, assignments)
        _write_matrix(users, X, names, out / "features_clustered.csv")
    _record_run(args, out)
    print(f"profiled {len(features)} users -> {out}")


def _read_clusters(path: str) -> dict[str, str]:
    import csv

    with open(path, encoding="utf-8", newline="") as handle:
        reader = csv.DictReader(handle)
        if reader.fieldnames is None or "user_id" not in reader.fieldnames:
            raise CliError("invalid-clusters", f"{path}: need user_id,cluster_id header")
        return {row["user_id"]: row["cluster_id"] for row in reader}


def _write_matrix(users, X, names, path: Path) -> None:
    import csv

    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["user_id", *names])
        for user, row in zip(users, X):
            writer.writerow([user, *(f"{v:.6g}" for v in row)])


def cmd_rank(args) -> None:
    out = _out_dir(args)
    if args.from_csv:
        ranking = read_ranking(args.from_csv, source=Path(args.from_csv).stem)
    else:
        corpus = _load_corpus(args.corpus)
        scores = _load_scores(args.scores) if args.scores else None
        values = compute_metric(
            corpus,
            args.metric,
            scores=scores,
            threshold=args.threshold,
            restrict_eligible=args.restrict_eligible,
        )
        ranking = rank_users(values, source=args.metric)
    write_ranking(ranking, out / "ranking.csv")
    _record_run(args, out)
    print(f"ranked {len(ranking.entries)} users by {ranking.source} -> {out}")


def cmd_evaluate(args) -> None:
    labels = load_label_file(args.labels)
    results = {}
    for path in args.ranking:
        ranking = read_ranking(path, source=Path(path).stem)
        per_k = {}
        for k in args.k:
            recall = topk_recall(ranking, labels, k)
            precision = topk_precision(ranking, labels, k)
            per_k[str(k)] = {
                "hits": recall.hits,
                "recall": recall.value,
                "recall_max": recall.max_possible,
                "precision": precision.value,
                "precision_max": precision.max_possible,
            }
        results[ranking.source] = per_k
    out = _out_dir(args)
    _write_json(
        {"influential_users": len(labels.influential), "rankings": results},
        out / "evaluation.json",
    )
    _record_run(args, out)
    print(f"evaluated {len(results)} ranking(s) at K={args.k} -> {out}")


def cmd_sensitivity(args) -> None:
    corpus = _load_corpus(args.corpus)
    scores = _load_scores(args.scores)
    thresholds = tuple(args.thresholds)
    result = threshold_sensitivity(corpus, scores, thresholds)
    out = _out_dir(args)

    import csv

    with open(out / "correlations.csv", "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["threshold_a", "threshold_b", "r", "p"])
        for i in range(len(thresholds)):
            for j in range(i + 1, len(thresholds)):
                writer.writerow(
                    [
                        f"{thresholds[i]:.6g}",
                        f"{thresholds[j]:.6g}",
                        f"{result.r_matrix[i][j]:.6g}",
                        f"{result.p_matrix[i][j]:.6g}",
                    ]
                )

    for threshold, counts in zip(thresholds, result.counts):
        write_counts(counts.counts, out / f"irr_counts_{threshold:.6g}.csv")

    if args.labels:
        labels = load_label_file(args.labels)
        with open(out / "eval_grid.csv", "w", encoding="utf-8", newline="") as handle:
            writer = csv.writer(handle)
            writer.writerow(["threshold", "k", "recall", "precision"])
            for threshold, counts in zip(thresholds, result.counts):
                ranking = rank_users(
                    {u: float(c) for u, c in counts.counts.items()},
                    source=f"irr@{threshold:.6g}",
                )
                for k in args.k:
                    writer.writerow(
                        [
                            f"{threshold:.6g}",
                            k,
                            f"{topk_recall(ranking, labels, k).value:.6g}",
                            f"{topk_precision(ranking, labels, k).value:.6g}",
                        ]
                    )

    _write_json(
        {"thresholds": list(thresholds), "degenerate": list(result.degenerate)},
        out / "sensitivity.json",
    )
    _record_run(args, out)
    print(f"sensitivity over thresholds {list(thresholds)} -> {out}")


# ---------------------------------------------------------------------------
# Parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="threadinfluence",
        description="Thread corpus analysis: sentiment, dynamics, influence rankings.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="emit a synthetic corpus with ground truth")
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--users", type=int, default=None)
    p.add_argument("--threads", type=int, default=None)
    p.add_argument("--influencers", type=int, default=None)
    p.add_argument("--uplift", type=float, default=None)
    p.add_argument("--labeled", type=int, default=None)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("ingest", help="validate and normalize a corpus file")
    p.add_argument("--corpus", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("train-sentiment", help="cross-validate and fit a post classifier")
    p.add_argument("--corpus", required=True)
    p.add_argument("--labels", required=True, help="CSV of post_id,label (pos/neg)")
    p.add_argument("--model-kind", default="adaboost-stumps")
    p.add_argument("--folds", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_train_sentiment)

    p = sub.add_parser("score", help="assign sentiment posteriors to every post")
    p.add_argument("--corpus", required=True)
    p.add_argument("--model", required=True)
    p.add_argument("--threshold", type=float, default=0.5)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("dynamics", help="thread sentiment-change series and statistics")
    p.add_argument("--corpus", required=True)
    p.add_argument("--scores", required=True)
    p.add_argument("--threshold", type=float, default=0.5)
    p.add_argument("--bins", type=int, default=20)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_dynamics)

    p = sub.add_parser("profile", help="per-user feature table")
    p.add_argument("--corpus", required=True)
    p.add_argument("--scores", required=True)
    p.add_argument("--threshold", type=float, default=0.5)
    p.add_argument("--topics", type=int, default=20)
    p.add_argument("--clusters", default=None, help="CSV of user_id,cluster_id")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_profile)

    p = sub.add_parser("rank", help="rank users by a metric or an existing score file")
    p.add_argument("--corpus")
    p.add_argument("--metric", choices=RANKING_METRICS, default="irr_count")
    p.add_argument("--from-csv", default=None, help="rank,user_id,score CSV to re-rank")
    p.add_argument("--scores", default=None)
    p.add_argument("--threshold", type=float, default=0.5)
    p.add_argument("--restrict-eligible", action="store_true")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_rank)

    p = sub.add_parser("evaluate", help="top-K recall/precision of rankings")
    p.add_argument("--ranking", action="append", required=True)
    p.add_argument("--labels", required=True, help="influential users, one per line")
    p.add_argument("--k", type=_int_list, default=list(DEFAULT_K))
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("sensitivity", help="IRR stability across thresholds")
    p.add_argument("--corpus", required=True)
    p.add_argument("--scores", required=True)
    p.add_argument("--thresholds", type=_float_list, default=list(DEFAULT_THRESHOLDS))
    p.add_argument("--labels", default=None, help="optional IU labels for an eval grid")
    p.add_argument("--k", type=_int_list, default=list(DEFAULT_K))
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_sensitivity)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "rank" and not args.from_csv and not args.corpus:
        print("error: invalid-config: rank needs --corpus or --from-csv", file=sys.stderr)
        return 2
    try:
        args.func(args)
    except CliError as exc:
        print(f"error: {exc.kind}: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: missing-file: {exc.filename}", file=sys.stderr)
        return 2
    except IngestionError as exc:
        counts = ", ".join(f"{k}={v}" for k, v in sorted(issue_counts(exc.issues).items()))
        print(f"error: invalid-corpus: {exc.rejected_count} bad record(s): {counts}", file=sys.stderr)
        return 2
    except MissingScoreError as exc:
        print(f"error: missing-score: {exc}", file=sys.stderr)
        return 2
    except PageRankConvergenceError as exc:
        print(f"error: no-convergence: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: invalid-config: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
