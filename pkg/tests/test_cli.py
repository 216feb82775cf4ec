"""End-to-end checks of the command-line entry point, run in process."""

import json

import pytest

from threadinfluence import __version__
from threadinfluence.cli import main


@pytest.fixture(scope="module")
def workspace(tmp_path_factory):
    root = tmp_path_factory.mktemp("cli")
    gen = root / "gen"
    rc = main(
        [
            "generate",
            "--out", str(gen),
            "--seed", "5",
            "--users", "40",
            "--threads", "60",
            "--influencers", "4",
            "--labeled", "60",
        ]
    )
    assert rc == 0
    return root, gen


def test_generate_outputs(workspace):
    _, gen = workspace
    for name in (
        "corpus.jsonl",
        "influencers.txt",
        "post_labels.csv",
        "labeled_posts.csv",
        "run_config.json",
    ):
        assert (gen / name).exists()
    config = json.loads((gen / "run_config.json").read_text())
    assert config["command"] == "generate"
    assert config["version"] == __version__
    assert config["parameters"]["seed"] == 5
    assert config["parameters"]["uplift"] is None
    assert len((gen / "influencers.txt").read_text().splitlines()) == 4


def test_ingest_report(workspace):
    root, gen = workspace
    out = root / "ingest"
    assert main(["ingest", "--corpus", str(gen / "corpus.jsonl"), "--out", str(out)]) == 0
    report = json.loads((out / "report.json").read_text())
    assert report["threads"] == 60
    post_lines = [l for l in (gen / "corpus.jsonl").read_text().splitlines() if l.strip()]
    assert report["posts"] == len(post_lines)
    assert 0 < report["eligible_threads"] <= 60
    # a validated corpus re-serializes to the identical file
    assert (out / "corpus.jsonl").read_bytes() == (gen / "corpus.jsonl").read_bytes()


@pytest.fixture(scope="module")
def scored(workspace):
    root, gen = workspace
    train = root / "train"
    rc = main(
        [
            "train-sentiment",
            "--corpus", str(gen / "corpus.jsonl"),
            "--labels", str(gen / "labeled_posts.csv"),
            "--model-kind", "logistic",
            "--folds", "3",
            "--out", str(train),
        ]
    )
    assert rc == 0
    score = root / "score"
    rc = main(
        [
            "score",
            "--corpus", str(gen / "corpus.jsonl"),
            "--model", str(train / "model.json"),
            "--out", str(score),
        ]
    )
    assert rc == 0
    return train, score


def test_train_report_and_scores(workspace, scored):
    _, gen = workspace
    train, score = scored
    report = json.loads((train / "cv_report.json").read_text())
    assert report["labeled_posts"] == 60
    assert 0.0 <= report["roc_area"] <= 1.0
    assert len(report["folds"]) == 3

    post_lines = [l for l in (gen / "corpus.jsonl").read_text().splitlines() if l.strip()]
    score_lines = (score / "scores.csv").read_text().splitlines()
    assert len(score_lines) == 1 + len(post_lines)


def test_rank_and_evaluate_pipeline(workspace, scored):
    root, gen = workspace
    _, score = scored
    rank = root / "rank"
    rc = main(
        [
            "rank",
            "--corpus", str(gen / "corpus.jsonl"),
            "--scores", str(score / "scores.csv"),
            "--metric", "irr_count",
            "--out", str(rank),
        ]
    )
    assert rc == 0
    assert (rank / "ranking.csv").read_text().splitlines()[0] == "rank,user_id,score"

    ev = root / "eval"
    rc = main(
        [
            "evaluate",
            "--ranking", str(rank / "ranking.csv"),
            "--labels", str(gen / "influencers.txt"),
            "--k", "2,4",
            "--out", str(ev),
        ]
    )
    assert rc == 0
    payload = json.loads((ev / "evaluation.json").read_text())
    assert payload["influential_users"] == 4
    per_k = payload["rankings"]["ranking"]
    assert set(per_k) == {"2", "4"}
    assert per_k["2"]["recall_max"] == 0.5
    assert per_k["2"]["recall"] == per_k["2"]["hits"] / 4


def test_rank_from_csv_reproduces_file(workspace, scored, tmp_path):
    root, gen = workspace
    _, score = scored
    first = root / "rank"
    again = tmp_path / "again"
    rc = main(["rank", "--from-csv", str(first / "ranking.csv"), "--out", str(again)])
    assert rc == 0
    assert (again / "ranking.csv").read_bytes() == (first / "ranking.csv").read_bytes()


def test_rank_requires_a_source(tmp_path, capsys):
    rc = main(["rank", "--out", str(tmp_path / "r")])
    assert rc == 2
    assert "error: invalid-config: rank needs --corpus or --from-csv" in capsys.readouterr().err


def test_dynamics_outputs(workspace, scored, tmp_path):
    _, gen = workspace
    _, score = scored
    out = tmp_path / "dyn"
    rc = main(
        [
            "dynamics",
            "--corpus", str(gen / "corpus.jsonl"),
            "--scores", str(score / "scores.csv"),
            "--bins", "10",
            "--out", str(out),
        ]
    )
    assert rc == 0
    for name in ("position_sentiment.csv", "delta_by_reply_sentiment.csv", "stats.json"):
        assert (out / name).exists()
    stats = json.loads((out / "stats.json").read_text())
    assert set(stats["transitions"]) == {
        "neg_start_turned_pos",
        "pos_start_stayed_pos",
        "neg_start_count",
        "pos_start_count",
    }
    assert stats["threads"] == 60


def test_profile_with_clusters(workspace, scored, tmp_path):
    _, gen = workspace
    _, score = scored
    corpus_users = set()
    for line in (gen / "corpus.jsonl").read_text().splitlines():
        if line.strip():
            corpus_users.add(json.loads(line)["user_id"])
    clusters = tmp_path / "clusters.csv"
    clusters.write_text(
        "user_id,cluster_id\n"
        + "".join(f"{u},{int(u[-1]) % 2}\n" for u in sorted(corpus_users))
    )
    out = tmp_path / "prof"
    rc = main(
        [
            "profile",
            "--corpus", str(gen / "corpus.jsonl"),
            "--scores", str(score / "scores.csv"),
            "--clusters", str(clusters),
            "--out", str(out),
        ]
    )
    assert rc == 0
    assert (out / "features.csv").exists()
    header = (out / "features_clustered.csv").read_text().splitlines()[0]
    assert "cluster_mean_irr_count" in header


def test_profile_rejects_bad_cluster_header(workspace, scored, tmp_path, capsys):
    _, gen = workspace
    _, score = scored
    clusters = tmp_path / "clusters.csv"
    clusters.write_text("uid,cid\nx,1\n")
    rc = main(
        [
            "profile",
            "--corpus", str(gen / "corpus.jsonl"),
            "--scores", str(score / "scores.csv"),
            "--clusters", str(clusters),
            "--out", str(tmp_path / "prof"),
        ]
    )
    assert rc == 2
    assert "error: invalid-clusters:" in capsys.readouterr().err


def test_sensitivity_outputs(workspace, scored, tmp_path):
    _, gen = workspace
    _, score = scored
    out = tmp_path / "sens"
    rc = main(
        [
            "sensitivity",
            "--corpus", str(gen / "corpus.jsonl"),
            "--scores", str(score / "scores.csv"),
            "--thresholds", "0.4,0.6",
            "--labels", str(gen / "influencers.txt"),
            "--k", "2",
            "--out", str(out),
        ]
    )
    assert rc == 0
    for name in (
        "correlations.csv",
        "irr_counts_0.4.csv",
        "irr_counts_0.6.csv",
        "eval_grid.csv",
        "sensitivity.json",
    ):
        assert (out / name).exists()
    corr = (out / "correlations.csv").read_text().splitlines()
    assert corr[0] == "threshold_a,threshold_b,r,p"
    assert len(corr) == 2


def test_missing_file_error(tmp_path, capsys):
    rc = main(["ingest", "--corpus", str(tmp_path / "absent.jsonl"), "--out", str(tmp_path / "o")])
    assert rc == 2
    err = capsys.readouterr().err
    assert err.startswith("error: missing-file:")
    assert "absent.jsonl" in err


def test_invalid_corpus_error_reports_issue_counts(tmp_path, capsys):
    bad = tmp_path / "bad.jsonl"
    bad.write_text(
        "not json at all\n"
        '{"post_id": "p1", "thread_id": "t", "user_id": "u", "timestamp": 1, "body": "x"}\n'
        '{"post_id": "p2", "thread_id": "t", "user_id": "u", "body": "x"}\n'
    )
    rc = main(["ingest", "--corpus", str(bad), "--out", str(tmp_path / "o")])
    assert rc == 2
    err = capsys.readouterr().err
    assert err.startswith("error: invalid-corpus:")
    assert "malformed-line=1" in err
    assert "missing-field=1" in err


def test_invalid_labels_error(workspace, tmp_path, capsys):
    _, gen = workspace
    labels = tmp_path / "labels.csv"
    labels.write_text("post_id,label\nnot_a_post,pos\n")
    rc = main(
        [
            "train-sentiment",
            "--corpus", str(gen / "corpus.jsonl"),
            "--labels", str(labels),
            "--out", str(tmp_path / "o"),
        ]
    )
    assert rc == 2
    assert "error: invalid-labels:" in capsys.readouterr().err


def test_invalid_model_error(workspace, tmp_path, capsys):
    _, gen = workspace
    model = tmp_path / "model.json"
    model.write_text("{}")
    rc = main(
        [
            "score",
            "--corpus", str(gen / "corpus.jsonl"),
            "--model", str(model),
            "--out", str(tmp_path / "o"),
        ]
    )
    assert rc == 2
    assert "error: invalid-model:" in capsys.readouterr().err


def test_invalid_config_error(tmp_path, capsys):
    rc = main(["generate", "--out", str(tmp_path / "o"), "--users", "1"])
    assert rc == 2
    assert "error: invalid-config:" in capsys.readouterr().err


def test_rerun_is_byte_identical(workspace, scored):
    root, gen = workspace
    train, _ = scored
    out = root / "rescore"
    argv = [
        "score",
        "--corpus", str(gen / "corpus.jsonl"),
        "--model", str(train / "model.json"),
        "--out", str(out),
    ]
    assert main(argv) == 0
    snapshot = {p.name: p.read_bytes() for p in out.iterdir()}
    assert main(argv) == 0
    assert {p.name: p.read_bytes() for p in out.iterdir()} == snapshot
    assert "run_config.json" in snapshot


def test_evaluate_arithmetic(tmp_path):
    ranking = tmp_path / "ranking.csv"
    ranking.write_text("rank,user_id,score\n1,a,4\n2,b,3\n3,c,2\n4,d,1\n")
    labels = tmp_path / "labels.txt"
    labels.write_text("b\nd\n")
    out = tmp_path / "ev"
    rc = main(
        [
            "evaluate",
            "--ranking", str(ranking),
            "--labels", str(labels),
            "--k", "2,3",
            "--out", str(out),
        ]
    )
    assert rc == 0
    per_k = json.loads((out / "evaluation.json").read_text())["rankings"]["ranking"]
    assert per_k["2"] == {
        "hits": 1,
        "recall": 0.5,
        "recall_max": 1.0,
        "precision": 0.5,
        "precision_max": 1.0,
    }
    assert per_k["3"]["hits"] == 1
    assert per_k["3"]["precision"] == pytest.approx(1 / 3)
    assert per_k["3"]["precision_max"] == pytest.approx(2 / 3)


def test_bad_threshold_list_is_a_usage_error(tmp_path):
    with pytest.raises(SystemExit):
        main(
            [
                "sensitivity",
                "--corpus", "x",
                "--scores", "y",
                "--thresholds", "a,b",
                "--out", str(tmp_path / "o"),
            ]
        )
