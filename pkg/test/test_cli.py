"""
Tests for the command-line interface
"""

import json
import os
import re
from unittest import mock

import pytest

from cogease import cli
from cogease.defaults import audience_profile
from cogease.evaluate import recompute_report
from cogease.ingest import dump_profile


def record(pair_id, candidate, reference, **extra):
    return json.dumps(
        dict(id=pair_id, candidate={"text": candidate}, references=[{"text": reference}], **extra)
    )


@pytest.fixture
def corpus(tmp_path):
    path = tmp_path / "corpus.jsonl"
    path.write_text(
        "\n".join(
            [
                record("a", "w1 w2 x3 x4 x5", "w1 w2 y3 y4 y5", human_score=0.3),
                record("b", "w1 w2 w3 w4 x5", "w1 w2 w3 w4 y5", human_score=0.9),
                record("zero", "p q r", "x y z", human_score=0.0),
            ]
        )
        + "\n",
        encoding="utf-8",
    )
    return str(path)


@pytest.fixture
def perfect_corpus(tmp_path):
    path = tmp_path / "perfect.jsonl"
    path.write_text(
        record("p1", "the cat sat", "the cat sat", human_score=1.0)
        + "\n"
        + record("p2", "a dog ran home", "a dog ran home", human_score=1.0)
        + "\n",
        encoding="utf-8",
    )
    return str(path)


def run(argv, capsys):
    code = cli.main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_summary_prints_corpus_mean(tmp_path, capsys):
    path = tmp_path / "two.jsonl"
    path.write_text(
        record("a", "w1 w2 x3 x4 x5", "w1 w2 y3 y4 y5")
        + "\n"
        + record("b", "w1 w2 w3 w4 x5", "w1 w2 w3 w4 y5")
        + "\n",
        encoding="utf-8",
    )
    code, out, _ = run(["score", "--corpus", str(path), "--summary"], capsys)
    assert code == 0
    assert float(out.strip()) == pytest.approx(0.6)


def test_score_report_round_trips(corpus, tmp_path, capsys):
    out_path = tmp_path / "report.json"
    code, _, _ = run(["score", "--corpus", corpus, "--out", str(out_path)], capsys)
    assert code == 0
    report = json.loads(out_path.read_text(encoding="utf-8"))
    assert [u["id"] for u in report["units"]] == ["a", "b", "zero"]
    assert report["profile_digest"] == audience_profile("general").digest()
    assert recompute_report(report) == []


def test_perfect_corpus_has_full_adequacy(perfect_corpus, capsys):
    code, out, _ = run(["score", "--corpus", perfect_corpus], capsys)
    assert code == 0
    report = json.loads(out)
    for unit in report["units"]:
        assert unit["levels"]["word"]["A"] == pytest.approx(1.0)


def test_jobs_keep_order(corpus, capsys):
    _, serial, _ = run(["score", "--corpus", corpus], capsys)
    code, parallel, _ = run(["score", "--corpus", corpus, "--jobs", "2"], capsys)
    assert code == 0
    assert parallel == serial


@pytest.mark.parametrize(
    ["extra_args", "expected_code", "expected_message_snippet"],
    [
        [["--profile", "missing.json"], 1, "Could not read weight profile"],
        [["--lexicon", "freq.tsv"], 1, "--lexicon and --stats"],
        [["--audience", "children"], 1, "invalid choice"],
        [["--jobs", "0"], 1, "--jobs"],
    ],
)
def test_score_usage_errors(corpus, capsys, extra_args, expected_code, expected_message_snippet):
    code, _, err = run(["score", "--corpus", corpus, *extra_args], capsys)
    assert code == expected_code
    assert expected_message_snippet in err


def test_missing_corpus(tmp_path, capsys):
    code, _, err = run(["score", "--corpus", str(tmp_path / "none.jsonl")], capsys)
    assert code == 1
    assert "Could not read corpus" in err


def test_invalid_records(tmp_path, capsys):
    path = tmp_path / "bad.jsonl"
    path.write_text(record("ok", "a b", "a b") + "\n{broken\n", encoding="utf-8")
    code, out, err = run(["score", "--corpus", str(path), "--summary"], capsys)
    assert code == 0
    assert "line 2" in err
    assert float(out.strip()) == pytest.approx(1.0)

    code, _, err = run(["score", "--corpus", str(path), "--strict"], capsys)
    assert code == 2
    assert "--strict" in err


def test_profile_from_config_and_environment(corpus, tmp_path, capsys):
    profile_path = tmp_path / "profile.json"
    profile_path.write_text(dump_profile(audience_profile("lay_technical")), encoding="utf-8")
    config_path = tmp_path / "cogease.toml"
    config_path.write_text(f'[paths]\nprofile = "{profile_path}"\n', encoding="utf-8")
    expected = audience_profile("lay_technical").digest()

    code, out, _ = run(["score", "--corpus", corpus, "--config", str(config_path)], capsys)
    assert code == 0
    assert json.loads(out)["profile_digest"] == expected

    with mock.patch.dict(os.environ, {"COGEASE_PROFILE": str(profile_path)}):
        code, out, _ = run(["score", "--corpus", corpus], capsys)
    assert code == 0
    assert json.loads(out)["profile_digest"] == expected


def test_lexicon_files(corpus, tmp_path, capsys):
    freq = tmp_path / "freq.tsv"
    freq.write_text("w1\t10\nw2\t5\n", encoding="utf-8")
    stats = tmp_path / "stats.json"
    stats.write_text(json.dumps({"ave_sentence_len": 10, "ave_chunks_per_sentence": 3}))
    code, out, _ = run(
        ["score", "--corpus", corpus, "--lexicon", str(freq), "--stats", str(stats)], capsys
    )
    assert code == 0
    word = json.loads(out)["units"][0]["levels"]["word"]
    assert word["Q"]["nword"] == pytest.approx(0.5)
    assert word["Q"]["uncom"] == pytest.approx(0.3)


def test_tune_is_deterministic(corpus, tmp_path, capsys):
    outputs = []
    for name in ("first.json", "second.json"):
        out_path = tmp_path / name
        code, out, _ = run(
            ["tune", "--corpus", corpus, "--out", str(out_path), "--seed", "7",
             "--max-iters", "30"],
            capsys,
        )
        assert code == 0
        assert "initial_loss" in out
        outputs.append(out_path.read_bytes())
    assert outputs[0] == outputs[1]


def test_tune_zero_loss_keeps_profile(perfect_corpus, tmp_path, capsys):
    out_path = tmp_path / "fitted.json"
    code, out, _ = run(["tune", "--corpus", perfect_corpus, "--out", str(out_path)], capsys)
    assert code == 0
    assert out_path.read_text(encoding="utf-8") == dump_profile(audience_profile("general"))
    assert "final_loss 0" in out


def test_tune_needs_human_scores(tmp_path, capsys):
    path = tmp_path / "unscored.jsonl"
    path.write_text(record("a", "x y", "x y") + "\n", encoding="utf-8")
    code, _, err = run(
        ["tune", "--corpus", str(path), "--out", str(tmp_path / "p.json")], capsys
    )
    assert code == 2
    assert "human_score" in err


def test_explain(corpus, capsys):
    code, out, _ = run(["explain", "--corpus", corpus, "--id", "b"], capsys)
    assert code == 0
    assert re.search(r"^chunk\s+inactive$", out, re.MULTILINE)
    assert re.search(r"^word\s+P lex\s", out, re.MULTILINE)

    aggregation = next(line for line in out.splitlines() if line.startswith("G = "))
    terms, total = aggregation[len("G = "):].rsplit(" = ", 1)
    recomputed = sum(float(w) * float(g) for w, g in (t.split("*") for t in terms.split(" + ")))
    assert recomputed == pytest.approx(float(total), abs=1e-9)
    assert "weakest level: word" in out


def test_explain_zero_adequacy(corpus, capsys):
    code, out, _ = run(["explain", "--corpus", corpus, "--id", "zero"], capsys)
    assert code == 0
    assert re.search(r"^word\s+A=0\.000000 B=\S+ G=0\.000000", out, re.MULTILINE)


def test_explain_unknown_id(corpus, capsys):
    code, _, err = run(["explain", "--corpus", corpus, "--id", "nope"], capsys)
    assert code == 2
    assert "No unit with id 'nope'" in err
