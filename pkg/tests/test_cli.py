import json
from pathlib import Path

import pytest

from arabish.cli import main
from arabish.corpus import parse_tsv
from tests.helpers import FIXTURE_RECORDS

DATA = Path(__file__).parent / "data"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_normalize_subcommand(capsys):
    code, out, _ = run(capsys, "normalize", "--token", "bniiiiin")
    assert code == 0
    doc = json.loads(out)
    assert doc["normalized"] == "bnin"
    assert doc["collapsed_runs"] == [[2, 5]]


def test_normalize_reports_negation(capsys):
    code, out, _ = run(capsys, "normalize", "--token", "manajemnech")
    doc = json.loads(out)
    assert doc["negation"] == ["ma", "najemne", "ch"]


def test_segment_subcommand(capsys):
    code, out, _ = run(capsys, "segment", "--token", "l3icha")
    assert code == 0
    splits = json.loads(out)
    assert [{"text": "l", "kind": "proclitic", "arabic": "الـ", "pos": "det"},
            {"text": "3icha", "kind": "stem", "arabic": None, "pos": None}] in splits


def test_expand_subcommand(capsys):
    code, out, _ = run(capsys, "expand", "--token", "7", "--paths")
    assert code == 0
    doc = json.loads(out)
    assert doc["paths"] == ["ح"]
    code, out, _ = run(capsys, "expand", "--token", "gawriya", "--loanword", "--paths")
    assert "ڨاورية" in json.loads(out)["paths"]


def test_train_predict_cycle(tmp_path, capsys):
    model_path = tmp_path / "model.json"
    code, _, _ = run(capsys, "train", "--corpus", str(DATA / "fixture_corpus.tsv"),
                     "--model-out", str(model_path))
    assert code == 0 and model_path.exists()
    code, out, _ = run(capsys, "predict", "--model", str(model_path), "--token", "kifech")
    assert code == 0
    assert out.strip() == "كيفاش"
    code, out, _ = run(capsys, "predict", "--model", str(model_path),
                       "--token", "l3icha", "--json")
    doc = json.loads(out)
    assert doc["morphemes"] == ["الـ", "عيشة"]
    assert doc["fused"] == "العيشة"


def test_predict_missing_model_fails(capsys, tmp_path):
    code, _, err = run(capsys, "predict", "--model", str(tmp_path / "none.json"),
                       "--token", "x")
    assert code != 0


def test_cv_deterministic_output(tmp_path, capsys):
    corpus = DATA / "fixture_corpus.tsv"
    code, out1, _ = run(capsys, "cv", "--corpus", str(corpus), "--k", "3", "--seed", "42")
    assert code == 0
    code, out2, _ = run(capsys, "cv", "--corpus", str(corpus), "--k", "3", "--seed", "42")
    assert out1 == out2
    code, out3, _ = run(capsys, "cv", "--corpus", str(corpus), "--k", "3", "--seed", "1")
    assert out3 != out1


def test_block_workflow_partitions_stream(tmp_path, capsys):
    from arabish.corpus import MISSING, TokenRecord, write_tsv

    records = list(FIXTURE_RECORDS)
    for i in range(23):
        records.append(
            TokenRecord("str", "150902", 1, str(i + 1), f"tok{i}", MISSING, MISSING,
                        MISSING, MISSING, MISSING, MISSING, MISSING)
        )
    corpus = tmp_path / "corpus.tsv"
    corpus.write_bytes(write_tsv(records))
    store = tmp_path / "store"

    sizes = []
    for _ in range(3):
        code, out, _ = run(capsys, "block", "make", "--store", str(store),
                           "--corpus", str(corpus), "--size", "10")
        assert code == 0
        sizes.append(json.loads(out)["size"])
    assert sizes == [10, 10, 3]
    code, _, err = run(capsys, "block", "make", "--store", str(store), "--size", "10")
    assert code != 0  # nothing left to block

    # train a model from the store's annotated part, then auto-annotate
    code, out, _ = run(capsys, "train", "--store", str(store))
    assert code == 0 and json.loads(out)["version"] == 1
    code, out, _ = run(capsys, "block", "auto", "--store", str(store), "--id", "0")
    assert code == 0 and json.loads(out)["status"] == "auto"

    corrections = tmp_path / "corr.json"
    code, out, _ = run(capsys, "block", "export", "--store", str(store), "--id", "0")
    payload = json.loads(out)
    key = payload["rows"][0]["key"]
    corrections.write_text(json.dumps({"corrections": {key: ["تصحيح"]}}), encoding="utf-8")
    code, out, _ = run(capsys, "block", "import-corrections", "--store", str(store),
                       "--id", "0", "--corrections", str(corrections))
    assert code == 0
    assert json.loads(out)["status"] == "corrected"
    assert json.loads(out)["accuracy"] == pytest.approx(0.9)


def test_export_writes_corpus(tmp_path, capsys):
    from arabish.corpus import write_tsv

    corpus = tmp_path / "corpus.tsv"
    corpus.write_bytes(write_tsv(list(FIXTURE_RECORDS)))
    store = tmp_path / "store"
    code, _, _ = run(capsys, "block", "make", "--store", str(store),
                     "--corpus", str(corpus), "--size", "5")
    assert code != 0  # no unannotated rows to block, but the store exists now

    out_path = tmp_path / "export.tsv"
    code, _, _ = run(capsys, "export", "--store", str(store), "--out", str(out_path))
    assert code == 0
    assert parse_tsv(out_path.read_bytes()) == list(FIXTURE_RECORDS)


def test_ingest_builds_corpus(tmp_path, capsys):
    raw_dir = tmp_path / "raw"
    raw_dir.mkdir()
    (raw_dir / "a.txt").write_text(
        "source: 3fE\ndate: 150902\ngender: M\nage: 30\ncity: Bizerte\n\n"
        "kifech el kelb?\n\nmerci barcha\n",
        encoding="utf-8",
    )
    out = tmp_path / "ingested.tsv"
    code, _, err = run(capsys, "ingest", "--raw-dir", str(raw_dir), "--out", str(out))
    assert code == 0
    records = parse_tsv(out.read_bytes())
    assert [r.arabish for r in records] == ["kifech", "el", "kelb", "?", "merci", "barcha"]
    assert records[0].par == 1 and records[4].par == 2
    assert all(r.var == "Bnz" and r.age == "25-35" and r.gen == "M" for r in records)


def test_config_file_defaults(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"k": 3}), encoding="utf-8")
    code, out1, _ = run(capsys, "--config", str(cfg), "cv",
                        "--corpus", str(DATA / "fixture_corpus.tsv"))
    assert code == 0
    code, out2, _ = run(capsys, "cv", "--corpus", str(DATA / "fixture_corpus.tsv"), "--k", "3")
    assert out1 == out2


def test_help_lists_subcommands(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--help"])
    assert exc.value.code == 0
    out = capsys.readouterr().out
    for name in ("ingest", "normalize", "segment", "expand", "train",
                 "predict", "cv", "block", "serve", "export"):
        assert name in out
