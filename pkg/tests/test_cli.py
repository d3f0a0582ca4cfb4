from __future__ import annotations

import json

import pytest

from reliefmatch.cli import EXIT_DATA, EXIT_OK, EXIT_USAGE, main
from reliefmatch.lexicons import data_path
from reliefmatch.store import Store


def write_jsonl(path, rows):
    path.write_text("\n".join(json.dumps(r) for r in rows) + "\n", encoding="utf-8")
    return str(path)


def run(argv):
    return main(argv)


def test_usage_error_exits_1(capsys):
    with pytest.raises(SystemExit) as err:
        run(["definitely-not-a-command"])
    assert err.value.code == EXIT_USAGE


def test_ingest_exact_duplicate(tmp_path, capsys):
    corpus = write_jsonl(
        tmp_path / "c.jsonl",
        [
            {"id": "p1", "text": "need water in kathmandu", "created_at": "2015-04-26T08:00:00Z"},
            {"id": "p2", "text": "need water in kathmandu", "created_at": "2015-04-26T08:01:00Z"},
        ],
    )
    code = run(["ingest", "--input", corpus, "--store", str(tmp_path / "s.journal")])
    assert code == EXIT_OK
    assert "kept 1, dropped 1" in capsys.readouterr().out


def test_ingest_near_duplicate_jaccard(tmp_path, capsys):
    # oracle arithmetic: 19 shared of 20 tokens -> 19/21 = 0.905 >= 0.9 (drop);
    # 9 shared of 10 -> 9/11 = 0.818 < 0.9 (keep)
    base20 = [f"w{i}" for i in range(20)]
    near = base20[:-1] + ["different"]
    assert len(set(base20) & set(near)) / len(set(base20) | set(near)) >= 0.9
    base10 = [f"t{i}" for i in range(10)]
    far = base10[:-1] + ["changed"]
    assert len(set(base10) & set(far)) / len(set(base10) | set(far)) < 0.9
    corpus = write_jsonl(
        tmp_path / "c.jsonl",
        [
            {"id": "p1", "text": " ".join(base20)},
            {"id": "p2", "text": " ".join(near)},
            {"id": "p3", "text": " ".join(base10)},
            {"id": "p4", "text": " ".join(far)},
        ],
    )
    code = run(["ingest", "--input", corpus, "--store", str(tmp_path / "s.journal")])
    assert code == EXIT_OK
    assert "kept 3, dropped 1" in capsys.readouterr().out


def test_ingest_empty_file(tmp_path, capsys):
    empty = tmp_path / "empty.jsonl"
    empty.write_text("", encoding="utf-8")
    code = run(["ingest", "--input", str(empty), "--store", str(tmp_path / "s.journal")])
    assert code == EXIT_OK
    assert "kept 0, dropped 0" in capsys.readouterr().out


def test_ingest_malformed_line_exits_2(tmp_path, capsys):
    bad = tmp_path / "bad.jsonl"
    bad.write_text('{"id": "p1", "text": "ok"}\n{oops\n', encoding="utf-8")
    code = run(["ingest", "--input", str(bad), "--store", str(tmp_path / "s.journal")])
    assert code == EXIT_DATA
    assert ":2:" in capsys.readouterr().err


def test_ingest_classifies_unlabeled(tmp_path, capsys):
    corpus = write_jsonl(tmp_path / "c.jsonl", [{"id": "p1", "text": "donating 800 tents today"}])
    run(["ingest", "--input", corpus, "--store", str(tmp_path / "s.journal")])
    store = Store(tmp_path / "s.journal")
    post = store.get_post("p1")
    assert post.label.value == "availability"
    assert post.label_origin.value == "predicted"


def test_extract_golden_table5(tmp_path):
    out = tmp_path / "extract.jsonl"
    code = run([
        "extract",
        "--input", str(data_path("fixtures/table5_posts.jsonl")),
        "--out", str(out),
    ])
    assert code == EXIT_OK
    got = out.read_text(encoding="utf-8")
    golden = data_path("fixtures/table5_gold.jsonl").read_text(encoding="utf-8")
    assert got == golden


def test_extract_byte_reproducible(tmp_path):
    a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    src = str(data_path("fixtures/table1_posts.jsonl"))
    run(["extract", "--input", src, "--out", str(a)])
    run(["extract", "--input", src, "--out", str(b)])
    assert a.read_bytes() == b.read_bytes()


def test_train_and_eval_deterministic(tmp_path):
    corpus = write_jsonl(
        tmp_path / "train.jsonl",
        [{"id": f"n{i}", "text": f"need water {i}", "label": "need"} for i in range(10)]
        + [{"id": f"a{i}", "text": f"donating rice {i}", "label": "availability"} for i in range(10)],
    )
    model_path = tmp_path / "model.json"
    assert run(["train", "--corpus", corpus, "--out", str(model_path), "--epochs", "50"]) == EXIT_OK
    assert model_path.exists()

    r1, r2 = tmp_path / "r1.json", tmp_path / "r2.json"
    assert run(["eval", "--indomain", corpus, "--seed", "7", "--report", str(r1)]) == EXIT_OK
    assert run(["eval", "--indomain", corpus, "--seed", "7", "--report", str(r2)]) == EXIT_OK
    assert r1.read_bytes() == r2.read_bytes()


def test_eval_extraction_mode(tmp_path):
    gold = str(data_path("fixtures/table5_gold.jsonl"))
    report = tmp_path / "fields.json"
    code = run(["eval", "--extraction", gold, gold, "--report", str(report)])
    assert code == EXIT_OK
    doc = json.loads(report.read_text(encoding="utf-8"))
    assert doc["resource"]["f1"] == 1.0


def test_match_subcommand_caps_k(tmp_path, capsys):
    run(["ingest", "--input", str(data_path("fixtures/table1_posts.jsonl")), "--store", str(tmp_path / "s.journal")])
    capsys.readouterr()
    code = run(["match", "--store", str(tmp_path / "s.journal"), "--need", "n1", "--k", "20"])
    assert code == EXIT_OK
    lines = [json.loads(l) for l in capsys.readouterr().out.splitlines()]
    assert 1 <= len(lines) <= 20
    assert lines[0]["avail_id"] == "a1"


def test_missing_input_exits_2(tmp_path, capsys):
    code = run(["ingest", "--input", str(tmp_path / "nope.jsonl"), "--store", str(tmp_path / "s.journal")])
    assert code == EXIT_DATA


def test_env_var_precedence(tmp_path, monkeypatch, capsys):
    corpus = write_jsonl(tmp_path / "c.jsonl", [{"id": "p1", "text": "need water"}])
    store_path = tmp_path / "env.journal"
    monkeypatch.setenv("RELIEFMATCH_STORE", str(store_path))
    assert run(["ingest", "--input", corpus]) == EXIT_OK
    assert store_path.exists()


def test_config_file_lowest_precedence(tmp_path, capsys):
    corpus = write_jsonl(tmp_path / "c.jsonl", [{"id": "p1", "text": "need water"}])
    cfg = tmp_path / "cfg.json"
    file_store = tmp_path / "from-file.journal"
    flag_store = tmp_path / "from-flag.journal"
    cfg.write_text(json.dumps({"store_path": str(file_store)}), encoding="utf-8")
    assert run(["--config", str(cfg), "ingest", "--input", corpus, "--store", str(flag_store)]) == EXIT_OK
    assert flag_store.exists() and not file_store.exists()
