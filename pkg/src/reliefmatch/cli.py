"""Operator command line: ingest, extract, train, eval, match, serve.

Option precedence is flag > environment (RELIEFMATCH_<NAME>) > config
file (--config, JSON) > built-in default. Exit codes: 0 ok, 1 usage,
2 data error, 3 internal error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from datetime import datetime, timezone
from pathlib import Path

from .classify import Hyper, train_linear
from .evalkit import (
    DegenerateCorpus,
    SplitSpec,
    cue_factory,
    extraction_to_annotation,
    linear_factory,
    run_crossdomain,
    run_indomain,
    score_extraction,
)
from .lexicons import FormatError
from .matcher import rank_availabilities
from .model import LabelOrigin, Post, PostKind, SourceChannel, Status, parse_ts
from .pipeline import PipelineContext, parse_text
from .store import DuplicateId, NotFound, Store
from .textprep import EmptyAfterCleaning, preprocess

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_INTERNAL = 3

NEAR_DUP_JACCARD = 0.9


class DataError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage problems exit 1, not argparse's 2
        self.print_usage(sys.stderr)
        sys.stderr.write(f"error: {message}\n")
        sys.exit(EXIT_USAGE)


def _resolve(flag_value, env_name: str, file_cfg: dict, file_key: str, default):
    if flag_value is not None:
        return flag_value
    env = os.environ.get(f"RELIEFMATCH_{env_name}")
    if env is not None:
        return env
    if file_key in file_cfg:
        return file_cfg[file_key]
    return default


def _load_config_file(path: str | None) -> dict:
    if not path:
        return {}
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise DataError(f"cannot read config {path}: {exc}") from None


def _read_jsonl(path: str) -> list[dict]:
    rows = []
    try:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise DataError(str(exc)) from None
    for line_no, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line:
            continue
        try:
            rows.append(json.loads(line))
        except json.JSONDecodeError as exc:
            raise DataError(f"{path}:{line_no}: bad JSON ({exc.msg})") from None
    return rows


def _jaccard(a: set[str], b: set[str]) -> float:
    if not a and not b:
        return 1.0
    return len(a & b) / len(a | b)


def cmd_ingest(args, file_cfg) -> int:
    store_path = _resolve(args.store, "STORE", file_cfg, "store_path", "relief.journal")
    event = _resolve(args.event, "EVENT", file_cfg, "event", "nepal")
    threshold = float(_resolve(args.near_dup, "NEAR_DUP", file_cfg, "near_dup", NEAR_DUP_JACCARD))
    ctx = PipelineContext.default(event)
    store = Store(store_path)

    kept = dropped = 0
    seen_clean: dict[str, str] = {p.text_clean: p.id for p in store.all_posts()}
    seen_tokens: list[set[str]] = [set(p.text_clean.lower().split()) for p in store.all_posts()]

    for row_no, row in enumerate(_read_jsonl(args.input), start=1):
        if "id" not in row or "text" not in row:
            raise DataError(f"{args.input}: record {row_no} needs 'id' and 'text'")
        try:
            out = parse_text(row["text"], ctx)
        except EmptyAfterCleaning:
            dropped += 1
            continue
        clean = out.tokenized.clean_text
        tokens = set(clean.lower().split())
        if clean in seen_clean or any(_jaccard(tokens, prior) >= threshold for prior in seen_tokens):
            dropped += 1
            continue
        if row.get("label"):
            label = PostKind(str(row["label"]).lower())
            origin = LabelOrigin.GOLD
        else:
            label = out.kind
            origin = LabelOrigin.PREDICTED
        post = Post(
            id=str(row["id"]),
            text_raw=row["text"],
            text_clean=clean,
            created_at=parse_ts(row["created_at"]) if row.get("created_at") else datetime.now(timezone.utc),
            source_channel=SourceChannel.IMPORTED,
            label=label,
            label_origin=origin,
            status=Status.ACTIVE,
            extraction=out.extraction,
        )
        try:
            store.put_post(post)
        except DuplicateId:
            raise DataError(f"duplicate post id {post.id!r}") from None
        seen_clean[clean] = post.id
        seen_tokens.append(tokens)
        kept += 1
    print(f"kept {kept}, dropped {dropped}")
    return EXIT_OK


def _load_corpus(path: str) -> list[tuple]:
    corpus = []
    for row_no, row in enumerate(_read_jsonl(path), start=1):
        if "text" not in row or "label" not in row:
            raise DataError(f"{path}: record {row_no} needs 'text' and 'label'")
        try:
            corpus.append((preprocess(row["text"]), PostKind(str(row["label"]).lower())))
        except EmptyAfterCleaning:
            continue
    return corpus


def cmd_extract(args, file_cfg) -> int:
    event = _resolve(args.event, "EVENT", file_cfg, "event", "nepal")
    ctx = PipelineContext.default(event)
    if args.store:
        posts = sorted(Store(args.store).all_posts(), key=lambda p: p.id)
        items = [(p.id, p.text_raw) for p in posts]
    else:
        rows = _read_jsonl(args.input)
        items = sorted((str(r["id"]), r["text"]) for r in rows)
    lines = []
    for pid, text in items:
        try:
            out = parse_text(text, ctx)
        except EmptyAfterCleaning:
            continue
        ann = {"id": pid, "kind": out.kind.value, **extraction_to_annotation(out.extraction)}
        lines.append(json.dumps(ann, sort_keys=True))
    payload = "\n".join(lines) + ("\n" if lines else "")
    if args.out:
        Path(args.out).write_text(payload, encoding="utf-8")
    else:
        sys.stdout.write(payload)
    print(f"extracted {len(lines)} posts", file=sys.stderr)
    return EXIT_OK


def cmd_train(args, file_cfg) -> int:
    corpus = _load_corpus(args.corpus)
    hyper = Hyper(
        learning_rate=float(_resolve(args.lr, "LR", file_cfg, "learning_rate", 0.5)),
        epochs=int(_resolve(args.epochs, "EPOCHS", file_cfg, "epochs", 300)),
        l2=float(_resolve(args.l2, "L2", file_cfg, "l2", 1e-4)),
        seed=int(_resolve(args.seed, "SEED", file_cfg, "seed", 0)),
    )
    try:
        model = train_linear(corpus, hyper)
    except DegenerateCorpus as exc:
        raise DataError(str(exc)) from None
    model.save(Path(args.out))
    print(f"trained on {len(corpus)} posts -> {args.out}")
    return EXIT_OK


def cmd_eval(args, file_cfg) -> int:
    seed = int(_resolve(args.seed, "SEED", file_cfg, "seed", 0))
    if args.classifier == "linear":
        factory = linear_factory(Hyper(seed=seed))
    else:
        ctx = PipelineContext.default(_resolve(args.event, "EVENT", file_cfg, "event", "nepal"))
        factory = cue_factory(ctx.classifier)
    try:
        if args.indomain:
            report = run_indomain(_load_corpus(args.indomain), SplitSpec(seed=seed), factory)
        elif args.crossdomain:
            train_path, test_path = args.crossdomain
            report = run_crossdomain(_load_corpus(train_path), _load_corpus(test_path), factory)
        elif args.extraction:
            gold_path, pred_path = args.extraction
            gold = {str(r["id"]): r for r in _read_jsonl(gold_path)}
            pred = {str(r["id"]): r for r in _read_jsonl(pred_path)}
            fields = score_extraction(gold, pred)
            doc = {f: m.to_json() for f, m in sorted(fields.items())}
            payload = json.dumps(doc, sort_keys=True, indent=2)
            _write_report(args.report, payload)
            return EXIT_OK
        else:
            raise DataError("one of --indomain/--crossdomain/--extraction is required")
    except DegenerateCorpus as exc:
        raise DataError(str(exc)) from None
    payload = json.dumps(report.to_json(), sort_keys=True, indent=2)
    _write_report(args.report, payload)
    return EXIT_OK


def _write_report(path: str | None, payload: str) -> None:
    if path:
        Path(path).write_text(payload + "\n", encoding="utf-8")
    else:
        print(payload)


def cmd_match(args, file_cfg) -> int:
    store = Store(_resolve(args.store, "STORE", file_cfg, "store_path", "relief.journal"))
    k = int(_resolve(args.k, "K", file_cfg, "suggestion_k", 20))
    pool = store.all_posts()
    if args.need:
        try:
            needs = [store.get_post(args.need)]
        except NotFound:
            raise DataError(f"no post {args.need!r}") from None
    else:
        needs = sorted(
            (p for p in pool if p.label is PostKind.NEED and p.status is Status.ACTIVE),
            key=lambda p: p.id,
        )
    for need in needs:
        for cand in rank_availabilities(need, pool, k):
            print(json.dumps(cand.to_json(), sort_keys=True))
    return EXIT_OK


def cmd_serve(args, file_cfg) -> int:
    import uvicorn

    from .service import ApiConfig, build_app

    config = ApiConfig(
        host=str(_resolve(args.host, "HOST", file_cfg, "host", "127.0.0.1")),
        port=int(_resolve(args.port, "PORT", file_cfg, "port", 8000)),
        store_path=str(_resolve(args.store, "STORE", file_cfg, "store_path", "relief.journal")),
        event=str(_resolve(args.event, "EVENT", file_cfg, "event", "nepal")),
        classifier=str(_resolve(args.classifier, "CLASSIFIER", file_cfg, "classifier", "cue")),
        model_path=_resolve(args.model, "MODEL", file_cfg, "model_path", None),
        suggestion_k=int(_resolve(args.k, "K", file_cfg, "suggestion_k", 20)),
        cors_origins=file_cfg.get("cors_origins", ["*"]),
    )
    app = build_app(config)
    uvicorn.run(app, host=config.host, port=config.port, log_level="warning")
    return EXIT_OK


def make_parser() -> _Parser:
    parser = _Parser(prog="reliefmatch", description=__doc__)
    parser.add_argument("--config", help="JSON config file (lowest-precedence source)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="load a JSONL corpus into a store")
    p.add_argument("--input", required=True, help="JSONL of {id, text, created_at?, label?}")
    p.add_argument("--store", help="journal file path")
    p.add_argument("--event", help="event bounds id (nepal | italy)")
    p.add_argument("--near-dup", dest="near_dup", help="near-duplicate Jaccard threshold")

    p = sub.add_parser("extract", help="run field extraction in batch")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--input", help="JSONL corpus")
    src.add_argument("--store", help="journal file path")
    p.add_argument("--out", help="output JSONL (stdout when omitted)")
    p.add_argument("--event", help="event bounds id")

    p = sub.add_parser("train", help="train the linear classifier")
    p.add_argument("--corpus", required=True, help="labeled JSONL of {text, label}")
    p.add_argument("--out", required=True, help="model JSON output path")
    p.add_argument("--lr", help="learning rate")
    p.add_argument("--epochs", help="training epochs")
    p.add_argument("--l2", help="L2 strength")
    p.add_argument("--seed", help="training seed")

    p = sub.add_parser("eval", help="run an evaluation protocol")
    p.add_argument("--indomain", help="labeled JSONL, 70/10/20 split")
    p.add_argument("--crossdomain", nargs=2, metavar=("TRAIN", "TEST"), help="two labeled JSONL files")
    p.add_argument("--extraction", nargs=2, metavar=("GOLD", "PRED"), help="two annotation JSONL files")
    p.add_argument("--classifier", choices=["cue", "linear"], default="cue")
    p.add_argument("--seed", help="split / training seed")
    p.add_argument("--event", help="event bounds id")
    p.add_argument("--report", help="write the JSON report here instead of stdout")

    p = sub.add_parser("match", help="print ranked suggestions")
    p.add_argument("--store", help="journal file path")
    p.add_argument("--need", help="need post id (omit with --all for every active need)")
    p.add_argument("--all", action="store_true", help="rank every active need")
    p.add_argument("--k", help="suggestions per need")

    p = sub.add_parser("serve", help="run the REST service")
    p.add_argument("--host")
    p.add_argument("--port")
    p.add_argument("--store")
    p.add_argument("--event")
    p.add_argument("--classifier", choices=["cue", "linear"])
    p.add_argument("--model", help="linear model path")
    p.add_argument("--k", help="default suggestion count")

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    handlers = {
        "ingest": cmd_ingest,
        "extract": cmd_extract,
        "train": cmd_train,
        "eval": cmd_eval,
        "match": cmd_match,
        "serve": cmd_serve,
    }
    try:
        file_cfg = _load_config_file(args.config)
        return handlers[args.command](args, file_cfg)
    except (DataError, FormatError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except KeyboardInterrupt:
        return EXIT_INTERNAL
    except Exception as exc:  # noqa: BLE001 - cli boundary
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
