"""Command-line entry points. Data goes to stdout, diagnostics to stderr;
identical inputs and seed produce byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import asdict
from pathlib import Path

from . import collect, service
from .clitics import CliticInventory, segment
from .corpus import CorpusError, new_record, parse_tsv, write_tsv
from .evaluate import kfold_cv
from .graphemes import MappingTable, expand
from .normalize import ExceptionLexicon, analyze_token, detect_negation_circumfix
from .service import CorpusStore, StoreError
from .transducer import (
    ArabishTransliterator,
    corpus_to_grouped_pairs,
    load_model,
    pairs_to_xy,
    save_model,
)

log = logging.getLogger("arabish")

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_CORPUS = 3
EXIT_MODEL = 4
EXIT_STORE = 5


def _jdump(obj) -> str:
    return json.dumps(obj, ensure_ascii=False, sort_keys=True, indent=2)


def _model_config(args) -> dict:
    return {
        "ngram_order": args.ngram_order,
        "add_k": args.add_k,
        "lattice_weight": args.lattice_weight,
        "beam_width": args.beam_width,
    }


def _add_model_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--ngram-order", type=int, default=2, help="morpheme LM order")
    p.add_argument("--add-k", type=float, default=0.1, help="add-k smoothing constant")
    p.add_argument("--lattice-weight", type=float, default=0.5,
                   help="channel weight; LM gets the complement")
    p.add_argument("--beam-width", type=int, default=16, help="beam size beyond the exact cap")


def _read_corpus(path: str):
    return parse_tsv(Path(path).read_bytes())


def _resources(args):
    mapping = MappingTable.from_file(args.mapping) if getattr(args, "mapping", None) else None
    clitics = CliticInventory.from_file(args.clitics) if getattr(args, "clitics", None) else None
    lexicon = ExceptionLexicon.from_file(args.lexicon) if getattr(args, "lexicon", None) else None
    return mapping, clitics, lexicon


def cmd_ingest(args) -> int:
    categories = collect.load_categories(args.categories)
    records = []
    matches: dict[str, list[str]] = {}
    for raw in collect.load_raw_texts(args.raw_dir):
        gen, age, var = collect.extract_metadata(raw.profile, args.reference_year)
        hits = collect.match_categories(raw, categories)
        if hits:
            matches[raw.source_code] = [cat.name for cat, _ in hits]
        for par, tokens in enumerate(collect.tokenize_paragraphs(raw.body), start=1):
            for w, token in enumerate(tokens, start=1):
                records.append(
                    new_record(raw.source_code, raw.date, par, str(w), token,
                               var=var, age=age, gen=gen)
                )
    data = write_tsv(records)
    Path(args.out).write_bytes(data)
    log.info("ingested %d records from %s", len(records), args.raw_dir)
    for source, names in sorted(matches.items()):
        log.info("categories for %s: %s", source, ", ".join(names))
    if args.report:
        Path(args.report).write_text(_jdump(matches) + "\n", encoding="utf-8")
    return EXIT_OK


def cmd_normalize(args) -> int:
    _, _, lexicon = _resources(args)
    report = analyze_token(args.token, lexicon or ExceptionLexicon.default())
    neg = detect_negation_circumfix(report.normalized)
    out = asdict(report)
    out["flags"] = sorted(report.flags)
    out["collapsed_runs"] = [list(r) for r in report.collapsed_runs]
    out["negation"] = list(neg) if neg else None
    print(_jdump(out))
    return EXIT_OK


def cmd_segment(args) -> int:
    _, clitics, _ = _resources(args)
    segs = segment(args.token, clitics)
    print(_jdump([[asdict(p) for p in s.parts] for s in segs]))
    return EXIT_OK


def cmd_expand(args) -> int:
    mapping, _, _ = _resources(args)
    lattice = expand(args.token, args.loanword, mapping)
    out = {
        "token": lattice.token,
        "path_count": lattice.path_count(),
        "branches": [
            {"units": list(b.segmentation.units), "positions": [list(p) for p in b.positions]}
            for b in lattice.branches
        ],
    }
    if args.paths:
        if lattice.path_count() > args.max_paths:
            log.error("lattice has %d paths, above --max-paths %d",
                      lattice.path_count(), args.max_paths)
            return EXIT_ERROR
        out["paths"] = sorted(set(lattice.paths()))
    print(_jdump(out))
    return EXIT_OK


def cmd_train(args) -> int:
    if args.store:
        store = CorpusStore(args.store)
        summary = store.retrain(_model_config(args))
        print(_jdump(summary))
        return EXIT_OK
    if not args.corpus or not args.model_out:
        log.error("train needs either --store or both --corpus and --model-out")
        return EXIT_ERROR
    mapping, clitics, lexicon = _resources(args)
    records = _read_corpus(args.corpus)
    pairs, _ = corpus_to_grouped_pairs(records, lexicon or ExceptionLexicon.default(),
                                       filter_code_switch=not args.keep_code_switch)
    if not pairs:
        log.error("no training pairs in %s", args.corpus)
        return EXIT_ERROR
    model = ArabishTransliterator(mapping=mapping, clitics=clitics, lexicon=lexicon,
                                  **_model_config(args))
    model.fit(*pairs_to_xy(pairs))
    save_model(model, args.model_out)
    log.info("trained on %d pairs (%d with unreachable gold), wrote %s",
             len(pairs), len(model.oov_structure_), args.model_out)
    return EXIT_OK


def cmd_predict(args) -> int:
    model = load_model(args.model)
    loanword = {"auto": None, "yes": True, "no": False}[args.loanword]
    prediction = model.predict_one(args.token, loanword)
    if args.json:
        print(_jdump({
            "token": args.token,
            "morphemes": list(prediction.morphemes),
            "fused": prediction.fused,
            "score": prediction.score,
            "alternatives": [
                {"morphemes": list(ms), "score": s} for ms, s in prediction.alternatives
            ],
        }))
    else:
        print(prediction.fused)
    return EXIT_OK


def cmd_cv(args) -> int:
    mapping, clitics, lexicon = _resources(args)
    records = _read_corpus(args.corpus)
    pairs, groups = corpus_to_grouped_pairs(records, lexicon or ExceptionLexicon.default())
    config = _model_config(args)
    report = kfold_cv(pairs, k=args.k, seed=args.seed, config=config,
                      groups=groups if args.grouped else None)
    if args.store:
        Path(args.store, "cv.json").write_text(report.to_json() + "\n", encoding="utf-8")
    print(report.to_json() if args.json else report.to_text(), end="")
    return EXIT_OK


def cmd_block(args) -> int:
    if args.block_cmd == "make":
        root = Path(args.store)
        if not (root / "corpus.tsv").exists():
            if not args.corpus:
                log.error("store %s does not exist; pass --corpus to initialize it", root)
                return EXIT_STORE
            CorpusStore.create(root, _read_corpus(args.corpus))
        store = CorpusStore(root)
        block = store.make_next_block(args.size)
        print(_jdump({"id": block.id, "status": block.status, "size": block.size}))
        return EXIT_OK

    store = CorpusStore(args.store)
    if args.block_cmd == "auto":
        model = load_model(args.model) if args.model else None
        block = store.auto_annotate_block(args.id, model)
        print(_jdump({"id": block.id, "status": block.status, "size": block.size}))
    elif args.block_cmd == "export":
        block = store.get_block(args.id)
        payload = service._payload(block).model_dump()
        text = _jdump(payload)
        if args.out:
            Path(args.out).write_text(text + "\n", encoding="utf-8")
        else:
            print(text)
    elif args.block_cmd == "import-corrections":
        doc = json.loads(Path(args.corrections).read_text(encoding="utf-8"))
        block = store.post_corrections(args.id, doc.get("corrections", doc))
        print(_jdump({
            "id": block.id,
            "status": block.status,
            "accuracy": block.accuracy_after_correction,
        }))
    return EXIT_OK


def cmd_serve(args) -> int:
    service.serve(args.store, host=args.host, port=args.port)
    return EXIT_OK


def cmd_export(args) -> int:
    store = CorpusStore(args.store)
    data = write_tsv(store.records)
    if args.out:
        Path(args.out).write_bytes(data)
    else:
        sys.stdout.buffer.write(data)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="arabish",
        description="Tunisian Arabish processing: transliteration, corpus tools, annotation loop",
    )
    parser.add_argument("--config", help="JSON file of flag defaults; explicit flags win")
    parser.add_argument("--verbose", action="store_true", help="chatty logging on stderr")
    sub = parser.add_subparsers(dest="command", required=True)
    children: list[argparse.ArgumentParser] = []
    parser._arabish_children = children  # config defaults must reach subparsers

    def add(owner, name, **kwargs):
        child = owner.add_parser(name, **kwargs)
        children.append(child)
        return child

    p = add(sub, "ingest", help="build corpus records from raw text dumps")
    p.add_argument("--raw-dir", required=True, help="directory of *.txt dump files")
    p.add_argument("--out", required=True, help="output corpus TSV")
    p.add_argument("--categories", help="category file (default: shipped set)")
    p.add_argument("--report", help="write category match report JSON here")
    p.add_argument("--reference-year", type=int, help="year used to resolve birth years")
    p.set_defaults(func=cmd_ingest)

    p = add(sub, "normalize", help="prosody collapse and token flags")
    p.add_argument("--token", required=True)
    p.add_argument("--lexicon", help="exception lexicon file")
    p.set_defaults(func=cmd_normalize)

    p = add(sub, "segment", help="clitic segmentations of a token")
    p.add_argument("--token", required=True)
    p.add_argument("--clitics", help="clitic inventory file")
    p.set_defaults(func=cmd_segment)

    p = add(sub, "expand", help="grapheme candidate lattice of a token")
    p.add_argument("--token", required=True)
    p.add_argument("--loanword", action="store_true")
    p.add_argument("--mapping", help="mapping table file")
    p.add_argument("--paths", action="store_true", help="also list the candidate strings")
    p.add_argument("--max-paths", type=int, default=4096)
    p.set_defaults(func=cmd_expand)

    p = add(sub, "train", help="train a transducer from a corpus or retrain a store")
    p.add_argument("--corpus", help="annotated corpus TSV")
    p.add_argument("--model-out", help="where to write the model JSON")
    p.add_argument("--store", help="retrain this store's model instead")
    p.add_argument("--keep-code-switch", action="store_true",
                   help="do not drop sentences with code-switching tokens")
    p.add_argument("--mapping")
    p.add_argument("--clitics")
    p.add_argument("--lexicon")
    _add_model_flags(p)
    p.set_defaults(func=cmd_train)

    p = add(sub, "predict", help="transcribe one token")
    p.add_argument("--model", required=True)
    p.add_argument("--token", required=True)
    p.add_argument("--loanword", choices=["auto", "yes", "no"], default="auto")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_predict)

    p = add(sub, "cv", help="k-fold cross-validation over an annotated corpus")
    p.add_argument("--corpus", required=True)
    p.add_argument("--k", type=int, default=10)
    p.add_argument("--seed", type=int, default=42, help="fold shuffle seed")
    p.add_argument("--grouped", action="store_true", help="fold by sentence, not token")
    p.add_argument("--json", action="store_true")
    p.add_argument("--store", help="also record the report in this store")
    p.add_argument("--mapping")
    p.add_argument("--clitics")
    p.add_argument("--lexicon")
    _add_model_flags(p)
    p.set_defaults(func=cmd_cv)

    p = add(sub, "block", help="annotation block workflow")
    bsub = p.add_subparsers(dest="block_cmd", required=True)
    b = add(bsub, "make", help="cut the next block of unannotated records")
    b.add_argument("--store", required=True)
    b.add_argument("--corpus", help="corpus TSV to initialize a new store")
    b.add_argument("--size", type=int, default=5000)
    b = add(bsub, "auto", help="auto-transcribe a raw block")
    b.add_argument("--store", required=True)
    b.add_argument("--id", type=int, required=True)
    b.add_argument("--model", help="model file; default: store's latest version")
    b = add(bsub, "export", help="dump a block payload as JSON")
    b.add_argument("--store", required=True)
    b.add_argument("--id", type=int, required=True)
    b.add_argument("--out")
    b = add(bsub, "import-corrections", help="apply a corrections JSON file")
    b.add_argument("--store", required=True)
    b.add_argument("--id", type=int, required=True)
    b.add_argument("--corrections", required=True)
    p.set_defaults(func=cmd_block)

    p = add(sub, "serve", help="run the annotation HTTP service")
    p.add_argument("--store", required=True)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=cmd_serve)

    p = add(sub, "export", help="write a store's current corpus TSV")
    p.add_argument("--store", required=True)
    p.add_argument("--out", help="default: stdout")
    p.set_defaults(func=cmd_export)

    return parser


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()

    # Config file values become defaults; explicit flags take precedence.
    probe, _ = parser.parse_known_args(argv)
    if probe.config:
        defaults = json.loads(Path(probe.config).read_text(encoding="utf-8"))
        parser.set_defaults(**defaults)
        for child in parser._arabish_children:
            child.set_defaults(**defaults)

    args = parser.parse_args(argv)
    logging.basicConfig(
        stream=sys.stderr,
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.func(args)
    except CorpusError as exc:
        log.error("corpus error: %s", exc)
        return EXIT_CORPUS
    except StoreError as exc:
        log.error("store error: %s", exc)
        return EXIT_STORE
    except FileNotFoundError as exc:
        log.error("%s", exc)
        return EXIT_ERROR
    except ValueError as exc:
        log.error("%s", exc)
        return EXIT_MODEL


if __name__ == "__main__":
    sys.exit(main())
