"""Block-annotation workflow over HTTP: serve blocks, accept corrections,
retrain, report metrics.

Persistence is file-based; the TSV corpus stays the canonical artifact.
A store directory holds:

* ``corpus.tsv``   current records (source of truth)
* ``initial.tsv``  records as imported, never rewritten
* ``blocks.json``  block registry (status, member keys, predictions, accuracy)
* ``audit.jsonl``  append-only correction log (timestamp, block, key, before, after)
* ``models/``      versioned transducer models and ``meta.json``

Replaying blocks' automatic passes plus the audit log over ``initial.tsv``
reproduces ``corpus.tsv`` exactly. All mutation funnels through one lock:
reads see a consistent snapshot, writes are serialized per store.
"""

from __future__ import annotations

import datetime as _dt
import json
import os
import threading
from pathlib import Path

from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel, Field

from .clitics import fuse_morphemes
from .corpus import MISSING, TokenRecord, parse_tsv, with_tra, write_tsv
from .evaluate import AUTO, CORRECTED, Block, auto_annotate, ingest_corrections, make_block
from .transducer import (
    ArabishTransliterator,
    corpus_to_pairs,
    load_model,
    pairs_to_xy,
    save_model,
)


class StoreError(RuntimeError):
    pass


class UnknownBlockError(StoreError):
    pass


class BlockStatusError(StoreError):
    pass


def _utcnow() -> str:
    return _dt.datetime.now(_dt.timezone.utc).isoformat()


def _atomic_write(path: Path, data: bytes) -> None:
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_bytes(data)
    os.replace(tmp, path)


class CorpusStore:
    """Owns corpus persistence and the block lifecycle for one project."""

    def __init__(self, root: str | Path):
        self.root = Path(root)
        self._lock = threading.Lock()
        if not (self.root / "corpus.tsv").exists():
            raise StoreError(f"{self.root} is not an initialized store")
        self._load()

    # ------------------------------------------------------------ lifecycle

    @classmethod
    def create(cls, root: str | Path, records: list[TokenRecord], config: dict | None = None) -> "CorpusStore":
        root = Path(root)
        if (root / "corpus.tsv").exists():
            raise StoreError(f"store already exists at {root}")
        root.mkdir(parents=True, exist_ok=True)
        (root / "models").mkdir(exist_ok=True)
        data = write_tsv(records)
        _atomic_write(root / "corpus.tsv", data)
        _atomic_write(root / "initial.tsv", data)
        _atomic_write(root / "blocks.json", b"[]")
        (root / "audit.jsonl").touch()
        meta = {"model_version": 0, "training_sizes": {}, "trained_blocks": [], "config": config or {}}
        _atomic_write(root / "meta.json", json.dumps(meta, sort_keys=True).encode())
        return cls(root)

    def _load(self) -> None:
        self.records = parse_tsv((self.root / "corpus.tsv").read_bytes())
        self.initial_records = parse_tsv((self.root / "initial.tsv").read_bytes())
        self.blocks = json.loads((self.root / "blocks.json").read_text(encoding="utf-8"))
        self.meta = json.loads((self.root / "meta.json").read_text(encoding="utf-8"))

    def _persist_records(self) -> None:
        _atomic_write(self.root / "corpus.tsv", write_tsv(self.records))

    def _persist_blocks(self) -> None:
        _atomic_write(
            self.root / "blocks.json",
            json.dumps(self.blocks, ensure_ascii=False, sort_keys=True).encode("utf-8"),
        )

    def _persist_meta(self) -> None:
        _atomic_write(self.root / "meta.json", json.dumps(self.meta, sort_keys=True).encode())

    def _append_audit(self, entries: list[dict]) -> None:
        with (self.root / "audit.jsonl").open("a", encoding="utf-8") as fh:
            for entry in entries:
                fh.write(json.dumps(entry, ensure_ascii=False, sort_keys=True) + "\n")

    # -------------------------------------------------------------- queries

    def _records_by_key(self) -> dict[str, TokenRecord]:
        return {rec.key: rec for rec in self.records}

    def _entry(self, block_id: int) -> dict:
        for entry in self.blocks:
            if entry["id"] == block_id:
                return entry
        raise UnknownBlockError(f"no block with id {block_id}")

    def _assemble(self, entry: dict) -> Block:
        by_key = self._records_by_key()
        records = tuple(by_key[k] for k in entry["keys"])
        auto = entry.get("auto")
        final = entry.get("final")
        return Block(
            id=entry["id"],
            records=records,
            status=entry["status"],
            auto_predictions=tuple(tuple(m) for m in auto) if auto is not None else None,
            final_morphemes=tuple(tuple(m) for m in final) if final is not None else None,
            accuracy_after_correction=entry.get("accuracy"),
        )

    def list_blocks(self) -> list[dict]:
        with self._lock:
            return [
                {
                    "id": e["id"],
                    "status": e["status"],
                    "size": len(e["keys"]),
                    "accuracy": e.get("accuracy"),
                }
                for e in self.blocks
            ]

    def get_block(self, block_id: int) -> Block:
        with self._lock:
            return self._assemble(self._entry(block_id))

    # ------------------------------------------------------------ mutations

    def make_next_block(self, size: int) -> Block:
        """Block the next unannotated, not-yet-blocked records in corpus order."""
        with self._lock:
            blocked = {k for e in self.blocks for k in e["keys"]}
            remaining = [r for r in self.records if r.tra == MISSING and r.key not in blocked]
            block = make_block(remaining, size, block_id=len(self.blocks))
            self.blocks.append({"id": block.id, "status": block.status, "keys": block.keys()})
            self._persist_blocks()
            return block

    def auto_annotate_block(self, block_id: int, model: ArabishTransliterator | None = None) -> Block:
        with self._lock:
            entry = self._entry(block_id)
            block = self._assemble(entry)
            model = model or self._latest_model()
            annotated = auto_annotate(block, model)
            entry["status"] = annotated.status
            entry["auto"] = [list(m) for m in annotated.auto_predictions]
            by_key = self._records_by_key()
            for rec in annotated.records:
                by_key[rec.key] = rec
            self.records = [by_key[r.key] for r in self.records]
            self._persist_blocks()
            self._persist_records()
            return annotated

    def post_corrections(self, block_id: int, corrections: dict[str, list[str]]) -> Block:
        """Apply corrections; concurrent posts serialize, last write wins
        per token key, and every submitted correction is audited."""
        with self._lock:
            entry = self._entry(block_id)
            block = self._assemble(entry)
            if block.status not in (AUTO, CORRECTED):
                raise BlockStatusError(f"block {block_id} is {block.status}, not correctable")
            base = block.final_morphemes or block.auto_predictions
            before = dict(zip(block.keys(), base))
            try:
                corrected = ingest_corrections(block, corrections)
            except KeyError as exc:
                raise StoreError(str(exc)) from None
            ts = _utcnow()
            audit = [
                {
                    "ts": ts,
                    "block": block_id,
                    "key": key,
                    "before": list(before[key]),
                    "after": list(morphemes),
                }
                for key, morphemes in corrections.items()
            ]
            entry["status"] = corrected.status
            entry["final"] = [list(m) for m in corrected.final_morphemes]
            entry["accuracy"] = corrected.accuracy_after_correction
            by_key = self._records_by_key()
            for rec in corrected.records:
                by_key[rec.key] = rec
            self.records = [by_key[r.key] for r in self.records]
            self._append_audit(audit)
            self._persist_blocks()
            self._persist_records()
            return corrected

    # -------------------------------------------------------------- models

    def _model_path(self, version: int) -> Path:
        return self.root / "models" / f"model_v{version}.json"

    def _latest_model(self) -> ArabishTransliterator:
        version = self.meta["model_version"]
        if version < 1:
            raise StoreError("no trained model in store; run retrain first")
        return load_model(self._model_path(version))

    def base_pairs(self) -> list:
        return corpus_to_pairs(self.initial_records)

    def training_pairs(self) -> tuple[list, list[int]]:
        """All available pairs: initial annotations plus corrected blocks."""
        pairs = self.base_pairs()
        corrected_ids = []
        for entry in self.blocks:
            if entry["status"] == CORRECTED:
                corrected_ids.append(entry["id"])
                pairs.extend(self._assemble(entry).training_pairs())
        return pairs, corrected_ids

    def retrain(self, config: dict | None = None) -> dict:
        """Train the next model version on everything corrected so far."""
        with self._lock:
            pairs, corrected_ids = self.training_pairs()
            version = self.meta["model_version"]
            if version >= 1 and set(corrected_ids) <= set(self.meta["trained_blocks"]):
                raise StoreError("nothing new to train on: no block corrected since last training")
            if not pairs:
                raise StoreError("no training pairs available")
            params = dict(self.meta.get("config") or {})
            params.update(config or {})
            model = ArabishTransliterator(**params).fit(*pairs_to_xy(pairs))
            version += 1
            save_model(model, self._model_path(version))
            self.meta["model_version"] = version
            self.meta["training_sizes"][str(version)] = len(pairs)
            self.meta["trained_blocks"] = sorted(corrected_ids)
            self._persist_meta()
            return {"version": version, "training_pairs": len(pairs)}

    def get_metrics(self) -> dict:
        with self._lock:
            growth = [
                {"version": int(v), "pairs": n}
                for v, n in sorted(self.meta["training_sizes"].items(), key=lambda kv: int(kv[0]))
            ]
            cv_path = self.root / "cv.json"
            cv = json.loads(cv_path.read_text(encoding="utf-8")) if cv_path.exists() else None
            return {
                "blocks": [
                    {"id": e["id"], "status": e["status"], "accuracy": e.get("accuracy")}
                    for e in self.blocks
                ],
                "training_growth": growth,
                "cv": cv,
            }

    # ---------------------------------------------------------------- audit

    def audit_entries(self) -> list[dict]:
        lines = (self.root / "audit.jsonl").read_text(encoding="utf-8").splitlines()
        return [json.loads(line) for line in lines if line.strip()]

    def replay_records(self) -> list[TokenRecord]:
        """Reconstruct current records from the initial import: re-apply each
        block's automatic pass, then the audit log in order. Idempotent."""
        by_key = {rec.key: rec for rec in self.initial_records}
        for entry in self.blocks:
            if entry.get("auto") is None:
                continue
            for key, morphemes in zip(entry["keys"], entry["auto"]):
                by_key[key] = with_tra(by_key[key], fuse_morphemes(list(morphemes)))
        for event in self.audit_entries():
            key = event["key"]
            by_key[key] = with_tra(by_key[key], fuse_morphemes(list(event["after"])))
        return [by_key[rec.key] for rec in self.initial_records]


# ------------------------------------------------------------------- API


class BlockSummary(BaseModel):
    id: int
    status: str
    size: int
    accuracy: float | None = None


class BlockRow(BaseModel):
    key: str
    arabish: str
    tra: str
    auto: list[str] | None = None
    final: list[str] | None = None
    ita: str
    lem: str
    pos: str
    var: str
    age: str
    gen: str


class BlockPayload(BaseModel):
    summary: BlockSummary
    rows: list[BlockRow]


class CorrectionsRequest(BaseModel):
    corrections: dict[str, list[str]] = Field(default_factory=dict)


class RetrainResponse(BaseModel):
    version: int
    training_pairs: int


class BlockMetric(BaseModel):
    id: int
    status: str
    accuracy: float | None = None


class GrowthPoint(BaseModel):
    version: int
    pairs: int


class MetricsResponse(BaseModel):
    blocks: list[BlockMetric]
    training_growth: list[GrowthPoint]
    cv: dict | None = None


def _payload(block: Block) -> BlockPayload:
    rows = []
    for i, rec in enumerate(block.records):
        rows.append(
            BlockRow(
                key=rec.key,
                arabish=rec.arabish,
                tra=rec.tra,
                auto=list(block.auto_predictions[i]) if block.auto_predictions else None,
                final=list(block.final_morphemes[i]) if block.final_morphemes else None,
                ita=rec.ita,
                lem=rec.lem,
                pos=rec.pos,
                var=rec.var,
                age=rec.age,
                gen=rec.gen,
            )
        )
    summary = BlockSummary(
        id=block.id, status=block.status, size=block.size, accuracy=block.accuracy_after_correction
    )
    return BlockPayload(summary=summary, rows=rows)


def create_app(store: CorpusStore) -> FastAPI:
    app = FastAPI(title="arabish annotation service")
    # single-annotator tool on loopback; let a statically served UI call in
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )

    @app.get("/blocks", response_model=list[BlockSummary])
    def list_blocks():
        return store.list_blocks()

    @app.get("/blocks/{block_id}", response_model=BlockPayload)
    def get_block(block_id: int):
        try:
            return _payload(store.get_block(block_id))
        except UnknownBlockError as exc:
            raise HTTPException(status_code=404, detail=str(exc)) from None

    @app.post("/blocks/{block_id}/corrections", response_model=BlockSummary)
    def post_corrections(block_id: int, request: CorrectionsRequest):
        try:
            block = store.post_corrections(block_id, request.corrections)
        except UnknownBlockError as exc:
            raise HTTPException(status_code=404, detail=str(exc)) from None
        except BlockStatusError as exc:
            raise HTTPException(status_code=409, detail=str(exc)) from None
        except (StoreError, ValueError) as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from None
        return BlockSummary(
            id=block.id, status=block.status, size=block.size,
            accuracy=block.accuracy_after_correction,
        )

    @app.post("/retrain", response_model=RetrainResponse)
    def retrain():
        try:
            return store.retrain()
        except StoreError as exc:
            raise HTTPException(status_code=409, detail=str(exc)) from None

    @app.get("/metrics", response_model=MetricsResponse)
    def get_metrics():
        return store.get_metrics()

    return app


def serve(store_dir: str | Path, host: str = "127.0.0.1", port: int = 8000) -> None:
    import uvicorn

    store = CorpusStore(store_dir)
    uvicorn.run(create_app(store), host=host, port=port, log_level="warning")
