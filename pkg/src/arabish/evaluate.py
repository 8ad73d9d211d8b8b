"""Experimental harness: k-fold cross-validation and the incremental
block annotation loop (auto-transcribe, human-correct, retrain).
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, replace
from typing import Callable, Sequence

from sklearn.base import clone
from sklearn.model_selection import KFold

from .clitics import fuse_morphemes
from .corpus import TokenRecord, with_tra
from .transducer import ArabishTransliterator, TrainingPair, pairs_to_xy, token_accuracy

RAW = "raw"
AUTO = "auto"
CORRECTED = "corrected"


@dataclass(frozen=True, slots=True)
class FoldPlan:
    """Assignment of sample indices to folds; sizes differ by at most one."""

    k: int
    seed: int
    assignments: tuple[int, ...]  # index -> fold id

    def fold_indices(self, fold: int) -> list[int]:
        return [i for i, f in enumerate(self.assignments) if f == fold]

    def fold_sizes(self) -> list[int]:
        sizes = [0] * self.k
        for f in self.assignments:
            sizes[f] += 1
        return sizes


def build_fold_plan(n: int, k: int, seed: int) -> FoldPlan:
    if k < 2:
        raise ValueError(f"k must be >= 2, got {k}")
    if n < k:
        raise ValueError(f"need at least k={k} samples, got {n}")
    assignments = [0] * n
    splitter = KFold(n_splits=k, shuffle=True, random_state=seed)
    for fold, (_, test_idx) in enumerate(splitter.split(range(n))):
        for i in test_idx:
            assignments[i] = fold
    return FoldPlan(k=k, seed=seed, assignments=tuple(assignments))


def build_grouped_fold_plan(groups: Sequence, k: int, seed: int) -> FoldPlan:
    """Fold plan that keeps samples of one group (e.g. sentence) together."""
    uniq = sorted(set(groups), key=str)
    if k < 2:
        raise ValueError(f"k must be >= 2, got {k}")
    if len(uniq) < k:
        raise ValueError(f"need at least k={k} groups, got {len(uniq)}")
    rng = random.Random(seed)
    rng.shuffle(uniq)
    fold_of_group = {g: i % k for i, g in enumerate(uniq)}
    return FoldPlan(k=k, seed=seed, assignments=tuple(fold_of_group[g] for g in groups))


@dataclass(frozen=True, slots=True)
class CvReport:
    mean_accuracy: float
    per_fold: tuple[float, ...]
    k: int
    seed: int
    n_pairs: int
    config: dict

    def to_dict(self) -> dict:
        return {
            "mean_accuracy": self.mean_accuracy,
            "per_fold": list(self.per_fold),
            "k": self.k,
            "seed": self.seed,
            "n_pairs": self.n_pairs,
            "config": self.config,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), ensure_ascii=False, sort_keys=True, indent=2)

    def to_text(self) -> str:
        lines = [
            f"k-fold cross-validation: k={self.k} seed={self.seed} pairs={self.n_pairs}",
            f"config: {json.dumps(self.config, ensure_ascii=False, sort_keys=True)}",
        ]
        for i, acc in enumerate(self.per_fold):
            lines.append(f"fold {i}: accuracy {acc:.4f}")
        lines.append(f"mean accuracy: {self.mean_accuracy:.4f}")
        return "\n".join(lines) + "\n"


def kfold_cv(
    pairs: list[TrainingPair],
    k: int = 10,
    seed: int = 42,
    config: dict | None = None,
    groups: Sequence | None = None,
    eval_filter: Callable[[TrainingPair], bool] | None = None,
) -> CvReport:
    """Train on k-1 folds, score exact-match token accuracy on the held-out
    fold; fully reproducible from the seed.

    ``groups`` switches to sentence-grouped folds. ``eval_filter`` restricts
    scoring to matching pairs (training always uses the full folds).
    """
    config = dict(config or {})
    if groups is not None and len(groups) != len(pairs):
        raise ValueError("groups must align with pairs")
    plan = (
        build_grouped_fold_plan(groups, k, seed)
        if groups is not None
        else build_fold_plan(len(pairs), k, seed)
    )
    proto = ArabishTransliterator(**config)
    per_fold: list[float] = []
    for fold in range(k):
        train_pairs = [p for p, f in zip(pairs, plan.assignments) if f != fold]
        test_pairs = [p for p, f in zip(pairs, plan.assignments) if f == fold]
        if eval_filter is not None:
            test_pairs = [p for p in test_pairs if eval_filter(p)]
        model = clone(proto).fit(*pairs_to_xy(train_pairs))
        if test_pairs:
            X, y = pairs_to_xy(test_pairs)
            per_fold.append(token_accuracy(model.predict(X), y))
        else:
            per_fold.append(1.0)
    mean = sum(per_fold) / len(per_fold)
    return CvReport(mean, tuple(per_fold), k, seed, len(pairs), config)


@dataclass(frozen=True, slots=True)
class Block:
    """An annotation unit of ~5,000 tokens with a monotone lifecycle:
    raw -> auto (machine transcribed) -> corrected (human verified)."""

    id: int
    records: tuple[TokenRecord, ...]
    status: str = RAW
    auto_predictions: tuple[tuple[str, ...], ...] | None = None
    final_morphemes: tuple[tuple[str, ...], ...] | None = None
    accuracy_after_correction: float | None = None

    def __post_init__(self):
        if self.status not in (RAW, AUTO, CORRECTED):
            raise ValueError(f"unknown block status {self.status!r}")
        if (self.accuracy_after_correction is not None) != (self.status == CORRECTED):
            raise ValueError("accuracy is present iff the block is corrected")
        if self.status in (AUTO, CORRECTED):
            if self.auto_predictions is None or len(self.auto_predictions) != len(self.records):
                raise ValueError("auto predictions must align with records")

    @property
    def size(self) -> int:
        return len(self.records)

    def keys(self) -> list[str]:
        return [rec.key for rec in self.records]

    def training_pairs(self) -> list[TrainingPair]:
        if self.status != CORRECTED:
            raise ValueError("only corrected blocks contribute training pairs")
        return [
            TrainingPair(rec.arabish, morphemes)
            for rec, morphemes in zip(self.records, self.final_morphemes)
        ]


def make_block(records: list[TokenRecord], size: int, block_id: int = 0) -> Block:
    """Take the next ``size`` records (fewer at the end of the corpus)."""
    if size < 1:
        raise ValueError(f"block size must be >= 1, got {size}")
    if not records:
        raise ValueError("no records remain to block")
    return Block(id=block_id, records=tuple(records[:size]))


def partition_blocks(records: list[TokenRecord], size: int, first_id: int = 0) -> list[Block]:
    """Consecutive blocks covering the whole stream."""
    blocks = []
    rest = list(records)
    while rest:
        block = make_block(rest, size, first_id + len(blocks))
        blocks.append(block)
        rest = rest[block.size :]
    return blocks


def auto_annotate(block: Block, model: ArabishTransliterator) -> Block:
    """Fill a raw block with machine transcriptions (provisional Tra values)."""
    if block.status != RAW:
        raise ValueError(f"can only auto-annotate a raw block, status is {block.status!r}")
    predictions = tuple(model.predict_one(rec.arabish).morphemes for rec in block.records)
    records = tuple(
        with_tra(rec, fuse_morphemes(list(ms))) for rec, ms in zip(block.records, predictions)
    )
    return replace(block, records=records, status=AUTO, auto_predictions=predictions)


def ingest_corrections(block: Block, corrections: dict[str, Sequence[str]]) -> Block:
    """Apply human corrections keyed by record key; uncorrected tokens keep
    their automatic transcription.

    The recorded accuracy compares the automatic predictions against the
    final (human-approved) values. Re-correcting an already corrected block
    is allowed; accuracy is always measured against the original automatic
    pass.
    """
    if block.status not in (AUTO, CORRECTED):
        raise ValueError(f"can only correct an auto-annotated block, status is {block.status!r}")
    keys = block.keys()
    unknown = set(corrections) - set(keys)
    if unknown:
        raise KeyError(f"corrections for unknown token keys: {sorted(unknown)}")
    base = block.final_morphemes if block.final_morphemes is not None else block.auto_predictions
    finals = []
    records = []
    for rec, key, current in zip(block.records, keys, base):
        morphemes = tuple(corrections.get(key, current))
        finals.append(morphemes)
        records.append(with_tra(rec, fuse_morphemes(list(morphemes))))
    accuracy = token_accuracy(list(block.auto_predictions), finals)
    return replace(
        block,
        records=tuple(records),
        status=CORRECTED,
        final_morphemes=tuple(finals),
        accuracy_after_correction=accuracy,
    )
