"""Clitic-level token segmentation and the corpus range-row convention.

A token splits into proclitics, a stem, and enclitics; circumfix negation
wraps the stem. Segmentation is generative, not decisive: every licensed
split is returned (the transducer's scorer chooses), and the trivial
single-stem reading is always present.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from importlib import resources
from pathlib import Path

from .corpus import MISSING, TokenRecord
from .graphemes import TATWEEL
from .normalize import detect_negation_circumfix

PROCLITIC = "proclitic"
STEM = "stem"
ENCLITIC = "enclitic"
NEG_PREFIX = "neg_prefix"
NEG_SUFFIX = "neg_suffix"
NEG_PARTICLE = "neg_particle"  # merged prefix+suffix corpus row

NEG_PREFIX_ARABIC = "ما"
NEG_SUFFIX_ARABIC = "ش"
NEG_PARTICLE_POS = "part"

_MAX_PROCLITICS = 3
_MAX_ENCLITICS = 2


@dataclass(frozen=True, slots=True)
class CliticEntry:
    forms: tuple[str, ...]
    arabic: str
    kind: str  # proclitic | enclitic
    pos: str


class CliticInventory:
    """Immutable clitic lookup. Forms that can also stand alone (w, ou)
    stay safe because the trivial segmentation is always produced."""

    def __init__(self, entries: list[CliticEntry]):
        for e in entries:
            if not all(e.forms):
                raise ValueError(f"empty latin form in entry {e}")
            if e.kind not in (PROCLITIC, ENCLITIC):
                raise ValueError(f"unknown clitic kind {e.kind!r}")
        self.entries = tuple(entries)
        self.proclitics = tuple(e for e in self.entries if e.kind == PROCLITIC)
        self.enclitics = tuple(e for e in self.entries if e.kind == ENCLITIC)

    @classmethod
    def from_text(cls, text: str) -> "CliticInventory":
        entries = []
        for lineno, line in enumerate(text.splitlines(), start=1):
            if not line.strip() or line.startswith("#"):
                continue
            cols = line.split("\t")
            if len(cols) != 4:
                raise ValueError(f"clitics line {lineno}: expected 4 columns")
            entries.append(CliticEntry(tuple(cols[0].split(",")), cols[1], cols[2], cols[3]))
        return cls(entries)

    @classmethod
    def from_file(cls, path: str | Path) -> "CliticInventory":
        return cls.from_text(Path(path).read_text(encoding="utf-8"))

    @classmethod
    def default(cls) -> "CliticInventory":
        text = resources.files("arabish.data").joinpath("clitics.tsv").read_text(encoding="utf-8")
        return cls.from_text(text)


@dataclass(frozen=True, slots=True)
class SegmentPart:
    text: str
    kind: str
    arabic: str | None = None  # inventory form for clitics/negation marks
    pos: str | None = None


@dataclass(frozen=True, slots=True)
class Segmentation:
    parts: tuple[SegmentPart, ...]

    @property
    def token(self) -> str:
        return "".join(p.text for p in self.parts)

    @property
    def stem(self) -> SegmentPart | None:
        for p in self.parts:
            if p.kind == STEM:
                return p
        return None

    @property
    def is_trivial(self) -> bool:
        return len(self.parts) == 1


def segment(token: str, inv: CliticInventory | None = None) -> list[Segmentation]:
    """All clitic segmentations of a prosody-collapsed token.

    Includes the trivial single-stem reading, circumfix negation when it
    matches, and every proclitic*/stem/enclitic* tiling. A stem-less reading
    is licensed only when proclitics tile the whole token (the corpus writes
    fused preposition+determiner "fil" as two clitic rows).
    """
    if not token:
        raise ValueError("token must be non-empty")
    inv = inv or CliticInventory.default()
    text = token.lower()
    found: dict[tuple, Segmentation] = {}

    def add(parts: list[SegmentPart]) -> None:
        seg = Segmentation(tuple(parts))
        found.setdefault(tuple((p.text, p.kind) for p in parts), seg)

    add([SegmentPart(text, STEM)])

    neg = detect_negation_circumfix(text)
    if neg:
        prefix, stem, suffix = neg
        add(
            [
                SegmentPart(prefix, NEG_PREFIX, NEG_PREFIX_ARABIC, NEG_PARTICLE_POS),
                SegmentPart(stem, STEM),
                SegmentPart(suffix, NEG_SUFFIX, NEG_SUFFIX_ARABIC, NEG_PARTICLE_POS),
            ]
        )

    def pro_stacks(i: int, stack: list[SegmentPart]):
        yield i, list(stack)
        if len(stack) >= _MAX_PROCLITICS:
            return
        for entry in inv.proclitics:
            for form in entry.forms:
                if text.startswith(form, i):
                    stack.append(SegmentPart(form, PROCLITIC, entry.arabic, entry.pos))
                    yield from pro_stacks(i + len(form), stack)
                    stack.pop()

    def enc_stacks(j: int, stack: list[SegmentPart]):
        yield j, list(reversed(stack))
        if len(stack) >= _MAX_ENCLITICS:
            return
        for entry in inv.enclitics:
            for form in entry.forms:
                if j >= len(form) and text.endswith(form, 0, j):
                    stack.append(SegmentPart(form, ENCLITIC, entry.arabic, entry.pos))
                    yield from enc_stacks(j - len(form), stack)
                    stack.pop()

    for i, pros in pro_stacks(0, []):
        if pros and i == len(text) and len(pros) >= 2:
            add(pros)  # all-proclitic tiling, e.g. f + il
            continue
        for j, encs in enc_stacks(len(text), []):
            if j > i:
                add(pros + [SegmentPart(text[i:j], STEM)] + encs)

    return sorted(found.values(), key=lambda s: (len(s.parts), tuple(p.text for p in s.parts)))


def morpheme_rows(seg: Segmentation) -> list[SegmentPart]:
    """Collapse a segmentation to corpus rows: the negation circumfix becomes
    one particle row ("ma + ch" / Tra "ما+ش") preceding the verb row."""
    parts = list(seg.parts)
    kinds = [p.kind for p in parts]
    if NEG_PREFIX in kinds and NEG_SUFFIX in kinds:
        pre = parts[kinds.index(NEG_PREFIX)]
        suf = parts[kinds.index(NEG_SUFFIX)]
        rest = [p for p in parts if p.kind not in (NEG_PREFIX, NEG_SUFFIX)]
        particle = SegmentPart(
            text=f"{pre.text} + {suf.text}",
            kind=NEG_PARTICLE,
            arabic=f"{pre.arabic}+{suf.arabic}",
            pos=NEG_PARTICLE_POS,
        )
        return [particle] + rest
    return parts


def fuse_morphemes(morphemes: list[str]) -> str:
    """Join morpheme transcriptions into the fused surface form.

    Junction tatweels are dropped (فـ + الـ = فالـ). A leading negation
    particle "ما+ش" wraps the rest: ما + verb + ش with the conventional
    space after ما.
    """
    if not morphemes:
        raise ValueError("nothing to fuse")
    if "+" in morphemes[0] and len(morphemes) > 1:
        pre, _, suf = morphemes[0].partition("+")
        return f"{pre} {fuse_morphemes(list(morphemes[1:]))}{suf}"
    out = []
    last = len(morphemes) - 1
    for i, m in enumerate(morphemes):
        if i > 0:
            m = m.lstrip(TATWEEL)
        if i < last:
            m = m.rstrip(TATWEEL)
        out.append(m)
    return "".join(out)


def to_range_rows(
    record: TokenRecord, seg: Segmentation, arabic_parts: list[str]
) -> list[TokenRecord]:
    """Expand one surface record into a range parent plus component rows.

    ``arabic_parts`` aligns with the corpus rows of the segmentation (the
    negation circumfix counts as a single particle row). The parent keeps the
    record's annotations with W rewritten to "lo-hi"; its transcription
    defaults to the fused morphemes when the record carries none.
    """
    if seg.is_trivial:
        raise ValueError("cannot emit range rows for a single-part segmentation")
    if record.is_range:
        raise ValueError(f"record {record.key} is already a range row")
    rows = morpheme_rows(seg)
    if len(arabic_parts) != len(rows):
        raise ValueError(f"expected {len(rows)} arabic parts, got {len(arabic_parts)}")

    lo = record.w_lo
    hi = lo + len(rows) - 1
    parent_tra = record.tra if record.tra not in ("", MISSING) else fuse_morphemes(arabic_parts)
    out = [replace(record, w=f"{lo}-{hi}", tra=parent_tra)]
    for i, (row, arabic) in enumerate(zip(rows, arabic_parts)):
        out.append(
            replace(
                record,
                w=str(lo + i),
                arabish=row.text,
                tra=arabic,
                ita=MISSING,
                lem=arabic,
                pos=row.pos if row.pos else record.pos,
            )
        )
    return out
