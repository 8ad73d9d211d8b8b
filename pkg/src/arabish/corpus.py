"""Token-level corpus records, their TSV serialization, and sentence rebuild.

One record per row, twelve tab-separated columns. A token segmented into
morphemes occupies a range row (``W = "3-4"``) immediately followed by one
component row per morpheme (``W = 3``, ``W = 4``).
"""

from __future__ import annotations

import re
from collections import defaultdict
from dataclasses import dataclass, replace

HEADER = ("Cor", "Textco", "Par", "W", "ArabiS", "Tra", "Ita", "Lem", "POS", "Var", "Age", "Gen")
MISSING = "-"

AGE_RANGES = ("10-25", "25-35", "35-50", "50-90")
GENDERS = ("M", "F")

# Universal Dependencies inventory plus the corpus's own spellings (prep, pct).
POS_TAGS = frozenset(
    "adj adp adv aux cconj det intj noun num part pron propn punct sconj sym verb x".split()
) | {"prep", "pct"}

_W_RANGE = re.compile(r"^([1-9]\d*)-([1-9]\d*)$")
_W_SINGLE = re.compile(r"^[1-9]\d*$")
_TEXTCO = re.compile(r"^\d{6}$")


class CorpusError(ValueError):
    """Malformed TSV input or a record violating the corpus schema."""

    def __init__(self, message: str, line: int | None = None, record: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        elif record is not None:
            message = f"record {record}: {message}"
        super().__init__(message)
        self.line = line
        self.record = record


@dataclass(frozen=True, slots=True)
class TokenRecord:
    """One corpus row: surface form plus its eleven annotation columns."""

    cor: str
    textco: str
    par: int
    w: str            # "3" for a single token, "3-4" for a range parent
    arabish: str
    tra: str
    ita: str
    lem: str
    pos: str
    var: str
    age: str
    gen: str

    @property
    def is_range(self) -> bool:
        return _W_RANGE.match(self.w) is not None

    @property
    def w_lo(self) -> int:
        m = _W_RANGE.match(self.w)
        return int(m.group(1)) if m else int(self.w)

    @property
    def w_hi(self) -> int:
        m = _W_RANGE.match(self.w)
        return int(m.group(2)) if m else int(self.w)

    @property
    def sentence_key(self) -> tuple[str, str, int]:
        return (self.cor, self.textco, self.par)

    @property
    def key(self) -> str:
        """Stable per-token key used by blocks, corrections and audit logs."""
        return f"{self.cor}:{self.textco}:{self.par}:{self.w}"


@dataclass(frozen=True, slots=True)
class Sentence:
    """Records sharing one (cor, textco, par) key, ordered by token index."""

    key: tuple[str, str, int]
    tokens: tuple[TokenRecord, ...]

    def surface(self) -> tuple[TokenRecord, ...]:
        """Surface tokens: range parents stand for their component rows."""
        out: list[TokenRecord] = []
        covered: set[int] = set()
        for rec in self.tokens:
            if rec.is_range:
                out.append(rec)
                covered.update(range(rec.w_lo, rec.w_hi + 1))
            elif rec.w_lo not in covered:
                out.append(rec)
        return tuple(out)

    def components_of(self, parent: TokenRecord) -> tuple[TokenRecord, ...]:
        lo, hi = parent.w_lo, parent.w_hi
        return tuple(t for t in self.tokens if not t.is_range and lo <= t.w_lo <= hi)


def _field_error(rec: TokenRecord) -> str | None:
    for name in ("cor", "textco", "w", "arabish", "tra", "ita", "lem", "pos", "var", "age", "gen"):
        value = getattr(rec, name)
        if "\t" in value or "\n" in value or "\r" in value:
            return f"control character in field {name!r}"
        if value == "":
            return f"empty field {name!r}"
    if not _TEXTCO.match(rec.textco):
        return f"textco must be six digits (YYMMDD), got {rec.textco!r}"
    if rec.par < 1:
        return f"par must be >= 1, got {rec.par}"
    m = _W_RANGE.match(rec.w)
    if m:
        if int(m.group(1)) >= int(m.group(2)):
            return f"w range must satisfy lo < hi, got {rec.w!r}"
    elif not _W_SINGLE.match(rec.w):
        return f"w must be a positive integer or lo-hi range, got {rec.w!r}"
    if rec.age != MISSING and rec.age not in AGE_RANGES:
        return f"age must be one of {AGE_RANGES} or {MISSING!r}, got {rec.age!r}"
    if rec.gen != MISSING and rec.gen not in GENDERS:
        return f"gen must be M, F or {MISSING!r}, got {rec.gen!r}"
    if rec.pos != MISSING and rec.pos.lower() not in POS_TAGS:
        return f"unknown POS tag {rec.pos!r}"
    return None


def validate_records(records: list[TokenRecord]) -> None:
    """Check field values and range-row grouping; raise on the first offender.

    A range parent lo-hi must be immediately followed by exactly hi-lo+1
    component rows carrying w = lo..hi in order, all with the parent's key.
    """
    i = 0
    n = len(records)
    while i < n:
        rec = records[i]
        err = _field_error(rec)
        if err:
            raise CorpusError(err, record=i)
        if rec.is_range:
            lo, hi = rec.w_lo, rec.w_hi
            for offset, w in enumerate(range(lo, hi + 1), start=1):
                j = i + offset
                if j >= n:
                    raise CorpusError(
                        f"range row {rec.w!r} truncated: expected component w={w}", record=i
                    )
                comp = records[j]
                if comp.sentence_key != rec.sentence_key or comp.is_range or comp.w_lo != w:
                    raise CorpusError(
                        f"range row {rec.w!r} must be followed by component w={w}, "
                        f"found w={comp.w!r}",
                        record=j,
                    )
            i += hi - lo + 1
        i += 1


def parse_tsv(data: bytes) -> list[TokenRecord]:
    """Parse a UTF-8, LF-terminated, header-first corpus TSV."""
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise CorpusError(f"not valid UTF-8: {exc}") from None
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise CorpusError("missing header line", line=1)
    if tuple(lines[0].split("\t")) != HEADER:
        raise CorpusError(f"header must be {chr(9).join(HEADER)!r}", line=1)

    records: list[TokenRecord] = []
    for lineno, line in enumerate(lines[1:], start=2):
        cols = line.split("\t")
        if len(cols) != len(HEADER):
            raise CorpusError(f"expected {len(HEADER)} columns, found {len(cols)}", line=lineno)
        try:
            par = int(cols[2])
        except ValueError:
            raise CorpusError(f"Par must be an integer, got {cols[2]!r}", line=lineno) from None
        rec = TokenRecord(cols[0], cols[1], par, cols[3], *cols[4:])
        err = _field_error(rec)
        if err:
            raise CorpusError(err, line=lineno)
        records.append(rec)

    try:
        validate_records(records)
    except CorpusError as exc:
        # Re-key the record index to its file line for the caller.
        raise CorpusError(str(exc).split(": ", 1)[1], line=(exc.record or 0) + 2) from None
    return records


def write_tsv(records: list[TokenRecord]) -> bytes:
    """Serialize records; parse_tsv(write_tsv(r)) round-trips byte-identically."""
    validate_records(records)
    lines = ["\t".join(HEADER)]
    for rec in records:
        lines.append(
            "\t".join(
                (
                    rec.cor, rec.textco, str(rec.par), rec.w, rec.arabish, rec.tra,
                    rec.ita, rec.lem, rec.pos, rec.var, rec.age, rec.gen,
                )
            )
        )
    return ("\n".join(lines) + "\n").encode("utf-8")


def _order_key(rec: TokenRecord) -> tuple[int, int, int]:
    # Range parents sort before their first component: (3-4) < 3 < 4 < (5-6).
    return (rec.w_lo, 0 if rec.is_range else 1, rec.w_hi)


def reconstruct_sentences(records: list[TokenRecord]) -> list[Sentence]:
    """Group records by (cor, textco, par) and order each group by token index.

    Input order is irrelevant; duplicate (key, w) pairs are an error.
    """
    groups: dict[tuple[str, str, int], list[TokenRecord]] = defaultdict(list)
    for rec in records:
        groups[rec.sentence_key].append(rec)
    sentences = []
    for key in sorted(groups):
        toks = sorted(groups[key], key=_order_key)
        seen: set[str] = set()
        for t in toks:
            if t.w in seen:
                raise CorpusError(f"duplicate token index {t.w!r} in sentence {key}")
            seen.add(t.w)
        sentences.append(Sentence(key=key, tokens=tuple(toks)))
    return sentences


def expansion_consistent(parent: TokenRecord, components: list[TokenRecord]) -> bool:
    """True when component surfaces re-concatenate to the parent surface.

    Case and hyphenation are ignored. A circumfix particle row written
    ``"ma + ch"`` contributes its prefix before and its suffix after the
    remaining components.
    """

    def squeeze(s: str) -> str:
        return s.replace(" ", "").replace("-", "").lower()

    target = squeeze(parent.arabish)
    pieces = [c.arabish for c in components]
    if pieces and "+" in pieces[0]:
        pre, _, suf = squeeze(pieces[0]).partition("+")
        return pre + "".join(squeeze(p) for p in pieces[1:]) + suf == target
    return "".join(squeeze(p) for p in pieces) == target


def new_record(
    cor: str,
    textco: str,
    par: int,
    w: str,
    arabish: str,
    *,
    tra: str = MISSING,
    ita: str = MISSING,
    lem: str = MISSING,
    pos: str = MISSING,
    var: str = MISSING,
    age: str = MISSING,
    gen: str = MISSING,
) -> TokenRecord:
    """Convenience constructor for records with mostly-missing annotations."""
    return TokenRecord(cor, textco, par, w, arabish, tra, ita, lem, pos, var, age, gen)


def with_tra(rec: TokenRecord, tra: str) -> TokenRecord:
    return replace(rec, tra=tra)
