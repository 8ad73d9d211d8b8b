"""Arabish/Arabic grapheme mapping and candidate lattice expansion.

The code system is many-to-many: one Latin unit (letter, digit or digraph)
maps to several Arabic graphemes and vice versa. A token therefore expands
into a lattice: one candidate set per grapheme unit, per tiling of the token
into units. Latin short-vowel letters additionally admit the empty candidate,
since short vowels in open syllables are not written in Arabic script.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from itertools import product
from math import prod
from pathlib import Path

SHADDA = "ّ"   # gemination mark
TATWEEL = "ـ"  # kashida used to mark clitic-hood in the corpus

# Letters that may stand for an unwritten short vowel.
SHORT_VOWELS = frozenset("aeiouéè")

LOANWORD_FLAG = "loanword"


@dataclass(frozen=True, slots=True)
class MappingEntry:
    """One Arabish variant / Arabic grapheme pairing."""

    variant: str        # 1-2 Latin characters (letters, digits, accented vowels)
    arabic: str         # Arabic-script string, normally a single letter
    ipa: str
    loanword_only: bool = False


class MappingTable:
    """Immutable lookup over mapping entries; safe to share across threads."""

    def __init__(self, entries: list[MappingEntry]):
        self.entries = tuple(entries)
        by_variant: dict[str, list[MappingEntry]] = {}
        for e in self.entries:
            if not (1 <= len(e.variant) <= 2):
                raise ValueError(f"variant must be 1-2 characters, got {e.variant!r}")
            by_variant.setdefault(e.variant, []).append(e)
        self._by_variant = {v: tuple(es) for v, es in by_variant.items()}
        self.variants = frozenset(self._by_variant)
        self.digraphs = frozenset(v for v in self.variants if len(v) == 2)

    def is_variant(self, unit: str) -> bool:
        return unit in self.variants

    def is_geminate_unit(self, unit: str) -> bool:
        """Doubled consonant letter whose single form is mappable, e.g. "nn"."""
        return (
            len(unit) == 2
            and unit[0] == unit[1]
            and unit[0] not in SHORT_VOWELS
            and unit[0] in self.variants
        )

    def candidates(self, unit: str, loanword: bool = False) -> tuple[str, ...]:
        """Arabic candidates for one grapheme unit, deterministically ordered.

        Unknown units pass through verbatim. Geminate units offer the single
        letter with and without shadda. Short-vowel letters add the empty
        string.
        """
        out: set[str] = set()
        for e in self._by_variant.get(unit, ()):
            if loanword or not e.loanword_only:
                out.add(e.arabic)
        if not out and self.is_geminate_unit(unit):
            for base in self.candidates(unit[0], loanword):
                if base:
                    out.add(base + SHADDA)
                    out.add(base)
        if not out:
            out.add(unit)  # unmapped pass-through
        if len(unit) == 1 and unit in SHORT_VOWELS:
            out.add("")
        return tuple(sorted(out))

    @classmethod
    def from_file(cls, path: str | Path) -> "MappingTable":
        return cls(_parse_mapping(Path(path).read_text(encoding="utf-8")))

    @classmethod
    def default(cls) -> "MappingTable":
        return _default_table()


def _parse_mapping(text: str) -> list[MappingEntry]:
    entries = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip() or line.startswith("#"):
            continue
        cols = line.split("\t")
        if len(cols) != 4:
            raise ValueError(f"mapping line {lineno}: expected 4 columns, got {len(cols)}")
        variant, arabic, ipa, flags = cols
        flagset = set() if flags == "-" else set(flags.split(","))
        unknown = flagset - {LOANWORD_FLAG}
        if unknown:
            raise ValueError(f"mapping line {lineno}: unknown flags {sorted(unknown)}")
        entries.append(MappingEntry(variant.lower(), arabic, ipa, LOANWORD_FLAG in flagset))
    return entries


@lru_cache(maxsize=1)
def _default_table() -> MappingTable:
    text = resources.files("arabish.data").joinpath("mapping.tsv").read_text(encoding="utf-8")
    return MappingTable(_parse_mapping(text))


@dataclass(frozen=True, slots=True)
class GraphemeSegmentation:
    """One tiling of a lowercased token into grapheme units."""

    units: tuple[str, ...]
    known: tuple[bool, ...]  # per unit: mapped variant/geminate vs pass-through

    def __post_init__(self):
        if len(self.units) != len(self.known):
            raise ValueError("units and known flags must align")


def segment_graphemes(token: str, table: MappingTable | None = None) -> list[GraphemeSegmentation]:
    """All tilings of a token into mapping units, longest-unit-first.

    Wherever a digraph and its single-character split are both mappable, both
    tilings are produced; unmapped characters pass through as single units.
    """
    if not token:
        raise ValueError("token must be non-empty")
    table = table or MappingTable.default()
    text = token.lower()
    results: list[GraphemeSegmentation] = []
    units: list[str] = []
    known: list[bool] = []

    def walk(i: int) -> None:
        if i == len(text):
            results.append(GraphemeSegmentation(tuple(units), tuple(known)))
            return
        two = text[i : i + 2]
        if len(two) == 2 and (table.is_variant(two) or table.is_geminate_unit(two)):
            units.append(two)
            known.append(True)
            walk(i + 2)
            units.pop()
            known.pop()
        one = text[i]
        units.append(one)
        known.append(table.is_variant(one))
        walk(i + 1)
        units.pop()
        known.pop()

    walk(0)
    return results


@dataclass(frozen=True, slots=True)
class LatticeBranch:
    """Candidate sets for one grapheme tiling; a path picks one per position."""

    segmentation: GraphemeSegmentation
    positions: tuple[tuple[str, ...], ...]

    def path_count(self) -> int:
        return prod(len(p) for p in self.positions)

    def paths(self):
        for choice in product(*self.positions):
            yield "".join(choice)


@dataclass(frozen=True, slots=True)
class Lattice:
    """All candidate transcriptions of a token, across tilings."""

    token: str
    branches: tuple[LatticeBranch, ...]

    def path_count(self) -> int:
        return sum(b.path_count() for b in self.branches)

    def paths(self):
        for branch in self.branches:
            yield from branch.paths()


def expand(token: str, loanword: bool = False, table: MappingTable | None = None) -> Lattice:
    """Build the candidate lattice for a normalized (collapsed, lowercased) token."""
    if not token:
        raise ValueError("cannot expand an empty token")
    table = table or MappingTable.default()
    branches = []
    for seg in segment_graphemes(token, table):
        positions = tuple(table.candidates(u, loanword) for u in seg.units)
        branches.append(LatticeBranch(seg, positions))
    return Lattice(token=token.lower(), branches=tuple(branches))


def contains_path(lattice: Lattice, arabic: str) -> bool:
    """True iff some per-position choice sequence concatenates to ``arabic``.

    Dynamic programming over reachable offsets; equivalent to exhaustive path
    enumeration but polynomial.
    """
    n = len(arabic)
    for branch in lattice.branches:
        offsets = {0}
        for cands in branch.positions:
            nxt = set()
            for o in offsets:
                for c in cands:
                    if arabic.startswith(c, o):
                        nxt.add(o + len(c))
            offsets = nxt
            if not offsets:
                break
        if n in offsets:
            return True
    return False
