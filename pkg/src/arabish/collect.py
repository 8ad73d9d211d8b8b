"""Text collection support: thematic keyword matching over raw dumps and
author metadata extraction (gender, age range, city code).

No crawling happens here: ingestion reads local text dumps, one document per
file, with a small key:value header carrying provenance and profile fields.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .corpus import AGE_RANGES, MISSING
from .normalize import collapse_prosody

log = logging.getLogger(__name__)

_WORD = re.compile(r"[^\W_]+", re.UNICODE)

# Left-closed/right-open buckets; the top bound (90) is closed.
_AGE_BUCKETS = ((10, 25), (25, 35), (35, 50), (50, 90))

CITY_CODES = {
    "bizerte": "Bnz",
    "tunis": "Tun",
    "sfax": "Sfx",
    "sousse": "Sus",
    "kairouan": "Kai",
    "gabes": "Gab",
    "gabès": "Gab",
    "monastir": "Mnr",
    "nabeul": "Nbl",
    "djerba": "Djr",
}


@dataclass(frozen=True, slots=True)
class Category:
    """A thematic macro-category with its Arabish keyword set."""

    name: str
    meanings: tuple[str, ...]
    keywords: tuple[str, ...]

    def __post_init__(self):
        if not self.keywords or not all(self.keywords):
            raise ValueError(f"category {self.name!r} needs a non-empty keyword set")


@dataclass(frozen=True, slots=True)
class AuthorProfile:
    gender: str | None = None
    birth_or_age: str | None = None
    city: str | None = None


@dataclass(frozen=True, slots=True)
class RawText:
    source_code: str
    date: str
    body: str
    profile: AuthorProfile = AuthorProfile()

    def __post_init__(self):
        if not self.body:
            raise ValueError("raw text body must be non-empty")


def load_categories(path: str | Path | None = None) -> list[Category]:
    if path is None:
        text = resources.files("arabish.data").joinpath("categories.tsv").read_text(encoding="utf-8")
    else:
        text = Path(path).read_text(encoding="utf-8")
    categories = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip() or line.startswith("#"):
            continue
        cols = line.split("\t")
        if len(cols) != 3:
            raise ValueError(f"categories line {lineno}: expected 3 columns")
        categories.append(
            Category(cols[0], tuple(cols[1].split(",")), tuple(cols[2].split(",")))
        )
    return categories


def _fold_word(word: str) -> str:
    return collapse_prosody(word).normalized.casefold()


def match_categories(
    text: RawText, categories: list[Category]
) -> list[tuple[Category, list[str]]]:
    """Whole-word, case- and prosody-insensitive keyword matching.

    Returns every category with at least one hit, with the keywords found.
    """
    body_words = {_fold_word(w) for w in _WORD.findall(text.body)}
    out = []
    for cat in categories:
        hits = [kw for kw in cat.keywords if _fold_word(kw) in body_words]
        if hits:
            out.append((cat, hits))
    return out


def bucket_age(age: int) -> str:
    """Map a numeric age into the four declared ranges.

    Boundary ages go to the lower-starting range containing them as
    left-closed/right-open; 90 closes the last range. Ages outside [0, 120]
    are rejected with a warning.
    """
    if age < 0 or age > 120:
        log.warning("implausible age %d, recording as missing", age)
        return MISSING
    for (lo, hi), label in zip(_AGE_BUCKETS, AGE_RANGES):
        if lo <= age < hi or (hi == 90 and age == 90):
            return label
    return MISSING


def extract_metadata(
    profile: AuthorProfile, reference_year: int | None = None
) -> tuple[str, str, str]:
    """Normalize a raw profile into (gen, age range, var) column values.

    Four-digit values in ``birth_or_age`` are birth years and need a
    ``reference_year`` to resolve; otherwise the field must be a plain age.
    Unknown or unparseable fields map to "-".
    """
    gender = MISSING
    if profile.gender:
        g = profile.gender.strip().casefold()
        if g in ("m", "male", "homme"):
            gender = "M"
        elif g in ("f", "female", "femme"):
            gender = "F"

    age = MISSING
    raw = (profile.birth_or_age or "").strip()
    if raw.isdigit():
        value = int(raw)
        if len(raw) == 4:
            if reference_year is not None:
                age = bucket_age(reference_year - value)
        else:
            age = bucket_age(value)

    var = MISSING
    if profile.city:
        c = profile.city.strip()
        if c in CITY_CODES.values():
            var = c
        else:
            var = CITY_CODES.get(c.casefold(), MISSING)
    return gender, age, var


_TOKEN = re.compile(r"[^\W_]+(?:['’][^\W_]+)*|[^\w\s]", re.UNICODE)


def tokenize_paragraphs(body: str) -> list[list[str]]:
    """Split a document body into paragraphs (blank-line separated) and
    whitespace/punctuation tokens; punctuation marks stand alone."""
    paragraphs = [p for p in re.split(r"\n\s*\n", body) if p.strip()]
    return [_TOKEN.findall(p) for p in paragraphs]


def read_raw_text(path: str | Path) -> RawText:
    """Parse one dump file: key:value header lines, a blank line, the body."""
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    header: dict[str, str] = {}
    body_start = 0
    for i, line in enumerate(lines):
        if not line.strip():
            body_start = i + 1
            break
        key, sep, value = line.partition(":")
        if not sep:
            raise ValueError(f"{path}: malformed header line {i + 1}: {line!r}")
        header[key.strip().casefold()] = value.strip()
        body_start = i + 1
    body = "\n".join(lines[body_start:]).strip("\n")
    if "source" not in header or "date" not in header:
        raise ValueError(f"{path}: header must carry 'source' and 'date'")
    return RawText(
        source_code=header["source"],
        date=header["date"],
        body=body,
        profile=AuthorProfile(
            gender=header.get("gender"),
            birth_or_age=header.get("age"),
            city=header.get("city"),
        ),
    )


def load_raw_texts(directory: str | Path) -> list[RawText]:
    return [read_raw_text(p) for p in sorted(Path(directory).glob("*.txt"))]
