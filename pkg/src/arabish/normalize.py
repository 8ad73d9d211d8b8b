"""Pre-transcription normalization: prosodic repetition, code-switching,
negation circumfix detection, and the glottal-stop writing policy.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path

from .corpus import Sentence

# Circumfix negation: ma-/me-/m- prefix, -ch suffix (with rarer -ech/-ich).
NEG_PREFIXES = ("ma", "me", "m")
NEG_SUFFIXES = ("ch", "ech", "ich")

# Hamza seats at word edges lose the glottal stop: the seat letter remains,
# a bare hamza disappears.
_HAMZA_SEATS = {"أ": "ا", "إ": "ا", "آ": "ا", "ؤ": "و", "ئ": "ي"}
_BARE_HAMZA = "ء"

FLAG_CODE_SWITCH = "code_switch"
FLAG_LOANWORD = "loanword"
FLAG_GLOTTAL = "glottal_exception"
FLAG_NEGATION = "negation_circumfix"

_CATEGORIES = ("glottal", "loanword", "codeswitch")


@dataclass(frozen=True, slots=True)
class NormalizationReport:
    """Outcome of normalizing one token.

    ``collapsed_runs`` holds (start offset in the original, run length) for
    every collapsed repetition, so the original is recoverable.
    """

    original: str
    normalized: str
    collapsed_runs: tuple[tuple[int, int], ...] = ()
    flags: frozenset[str] = field(default_factory=frozenset)


@dataclass(frozen=True, slots=True)
class ExceptionLexicon:
    """Words exempt from the general rules.

    glottal_words keep their initial/final glottal stop; loanwords are
    transcribed into Arabic script; code_switch_vocab stays in the source
    language. A word is either an acclimatized loan or code-switching,
    never both.
    """

    glottal_words: frozenset[str] = frozenset()
    loanwords: frozenset[str] = frozenset()
    code_switch_vocab: frozenset[str] = frozenset()

    def __post_init__(self):
        overlap = self.loanwords & self.code_switch_vocab
        if overlap:
            raise ValueError(f"words cannot be both loanword and code-switch: {sorted(overlap)}")

    def with_entries(
        self,
        glottal: set[str] = frozenset(),
        loanwords: set[str] = frozenset(),
        code_switch: set[str] = frozenset(),
    ) -> "ExceptionLexicon":
        """Copy-on-update: returns a new snapshot, never mutates."""
        return ExceptionLexicon(
            self.glottal_words | frozenset(glottal),
            self.loanwords | frozenset(loanwords),
            self.code_switch_vocab | frozenset(code_switch),
        )

    @classmethod
    def from_text(cls, text: str) -> "ExceptionLexicon":
        buckets: dict[str, set[str]] = {c: set() for c in _CATEGORIES}
        for lineno, line in enumerate(text.splitlines(), start=1):
            if not line.strip() or line.startswith("#"):
                continue
            cols = line.split("\t")
            if len(cols) != 2 or cols[1] not in _CATEGORIES:
                raise ValueError(f"lexicon line {lineno}: expected 'word<TAB>{'|'.join(_CATEGORIES)}'")
            buckets[cols[1]].add(cols[0])
        return cls(
            frozenset(buckets["glottal"]),
            frozenset(buckets["loanword"]),
            frozenset(buckets["codeswitch"]),
        )

    @classmethod
    def from_file(cls, path: str | Path) -> "ExceptionLexicon":
        return cls.from_text(Path(path).read_text(encoding="utf-8"))

    @classmethod
    def default(cls) -> "ExceptionLexicon":
        text = resources.files("arabish.data").joinpath("lexicon.tsv").read_text(encoding="utf-8")
        return cls.from_text(text)

    def to_text(self) -> str:
        lines = [f"{w}\tglottal" for w in sorted(self.glottal_words)]
        lines += [f"{w}\tloanword" for w in sorted(self.loanwords)]
        lines += [f"{w}\tcodeswitch" for w in sorted(self.code_switch_vocab)]
        return "\n".join(lines) + "\n"


def collapse_prosody(token: str) -> NormalizationReport:
    """Collapse runs of three or more identical letters to one.

    Doubled letters survive: they may encode a digraph or gemination.
    """
    out: list[str] = []
    runs: list[tuple[int, int]] = []
    i = 0
    while i < len(token):
        j = i
        while j < len(token) and token[j] == token[i]:
            j += 1
        length = j - i
        if length >= 3:
            out.append(token[i])
            runs.append((i, length))
        else:
            out.append(token[i:j])
        i = j
    return NormalizationReport(original=token, normalized="".join(out), collapsed_runs=tuple(runs))


def reconstruct_original(report: NormalizationReport) -> str:
    """Invert collapse_prosody from the recorded runs (collapse is lossless)."""
    runs = dict(report.collapsed_runs)
    out: list[str] = []
    orig_pos = 0
    for ch in report.normalized:
        length = runs.get(orig_pos, 1)
        out.append(ch * length)
        orig_pos += length
    return "".join(out)


def _fold(token: str) -> str:
    return collapse_prosody(token).normalized.casefold()


def detect_code_switch(token: str, lex: ExceptionLexicon) -> bool:
    """True iff the token is a known foreign (non-transcribable) word."""
    folded = _fold(token)
    return any(_fold(w) == folded for w in lex.code_switch_vocab)


def is_loanword(token: str, lex: ExceptionLexicon) -> bool:
    folded = _fold(token)
    return any(_fold(w) == folded for w in lex.loanwords)


def filter_code_switch_sentences(
    sentences: list[Sentence], lex: ExceptionLexicon
) -> tuple[list[Sentence], list[Sentence]]:
    """Partition sentences into (kept, removed); removed iff any token code-switches."""
    kept: list[Sentence] = []
    removed: list[Sentence] = []
    for sent in sentences:
        if any(detect_code_switch(tok.arabish, lex) for tok in sent.tokens):
            removed.append(sent)
        else:
            kept.append(sent)
    return kept, removed


def detect_negation_circumfix(
    token: str,
    prefixes: tuple[str, ...] = NEG_PREFIXES,
    suffixes: tuple[str, ...] = NEG_SUFFIXES,
) -> tuple[str, str, str] | None:
    """Split ma-...-ch negation into (prefix, stem, suffix), or None.

    The longest prefix and shortest suffix win, maximizing the verb stem;
    stems shorter than two characters never split. Advisory only: the caller
    scores split against unsplit readings.
    """
    lowered = token.lower()
    for p in sorted(prefixes, key=len, reverse=True):
        for s in sorted(suffixes, key=len):
            if len(lowered) >= len(p) + len(s) + 2 and lowered.startswith(p) and lowered.endswith(s):
                return (lowered[: len(p)], lowered[len(p) : len(lowered) - len(s)], lowered[len(lowered) - len(s) :])
    return None


def apply_glottal_policy(arabic: str, lex: ExceptionLexicon) -> str:
    """Drop word-initial and word-final glottal stops, unless excepted.

    Edge hamza seats keep their seat letter; a bare hamza disappears.
    Word-medial hamzas are never touched. Idempotent.
    """
    if not arabic or arabic in lex.glottal_words:
        return arabic
    out = arabic
    while out:
        # dropping a bare hamza can expose another carrier, so run to fixpoint
        prev = out
        if out[0] in _HAMZA_SEATS:
            out = _HAMZA_SEATS[out[0]] + out[1:]
        elif out[0] == _BARE_HAMZA:
            out = out[1:]
        if out and out[-1] in _HAMZA_SEATS:
            out = out[:-1] + _HAMZA_SEATS[out[-1]]
        elif out and out[-1] == _BARE_HAMZA:
            out = out[:-1]
        if out == prev:
            break
    return out


def analyze_token(token: str, lex: ExceptionLexicon) -> NormalizationReport:
    """Collapse prosody and flag code-switch / loanword / negation status."""
    report = collapse_prosody(token)
    flags = set()
    if detect_code_switch(token, lex):
        flags.add(FLAG_CODE_SWITCH)
    if is_loanword(token, lex):
        flags.add(FLAG_LOANWORD)
    if detect_negation_circumfix(report.normalized):
        flags.add(FLAG_NEGATION)
    if token in lex.glottal_words:
        flags.add(FLAG_GLOTTAL)
    return replace(report, flags=frozenset(flags))
