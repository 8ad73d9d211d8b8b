"""Trainable Arabish-to-Arabic transducer.

The model is a noisy-channel scorer over the candidate space built from
clitic segmentation and the grapheme lattice:

* a channel table P(arabic slice | arabish unit), estimated from monotone
  alignments of training pairs,
* a morpheme-level n-gram language model with add-k smoothing,
* a lexicon of seen tokens, consulted first (annotation recall beats
  generalization for corpus work).

Candidates are scored by ``lattice_weight * channel + (1-lattice_weight) * lm``
in log space. Search is exhaustive whenever the candidate space is small
enough (``exhaustive_cap``), so results are exact there; larger spaces fall
back to a beam. The estimator follows the scikit-learn protocol (fit /
predict / score / get_params) and is immutable after fit, hence safely
shared across threads.
"""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass
from pathlib import Path

from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .clitics import STEM, CliticEntry, CliticInventory, fuse_morphemes, morpheme_rows, segment
from .corpus import MISSING, TokenRecord, reconstruct_sentences
from .graphemes import Lattice, MappingEntry, MappingTable, contains_path, expand
from .normalize import ExceptionLexicon, collapse_prosody, filter_code_switch_sentences, is_loanword
from .validation import check_morphemes, check_token, check_X_y

BOS = "<s>"
EOS = "</s>"

FORMAT_NAME = "arabish-transducer"
FORMAT_VERSION = 1


@dataclass(frozen=True, slots=True)
class TrainingPair:
    """One supervised example: a surface token and its gold morphemes."""

    arabish: str
    morphemes: tuple[str, ...]


@dataclass(frozen=True, slots=True)
class Prediction:
    morphemes: tuple[str, ...]
    score: float
    alternatives: tuple[tuple[tuple[str, ...], float], ...] = ()

    @property
    def fused(self) -> str:
        return fuse_morphemes(list(self.morphemes))


def token_accuracy(predictions: list, golds: list) -> float:
    """Fraction of positions whose full morpheme sequence matches gold exactly."""
    if len(predictions) != len(golds):
        raise ValueError(f"length mismatch: {len(predictions)} predictions, {len(golds)} golds")
    if not golds:
        return 1.0
    hits = sum(1 for p, g in zip(predictions, golds) if tuple(p) == tuple(g))
    return hits / len(golds)


class _NgramLm:
    """Morpheme n-gram counts with add-k smoothing over an open vocabulary."""

    def __init__(self, order: int, add_k: float):
        if order < 1:
            raise ValueError(f"n-gram order must be >= 1, got {order}")
        self.order = order
        self.add_k = add_k
        self.counts: dict[tuple[str, ...], Counter] = {}
        self.vocab: set[str] = set()

    def add(self, morphemes: tuple[str, ...]) -> None:
        self.vocab.update(morphemes)
        padded = (BOS,) * (self.order - 1) + morphemes + (EOS,)
        for i in range(self.order - 1, len(padded)):
            ctx = padded[i - self.order + 1 : i]
            self.counts.setdefault(ctx, Counter())[padded[i]] += 1

    def _ctx(self, prefix: tuple[str, ...]) -> tuple[str, ...]:
        padded = (BOS,) * (self.order - 1) + prefix
        return padded[len(padded) - self.order + 1 :]

    def cond_logprob(self, prefix: tuple[str, ...], token: str) -> float:
        ctx = self._ctx(prefix)
        counter = self.counts.get(ctx)
        total = sum(counter.values()) if counter else 0
        count = counter.get(token, 0) if counter else 0
        # vocabulary: seen morphemes + EOS + one unseen bucket
        v = len(self.vocab) + 2
        return math.log((count + self.add_k) / (total + self.add_k * v))

    def logprob(self, morphemes: tuple[str, ...]) -> float:
        total = 0.0
        for i, m in enumerate(morphemes):
            total += self.cond_logprob(morphemes[:i], m)
        return total + self.cond_logprob(morphemes, EOS)


class ArabishTransliterator(BaseEstimator):
    """Latin-script token to Arabic morpheme sequence transducer.

    Parameters mirror the scoring components: ``ngram_order`` and ``add_k``
    shape the language model, ``lattice_weight`` balances channel against LM,
    ``beam_width`` bounds approximate search and the number of reported
    alternatives, ``exhaustive_cap`` is the candidate-space size up to which
    search is exact. ``mapping``, ``clitics`` and ``lexicon`` take resource
    objects; None selects the shipped defaults.
    """

    def __init__(
        self,
        ngram_order: int = 2,
        add_k: float = 0.1,
        lattice_weight: float = 0.5,
        beam_width: int = 16,
        exhaustive_cap: int = 65536,
        unknown_log_prob: float = -10.0,
        mapping: MappingTable | None = None,
        clitics: CliticInventory | None = None,
        lexicon: ExceptionLexicon | None = None,
    ):
        self.ngram_order = ngram_order
        self.add_k = add_k
        self.lattice_weight = lattice_weight
        self.beam_width = beam_width
        self.exhaustive_cap = exhaustive_cap
        self.unknown_log_prob = unknown_log_prob
        self.mapping = mapping
        self.clitics = clitics
        self.lexicon = lexicon

    # ------------------------------------------------------------------ fit

    def fit(self, X, y) -> "ArabishTransliterator":
        """Estimate channel, language model and token lexicon from pairs.

        Counts are commutative, so the fitted model does not depend on the
        order of the training pairs.
        """
        tokens, seqs = check_X_y(X, y)
        self.mapping_ = self.mapping or MappingTable.default()
        self.clitics_ = self.clitics or CliticInventory.default()
        self.exceptions_ = self.lexicon or ExceptionLexicon.default()

        channel_counts: dict[str, Counter] = {}
        lm = _NgramLm(self.ngram_order, self.add_k)
        lexicon: dict[str, Counter] = {}
        oov: list[str] = []

        for token, morphemes in zip(tokens, seqs):
            norm = self._normalize(token)
            lexicon.setdefault(norm, Counter())[morphemes] += 1
            lm.add(morphemes)
            for stem_text, gold in self._alignment_pieces(norm, morphemes):
                for unit, slc in self._align(stem_text, gold):
                    channel_counts.setdefault(unit, Counter())[slc] += 1
            if self._row_match(norm, morphemes, require_paths=True) is None:
                oov.append(token)

        self.channel_counts_ = channel_counts
        self.channel_ = {
            unit: self._normalize_row(unit, counts) for unit, counts in channel_counts.items()
        }
        self.lm_ = lm
        self.lexicon_ = lexicon
        self.oov_structure_ = tuple(oov)
        self.n_pairs_ = len(tokens)
        return self

    def _normalize(self, token: str) -> str:
        return collapse_prosody(token).normalized.lower()

    def _normalize_row(self, unit: str, counts: Counter) -> dict[str, float]:
        vocab = set(counts) | set(self.mapping_.candidates(unit, loanword=True))
        total = sum(counts.values())
        k = self.add_k
        denom = total + k * len(vocab)
        return {slc: (counts.get(slc, 0) + k) / denom for slc in sorted(vocab)}

    def _row_match(
        self, norm: str, morphemes: tuple[str, ...], require_paths: bool
    ) -> list[tuple[str, str]] | None:
        """Match gold morphemes to a segmentation's corpus rows.

        Returns (stem text, stem gold) pieces for the first structurally
        compatible segmentation, or None. With ``require_paths`` the stem
        golds must also be reachable in the grapheme lattice.
        """
        for seg in segment(norm, self.clitics_):
            rows = morpheme_rows(seg)
            if len(rows) != len(morphemes):
                continue
            stems: list[tuple[str, str]] = []
            ok = True
            for row, gold in zip(rows, morphemes):
                if row.kind == STEM:
                    if require_paths and not contains_path(
                        expand(row.text, True, self.mapping_), gold
                    ):
                        ok = False
                        break
                    stems.append((row.text, gold))
                elif row.arabic != gold:
                    ok = False
                    break
            if ok:
                return stems
        return None

    def _alignment_pieces(self, norm: str, morphemes: tuple[str, ...]) -> list[tuple[str, str]]:
        pieces = self._row_match(norm, morphemes, require_paths=False)
        if pieces is None:
            pieces = [(norm, fuse_morphemes(list(morphemes)))]
        return pieces

    def _align(self, latin: str, target: str) -> list[tuple[str, str]]:
        """Monotone unit/character alignment minimizing unmapped units.

        Units follow the grapheme tiling rules (digraphs and geminates may
        take two characters); each unit consumes the Arabic span of one of
        its lattice candidates at cost 0, or skips/takes one character at
        cost 1. Ties resolve to the first path in a fixed longest-unit-first
        exploration order, i.e. the leftmost optimal alignment.
        """
        table = self.mapping_

        def unit_options(i: int) -> list[str]:
            opts = []
            two = latin[i : i + 2]
            if len(two) == 2 and (table.is_variant(two) or table.is_geminate_unit(two)):
                opts.append(two)
            opts.append(latin[i])
            return opts

        def transitions(i: int, j: int):
            for unit in unit_options(i):
                cands = sorted(table.candidates(unit, loanword=True), key=lambda c: (-len(c), c))
                seen_spans = set()
                for c in cands:
                    if target.startswith(c, j):
                        seen_spans.add(len(c))
                        yield unit, c, 0
                if 1 not in seen_spans and j < len(target):
                    yield unit, target[j : j + 1], 1
                if 0 not in seen_spans:
                    yield unit, "", 1

        best: dict[tuple[int, int], int] = {}

        def cost(i: int, j: int) -> int:
            if i == len(latin):
                # leftover target characters stay unattached, one unit of cost each
                return len(target) - j
            key = (i, j)
            if key not in best:
                best[key] = min(
                    c + cost(i + len(u), j + len(s)) for u, s, c in transitions(i, j)
                )
            return best[key]

        # A unit always advances i, so recursion terminates.
        cost(0, 0)
        pairs: list[tuple[str, str]] = []
        i = j = 0
        while i < len(latin):
            for unit, slc, c in transitions(i, j):
                if c + cost(i + len(unit), j + len(slc)) == cost(i, j):
                    pairs.append((unit, slc))
                    i += len(unit)
                    j += len(slc)
                    break
            else:  # pragma: no cover - transitions always include a fallback
                break
        return pairs

    # -------------------------------------------------------------- scoring

    def channel_logprob(self, unit: str, slice_: str) -> float:
        """Log P(arabic slice | arabish unit) under the fitted channel."""
        check_is_fitted(self, "channel_")
        row = self.channel_.get(unit)
        if row is not None:
            p = row.get(slice_)
            return math.log(p) if p is not None else self.unknown_log_prob
        cands = self.mapping_.candidates(unit, loanword=True)
        if slice_ in cands:
            return -math.log(len(cands))
        return self.unknown_log_prob

    def lm_logprob(self, morphemes: tuple[str, ...]) -> float:
        check_is_fitted(self, "lm_")
        return self.lm_.logprob(tuple(morphemes))

    def sequence_score(self, morphemes: tuple[str, ...], channel_logsum: float) -> float:
        lam = self.lattice_weight
        return lam * channel_logsum + (1.0 - lam) * self.lm_logprob(morphemes)

    def _stem_paths(self, text: str, loanword: bool, beam: int | None) -> list[tuple[str, float]]:
        """Candidate strings for one stem with their best channel log-prob."""
        best: dict[str, float] = {}
        for branch in expand(text, loanword, self.mapping_).branches:
            partials: dict[str, float] = {"": 0.0}
            for unit, cands in zip(branch.segmentation.units, branch.positions):
                nxt: dict[str, float] = {}
                for s, sc in partials.items():
                    for c in cands:
                        ns = s + c
                        nsc = sc + self.channel_logprob(unit, c)
                        if ns not in nxt or nsc > nxt[ns]:
                            nxt[ns] = nsc
                if beam is not None and len(nxt) > beam:
                    nxt = dict(sorted(nxt.items(), key=lambda kv: (-kv[1], kv[0]))[:beam])
                partials = nxt
            for s, sc in partials.items():
                if s not in best or sc > best[s]:
                    best[s] = sc
        return sorted(best.items(), key=lambda kv: (-kv[1], kv[0]))

    def _candidates(self, norm: str, loanword: bool) -> list[tuple[tuple[str, ...], float]]:
        """Scored candidate morpheme sequences, best first.

        Exact (full enumeration) when the raw candidate space is within
        ``exhaustive_cap``; beam-pruned otherwise.
        """
        segmentations = segment(norm, self.clitics_)
        total_paths = 0
        for seg in segmentations:
            n = 1
            for row in morpheme_rows(seg):
                if row.kind == STEM:
                    n *= expand(row.text, loanword, self.mapping_).path_count()
            total_paths += n
        beam = None if total_paths <= self.exhaustive_cap else self.beam_width

        results: dict[tuple[str, ...], float] = {}
        for seg in segmentations:
            row_options: list[list[tuple[str, float]]] = []
            for row in morpheme_rows(seg):
                if row.kind == STEM:
                    row_options.append(self._stem_paths(row.text, loanword, beam))
                else:
                    row_options.append([(row.arabic, 0.0)])
            partial: list[tuple[tuple[str, ...], float, float]] = [((), 0.0, 0.0)]
            for options in row_options:
                nxt = []
                for ms, ch, lmsum in partial:
                    for text, rch in options:
                        nxt.append(
                            (ms + (text,), ch + rch, lmsum + self.lm_.cond_logprob(ms, text))
                        )
                if beam is not None and len(nxt) > beam:
                    lam = self.lattice_weight
                    nxt.sort(key=lambda t: (-(lam * t[1] + (1 - lam) * t[2]), t[0]))
                    nxt = nxt[:beam]
                partial = nxt
            lam = self.lattice_weight
            for ms, ch, lmsum in partial:
                score = lam * ch + (1 - lam) * (lmsum + self.lm_.cond_logprob(ms, EOS))
                if ms not in results or score > results[ms]:
                    results[ms] = score
        return sorted(results.items(), key=lambda kv: (-kv[1], kv[0]))

    # -------------------------------------------------------------- predict

    def predict_one(self, token: str, loanword: bool | None = None) -> Prediction:
        """Transcribe one token; exact over small candidate spaces.

        Tokens seen in training return their most frequent gold sequence
        (ties to the lexicographically smallest). ``loanword=None`` consults
        the exception lexicon.
        """
        check_is_fitted(self, "channel_")
        check_token(token)
        norm = self._normalize(token)
        if loanword is None:
            loanword = is_loanword(norm, self.exceptions_)

        seen = self.lexicon_.get(norm)
        if seen:
            total = sum(seen.values())
            ranked = sorted(seen.items(), key=lambda kv: (-kv[1], kv[0]))
            alts = tuple((ms, math.log(c / total)) for ms, c in ranked[1 : self.beam_width + 1])
            return Prediction(ranked[0][0], math.log(ranked[0][1] / total), alts)

        scored = self._candidates(norm, loanword)
        best = scored[0]
        return Prediction(best[0], best[1], tuple(scored[1 : self.beam_width + 1]))

    def predict(self, X, loanword: bool | None = None) -> list[tuple[str, ...]]:
        return [self.predict_one(token, loanword).morphemes for token in X]

    def score(self, X, y) -> float:
        """Token-level accuracy of exact morpheme-sequence matches."""
        golds = [check_morphemes(seq) for seq in y]
        return token_accuracy(self.predict(X), golds)


# ---------------------------------------------------------------- pair prep


def pairs_to_xy(pairs: list[TrainingPair]) -> tuple[list[str], list[tuple[str, ...]]]:
    return [p.arabish for p in pairs], [p.morphemes for p in pairs]


def corpus_to_grouped_pairs(
    records: list[TokenRecord],
    exceptions: ExceptionLexicon | None = None,
    filter_code_switch: bool = True,
) -> tuple[list[TrainingPair], list[tuple[str, str, int]]]:
    """Extract training pairs with their sentence keys from annotated records.

    Sentences containing code-switching tokens are dropped entirely; range
    parents pair their surface with the component morphemes; rows without a
    transcription are skipped.
    """
    exceptions = exceptions or ExceptionLexicon.default()
    sentences = reconstruct_sentences(records)
    if filter_code_switch:
        sentences, _ = filter_code_switch_sentences(sentences, exceptions)
    pairs: list[TrainingPair] = []
    groups: list[tuple[str, str, int]] = []
    for sent in sentences:
        for rec in sent.surface():
            if rec.is_range:
                comps = sent.components_of(rec)
                if comps and all(c.tra != MISSING for c in comps):
                    pairs.append(TrainingPair(rec.arabish, tuple(c.tra for c in comps)))
                    groups.append(sent.key)
            elif rec.tra != MISSING:
                pairs.append(TrainingPair(rec.arabish, (rec.tra,)))
                groups.append(sent.key)
    return pairs, groups


def corpus_to_pairs(
    records: list[TokenRecord],
    exceptions: ExceptionLexicon | None = None,
    filter_code_switch: bool = True,
) -> list[TrainingPair]:
    return corpus_to_grouped_pairs(records, exceptions, filter_code_switch)[0]


# ------------------------------------------------------------ serialization


def save_model(model: ArabishTransliterator, path: str | Path) -> None:
    """Write the fitted model as a versioned JSON container."""
    check_is_fitted(model, "channel_")
    doc = {
        "format": FORMAT_NAME,
        "format_version": FORMAT_VERSION,
        "params": {
            "ngram_order": model.ngram_order,
            "add_k": model.add_k,
            "lattice_weight": model.lattice_weight,
            "beam_width": model.beam_width,
            "exhaustive_cap": model.exhaustive_cap,
            "unknown_log_prob": model.unknown_log_prob,
        },
        "mapping": [
            [e.variant, e.arabic, e.ipa, e.loanword_only] for e in model.mapping_.entries
        ],
        "clitics": [
            [list(e.forms), e.arabic, e.kind, e.pos] for e in model.clitics_.entries
        ],
        "exceptions": {
            "glottal": sorted(model.exceptions_.glottal_words),
            "loanwords": sorted(model.exceptions_.loanwords),
            "code_switch": sorted(model.exceptions_.code_switch_vocab),
        },
        "channel_counts": {u: dict(c) for u, c in sorted(model.channel_counts_.items())},
        "lm": {
            "counts": [[list(ctx), dict(counter)] for ctx, counter in sorted(model.lm_.counts.items())],
            "vocab": sorted(model.lm_.vocab),
        },
        "lexicon": [
            [key, [[list(ms), c] for ms, c in sorted(counter.items())]]
            for key, counter in sorted(model.lexicon_.items())
        ],
        "oov_structure": list(model.oov_structure_),
        "n_pairs": model.n_pairs_,
    }
    Path(path).write_text(json.dumps(doc, ensure_ascii=False, sort_keys=True), encoding="utf-8")


def load_model(path: str | Path) -> ArabishTransliterator:
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    if doc.get("format") != FORMAT_NAME:
        raise ValueError(f"not an {FORMAT_NAME} file: {path}")
    if doc.get("format_version") != FORMAT_VERSION:
        raise ValueError(f"unsupported format version {doc.get('format_version')}")

    mapping = MappingTable([MappingEntry(v, a, ipa, bool(lw)) for v, a, ipa, lw in doc["mapping"]])
    clitics = CliticInventory(
        [CliticEntry(tuple(forms), arabic, kind, pos) for forms, arabic, kind, pos in doc["clitics"]]
    )
    exceptions = ExceptionLexicon(
        frozenset(doc["exceptions"]["glottal"]),
        frozenset(doc["exceptions"]["loanwords"]),
        frozenset(doc["exceptions"]["code_switch"]),
    )
    model = ArabishTransliterator(mapping=mapping, clitics=clitics, lexicon=exceptions, **doc["params"])
    model.mapping_ = mapping
    model.clitics_ = clitics
    model.exceptions_ = exceptions
    model.channel_counts_ = {u: Counter(c) for u, c in doc["channel_counts"].items()}
    model.channel_ = {
        u: model._normalize_row(u, counts) for u, counts in model.channel_counts_.items()
    }
    lm = _NgramLm(model.ngram_order, model.add_k)
    lm.vocab = set(doc["lm"]["vocab"])
    lm.counts = {tuple(ctx): Counter(counter) for ctx, counter in doc["lm"]["counts"]}
    model.lm_ = lm
    model.lexicon_ = {
        key: Counter({tuple(ms): c for ms, c in pairs}) for key, pairs in doc["lexicon"]
    }
    model.oov_structure_ = tuple(doc["oov_structure"])
    model.n_pairs_ = doc["n_pairs"]
    return model


def lattice_for(token: str, loanword: bool = False, mapping: MappingTable | None = None) -> Lattice:
    """Expose the raw candidate lattice for a normalized token (CLI helper)."""
    return expand(token, loanword, mapping)
