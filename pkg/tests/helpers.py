"""Shared fixtures, independent oracles, and synthetic data generators.

Oracles here deliberately re-derive candidate spaces by brute force
(bitmask tilings, full cartesian products, recursive clitic splits) so the
library's dynamic programming and search have something independent to be
checked against.
"""

from __future__ import annotations

import random
from itertools import product

from arabish.clitics import CliticInventory
from arabish.corpus import AGE_RANGES, MISSING, TokenRecord
from arabish.graphemes import MappingTable
from arabish.normalize import detect_negation_circumfix
from arabish.transducer import TrainingPair

# --------------------------------------------------------------- fixtures

# The annotated excerpt: one sentence per source table, shared metadata.
_META = dict(cor="3fE", textco="150902", var="Bnz", age="25-35", gen="M")


def _rec(par, w, arabish, tra, ita, lem, pos):
    return TokenRecord(
        _META["cor"], _META["textco"], par, w, arabish, tra, ita, lem, pos,
        _META["var"], _META["age"], _META["gen"],
    )


TABLE3_RECORDS = [
    _rec(2, "1", "kifech", "كيفاش", "come", "كيفاش", "adv"),
    _rec(2, "2", "tchoufou", "تشوفوا", "vi pare", "شاف", "verb"),
    _rec(2, "3-4", "l3icha", "العيشة", "la vita", "عيشة", "noun"),
    _rec(2, "3", "l", "الـ", "-", "الـ", "det"),
    _rec(2, "4", "3icha", "عيشة", "-", "عيشة", "noun"),
    _rec(2, "5-6", "fil", "فالـ", "all'", "في", "prep"),
    _rec(2, "5", "f", "فـ", "-", "في", "prep"),
    _rec(2, "6", "il", "الـ", "-", "الـ", "det"),
    _rec(2, "7", "4orba", "غربة", "estero", "غربة", "noun"),
    _rec(2, "8", "?", "؟", "?", "؟", "pct"),
]

TABLE4_RECORDS = [
    _rec(3, "4", "konna", "كنّا", "siamo stati", "كان", "verb"),
    _rec(3, "5", "far7anin", "فرحانين", "contenti", "فرحان", "adj"),
    _rec(3, "6", ",", ",", ",", ",", "punct"),
    _rec(3, "7", "merci", "مرسي", "grazie", "مرسي", "intj"),
]

TABLE5_RECORDS = [
    _rec(4, "1", "R7", "recette", "ricetta", "recette", "noun"),
    _rec(4, "2", "patee", "pâté", "patè", "pâté", "noun"),
    _rec(4, "3", "dieri", "دياري", "fatto in casa", "دياري", "adj"),
    _rec(4, "4", "w", "و", "e", "و", "cconj"),
    _rec(4, "5", "bniiiiin", "بنين", "buonissimo", "بنين", "adj"),
]

TABLE6_RECORDS = [
    _rec(5, "1", "Mtala9", "مطلق", "divorziato", "مطلق", "noun"),
    _rec(5, "2", "min", "من", "da", "من", "noun"),
    _rec(5, "3", "gawriya", "ڨاورية", "(un')europea", "ڨاوري", "adj"),
]

TABLE7_RECORDS = [
    _rec(6, "14-15", "manajemnech", "ما نجمناش", "non abbiam potuto", "نجّم", "verb"),
    _rec(6, "14", "ma + ch", "ما+ش", "-", "ما+ش", "part"),
    _rec(6, "15", "najemne", "نجمنا", "-", "نجّم", "verb"),
]

FIXTURE_RECORDS = (
    TABLE3_RECORDS + TABLE4_RECORDS + TABLE5_RECORDS + TABLE6_RECORDS + TABLE7_RECORDS
)

# Every transcribable token across the excerpt tables with its gold morphemes.
GOLD_FIXTURES = [
    ("kifech", ("كيفاش",)),
    ("tchoufou", ("تشوفوا",)),
    ("l3icha", ("الـ", "عيشة")),
    ("fil", ("فـ", "الـ")),
    ("4orba", ("غربة",)),
    ("konna", ("كنّا",)),
    ("far7anin", ("فرحانين",)),
    ("dieri", ("دياري",)),
    ("w", ("و",)),
    ("bniiiiin", ("بنين",)),
    ("Mtala9", ("مطلق",)),
    ("min", ("من",)),
    ("gawriya", ("ڨاورية",)),
    ("manajemnech", ("ما+ش", "نجمنا")),
    ("merci", ("مرسي",)),
]

GOLD_PAIRS = [TrainingPair(t, m) for t, m in GOLD_FIXTURES]


def fixture_model(**params):
    from arabish.transducer import ArabishTransliterator, pairs_to_xy

    return ArabishTransliterator(**params).fit(*pairs_to_xy(GOLD_PAIRS))


# ----------------------------------------------------------- tile oracles


def brute_tilings(token: str, table: MappingTable) -> list[tuple[str, ...]]:
    """All unit tilings via split-point bitmasks: every unit must be a known
    variant, a geminate double, or a single character."""
    text = token.lower()
    n = len(text)
    out = []
    for mask in range(2 ** max(0, n - 1)):
        cuts = [0] + [i + 1 for i in range(n - 1) if mask & (1 << i)] + [n]
        units = tuple(text[a:b] for a, b in zip(cuts, cuts[1:]))
        if all(
            len(u) == 1 or table.is_variant(u) or table.is_geminate_unit(u) for u in units
        ):
            out.append(units)
    return out


def brute_paths(token: str, loanword: bool, table: MappingTable) -> set[str]:
    """All candidate strings by full cartesian product over all tilings."""
    paths: set[str] = set()
    for units in brute_tilings(token, table):
        cand_sets = [table.candidates(u, loanword) for u in units]
        for choice in product(*cand_sets):
            paths.add("".join(choice))
    return paths


def brute_clitic_splits(token: str, inv: CliticInventory) -> list[list[tuple[str, str, str | None]]]:
    """Independent clitic splitter: (text, kind, fixed arabic) part lists.

    Mirrors the documented licensing rules: proclitic* stem enclitic*, an
    all-proclitic tiling of two or more parts, circumfix negation, and the
    trivial stem.
    """
    splits: list[list[tuple[str, str, str | None]]] = [[(token, "stem", None)]]
    neg = detect_negation_circumfix(token)
    if neg:
        pre, stem, suf = neg
        splits.append(
            [(pre, "neg_prefix", "ما"), (stem, "stem", None), (suf, "neg_suffix", "ش")]
        )

    pro_forms = [(f, e.arabic) for e in inv.proclitics for f in e.forms]
    enc_forms = [(f, e.arabic) for e in inv.enclitics for f in e.forms]

    def rec_pro(rest: str, acc: list):
        yield rest, list(acc)
        if len(acc) >= 3:
            return
        for form, arabic in pro_forms:
            if rest.startswith(form):
                acc.append((form, "proclitic", arabic))
                yield from rec_pro(rest[len(form):], acc)
                acc.pop()

    def rec_enc(rest: str, acc: list):
        yield rest, list(reversed(acc))
        if len(acc) >= 2:
            return
        for form, arabic in enc_forms:
            if rest.endswith(form) and len(rest) > len(form):
                acc.append((form, "enclitic", arabic))
                yield from rec_enc(rest[: -len(form)], acc)
                acc.pop()

    seen = {tuple((t, k) for t, k, _ in s): s for s in splits}
    for mid, pros in rec_pro(token, []):
        if not mid and len(pros) >= 2:
            key = tuple((t, k) for t, k, _ in pros)
            seen.setdefault(key, pros)
            continue
        for stem, encs in rec_enc(mid, []):
            if stem:
                parts = pros + [(stem, "stem", None)] + encs
                key = tuple((t, k) for t, k, _ in parts)
                seen.setdefault(key, parts)
    return list(seen.values())


def brute_candidate_sequences(
    token: str, loanword: bool, table: MappingTable, inv: CliticInventory
) -> set[tuple[tuple[str, ...], tuple[tuple[tuple[str, str], ...], ...]]]:
    """Full candidate space: (morpheme sequence, per-part unit/slice groups).

    Slices are included so a scorer can recompute channel sums path by path.
    """
    out = set()
    for parts in brute_clitic_splits(token, inv):
        kinds = [k for _, k, _ in parts]
        if "neg_prefix" in kinds and "neg_suffix" in kinds:
            # merged particle corpus row precedes the remaining parts
            parts = [("ma + ch", "neg_particle", "ما+ش")] + [
                p for p in parts if p[1] not in ("neg_prefix", "neg_suffix")
            ]
        per_part: list[list[tuple[str, tuple[tuple[str, str], ...]]]] = []
        for text, kind, arabic in parts:
            if kind != "stem":
                per_part.append([(arabic, ())])
                continue
            options = []
            for units in brute_tilings(text, table):
                cand_sets = [table.candidates(u, loanword) for u in units]
                for choice in product(*cand_sets):
                    options.append(("".join(choice), tuple(zip(units, choice))))
            per_part.append(options)
        for combo in product(*per_part):
            morphemes = tuple(text for text, _ in combo)
            slice_groups = tuple(pairs for _, pairs in combo)
            out.add((morphemes, slice_groups))
    return out


def brute_argmax(model, token: str, loanword: bool):
    """Exhaustive argmax over the brute-force candidate space, scored with the
    model's channel/LM primitives; ties resolve to the smallest sequence."""
    norm = model._normalize(token)
    best: dict[tuple[str, ...], float] = {}
    for morphemes, slice_groups in brute_candidate_sequences(
        norm, loanword, model.mapping_, model.clitics_
    ):
        channel = 0.0
        for group in slice_groups:
            part_sum = 0.0
            for unit, slc in group:
                part_sum += model.channel_logprob(unit, slc)
            channel += part_sum
        score = model.sequence_score(morphemes, channel)
        if morphemes not in best or score > best[morphemes]:
            best[morphemes] = score
    return sorted(best.items(), key=lambda kv: (-kv[1], kv[0]))[0]


# ------------------------------------------------------ record generation

_LATIN = "abcdefghijklmnopqrstuvwxyz0123456789"
_ARABIC = "ابتثجحخدذرزسشصضطظعغفقكلمنهوي"
_POS = ["noun", "verb", "adj", "adv", "det", "prep", "cconj", "intj", "punct", "part"]


def random_records(n: int, seed: int) -> list[TokenRecord]:
    """About n schema-valid records including range groups."""
    rng = random.Random(seed)
    records: list[TokenRecord] = []
    w = 0
    par = 1

    def word(alphabet, lo=1, hi=8):
        return "".join(rng.choice(alphabet) for _ in range(rng.randint(lo, hi)))

    def annotations():
        return dict(
            tra=word(_ARABIC) if rng.random() < 0.8 else MISSING,
            ita=word("abcdefg") if rng.random() < 0.8 else MISSING,
            lem=word(_ARABIC),
            pos=rng.choice(_POS),
            var=rng.choice(["Bnz", "Tun", "Sfx", MISSING]),
            age=rng.choice(list(AGE_RANGES) + [MISSING]),
            gen=rng.choice(["M", "F", MISSING]),
        )

    meta = dict(cor="3fE", textco="150902")
    while len(records) < n:
        if rng.random() < 0.3:
            par += 1
            w = 0
        if rng.random() < 0.2:
            k = rng.randint(2, 3)
            pieces = [word(_LATIN, 1, 4) for _ in range(k)]
            lo, hi = w + 1, w + k
            records.append(
                TokenRecord(meta["cor"], meta["textco"], par, f"{lo}-{hi}",
                            "".join(pieces), **annotations())
            )
            for i, piece in enumerate(pieces):
                records.append(
                    TokenRecord(meta["cor"], meta["textco"], par, str(lo + i),
                                piece, **annotations())
                )
            w += k
        else:
            w += 1
            records.append(
                TokenRecord(meta["cor"], meta["textco"], par, str(w),
                            word(_LATIN), **annotations())
            )
    return records


# --------------------------------------------------- synthetic transducer

# Units whose concatenations never re-tile (no digraphs, no doubles allowed
# when sampling): alignment and decoding are unambiguous by construction.
SYNTH_DETERMINISTIC = {
    "b": "ب", "f": "ف", "k": "ك", "l": "ل", "m": "م", "r": "ر",
    "z": "ز", "j": "ج", "2": "ء", "3": "ع", "7": "ح", "5": "خ",
    "8": "ه", "4": "غ", "6": "ط",
}
SYNTH_AMBIGUOUS = {
    "t": (("ت", 0.7), ("ط", 0.3)),
    "d": (("د", 0.6), ("ض", 0.4)),
    "s": (("س", 0.8), ("ص", 0.2)),
}


def synth_weights() -> dict[str, dict[str, float]]:
    weights = {u: {g: 1.0} for u, g in SYNTH_DETERMINISTIC.items()}
    weights.update({u: dict(opts) for u, opts in SYNTH_AMBIGUOUS.items()})
    return weights


def synth_corpus(
    n_pairs: int, seed: int, ambiguous_fraction: float = 0.1
) -> tuple[list[TrainingPair], list[bool]]:
    """Sample pairs by emitting Arabish from Arabic graphemes with the known
    channel weights; returns pairs and per-pair all-deterministic flags."""
    rng = random.Random(seed)
    det_units = sorted(SYNTH_DETERMINISTIC)
    amb_units = sorted(SYNTH_AMBIGUOUS)
    pairs: list[TrainingPair] = []
    unambiguous: list[bool] = []
    for _ in range(n_pairs):
        length = rng.randint(3, 6)
        use_ambiguous = rng.random() < ambiguous_fraction
        units: list[str] = []
        while len(units) < length:
            if use_ambiguous and rng.random() < 0.5:
                unit = rng.choice(amb_units)
            else:
                unit = rng.choice(det_units)
            if units and units[-1] == unit:
                continue  # no doubles: keeps tiling and alignment unique
            units.append(unit)
        if use_ambiguous and not any(u in SYNTH_AMBIGUOUS for u in units):
            units[rng.randrange(len(units))] = rng.choice(amb_units)
        arabic = []
        for u in units:
            if u in SYNTH_DETERMINISTIC:
                arabic.append(SYNTH_DETERMINISTIC[u])
            else:
                graphemes, probs = zip(*SYNTH_AMBIGUOUS[u])
                arabic.append(rng.choices(graphemes, probs)[0])
        pairs.append(TrainingPair("".join(units), ("".join(arabic),)))
        unambiguous.append(all(u in SYNTH_DETERMINISTIC for u in units))
    return pairs, unambiguous


def random_unit_token(rng: random.Random, table: MappingTable, max_units: int = 6) -> str:
    """A random token assembled from 1..max_units mapping variants."""
    variants = sorted(table.variants)
    n = rng.randint(1, max_units)
    token = "".join(rng.choice(variants) for _ in range(n))
    # prosody collapse would reshape runs of 3+; avoid by construction
    while any(token[i] == token[i + 1] == token[i + 2] for i in range(len(token) - 2)):
        token = "".join(rng.choice(variants) for _ in range(n))
    return token
