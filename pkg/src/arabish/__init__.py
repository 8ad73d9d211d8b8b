"""Tunisian Arabish processing toolkit.

Transliterates Latin-script (Arabish) tokens into Arabic-script morpheme
sequences through a grapheme candidate lattice scored by a trainable
channel + n-gram model, and drives the surrounding corpus workflow:
TSV schema, normalization rules, clitic segmentation, cross-validation,
and the incremental block annotation loop.
"""

from .clitics import CliticInventory, Segmentation, fuse_morphemes, segment, to_range_rows
from .corpus import (
    CorpusError,
    Sentence,
    TokenRecord,
    parse_tsv,
    reconstruct_sentences,
    write_tsv,
)
from .evaluate import (
    Block,
    CvReport,
    FoldPlan,
    auto_annotate,
    build_fold_plan,
    ingest_corrections,
    kfold_cv,
    make_block,
    partition_blocks,
)
from .graphemes import (
    GraphemeSegmentation,
    Lattice,
    MappingEntry,
    MappingTable,
    contains_path,
    expand,
    segment_graphemes,
)
from .normalize import (
    ExceptionLexicon,
    NormalizationReport,
    apply_glottal_policy,
    collapse_prosody,
    detect_code_switch,
    detect_negation_circumfix,
    filter_code_switch_sentences,
)
from .transducer import (
    ArabishTransliterator,
    Prediction,
    TrainingPair,
    corpus_to_pairs,
    load_model,
    save_model,
    token_accuracy,
)

__version__ = "0.1.0"

__all__ = [
    "ArabishTransliterator",
    "Block",
    "CliticInventory",
    "CorpusError",
    "CvReport",
    "ExceptionLexicon",
    "FoldPlan",
    "GraphemeSegmentation",
    "Lattice",
    "MappingEntry",
    "MappingTable",
    "NormalizationReport",
    "Prediction",
    "Segmentation",
    "Sentence",
    "TokenRecord",
    "TrainingPair",
    "apply_glottal_policy",
    "auto_annotate",
    "build_fold_plan",
    "collapse_prosody",
    "contains_path",
    "corpus_to_pairs",
    "detect_code_switch",
    "detect_negation_circumfix",
    "expand",
    "filter_code_switch_sentences",
    "fuse_morphemes",
    "ingest_corrections",
    "kfold_cv",
    "load_model",
    "make_block",
    "parse_tsv",
    "partition_blocks",
    "reconstruct_sentences",
    "save_model",
    "segment",
    "segment_graphemes",
    "to_range_rows",
    "token_accuracy",
    "write_tsv",
]
