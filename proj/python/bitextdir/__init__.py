"""Translation-direction analysis and pseudo quality-estimation labelling."""

from ._bitextdir import (
    BitextdirError,
    DirectionModel,
    classify_pair,
    combine_side_scores,
    forge,
    js_divergence,
    kl_divergence,
    levenshtein_distance,
    lexical_density,
    macro_f1,
    mcc,
    pearson,
    ter,
    tokenize,
    ttr,
    validate_format,
    vocab_distribution,
)

__all__ = [
    "BitextdirError",
    "DirectionModel",
    "classify_pair",
    "combine_side_scores",
    "forge",
    "js_divergence",
    "kl_divergence",
    "levenshtein_distance",
    "lexical_density",
    "macro_f1",
    "mcc",
    "pearson",
    "ter",
    "tokenize",
    "ttr",
    "validate_format",
    "vocab_distribution",
]
