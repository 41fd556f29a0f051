"""Input coercion helpers shared by the estimator, the composer and the CLI."""

from .embeddings import EmbeddingTable
from .entropy import CorpusStats, WeightingConfig
from .text import SentenceTokens, StopwordList, default_stopwords, tokenize


def as_sentence(x, min_token_len=1):
    """Coerce a raw string, a token sequence or SentenceTokens to SentenceTokens."""
    if isinstance(x, SentenceTokens):
        return x
    if isinstance(x, str):
        return tokenize(x, min_token_len)
    try:
        tokens = tuple(x)
    except TypeError:
        raise TypeError(f"cannot interpret {type(x).__name__} as a sentence") from None
    if not all(isinstance(t, str) for t in tokens):
        raise TypeError("token sequences must contain only strings")
    return SentenceTokens(tokens, " ".join(tokens))


def check_sentences(X, min_token_len=1):
    """Coerce an iterable of sentences; a bare string is rejected."""
    if isinstance(X, (str, bytes)):
        raise ValueError("expected an iterable of sentences, got a single string")
    return [as_sentence(x, min_token_len) for x in X]


def check_n_jobs(n_jobs):
    if n_jobs is None:
        return 1
    n_jobs = int(n_jobs)
    if n_jobs < 1:
        raise ValueError(f"n_jobs must be >= 1, got {n_jobs}")
    return n_jobs


def check_config(cfg):
    if isinstance(cfg, str):
        return WeightingConfig.from_string(cfg)
    if not isinstance(cfg, WeightingConfig):
        raise TypeError(f"expected WeightingConfig, got {type(cfg).__name__}")
    return cfg


def check_inputs(table, stats, cfg):
    if not isinstance(table, EmbeddingTable):
        raise TypeError(f"expected EmbeddingTable, got {type(table).__name__}")
    cfg = check_config(cfg)
    if cfg.needs_stats and not isinstance(stats, CorpusStats):
        raise ValueError(f"weighting {cfg.name!r} requires fitted CorpusStats")
    return cfg


def resolve_stopwords(stopwords):
    if stopwords is None:
        return default_stopwords()
    if isinstance(stopwords, StopwordList):
        return stopwords
    return StopwordList(frozenset(stopwords), "user")
