"""Sentence embeddings as entropy-weighted series of pretrained word embeddings."""

__version__ = "0.1.0"

from .composer import SentenceVector, embed_batch, embed_sentence
from .embeddings import EmbeddingTable, load_embeddings, load_text_embeddings, load_word2vec_binary, lookup
from .entropy import (CorpusStats, WeightingConfig, corpus_mutual_information, fit_stats, load_stats,
                      save_stats, sentence_entropy, tf_value, word_conditional_entropy, word_weight)
from .evaluation import (EvalReport, GridSpec, bow_baseline, evaluate, fit_local_stats, grid_search,
                         pearson)
from .similarity import MetricKind, cosine, euclidean, manhattan, score
from .text import (SentenceTokens, STSDataset, StopwordList, default_stopwords, load_sts_dataset,
                   strip_stopwords, tokenize)

__all__ = [
    "CorpusStats", "EmbeddingTable", "EvalReport", "GridSpec", "MetricKind", "STSDataset",
    "SentenceTokens", "SentenceVector", "StopwordList", "WeightingConfig", "WisseVectorizer",
    "bow_baseline", "corpus_mutual_information", "cosine", "default_stopwords", "embed_batch",
    "embed_sentence", "euclidean", "evaluate", "fit_local_stats", "fit_stats", "grid_search",
    "load_embeddings", "load_stats", "load_sts_dataset", "load_text_embeddings", "load_word2vec_binary",
    "lookup", "manhattan", "pearson", "save_stats", "score", "sentence_entropy", "strip_stopwords",
    "tf_value", "tokenize", "word_conditional_entropy", "word_weight",
]


def __getattr__(name):
    # keeps scikit-learn off the import path of the CLI
    if name == "WisseVectorizer":
        from .estimator import WisseVectorizer

        return WisseVectorizer
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")
