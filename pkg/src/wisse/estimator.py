"""scikit-learn transformer around the composer."""

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import check_n_jobs, check_sentences, resolve_stopwords
from .composer import embed_batch
from .embeddings import EmbeddingTable
from .entropy import CorpusStats, WeightingConfig, fit_stats
from .similarity import score


class WisseVectorizer(TransformerMixin, BaseEstimator):
    """Embed sentences as TF-IDF weighted series of word embeddings.

    Parameters
    ----------
    embeddings : EmbeddingTable
        Pretrained word vectors.
    weights : str, default="loc-tfidf"
        Weighting name, e.g. ``"glob-tfidf-bin-st"``, ``"loc-idf"`` or
        ``"unweighted"``. ``loc-*`` weightings are fitted on the sentences
        passed to :meth:`fit`; ``glob-*`` weightings use ``global_stats``.
    combination : {"sum", "avg"}, default="sum"
    idf_variant : {"plain", "smoothed"}, default="plain"
    oov_policy : {"df_one_fallback", "skip"}, default="df_one_fallback"
    dedupe_tokens : bool, default=True
    l2_normalize_weights : bool, default=False
    strip_at_fit : bool, default=False
        Remove stopwords before counting document frequencies (``-st``
        weightings only).
    stopwords : StopwordList or iterable of str, optional
        Defaults to the bundled English list.
    min_token_len : int, default=1
    global_stats : CorpusStats, optional
    n_jobs : int, default=1

    Attributes
    ----------
    config_ : WeightingConfig
    stats_ : CorpusStats or None
    """

    def __init__(self, embeddings=None, weights="loc-tfidf", combination="sum", idf_variant="plain",
                 oov_policy="df_one_fallback", dedupe_tokens=True, l2_normalize_weights=False,
                 strip_at_fit=False, stopwords=None, min_token_len=1, global_stats=None, n_jobs=1):
        self.embeddings = embeddings
        self.weights = weights
        self.combination = combination
        self.idf_variant = idf_variant
        self.oov_policy = oov_policy
        self.dedupe_tokens = dedupe_tokens
        self.l2_normalize_weights = l2_normalize_weights
        self.strip_at_fit = strip_at_fit
        self.stopwords = stopwords
        self.min_token_len = min_token_len
        self.global_stats = global_stats
        self.n_jobs = n_jobs

    def fit(self, X, y=None):
        """Fit local statistics on ``X`` (raw strings or token sequences)."""
        if not isinstance(self.embeddings, EmbeddingTable):
            raise ValueError("embeddings must be an EmbeddingTable")
        check_n_jobs(self.n_jobs)
        cfg = WeightingConfig.from_string(
            self.weights, combination=self.combination, idf_variant=self.idf_variant,
            oov_idf_policy=self.oov_policy, dedupe_tokens=self.dedupe_tokens,
            l2_normalize_weights=self.l2_normalize_weights, strip_at_fit=self.strip_at_fit)
        self._stopwords = resolve_stopwords(self.stopwords)
        if not cfg.needs_stats:
            stats = None
        elif cfg.scope == "global":
            if not isinstance(self.global_stats, CorpusStats):
                raise ValueError(f"weighting {cfg.name!r} requires global_stats")
            stats = self.global_stats
            if stats.variant != cfg.idf_variant:
                stats = stats.with_variant(cfg.idf_variant)
        else:
            sentences = check_sentences(X, self.min_token_len)
            strip = cfg.strip_stopwords and cfg.strip_at_fit
            stats = fit_stats(sentences, cfg.idf_variant, self._stopwords if strip else None)
        self.config_ = cfg
        self.stats_ = stats
        self.n_features_out_ = self.embeddings.dimension
        return self

    def embed(self, X):
        """Composed :class:`~wisse.composer.SentenceVector` objects for ``X``."""
        check_is_fitted(self, "config_")
        sentences = check_sentences(X, self.min_token_len)
        return embed_batch(sentences, self.embeddings, self.stats_, self.config_, self._stopwords, self.n_jobs)

    def transform(self, X):
        """Sentence vectors as a float64 array of shape (n_sentences, dimension)."""
        vecs = self.embed(X)
        if not vecs:
            return np.empty((0, self.n_features_out_))
        return np.vstack([v.values for v in vecs])

    def score_pairs(self, A, B, metric="cosine"):
        """Similarity score for each aligned pair of sentences."""
        va, vb = self.transform(A), self.transform(B)
        if len(va) != len(vb):
            raise ValueError(f"{len(va)} left sentences but {len(vb)} right sentences")
        return np.array([score(a, b, metric) for a, b in zip(va, vb)])

    def get_feature_names_out(self, input_features=None):
        check_is_fitted(self, "config_")
        return np.array([f"wisse{i}" for i in range(self.n_features_out_)], dtype=object)
