"""Entropy-based word weights (TF-IDF) fitted on a corpus of sentences.

Every line of a corpus is one document. For a corpus of ``N_S`` documents in
which token ``w`` occurs in ``N_w`` of them:

* sentence entropy        ``H(S)   = ln N_S``
* word conditional entropy ``H(S|w) = ln N_w``
* IDF component           ``idf(w) = H(S) - H(S|w) = ln(N_S / N_w)``

and the TF of ``w`` in sentence ``s`` is ``f/F``, ``[f>0]/F`` or
``ln(f+1)/F`` (frequency, binary, log) where ``F`` counts every token of the
corpus. A word's weight in a sentence is ``tf * idf``.
"""

import io
import math
import struct
from collections import Counter
from dataclasses import dataclass, field, replace
from types import MappingProxyType

from .exceptions import EmptyCorpusError, StatsFormatError, StatsVersionError
from .text import SentenceTokens, strip_stopwords

__all__ = [
    "CorpusStats",
    "WeightingConfig",
    "fit_stats",
    "sentence_entropy",
    "word_conditional_entropy",
    "corpus_mutual_information",
    "term_frequencies",
    "tf_value",
    "word_weight",
    "save_stats",
    "load_stats",
]

SCHEMES = ("tfidf", "idf_only", "unweighted")
TF_MODES = ("binary", "frequency", "log")
SCOPES = ("global", "local")
COMBINATIONS = ("sum", "avg")
IDF_VARIANTS = ("plain", "smoothed")
OOV_POLICIES = ("df_one_fallback", "skip")

STATS_MAGIC = b"WISSESTATS"
STATS_VERSION = 1


def _idf(n_sentences, df, variant):
    if variant == "plain":
        return math.log(n_sentences / df)
    return math.log((1 + n_sentences) / (1 + df)) + 1.0


@dataclass(frozen=True)
class CorpusStats:
    """Fitted corpus statistics.

    ``idf_scale`` multiplies every IDF component (1.0 for the fitted model);
    it exists to probe scale invariance and is not persisted.
    """

    n_sentences: int
    doc_freq: dict
    total_tokens: int
    variant: str = "plain"
    idf_scale: float = 1.0
    idf: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.variant not in IDF_VARIANTS:
            raise ValueError(f"unknown idf variant {self.variant!r}")
        if self.n_sentences < 1:
            raise ValueError("n_sentences must be positive")
        if self.total_tokens < 1:
            raise ValueError("total_tokens must be positive")
        if not self.idf_scale > 0:
            raise ValueError("idf_scale must be positive")
        for tok, df in self.doc_freq.items():
            if not 1 <= df <= self.n_sentences:
                raise ValueError(f"doc_freq[{tok!r}] = {df} outside [1, {self.n_sentences}]")
        n, v, c = self.n_sentences, self.variant, self.idf_scale
        object.__setattr__(self, "doc_freq", MappingProxyType(dict(self.doc_freq)))
        object.__setattr__(self, "idf", MappingProxyType(
            {tok: c * _idf(n, df, v) for tok, df in self.doc_freq.items()}))

    @property
    def vocabulary_size(self):
        return len(self.doc_freq)

    @property
    def unseen_idf(self):
        """IDF of a token never seen at fit time, treated as ``N_w = 1``."""
        return self.idf_scale * _idf(self.n_sentences, 1, self.variant)

    def idf_of(self, token, oov_policy="df_one_fallback"):
        """IDF of ``token``; None for an unseen token under the ``skip`` policy."""
        value = self.idf.get(token)
        if value is None and oov_policy == "df_one_fallback":
            return self.unseen_idf
        return value

    def with_variant(self, variant):
        return replace(self, variant=variant)

    def with_idf_scale(self, scale):
        return replace(self, idf_scale=scale)

    def __eq__(self, other):
        if not isinstance(other, CorpusStats):
            return NotImplemented
        return (self.n_sentences, self.total_tokens, self.variant, self.idf_scale, dict(self.doc_freq)) == (
            other.n_sentences, other.total_tokens, other.variant, other.idf_scale, dict(other.doc_freq))

    __hash__ = None


@dataclass(frozen=True)
class WeightingConfig:
    """One weighting scheme of the hyperparameter grid.

    Use :meth:`from_string` to build one from names such as
    ``glob-tfidf-bin-st``, ``loc-idf`` or ``unweighted``.
    """

    scheme: str = "tfidf"
    tf_mode: str = "frequency"
    scope: str = "local"
    strip_stopwords: bool = False
    combination: str = "sum"
    idf_variant: str = "plain"
    oov_idf_policy: str = "df_one_fallback"
    dedupe_tokens: bool = True
    l2_normalize_weights: bool = False
    strip_at_fit: bool = False

    def __post_init__(self):
        for name, allowed in (("scheme", SCHEMES), ("tf_mode", TF_MODES), ("scope", SCOPES),
                              ("combination", COMBINATIONS), ("idf_variant", IDF_VARIANTS),
                              ("oov_idf_policy", OOV_POLICIES)):
            if getattr(self, name) not in allowed:
                raise ValueError(f"{name} must be one of {allowed}, got {getattr(self, name)!r}")

    @classmethod
    def from_string(cls, weights, **kwargs):
        """Parse a weighting name: ``(glob|loc)-(tfidf|idf)[-bin|-log][-st]`` or ``unweighted[-st]``."""
        parts = weights.strip().split("-")
        strip = parts[-1] == "st"
        if strip:
            parts = parts[:-1]
        if parts == ["unweighted"]:
            return cls(scheme="unweighted", strip_stopwords=strip, **kwargs)
        if len(parts) < 2 or parts[0] not in ("glob", "loc") or parts[1] not in ("tfidf", "idf"):
            raise ValueError(f"unrecognized weighting {weights!r}")
        scope = "global" if parts[0] == "glob" else "local"
        tf_mode = "frequency"
        rest = parts[2:]
        if rest:
            if len(rest) != 1 or rest[0] not in ("bin", "log") or parts[1] != "tfidf":
                raise ValueError(f"unrecognized weighting {weights!r}")
            tf_mode = "binary" if rest[0] == "bin" else "log"
        scheme = "tfidf" if parts[1] == "tfidf" else "idf_only"
        return cls(scheme=scheme, tf_mode=tf_mode, scope=scope, strip_stopwords=strip, **kwargs)

    @property
    def name(self):
        """Canonical weighting name, the inverse of :meth:`from_string`."""
        if self.scheme == "unweighted":
            base = "unweighted"
        else:
            base = ("glob" if self.scope == "global" else "loc") + "-"
            base += "tfidf" if self.scheme == "tfidf" else "idf"
            if self.scheme == "tfidf" and self.tf_mode != "frequency":
                base += "-bin" if self.tf_mode == "binary" else "-log"
        return base + ("-st" if self.strip_stopwords else "")

    @property
    def needs_stats(self):
        return self.scheme != "unweighted"


def _documents(corpus):
    for doc in corpus:
        yield doc.tokens if isinstance(doc, SentenceTokens) else tuple(doc)


def fit_stats(corpus, variant="plain", stopwords=None):
    """Count document frequencies over an iterable of tokenized documents.

    ``stopwords``, when given, are removed from every document before counting.
    """
    if variant not in IDF_VARIANTS:
        raise ValueError(f"unknown idf variant {variant!r}")
    doc_freq = Counter()
    n_docs = 0
    n_tokens = 0
    for tokens in _documents(corpus):
        if stopwords is not None:
            tokens = strip_stopwords(SentenceTokens(tokens), stopwords).tokens
        n_docs += 1
        n_tokens += len(tokens)
        doc_freq.update(set(tokens))
    if n_docs == 0:
        raise EmptyCorpusError("empty corpus")
    if n_tokens == 0:
        raise EmptyCorpusError("corpus contains no tokens")
    return CorpusStats(n_docs, dict(doc_freq), n_tokens, variant)


def term_frequencies(corpus):
    """Corpus-wide occurrence count of every token."""
    counts = Counter()
    for tokens in _documents(corpus):
        counts.update(tokens)
    return counts


def sentence_entropy(stats):
    return math.log(stats.n_sentences)


def word_conditional_entropy(stats, token, oov_policy="df_one_fallback"):
    """``ln N_w``; unseen tokens give 0 (fallback) or None (skip)."""
    df = stats.doc_freq.get(token)
    if df is None:
        return 0.0 if oov_policy == "df_one_fallback" else None
    return math.log(df)


def corpus_mutual_information(stats, term_freq):
    """Expected information gain ``sum_w f_w/F * (ln N_S - ln N_w)``."""
    h_s = math.log(stats.n_sentences)
    total = 0.0
    for tok in sorted(term_freq):
        f = term_freq[tok]
        if f:
            total += f / stats.total_tokens * (h_s - math.log(stats.doc_freq[tok]))
    return total


def _tf(count, mode, total_tokens):
    if count <= 0:
        return 0.0
    if mode == "frequency":
        return count / total_tokens
    if mode == "binary":
        return 1.0 / total_tokens
    return math.log(count + 1) / total_tokens


def tf_value(token, sentence, mode, total_tokens):
    tokens = sentence.tokens if isinstance(sentence, SentenceTokens) else sentence
    if mode not in TF_MODES:
        raise ValueError(f"unknown tf mode {mode!r}")
    return _tf(tokens.count(token), mode, total_tokens)


def _raw_weight(token, count, stats, cfg):
    """Weight of one token occurring ``count`` times; None means omit it."""
    if cfg.scheme == "unweighted":
        return 1.0
    idf = stats.idf_of(token, cfg.oov_idf_policy)
    if idf is None:
        return None
    if cfg.scheme == "idf_only":
        return idf
    return _tf(count, cfg.tf_mode, stats.total_tokens) * idf


def word_weight(token, sentence, stats, cfg):
    """Weight of ``token`` within ``sentence``; None when the OOV policy omits it."""
    tokens = sentence.tokens if isinstance(sentence, SentenceTokens) else sentence
    return _raw_weight(token, tokens.count(token), stats, cfg)


def save_stats(stats, stream=None):
    """Serialize ``stats``; returns the bytes when ``stream`` is None.

    Layout (little-endian): magic, u8 version, u64 N_S, u64 F, u64 token
    count, then per token u32 byte length, UTF-8 bytes, u64 doc_freq.
    Tokens are written in sorted order.
    """
    buf = io.BytesIO()
    buf.write(STATS_MAGIC)
    buf.write(struct.pack("<BQQQ", STATS_VERSION, stats.n_sentences, stats.total_tokens, len(stats.doc_freq)))
    for tok in sorted(stats.doc_freq):
        raw = tok.encode("utf-8")
        buf.write(struct.pack("<I", len(raw)))
        buf.write(raw)
        buf.write(struct.pack("<Q", stats.doc_freq[tok]))
    payload = buf.getvalue()
    if stream is None:
        return payload
    stream.write(payload)
    return None


def load_stats(stream, variant="plain"):
    """Inverse of :func:`save_stats`; IDF is recomputed for ``variant``."""
    data = stream if isinstance(stream, (bytes, bytearray)) else stream.read()
    data = bytes(data)
    if not data.startswith(STATS_MAGIC):
        raise StatsFormatError("not a statistics file (bad magic)")
    pos = len(STATS_MAGIC)
    if len(data) <= pos:
        raise StatsFormatError("truncated statistics file")
    if data[pos] != STATS_VERSION:
        raise StatsVersionError(f"unsupported statistics version {data[pos]}")
    try:
        _, n_sentences, total, n_tokens = struct.unpack_from("<BQQQ", data, pos)
        pos += struct.calcsize("<BQQQ")
        doc_freq = {}
        for _ in range(n_tokens):
            (length,) = struct.unpack_from("<I", data, pos)
            pos += 4
            if pos + length > len(data):
                raise StatsFormatError("truncated statistics file")
            tok = data[pos:pos + length].decode("utf-8")
            pos += length
            (doc_freq[tok],) = struct.unpack_from("<Q", data, pos)
            pos += 8
    except struct.error:
        raise StatsFormatError("truncated statistics file") from None
    except UnicodeDecodeError:
        raise StatsFormatError("corrupt token in statistics file") from None
    if pos != len(data):
        raise StatsFormatError("trailing bytes after statistics payload")
    if len(doc_freq) != n_tokens:
        raise StatsFormatError("duplicate tokens in statistics file")
    try:
        return CorpusStats(n_sentences, doc_freq, total, variant)
    except ValueError as exc:
        raise StatsFormatError(f"inconsistent statistics: {exc}") from None
