"""Sentence vectors as weighted series of word embeddings.

A sentence ``s`` is embedded as ``sum_w weight(w, s) * x_w`` over the words of
``s`` that have an embedding, optionally divided by the number of such words.
Accumulation is in float64, row by row in surface order.
"""

import math
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from ._validation import as_sentence, check_inputs, check_n_jobs, resolve_stopwords
from .entropy import _raw_weight

__all__ = ["SentenceVector", "embed_sentence", "embed_batch", "sentence_weights"]


@dataclass(frozen=True, eq=False)
class SentenceVector:
    values: np.ndarray
    contributing: int
    skipped_oov: int

    def __eq__(self, other):
        if not isinstance(other, SentenceVector):
            return NotImplemented
        return (self.contributing == other.contributing and self.skipped_oov == other.skipped_oov
                and np.array_equal(self.values, other.values))

    __hash__ = None


def sentence_weights(sentence, stats, cfg, stopwords=None):
    """Ordered ``(token, weight)`` units of the series for ``sentence``.

    Stopwords are removed first when ``cfg.strip_stopwords``; units omitted by
    the ``skip`` OOV policy are left out.
    """
    tokens = as_sentence(sentence).tokens
    if cfg.strip_stopwords:
        words = resolve_stopwords(stopwords).words
        tokens = [t for t in tokens if t not in words]
    counts = Counter(tokens)
    units = counts if cfg.dedupe_tokens else tokens
    out = []
    for tok in units:
        w = _raw_weight(tok, counts[tok], stats, cfg)
        if w is not None:
            out.append((tok, w))
    if cfg.l2_normalize_weights and cfg.scheme != "unweighted":
        norm = math.sqrt(math.fsum(w * w for _, w in out))
        if norm > 0.0:
            out = [(t, w / norm) for t, w in out]
    return out


def embed_sentence(sentence, table, stats, cfg, stopwords=None):
    """Compose the sentence vector of ``sentence``.

    Parameters
    ----------
    sentence : SentenceTokens, str or sequence of str
    table : EmbeddingTable
    stats : CorpusStats or None
        May be None for the unweighted scheme.
    cfg : WeightingConfig or str
    stopwords : StopwordList, optional
        Used when ``cfg.strip_stopwords``; defaults to the bundled list.

    Returns
    -------
    SentenceVector
        All-OOV and empty sentences give a zero vector with ``contributing == 0``.
    """
    cfg = check_inputs(table, stats, cfg)
    return _embed(as_sentence(sentence), table, stats, cfg, stopwords)


def _embed(sentence, table, stats, cfg, stopwords):
    rows = []
    weights = []
    skipped = 0
    index = table.index
    for tok, w in sentence_weights(sentence, stats, cfg, stopwords):
        i = index(tok)
        if i is None:
            skipped += 1
        else:
            rows.append(i)
            weights.append(w)
    if not rows:
        return SentenceVector(np.zeros(table.dimension), 0, skipped)
    block = table.vectors[rows].astype(np.float64)
    block *= np.array(weights)[:, None]
    # axis-0 reduction accumulates row after row
    values = block.sum(axis=0)
    if cfg.combination == "avg":
        values /= len(rows)
    return SentenceVector(values, len(rows), skipped)


def embed_batch(sentences, table, stats, cfg, stopwords=None, n_jobs=1):
    """Embed many sentences; output order and values match sequential calls."""
    cfg = check_inputs(table, stats, cfg)
    sentences = [as_sentence(s) for s in sentences]
    n_jobs = check_n_jobs(n_jobs)
    if n_jobs == 1 or len(sentences) < 2:
        return [_embed(s, table, stats, cfg, stopwords) for s in sentences]
    with ThreadPoolExecutor(max_workers=n_jobs) as pool:
        return list(pool.map(lambda s: _embed(s, table, stats, cfg, stopwords), sentences,
                             chunksize=max(1, len(sentences) // (4 * n_jobs))))
