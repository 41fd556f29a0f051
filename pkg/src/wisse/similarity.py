"""Vector similarity scores where higher always means more similar."""

import enum
import math

import numpy as np

__all__ = ["MetricKind", "cosine", "euclidean", "manhattan", "score", "is_degenerate"]


class MetricKind(str, enum.Enum):
    COSINE = "cosine"
    EUCLIDEAN = "euclidean"
    MANHATTAN = "manhattan"

    def __str__(self):
        return self.value


def _pair(u, v):
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if u.ndim != 1 or u.shape != v.shape:
        raise ValueError(f"dimension mismatch: {u.shape} vs {v.shape}")
    return u, v


def is_degenerate(u, v):
    """True when either vector is all zeros."""
    return not (np.any(np.asarray(u)) and np.any(np.asarray(v)))


def cosine(u, v, return_degenerate=False):
    """Cosine similarity; 0.0 (flagged degenerate) when either norm is zero."""
    u, v = _pair(u, v)
    su = float(np.max(np.abs(u), initial=0.0))
    sv = float(np.max(np.abs(v), initial=0.0))
    if su == 0.0 or sv == 0.0:
        return (0.0, True) if return_degenerate else 0.0
    # rescale so tiny or huge entries do not under/overflow the squared norms
    u, v = u / su, v / sv
    nu = math.sqrt(float(np.dot(u, u)))
    nv = math.sqrt(float(np.dot(v, v)))
    value = min(1.0, max(-1.0, float(np.dot(u, v)) / (nu * nv)))
    return (value, False) if return_degenerate else value


def euclidean(u, v):
    u, v = _pair(u, v)
    diff = u - v
    return math.sqrt(float(np.dot(diff, diff)))


def manhattan(u, v):
    u, v = _pair(u, v)
    return float(np.abs(u - v).sum())


def score(u, v, kind):
    """Similarity of ``u`` and ``v``: the cosine, or a negated distance."""
    kind = MetricKind(kind)
    if kind is MetricKind.COSINE:
        return cosine(u, v)
    if kind is MetricKind.EUCLIDEAN:
        return -euclidean(u, v)
    return -manhattan(u, v)
