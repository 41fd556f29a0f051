"""STS evaluation: Pearson correlation, grid search and the BoW baseline."""

import io
import itertools
import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from ._validation import check_inputs, check_n_jobs, resolve_stopwords
from .composer import _embed, sentence_weights
from .embeddings import load_embeddings
from .entropy import WeightingConfig, fit_stats
from .exceptions import EmptyCorpusError, UndefinedCorrelationError, WisseError
from .similarity import MetricKind, is_degenerate, score

__all__ = [
    "EvalReport",
    "GridSpec",
    "pearson",
    "evaluate",
    "evaluate_metrics",
    "fit_local_stats",
    "grid_search",
    "bow_baseline",
    "format_report_tsv",
    "format_report_jsonl",
    "parse_grid_spec",
    "weighted_mean",
]

ALL_METRICS = tuple(m.value for m in MetricKind)
OOV_ALIASES = {"fallback": "df_one_fallback", "df_one_fallback": "df_one_fallback", "skip": "skip"}


def pearson(x, y):
    """Sample Pearson correlation of two equal-length sequences.

    Raises
    ------
    UndefinedCorrelationError
        If either sequence is constant.
    """
    x = np.asarray(x, dtype=np.float64).ravel()
    y = np.asarray(y, dtype=np.float64).ravel()
    if x.size != y.size:
        raise ValueError(f"length mismatch: {x.size} vs {y.size}")
    if x.size < 2:
        raise ValueError("pearson needs at least two points")
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
        raise ValueError("pearson inputs must be finite")
    if np.all(x == x[0]) or np.all(y == y[0]):
        raise UndefinedCorrelationError("correlation undefined for a constant sequence")
    xc = x - math.fsum(x) / x.size
    yc = y - math.fsum(y) / y.size
    sxy = math.fsum(xc * yc)
    sxx = math.fsum(xc * xc)
    syy = math.fsum(yc * yc)
    if sxx == 0.0 or syy == 0.0:
        raise UndefinedCorrelationError("correlation undefined for a constant sequence")
    r = sxy / (math.sqrt(sxx) * math.sqrt(syy))
    return min(1.0, max(-1.0, r))


def weighted_mean(values, weights):
    """Weighted average, e.g. of per-dataset correlations weighted by pair count."""
    values = np.asarray(values, dtype=np.float64)
    weights = np.asarray(weights, dtype=np.float64)
    if values.shape != weights.shape or values.size == 0:
        raise ValueError("values and weights must be non-empty and aligned")
    total = math.fsum(weights)
    if total <= 0:
        raise ValueError("weights must sum to a positive value")
    return math.fsum(values * weights) / total


@dataclass
class EvalReport:
    weights: str
    combination: str
    embedding: str
    metric: str
    pearson: float = None
    n_pairs: int = 0
    degenerate_pairs: int = 0
    size: int = None
    idf_variant: str = "plain"
    oov_policy: str = "df_one_fallback"
    error: str = None
    config: WeightingConfig = field(default=None, repr=False, compare=False)

    @property
    def ok(self):
        return self.error is None

    @property
    def row_key(self):
        return "|".join((self.weights, self.combination, self.embedding, self.idf_variant, self.oov_policy))

    @property
    def key(self):
        """Canonical config string used to break ranking ties."""
        return self.row_key + "|" + self.metric

    def to_dict(self):
        d = asdict(self)
        d.pop("config")
        return d


def fit_local_stats(dataset, variant="plain", stopwords=None):
    """Fit statistics treating each side of every pair as one document."""
    if len(dataset) == 0:
        raise EmptyCorpusError("empty dataset")
    return fit_stats(dataset.sentences(), variant, stopwords)


def _embed_pairs(dataset, table, stats, cfg, stopwords, n_jobs):
    sentences = list(dataset.sentences())
    n_jobs = check_n_jobs(n_jobs)
    if n_jobs == 1:
        vecs = [_embed(s, table, stats, cfg, stopwords) for s in sentences]
    else:
        with ThreadPoolExecutor(max_workers=n_jobs) as pool:
            vecs = list(pool.map(lambda s: _embed(s, table, stats, cfg, stopwords), sentences))
    return [(vecs[i].values, vecs[i + 1].values) for i in range(0, len(vecs), 2)]


def _score_pairs(pairs, kind):
    scores = np.empty(len(pairs))
    degenerate = 0
    for i, (a, b) in enumerate(pairs):
        if is_degenerate(a, b):
            degenerate += 1
        # cosine of a zero vector is defined as 0; distances stay well-defined
        scores[i] = score(a, b, kind)
    return scores, degenerate


def evaluate_metrics(dataset, table, stats, cfg, metrics=ALL_METRICS, stopwords=None,
                     embedding_id=None, n_jobs=1):
    """Evaluate one configuration under several metrics, embedding each sentence once."""
    cfg = check_inputs(table, stats, cfg)
    if len(dataset) == 0:
        raise EmptyCorpusError("empty dataset")
    pairs = _embed_pairs(dataset, table, stats, cfg, stopwords, n_jobs)
    reports = []
    for kind in metrics:
        kind = MetricKind(kind)
        scores, degenerate = _score_pairs(pairs, kind)
        reports.append(EvalReport(
            weights=cfg.name, combination=cfg.combination,
            embedding=embedding_id if embedding_id is not None else table.source_meta,
            metric=kind.value, pearson=pearson(scores, dataset.gold), n_pairs=len(dataset),
            degenerate_pairs=degenerate, size=table.dimension, idf_variant=cfg.idf_variant,
            oov_policy=cfg.oov_idf_policy, config=cfg,
        ))
    return reports


def evaluate(dataset, table, stats, cfg, kind, stopwords=None, embedding_id=None, n_jobs=1):
    """Pearson correlation between composed-vector similarities and gold scores.

    ``stats`` is used as given; for local weighting it should come from
    :func:`fit_local_stats` on ``dataset``.
    """
    return evaluate_metrics(dataset, table, stats, cfg, (kind,), stopwords, embedding_id, n_jobs)[0]


@dataclass(frozen=True)
class GridSpec:
    """Axes of a hyperparameter grid.

    ``embeddings`` is a sequence of ``(name, source)`` pairs; a source is
    whatever the table provider given to :func:`grid_search` accepts.
    """

    embeddings: tuple
    weights: tuple
    combinations: tuple = ("sum",)
    metrics: tuple = ("cosine",)
    idf_variants: tuple = ("plain",)
    oov_policies: tuple = ("df_one_fallback",)

    def __post_init__(self):
        for name in ("embeddings", "weights", "combinations", "metrics", "idf_variants", "oov_policies"):
            value = tuple(getattr(self, name))
            if not value:
                raise ValueError(f"grid axis {name!r} is empty")
            object.__setattr__(self, name, value)
        object.__setattr__(self, "embeddings", tuple(tuple(e) for e in self.embeddings))
        object.__setattr__(self, "oov_policies", tuple(OOV_ALIASES.get(o, o) for o in self.oov_policies))
        for m in self.metrics:
            MetricKind(m)
        list(self.configs())

    def configs(self):
        for w, comb, idf_variant, oov in itertools.product(
                self.weights, self.combinations, self.idf_variants, self.oov_policies):
            yield WeightingConfig.from_string(w, combination=comb, idf_variant=idf_variant, oov_idf_policy=oov)

    def cells(self):
        """``((name, source), WeightingConfig)`` for every cell, in grid order."""
        configs = list(self.configs())
        for emb in self.embeddings:
            for cfg in configs:
                yield emb, cfg

    def __len__(self):
        return len(self.embeddings) * len(list(self.configs()))


def parse_grid_spec(text, default_embeddings=()):
    """Parse a grid file: one ``axis = v1, v2, ...`` line per axis.

    Axes: ``weights``, ``comb``, ``embeddings`` (``name:path``), ``metric``,
    ``idf_variant``, ``oov``. ``#`` starts a comment. ``metric = all``
    selects all three metrics.
    """
    axes = {}
    aliases = {"weights": "weights", "comb": "combinations", "combination": "combinations",
               "embedding": "embeddings", "embeddings": "embeddings", "metric": "metrics",
               "metrics": "metrics", "idf_variant": "idf_variants", "idf-variant": "idf_variants",
               "oov": "oov_policies"}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"grid line {lineno}: expected 'axis = values'")
        key, values = (s.strip() for s in line.split("=", 1))
        if key not in aliases:
            raise ValueError(f"grid line {lineno}: unknown axis {key!r}")
        items = [v.strip() for v in values.split(",") if v.strip()]
        if aliases[key] == "embeddings":
            parsed = []
            for item in items:
                name, sep, path = item.partition(":")
                if not sep:
                    name, path = os.path.splitext(os.path.basename(item))[0], item
                parsed.append((name.strip(), path.strip()))
            items = parsed
        elif aliases[key] == "metrics" and items == ["all"]:
            items = list(ALL_METRICS)
        axes[aliases[key]] = tuple(items)
    if "embeddings" not in axes and default_embeddings:
        axes["embeddings"] = tuple(default_embeddings)
    if "weights" not in axes or "embeddings" not in axes:
        raise ValueError("grid needs at least 'weights' and 'embeddings' axes")
    return GridSpec(**axes)


def _error_reports(emb_name, cfg, metrics, n_pairs, message, size=None):
    return [EvalReport(weights=cfg.name, combination=cfg.combination, embedding=emb_name, metric=MetricKind(m).value,
                       n_pairs=n_pairs, size=size, idf_variant=cfg.idf_variant, oov_policy=cfg.oov_idf_policy,
                       error=message, config=cfg) for m in metrics]


def _rank_key(report):
    if report.ok:
        return (0, -report.pearson, report.key)
    return (1, 0.0, report.key)


def grid_search(dataset, grid, table_provider=load_embeddings, global_stats_provider=None,
                stopwords=None, n_jobs=1):
    """Evaluate every grid cell under every metric and rank the reports.

    Parameters
    ----------
    table_provider : callable
        ``source -> EmbeddingTable``; failures mark that embedding's rows as errored.
    global_stats_provider : CorpusStats, callable or None
        Statistics for ``glob-*`` weightings.

    Returns
    -------
    list of EvalReport
        Sorted by descending Pearson, ties broken by :attr:`EvalReport.key`;
        errored reports come last.
    """
    n_jobs = check_n_jobs(n_jobs)
    n = len(dataset)

    tables = {}
    for name, source in grid.embeddings:
        if source in tables:
            continue
        try:
            tables[source] = table_provider(source)
        except (OSError, WisseError, ValueError) as exc:
            tables[source] = exc

    global_stats = None
    global_error = None
    if any(cfg.scope == "global" and cfg.needs_stats for cfg in grid.configs()):
        try:
            global_stats = global_stats_provider() if callable(global_stats_provider) else global_stats_provider
            if global_stats is None:
                global_error = "global weighting requires fitted statistics (--stats)"
        except (OSError, WisseError, ValueError) as exc:
            global_error = f"global statistics unavailable: {exc}"

    local_cache = {}

    def stats_for(cfg):
        if not cfg.needs_stats:
            return None
        if cfg.scope == "global":
            if global_error:
                raise WisseError(global_error)
            return global_stats if global_stats.variant == cfg.idf_variant else global_stats.with_variant(
                cfg.idf_variant)
        strip = cfg.strip_stopwords and cfg.strip_at_fit
        key = (cfg.idf_variant, strip)
        if key not in local_cache:
            local_cache[key] = fit_local_stats(dataset, cfg.idf_variant,
                                               resolve_stopwords(stopwords) if strip else None)
        return local_cache[key]

    # local stats are fitted up front so worker threads only read shared state
    for cfg in grid.configs():
        if cfg.needs_stats and cfg.scope == "local":
            stats_for(cfg)

    def run_cell(cell):
        (name, source), cfg = cell
        table = tables[source]
        if isinstance(table, Exception):
            return _error_reports(name, cfg, grid.metrics, n, f"embedding source {source!r}: {table}")
        try:
            return evaluate_metrics(dataset, table, stats_for(cfg), cfg, grid.metrics, stopwords, name)
        except (WisseError, ValueError) as exc:
            return _error_reports(name, cfg, grid.metrics, n, str(exc), size=table.dimension)

    cells = list(grid.cells())
    if n_jobs == 1:
        results = [run_cell(c) for c in cells]
    else:
        with ThreadPoolExecutor(max_workers=n_jobs) as pool:
            results = list(pool.map(run_cell, cells))
    reports = [r for cell_reports in results for r in cell_reports]
    reports.sort(key=_rank_key)
    return reports


def bow_baseline(dataset, stats, tf_mode="binary", strip_stopwords=False, stopwords=None,
                 oov_policy="df_one_fallback"):
    """Sparse TF-IDF bag-of-words vectors compared with cosine."""
    cfg = WeightingConfig(scheme="tfidf", tf_mode=tf_mode, strip_stopwords=strip_stopwords,
                          oov_idf_policy=oov_policy)
    if len(dataset) == 0:
        raise EmptyCorpusError("empty dataset")
    scores = np.empty(len(dataset))
    degenerate = 0
    for i, (a, b) in enumerate(dataset.pairs):
        va = dict(sentence_weights(a, stats, cfg, stopwords))
        vb = dict(sentence_weights(b, stats, cfg, stopwords))
        scores[i], flag = sparse_cosine(va, vb)
        degenerate += flag
    name = "bow-tfidf" + {"binary": "-bin", "log": "-log", "frequency": ""}[tf_mode] + ("-st" if strip_stopwords else "")
    return EvalReport(weights=name, combination="-", embedding="BoW", metric="cosine",
                      pearson=pearson(scores, dataset.gold), n_pairs=len(dataset), degenerate_pairs=degenerate,
                      size=stats.vocabulary_size, idf_variant=stats.variant, oov_policy=oov_policy, config=cfg)


def sparse_cosine(u, v):
    """Cosine of two ``token -> weight`` dicts; returns ``(value, degenerate)``."""
    nu = math.sqrt(math.fsum(w * w for w in u.values()))
    nv = math.sqrt(math.fsum(w * w for w in v.values()))
    if nu == 0.0 or nv == 0.0:
        return 0.0, True
    dot = math.fsum(w * v[t] for t, w in u.items() if t in v)
    return min(1.0, max(-1.0, dot / (nu * nv))), False


REPORT_COLUMNS = ("weights", "comb", "size", "embedding", "cosine_rho", "euclidean_rho", "manhattan_rho",
                  "idf_variant", "oov", "n_pairs", "degenerate_pairs", "status")


def _report_rows(reports, sort_by="cosine"):
    rows = {}
    for r in reports:
        row = rows.get(r.row_key)
        if row is None:
            row = rows[r.row_key] = {
                "weights": r.weights, "comb": r.combination,
                "size": f"{r.size}d" if r.size is not None else "NA", "embedding": r.embedding,
                "cosine_rho": None, "euclidean_rho": None, "manhattan_rho": None,
                "idf_variant": r.idf_variant, "oov": r.oov_policy, "n_pairs": r.n_pairs,
                "degenerate_pairs": r.degenerate_pairs, "status": "ok", "_key": r.row_key,
            }
        if r.ok:
            row[f"{r.metric}_rho"] = r.pearson
            row["degenerate_pairs"] = max(row["degenerate_pairs"], r.degenerate_pairs)
        else:
            row["status"] = "error: " + " ".join(str(r.error).split())
    col = f"{sort_by}_rho"

    def order(row):
        value = row.get(col)
        return (value is None, -(value if value is not None else 0.0), row["_key"])

    return sorted(rows.values(), key=order)


def format_report_tsv(reports, sort_by="cosine"):
    """One row per configuration with a column per metric, rho to 5 decimals."""
    out = io.StringIO()
    out.write("\t".join(REPORT_COLUMNS) + "\n")
    for row in _report_rows(reports, sort_by):
        cells = []
        for c in REPORT_COLUMNS:
            v = row[c]
            if c.endswith("_rho"):
                v = "NA" if v is None else f"{v:.5f}"
            cells.append(str(v))
        out.write("\t".join(cells) + "\n")
    return out.getvalue()


def format_report_jsonl(reports, sort_by="cosine"):
    lines = []
    for row in _report_rows(reports, sort_by):
        row = {k: row[k] for k in REPORT_COLUMNS}
        lines.append(json.dumps(row, sort_keys=False))
    return "".join(line + "\n" for line in lines)
