"""Command-line interface.

Exit status: 0 success, 1 data or model error, 2 usage or path error.
"""

import argparse
import os
import sys

from . import __version__
from .composer import embed_batch
from .embeddings import load_embeddings
from .entropy import IDF_VARIANTS, WeightingConfig, fit_stats, load_stats, save_stats
from .evaluation import (ALL_METRICS, OOV_ALIASES, bow_baseline, evaluate_metrics, fit_local_stats,
                         format_report_jsonl, format_report_tsv, grid_search, parse_grid_spec)
from .exceptions import WisseError
from .similarity import MetricKind, score
from .text import default_stopwords, ingest_corpus, load_stopwords, load_sts_dataset, tokenize


class UsageError(Exception):
    pass


def _require_file(path, flag):
    if path is None:
        raise UsageError(f"{flag} is required")
    if path != "-" and not os.path.isfile(path):
        raise UsageError(f"{flag}: no such file: {path}")
    return path


def _read_bytes(path):
    if path == "-":
        return sys.stdin.buffer.read()
    with open(path, "rb") as fh:
        return fh.read()


def _write(args, text):
    if args.out and args.out != "-":
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _stopwords(args):
    if getattr(args, "stopwords", None):
        return load_stopwords(_require_file(args.stopwords, "--stopwords"))
    return default_stopwords()


def _config(args, default="loc-tfidf"):
    try:
        return WeightingConfig.from_string(
            args.weights or default, combination=args.comb, idf_variant=args.idf_variant,
            oov_idf_policy=OOV_ALIASES[args.oov], dedupe_tokens=not args.no_dedupe,
            l2_normalize_weights=args.l2_normalize_weights, strip_at_fit=args.strip_at_fit)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _load_global_stats(args, variant):
    path = _require_file(args.stats, "--stats")
    with open(path, "rb") as fh:
        return load_stats(fh, variant)


def _stats(args, cfg, documents, stopwords):
    if not cfg.needs_stats:
        return None
    if cfg.scope == "global":
        return _load_global_stats(args, cfg.idf_variant)
    strip = cfg.strip_stopwords and cfg.strip_at_fit
    return fit_stats(documents, cfg.idf_variant, stopwords if strip else None)


def _embeddings(args):
    path = _require_file(args.embeddings, "--embeddings")
    fmt = None if args.embeddings_format == "auto" else args.embeddings_format
    return load_embeddings(path, fmt)


def _dataset(args):
    data = _read_bytes(_require_file(args.dataset, "--dataset"))
    gold = None
    if args.format == "semeval":
        gold = _read_bytes(_require_file(args.gold, "--gold"))
    return load_sts_dataset(data, gold, args.format, args.min_token_len, name=os.path.basename(args.dataset))


def _metrics(args):
    return ALL_METRICS if args.metric == "all" else (args.metric,)


def _lines(data):
    text = data.decode("utf-8")
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    return [ln.rstrip("\r") for ln in lines]


def cmd_fit_weights(args):
    path = _require_file(args.corpus, "--corpus")
    if not args.out:
        raise UsageError("--out is required")
    stopwords = _stopwords(args) if args.strip_stopwords else None
    with open(path, "rb") as fh:
        reader = ingest_corpus(fh, args.min_token_len)
        stats = fit_stats(reader, args.idf_variant, stopwords)
    with open(args.out, "wb") as fh:
        save_stats(stats, fh)
    print(f"N_S={stats.n_sentences}\t|V|={stats.vocabulary_size}\tF={stats.total_tokens}")
    return 0


def cmd_embed(args):
    cfg = _config(args)
    stopwords = _stopwords(args)
    table = _embeddings(args)
    sentences = [tokenize(line, args.min_token_len) for line in _lines(_read_bytes(args.input))]
    if not sentences:
        _write(args, "")
        return 0
    stats = _stats(args, cfg, [s for s in sentences if s.raw.strip()], stopwords)
    vecs = embed_batch(sentences, table, stats, cfg, stopwords, args.jobs)
    out = []
    for i, v in enumerate(vecs):
        out.append("\t".join([str(i), str(v.contributing)] + [f"{x:.9g}" for x in v.values]) + "\n")
    _write(args, "".join(out))
    return 0


def cmd_sim(args):
    cfg = _config(args)
    stopwords = _stopwords(args)
    table = _embeddings(args)
    pairs = []
    for lineno, line in enumerate(_lines(_read_bytes(args.input)), 1):
        fields = line.split("\t")
        if len(fields) < 2:
            raise WisseError(f"line {lineno}: expected two tab-separated sentences")
        pairs.append((tokenize(fields[0], args.min_token_len), tokenize(fields[1], args.min_token_len)))
    if not pairs:
        _write(args, "")
        return 0
    flat = [s for pair in pairs for s in pair]
    stats = _stats(args, cfg, flat, stopwords)
    vecs = embed_batch(flat, table, stats, cfg, stopwords, args.jobs)
    metrics = _metrics(args)
    out = []
    for i in range(0, len(vecs), 2):
        a, b = vecs[i].values, vecs[i + 1].values
        out.append("\t".join(f"{score(a, b, m):.5f}" for m in metrics) + "\n")
    _write(args, "".join(out))
    return 0


def cmd_eval(args):
    cfg = _config(args)
    stopwords = _stopwords(args)
    table = _embeddings(args)
    dataset = _dataset(args)
    if not cfg.needs_stats:
        stats = None
    elif cfg.scope == "global":
        stats = _load_global_stats(args, cfg.idf_variant)
    else:
        strip = cfg.strip_stopwords and cfg.strip_at_fit
        stats = fit_local_stats(dataset, cfg.idf_variant, stopwords if strip else None)
    name = os.path.splitext(os.path.basename(args.embeddings))[0]
    reports = evaluate_metrics(dataset, table, stats, cfg, _metrics(args), stopwords, name, args.jobs)
    for r in reports:
        print(f"{r.metric}\t{r.pearson!r}")
    if reports[0].degenerate_pairs:
        print(f"warning: {reports[0].degenerate_pairs} degenerate pair(s)", file=sys.stderr)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(format_report_tsv(reports, reports[0].metric))
    return 0


def cmd_grid(args):
    with open(_require_file(args.grid, "--grid"), encoding="utf-8") as fh:
        text = fh.read()
    default = []
    if args.embeddings:
        default = [(os.path.splitext(os.path.basename(args.embeddings))[0], args.embeddings)]
    try:
        grid = parse_grid_spec(text, default)
    except ValueError as exc:
        raise UsageError(f"--grid: {exc}") from None
    stopwords = _stopwords(args)
    dataset = _dataset(args)
    fmt = None if args.embeddings_format == "auto" else args.embeddings_format

    def provider(source):
        return load_embeddings(source, fmt)

    def stats_provider():
        if not args.stats:
            return None
        with open(args.stats, "rb") as fh:
            return load_stats(fh)

    reports = grid_search(dataset, grid, provider, stats_provider, stopwords, args.jobs)
    sort_by = MetricKind(grid.metrics[0]).value
    text = format_report_jsonl(reports, sort_by) if args.report_format == "jsonl" else format_report_tsv(
        reports, sort_by)
    _write(args, text)
    failed = sum(1 for r in reports if not r.ok)
    if failed:
        print(f"warning: {failed} of {len(reports)} report(s) errored", file=sys.stderr)
    return 0


def cmd_bow_baseline(args):
    cfg = _config(args, default="loc-tfidf-bin")
    if cfg.scheme != "tfidf":
        raise UsageError("bow-baseline needs a tfidf weighting (e.g. loc-tfidf-bin)")
    stopwords = _stopwords(args)
    dataset = _dataset(args)
    if cfg.scope == "global":
        stats = _load_global_stats(args, cfg.idf_variant)
    else:
        strip = cfg.strip_stopwords and cfg.strip_at_fit
        stats = fit_local_stats(dataset, cfg.idf_variant, stopwords if strip else None)
    report = bow_baseline(dataset, stats, cfg.tf_mode, cfg.strip_stopwords, stopwords, cfg.oov_idf_policy)
    print(f"cosine\t{report.pearson!r}")
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(format_report_tsv([report]))
    return 0


def build_parser():
    parser = argparse.ArgumentParser(prog="wisse", description="Entropy-weighted sentence embeddings and STS evaluation.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--min-token-len", type=int, default=1)
    common.add_argument("--stopwords", help="stopword file, one token per line (default: built-in list)")
    common.add_argument("--idf-variant", choices=IDF_VARIANTS, default="plain")
    common.add_argument("--out", help="output path (default: stdout)")

    weighting = argparse.ArgumentParser(add_help=False)
    weighting.add_argument("--weights", help="e.g. glob-tfidf-bin-st, loc-idf, unweighted "
                           "(default: loc-tfidf; loc-tfidf-bin for bow-baseline)")
    weighting.add_argument("--comb", choices=("sum", "avg"), default="sum")
    weighting.add_argument("--oov", choices=("fallback", "skip"), default="fallback")
    weighting.add_argument("--stats", help="statistics file from fit-weights (glob-* weightings)")
    weighting.add_argument("--no-dedupe", action="store_true", help="sum over token occurrences, not types")
    weighting.add_argument("--l2-normalize-weights", action="store_true")
    weighting.add_argument("--strip-at-fit", action="store_true")
    weighting.add_argument("--jobs", type=int, default=1)

    emb = argparse.ArgumentParser(add_help=False)
    emb.add_argument("--embeddings", help="embedding file")
    emb.add_argument("--embeddings-format", choices=("auto", "text", "word2vec-bin"), default="auto")

    data = argparse.ArgumentParser(add_help=False)
    data.add_argument("--dataset", help="STS pair file (semeval) or SICK file")
    data.add_argument("--gold", help="gold score file (semeval)")
    data.add_argument("--format", choices=("semeval", "sick"), default="semeval")

    metric_choices = ALL_METRICS + ("all",)

    p = sub.add_parser("fit-weights", parents=[common], help="fit corpus statistics")
    p.add_argument("--corpus", help="one document per line")
    p.add_argument("--strip-stopwords", action="store_true", help="remove stopwords before counting")
    p.set_defaults(func=cmd_fit_weights)

    p = sub.add_parser("embed", parents=[common, weighting, emb], help="embed one sentence per line")
    p.add_argument("--input", default="-")
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("sim", parents=[common, weighting, emb], help="score tab-separated sentence pairs")
    p.add_argument("--input", default="-")
    p.add_argument("--metric", choices=metric_choices, default="cosine")
    p.set_defaults(func=cmd_sim)

    p = sub.add_parser("eval", parents=[common, weighting, emb, data], help="Pearson correlation on a dataset")
    p.add_argument("--metric", choices=metric_choices, default="all")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("grid", parents=[common, emb, data], help="run a hyperparameter grid")
    p.add_argument("--grid", help="grid file")
    p.add_argument("--stats", help="statistics file for glob-* weightings")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--report-format", choices=("tsv", "jsonl"), default="tsv")
    p.set_defaults(func=cmd_grid)

    p = sub.add_parser("bow-baseline", parents=[common, weighting, data], help="sparse TF-IDF baseline")
    p.set_defaults(func=cmd_bow_baseline)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "jobs", 1) < 1:
        parser.error("--jobs must be >= 1")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"wisse {args.command}: {exc}", file=sys.stderr)
        return 2
    except (FileNotFoundError, IsADirectoryError, PermissionError) as exc:
        print(f"wisse {args.command}: cannot open {exc.filename}: {exc.strerror}", file=sys.stderr)
        return 2
    except (WisseError, ValueError, UnicodeDecodeError) as exc:
        print(f"wisse {args.command}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
