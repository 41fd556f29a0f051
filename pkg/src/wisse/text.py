"""Tokenization, stopword handling and corpus / STS dataset ingestion."""

import csv
import io
import re
from dataclasses import dataclass
from importlib import resources

import numpy as np

from .exceptions import DatasetFormatError

__all__ = [
    "SentenceTokens",
    "StopwordList",
    "STSDataset",
    "CorpusReader",
    "tokenize",
    "strip_stopwords",
    "default_stopwords",
    "load_stopwords",
    "ingest_corpus",
    "load_sts_dataset",
]

# maximal runs of Unicode letters/digits; "_" is a separator
_TOKEN_RE = re.compile(r"[^\W_]+")

SICK_COLUMNS = ("pair_ID", "sentence_A", "sentence_B", "relatedness_score", "entailment_judgment")


@dataclass(frozen=True)
class SentenceTokens:
    tokens: tuple
    raw: str = ""

    def __post_init__(self):
        if not isinstance(self.tokens, tuple):
            object.__setattr__(self, "tokens", tuple(self.tokens))
        if any(not t for t in self.tokens):
            raise ValueError("tokens must be non-empty strings")

    def __len__(self):
        return len(self.tokens)

    def __iter__(self):
        return iter(self.tokens)


@dataclass(frozen=True)
class StopwordList:
    words: frozenset
    source: str = "built-in"

    def __post_init__(self):
        words = frozenset(self.words)
        if any(not w or w != w.lower() for w in words):
            raise ValueError("stopwords must be non-empty lowercase strings")
        object.__setattr__(self, "words", words)

    def __contains__(self, token):
        return token in self.words

    def __len__(self):
        return len(self.words)


def tokenize(text, min_token_len=1):
    """Lowercase ``text`` and split it on runs of non-alphanumeric characters.

    >>> tokenize("The dog barks.").tokens
    ('the', 'dog', 'barks')
    """
    found = _TOKEN_RE.findall(text.lower())
    if min_token_len > 1:
        found = [t for t in found if len(t) >= min_token_len]
    return SentenceTokens(tuple(found), text)


def strip_stopwords(sentence, stopwords):
    """Drop tokens listed in ``stopwords``, preserving order."""
    words = stopwords.words if isinstance(stopwords, StopwordList) else stopwords
    return SentenceTokens(tuple(t for t in sentence.tokens if t not in words), sentence.raw)


_DEFAULT_STOPWORDS = None


def default_stopwords():
    """The bundled 318-entry English stopword list."""
    global _DEFAULT_STOPWORDS
    if _DEFAULT_STOPWORDS is None:
        text = resources.files("wisse").joinpath("data/stopwords_en.txt").read_text("utf-8")
        _DEFAULT_STOPWORDS = StopwordList(frozenset(w for w in text.split("\n") if w), "built-in")
    return _DEFAULT_STOPWORDS


def load_stopwords(path):
    """Read a one-token-per-line stopword file (entries are lowercased)."""
    with open(path, encoding="utf-8") as fh:
        words = {line.strip().lower() for line in fh}
    words.discard("")
    return StopwordList(frozenset(words), str(path))


class CorpusReader:
    """Lazily tokenize a one-document-per-line byte stream.

    Blank lines are not documents. ``n_documents`` and ``n_tokens`` count
    what has been yielded so far.
    """

    def __init__(self, source, min_token_len=1):
        self.source = source
        self.min_token_len = min_token_len
        self.n_documents = 0
        self.n_tokens = 0

    def __iter__(self):
        offset = 0
        for raw in self.source:
            try:
                line = raw.decode("utf-8")
            except UnicodeDecodeError as exc:
                raise DatasetFormatError(
                    f"invalid UTF-8 at byte offset {offset + exc.start}", line=self.n_documents + 1
                ) from None
            offset += len(raw)
            if not line.strip():
                continue
            doc = tokenize(line.rstrip("\r\n"), self.min_token_len)
            self.n_documents += 1
            self.n_tokens += len(doc)
            yield doc


def ingest_corpus(source, min_token_len=1):
    return CorpusReader(source, min_token_len)


@dataclass(frozen=True)
class STSDataset:
    pairs: tuple
    gold: np.ndarray
    name: str = ""

    def __post_init__(self):
        pairs = tuple(self.pairs)
        gold = np.asarray(self.gold, dtype=np.float64)
        if gold.ndim != 1 or len(pairs) != len(gold):
            raise DatasetFormatError(f"{len(pairs)} pairs but {gold.size} gold scores")
        bad = np.flatnonzero((gold < 0.0) | (gold > 5.0) | ~np.isfinite(gold))
        if bad.size:
            raise DatasetFormatError(f"gold score {gold[bad[0]]} outside [0, 5] at line {bad[0] + 1}",
                                     line=int(bad[0]) + 1)
        gold.setflags(write=False)
        object.__setattr__(self, "pairs", pairs)
        object.__setattr__(self, "gold", gold)

    def __len__(self):
        return len(self.pairs)

    def sentences(self):
        """Both sides of every pair, in order (a1, b1, a2, b2, ...)."""
        for a, b in self.pairs:
            yield a
            yield b

    @classmethod
    def from_strings(cls, pairs, gold, min_token_len=1, name=""):
        return cls(tuple((tokenize(a, min_token_len), tokenize(b, min_token_len)) for a, b in pairs),
                   gold, name)


def _read_text(stream):
    data = stream if isinstance(stream, (bytes, str)) else stream.read()
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise DatasetFormatError(f"invalid UTF-8 at byte offset {exc.start}") from None
    return data.lstrip("\ufeff")


def _lines(text):
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    return [ln.rstrip("\r") for ln in lines]


def _parse_score(field, lineno):
    try:
        value = float(field)
    except ValueError:
        raise DatasetFormatError(f"line {lineno}: gold score {field!r} is not a number", line=lineno) from None
    if not 0.0 <= value <= 5.0:
        raise DatasetFormatError(f"line {lineno}: gold score {value} outside [0, 5]", line=lineno)
    return value


def load_sts_dataset(input, gold=None, format="semeval", min_token_len=1, name=""):
    """Load an STS benchmark.

    ``semeval``: ``input`` has one ``sentenceA<TAB>sentenceB`` pair per line
    (extra columns are ignored) and ``gold`` one score per line.
    ``sick``: ``input`` is the tab-separated SICK file with header; ``gold``
    is unused.
    """
    text = _read_text(input)
    if format == "semeval":
        if gold is None:
            raise DatasetFormatError("semeval format requires a gold file")
        pairs = []
        for lineno, line in enumerate(_lines(text), 1):
            fields = line.split("\t")
            if len(fields) < 2:
                raise DatasetFormatError(f"line {lineno}: expected two tab-separated sentences", line=lineno)
            pairs.append((fields[0], fields[1]))
        scores = [_parse_score(f.strip(), i) for i, f in enumerate(_lines(_read_text(gold)), 1)]
        if len(scores) != len(pairs):
            raise DatasetFormatError(f"{len(pairs)} sentence pairs but {len(scores)} gold scores")
    elif format == "sick":
        reader = csv.DictReader(io.StringIO(text), delimiter="\t", quoting=csv.QUOTE_NONE)
        missing = [c for c in SICK_COLUMNS if c not in (reader.fieldnames or ())]
        if missing:
            raise DatasetFormatError(f"missing SICK column(s): {', '.join(missing)}", line=1)
        pairs, scores = [], []
        for row in reader:
            lineno = reader.line_num
            if row["sentence_B"] is None or row["relatedness_score"] is None:
                raise DatasetFormatError(f"line {lineno}: too few columns", line=lineno)
            pairs.append((row["sentence_A"], row["sentence_B"]))
            scores.append(_parse_score(row["relatedness_score"], lineno))
    else:
        raise ValueError(f"unknown dataset format {format!r}")
    return STSDataset.from_strings(pairs, scores, min_token_len, name)
