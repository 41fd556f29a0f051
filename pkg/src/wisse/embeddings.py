"""Pretrained word embedding tables.

Two on-disk formats are understood:

* text (GloVe / fastText ``.vec``): one ``token v1 ... vd`` record per line,
  single-space separated, with an optional ``<count> <dim>`` header line;
* word2vec binary: an ASCII ``<count> <dim>\\n`` header followed by records of
  ``token`` + space + ``dim`` little-endian float32 values, each record
  optionally terminated by a newline byte.

Tokens are stored verbatim. Vectors are kept as a read-only float32 matrix.
"""

import math
import os
import warnings
from types import MappingProxyType

import numpy as np

from .exceptions import EmbeddingFormatError, TruncatedEmbeddingError

__all__ = [
    "EmbeddingTable",
    "load_text_embeddings",
    "load_word2vec_binary",
    "load_embeddings",
    "lookup",
    "save_text_embeddings",
    "save_word2vec_binary",
]

_F32 = np.dtype("<f4")


class EmbeddingTable:
    """Immutable token -> vector store.

    Parameters
    ----------
    tokens : sequence of str
        Row labels; must be unique.
    vectors : array-like of shape (n_tokens, dimension)
    source_meta : str
        Free-text provenance (file name, format).
    dimension : int, optional
        Required only when ``tokens`` is empty.
    """

    __slots__ = ("_vocab", "_vectors", "_tokens", "source_meta", "duplicates")

    def __init__(self, tokens, vectors, source_meta="", dimension=None, duplicates=0):
        tokens = tuple(tokens)
        vectors = np.array(vectors, dtype=np.float32, copy=True)
        if vectors.size == 0:
            if dimension is None:
                if vectors.ndim != 2:
                    raise ValueError("dimension is required for an empty table")
                dimension = vectors.shape[1]
            vectors = vectors.reshape(0, int(dimension))
        if vectors.ndim != 2:
            raise ValueError(f"vectors must be 2-D, got shape {vectors.shape}")
        if dimension is not None and vectors.shape[1] != dimension:
            raise ValueError(f"vectors have {vectors.shape[1]} columns, expected {dimension}")
        if vectors.shape[1] < 1:
            raise ValueError("dimension must be positive")
        if len(tokens) != vectors.shape[0]:
            raise ValueError(f"{len(tokens)} tokens for {vectors.shape[0]} rows")
        if not np.all(np.isfinite(vectors)):
            raise ValueError("embedding values must be finite")
        vocab = {}
        for i, tok in enumerate(tokens):
            if tok in vocab:
                raise ValueError(f"duplicate token {tok!r}")
            vocab[tok] = i
        vectors.setflags(write=False)
        object.__setattr__(self, "_vocab", vocab)
        object.__setattr__(self, "_vectors", vectors)
        object.__setattr__(self, "_tokens", tokens)
        object.__setattr__(self, "source_meta", source_meta)
        object.__setattr__(self, "duplicates", int(duplicates))

    def __setattr__(self, name, value):
        raise AttributeError("EmbeddingTable is immutable")

    @property
    def dimension(self):
        return self._vectors.shape[1]

    @property
    def vocab(self):
        return MappingProxyType(self._vocab)

    @property
    def vectors(self):
        return self._vectors

    @property
    def tokens(self):
        return self._tokens

    def __len__(self):
        return len(self._tokens)

    def __contains__(self, token):
        return token in self._vocab

    def get(self, token, default=None):
        i = self._vocab.get(token)
        return default if i is None else self._vectors[i]

    def index(self, token):
        """Row index of ``token`` or None."""
        return self._vocab.get(token)

    def __eq__(self, other):
        if not isinstance(other, EmbeddingTable):
            return NotImplemented
        return (
            self._tokens == other._tokens
            and self._vectors.shape == other._vectors.shape
            and np.array_equal(self._vectors, other._vectors)
        )

    __hash__ = None

    # immutable, so copies can share storage
    def __copy__(self):
        return self

    def __deepcopy__(self, memo):
        return self

    def __reduce__(self):
        return (EmbeddingTable, (self._tokens, self._vectors, self.source_meta, self.dimension, self.duplicates))

    def __repr__(self):
        return f"EmbeddingTable(n_tokens={len(self)}, dimension={self.dimension}, source={self.source_meta!r})"


def lookup(table, token):
    """Return the (read-only) row for ``token``, or None when absent."""
    return table.get(token)


def _is_int(field):
    try:
        int(field)
    except ValueError:
        return False
    return True


def _warn_duplicates(n, source):
    if n:
        warnings.warn(f"{source}: {n} duplicate token(s) ignored, first occurrence kept", stacklevel=3)


def load_text_embeddings(source, has_header=None, source_meta="text"):
    """Parse a text-format embedding file.

    Parameters
    ----------
    source : binary file object or bytes
    has_header : bool or None
        None auto-detects a header: the first line is a header when it has
        exactly two integer fields.
    """
    data = source if isinstance(source, (bytes, bytearray)) else source.read()
    lines = bytes(data).split(b"\n")
    if lines and lines[-1] == b"":
        lines.pop()
    if not lines:
        raise EmbeddingFormatError("empty embedding file")

    start = 0
    declared = dim = None
    if has_header is None:
        first = lines[0].decode("utf-8", errors="replace").split()
        has_header = len(first) == 2 and all(_is_int(f) for f in first)
    if has_header:
        fields = lines[0].split()
        if len(fields) != 2 or not all(_is_int(f) for f in fields):
            raise EmbeddingFormatError("header must be '<count> <dim>'", line=1)
        declared, dim = int(fields[0]), int(fields[1])
        if declared < 0 or dim < 1:
            raise EmbeddingFormatError(f"invalid header values {declared} {dim}", line=1)
        start = 1

    vocab = {}
    tokens = []
    rows = []
    n_records = 0
    duplicates = 0
    for lineno in range(start + 1, len(lines) + 1):
        raw = lines[lineno - 1].rstrip(b"\r")
        try:
            text = raw.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise EmbeddingFormatError(f"line {lineno}: invalid UTF-8 ({exc.reason})", line=lineno) from None
        # fastText .vec files end every record with a trailing space
        parts = text.rstrip(" ").split(" ")
        if dim is None:
            dim = len(parts) - 1
            if dim < 1:
                raise EmbeddingFormatError(f"line {lineno}: record has no values", line=lineno)
        if len(parts) != dim + 1 or not parts[0]:
            raise EmbeddingFormatError(
                f"line {lineno}: expected token and {dim} values, got {len(parts)} fields", line=lineno
            )
        try:
            values = [float(v) for v in parts[1:]]
        except ValueError:
            raise EmbeddingFormatError(f"line {lineno}: non-numeric value", line=lineno) from None
        with np.errstate(over="ignore"):
            row = np.array(values, dtype=np.float32)
        if not all(math.isfinite(v) for v in values) or not np.all(np.isfinite(row)):
            raise EmbeddingFormatError(f"line {lineno}: non-finite value", line=lineno)
        n_records += 1
        tok = parts[0]
        if tok in vocab:
            duplicates += 1
            continue
        vocab[tok] = len(tokens)
        tokens.append(tok)
        rows.append(row)

    if declared is not None and n_records != declared:
        raise EmbeddingFormatError(f"header declares {declared} records, found {n_records}")
    if dim is None:
        raise EmbeddingFormatError("empty embedding file")
    _warn_duplicates(duplicates, source_meta)
    matrix = np.vstack(rows) if rows else np.empty((0, dim), dtype=np.float32)
    return EmbeddingTable(tokens, matrix, source_meta=source_meta, dimension=dim, duplicates=duplicates)


def load_word2vec_binary(source, source_meta="word2vec-bin"):
    """Parse the word2vec C tool's binary format."""
    data = source if isinstance(source, (bytes, bytearray)) else source.read()
    data = bytes(data)
    eol = data.find(b"\n")
    if eol < 0:
        raise EmbeddingFormatError("missing header line")
    fields = data[:eol].split()
    if len(fields) != 2 or not all(_is_int(f) for f in fields):
        raise EmbeddingFormatError(f"unparseable header {data[:eol][:40]!r}")
    count, dim = int(fields[0]), int(fields[1])
    if count < 0 or dim < 1:
        raise EmbeddingFormatError(f"invalid header values {count} {dim}")

    nbytes = dim * _F32.itemsize
    matrix = np.empty((count, dim), dtype=np.float32)
    tokens = []
    vocab = {}
    duplicates = 0
    pos = eol + 1
    for record in range(count):
        sp = data.find(b" ", pos)
        if sp < 0 or sp + 1 + nbytes > len(data):
            raise TruncatedEmbeddingError(
                f"stream truncated at record {record} of {count}", record=record
            )
        try:
            tok = data[pos:sp].decode("utf-8")
        except UnicodeDecodeError:
            raise EmbeddingFormatError(f"record {record}: token is not UTF-8", record=record) from None
        if not tok:
            raise EmbeddingFormatError(f"record {record}: empty token", record=record)
        row = np.frombuffer(data, dtype=_F32, count=dim, offset=sp + 1)
        if not np.all(np.isfinite(row)):
            raise EmbeddingFormatError(f"record {record}: non-finite value", record=record)
        pos = sp + 1 + nbytes
        if data[pos:pos + 1] == b"\n":
            pos += 1
        if tok in vocab:
            duplicates += 1
            continue
        matrix[len(tokens)] = row
        vocab[tok] = len(tokens)
        tokens.append(tok)
    _warn_duplicates(duplicates, source_meta)
    return EmbeddingTable(tokens, matrix[: len(tokens)], source_meta=source_meta, dimension=dim,
                          duplicates=duplicates)


def load_embeddings(path, fmt=None):
    """Load an embedding file, inferring the format from the suffix when ``fmt`` is None.

    ``fmt`` is ``"text"`` or ``"word2vec-bin"``.
    """
    path = os.fspath(path)
    if fmt is None:
        fmt = "word2vec-bin" if path.endswith(".bin") else "text"
    meta = f"{os.path.basename(path)} ({fmt})"
    with open(path, "rb") as fh:
        if fmt == "text":
            return load_text_embeddings(fh, source_meta=meta)
        if fmt == "word2vec-bin":
            return load_word2vec_binary(fh, source_meta=meta)
    raise ValueError(f"unknown embedding format {fmt!r}")


def save_text_embeddings(table, stream, header=True):
    """Write ``table`` in text format; values use ``repr`` of the float32 value."""
    if header:
        stream.write(f"{len(table)} {table.dimension}\n".encode())
    for tok, row in zip(table.tokens, table.vectors):
        stream.write((tok + " " + " ".join(repr(float(v)) for v in row) + "\n").encode("utf-8"))


def save_word2vec_binary(table, stream):
    stream.write(f"{len(table)} {table.dimension}\n".encode())
    for tok, row in zip(table.tokens, table.vectors):
        stream.write(tok.encode("utf-8") + b" " + row.astype(_F32).tobytes() + b"\n")
