"""Exception hierarchy shared by the loaders, the weight model and the CLI."""


class WisseError(Exception):
    """Base class for data and model errors (CLI exit status 1)."""


class EmbeddingFormatError(WisseError, ValueError):
    """An embedding file could not be parsed.

    ``line`` is the 1-based line number for text files and ``record`` the
    0-based record index for binary files, when known.
    """

    def __init__(self, message, line=None, record=None):
        super().__init__(message)
        self.line = line
        self.record = record


class TruncatedEmbeddingError(EmbeddingFormatError):
    """A binary embedding stream ended before the declared record count."""


class DatasetFormatError(WisseError, ValueError):
    """An STS dataset, gold file or corpus is malformed."""

    def __init__(self, message, line=None):
        super().__init__(message)
        self.line = line


class EmptyCorpusError(WisseError, ValueError):
    pass


class StatsFormatError(WisseError, ValueError):
    """A persisted statistics file is corrupt."""


class StatsVersionError(StatsFormatError):
    pass


class UndefinedCorrelationError(WisseError, ValueError):
    """Pearson correlation requested for a constant sequence."""
