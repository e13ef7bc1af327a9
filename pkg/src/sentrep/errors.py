"""Exception hierarchy shared across the toolkit.

The CLI maps these onto exit codes: DataError (and subclasses) -> 2,
NumericError -> 3.
"""


class SentRepError(Exception):
    pass


class DataError(SentRepError):
    """Bad or missing input data (corpora, datasets, model files)."""


class NumericError(SentRepError):
    """Numeric failure: non-finite values, degenerate statistics."""


class ModelFormatError(DataError):
    """Base for model-file parsing failures."""


class BadMagicError(ModelFormatError):
    pass


class BadVersionError(ModelFormatError):
    pass


class TruncatedFileError(ModelFormatError):
    pass


class ChecksumError(ModelFormatError):
    pass
