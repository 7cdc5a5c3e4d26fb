"""Exception hierarchy shared by the cipher, analysis and I/O layers."""


class ChaosCellError(Exception):
    """Base class for every error raised by this package."""


class DomainError(ChaosCellError, ValueError):
    """A chaos parameter, state or key value lies outside its valid range."""


class DimensionError(ChaosCellError, ValueError):
    """Array shapes are incompatible with the requested operation."""


class KeyFormatError(ChaosCellError, ValueError):
    """Key text could not be parsed."""


class PgmError(ChaosCellError, ValueError):
    """Base class for PGM decoding failures."""


class PgmUnsupportedFormat(PgmError):
    pass


class PgmHeaderError(PgmError):
    pass


class PgmMaxvalError(PgmError):
    pass


class PgmTruncatedError(PgmError):
    pass
