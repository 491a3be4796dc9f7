"""Exception hierarchy shared across the package."""


class GceFairError(Exception):
    """Base class for all errors raised by gcefair."""


class DomainError(GceFairError, ValueError):
    """An argument lies outside the domain of the operation."""


class ZeroMassError(DomainError):
    """A distribution or gain vector has no positive mass to normalize."""


class SchemaError(GceFairError, ValueError):
    """Inputs disagree in shape or category layout."""


class ConfigError(GceFairError, ValueError):
    """An evaluation configuration is invalid."""


class ParseError(GceFairError, ValueError):
    """A file could not be parsed.

    Attributes:
        line: 1-based line number of the offending row, when known.
    """

    def __init__(self, message, line=None, path=None):
        self.line = line
        self.path = path
        where = ""
        if path is not None:
            where += f"{path}:"
        if line is not None:
            where += f"line {line}: "
        elif where:
            where += " "
        super().__init__(where + message)


class EmptyInputError(GceFairError, ValueError):
    """An input file holds no data rows."""


class ConflictError(GceFairError, ValueError):
    """An entity was assigned two different categories for one attribute."""


class EmptySplitError(GceFairError, ValueError):
    """No split timestamp retains any user under the requested thresholds."""
