"""Shared exception types."""


class ParseError(ValueError):
    """Malformed substitution source text."""

    def __init__(self, message, line=None, clause=None):
        loc = ""
        if line is not None:
            loc = f" (line {line})"
        elif clause is not None:
            loc = f" (clause {clause})"
        super().__init__(message + loc)
        self.line = line
        self.clause = clause


class SubstitutionError(ValueError):
    """Invalid substitution data, or an operation applied outside its domain."""


class ResourceCapError(RuntimeError):
    """A scan or expansion would exceed the configured resource cap."""
