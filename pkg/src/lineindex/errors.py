"""Exception hierarchy shared by the pipeline and the CLI."""


class LineIndexError(Exception):
    """Base class for all input and pipeline errors."""

    exit_code = 1


class ParseError(LineIndexError, ValueError):
    """Polynomial text or structured input could not be read."""

    exit_code = 2


class UnsupportedInput(LineIndexError):
    """Input is well formed but outside what the pipeline handles."""

    exit_code = 3


class ValidationError(LineIndexError, ValueError):
    """Input violates a necessary condition for an isolated singularity."""

    exit_code = 4


class SharpConditionError(ValueError):
    """A chain refinement would put a vertex strictly inside Cone(Q, Q1)."""
