"""Exception hierarchy shared by the library and the CLI."""


class InputError(ValueError):
    """Malformed or inconsistent input data."""


class ParseError(InputError):
    """Syntax error in a phase, word, matrix file or presentation."""

    def __init__(self, message: str, line: int = 1, column: int = 1):
        self.line = line
        self.column = column
        super().__init__(f"{message} (line {line}, column {column})")


class RepresentationError(InputError):
    """A finite monomial representation cannot be built for the input."""


class PreconditionViolated(ValueError):
    """The input is well formed but outside the hypotheses of the result."""
