"""Exception types shared across the package."""


class MGLError(Exception):
    """Base class for all errors raised by this package."""


class InvalidInput(MGLError, ValueError):
    pass


class NotPositiveDefinite(MGLError, ArithmeticError):
    """Cholesky hit a non-positive pivot."""

    def __init__(self, pivot_index):
        self.pivot_index = pivot_index
        super().__init__(f"matrix is not positive definite (pivot {pivot_index})")


class DegenerateComponent(MGLError, ArithmeticError):
    """A mixture component lost (almost) all of its responsibility mass."""

    def __init__(self, component, mass=None):
        self.component = component
        self.mass = mass
        msg = f"component {component} collapsed"
        if mass is not None:
            msg += f" (responsibility mass {mass:.3g})"
        super().__init__(msg)


class ConvergenceWarning(UserWarning):
    pass


class ParseError(MGLError, ValueError):
    """Malformed input file. ``line`` and ``column`` are 1-based when known."""

    def __init__(self, message, line=None, column=None, token=None):
        self.line = line
        self.column = column
        self.token = token
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where = f" ({where})"
        super().__init__(message + where)


class RaggedRows(ParseError):
    def __init__(self, line, expected, got):
        self.expected = expected
        self.got = got
        super().__init__(f"expected {expected} fields, got {got}", line=line)


class FormatVersionMismatch(ParseError):
    def __init__(self, found, expected):
        self.found = found
        self.expected = expected
        MGLError.__init__(self, f"unsupported format version {found!r}, expected {expected!r}")
        self.line = self.column = self.token = None


class ConfigError(MGLError, ValueError):
    pass


class UnknownKey(ConfigError):
    def __init__(self, name, line=None):
        self.name = name
        self.line = line
        super().__init__(f"unknown config key {name!r}" + (f" (line {line})" if line else ""))


class MissingKey(ConfigError):
    def __init__(self, name):
        self.name = name
        super().__init__(f"missing required config key {name!r}")
