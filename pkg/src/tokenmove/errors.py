"""Exception hierarchy shared by every module."""


class TokenMoveError(Exception):
    pass


class InputError(TokenMoveError, ValueError):
    """Malformed or out-of-range input."""


class UnsupportedVariant(TokenMoveError):
    """Operation called on a problem variant it does not handle."""


class CapExceeded(TokenMoveError):
    """A configured size cap would be exceeded; nothing was computed."""

    def __init__(self, message, cap=None, predicted=None, details=None):
        super().__init__(message)
        self.cap = cap
        self.predicted = predicted
        self.details = details


class MoveError(TokenMoveError):
    """A move cannot be executed in the given configuration."""


class MapMismatch(TokenMoveError):
    pass


class ConstructionError(TokenMoveError):
    """A certificate could not be built from the supplied planting."""


class ParseError(InputError):
    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
