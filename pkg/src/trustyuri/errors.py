"""Exception hierarchy shared by all trusty URI modules."""


class TrustyUriError(Exception):
    """Base class for everything raised by this package."""


class InvalidInputError(TrustyUriError, ValueError):
    pass


class NotTrustyReferenceError(TrustyUriError, ValueError):
    """No artifact code could be found in a URI or file name."""


class NotTransferableError(TrustyUriError):
    pass


class AlreadyTrustyError(TrustyUriError):
    """Refusing to wrap a name that already carries an artifact code."""


class ModuleConstraintError(TrustyUriError):
    """Content violates a module restriction (e.g. RB needs a single graph)."""


class RdfSyntaxError(TrustyUriError, ValueError):
    """Malformed RDF input. ``line`` is 1-based when known."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
