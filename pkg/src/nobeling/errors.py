"""Exception hierarchy shared by the library and the command line front end."""


class NobelingError(Exception):
    """Base class for every error raised by this package."""


class AmbientMismatchError(NobelingError, ValueError):
    """Coordinates, points or functions do not live in the expected cube."""


class ContractError(NobelingError, ValueError):
    """A documented precondition was violated by the caller."""


class InvariantError(NobelingError):
    """A mathematical invariant failed; this signals a bug, never bad input."""


class CapExceededError(NobelingError):
    """A configured resource cap (coordinates, points, family size) was exceeded."""


class ParseError(NobelingError, ValueError):
    """Malformed ``.cube``, function or space file."""
