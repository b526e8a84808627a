"""Error hierarchy shared by the library and the CLI.

Exit-code contract: 0 success, 1 malformed input, 2 violated mathematical
precondition, 3 broken internal invariant.
"""


class MukaiError(Exception):
    exit_code = 1


class InputError(MukaiError):
    """Input that cannot be parsed or has the wrong shape."""

    exit_code = 1


class PreconditionError(MukaiError):
    """Well-formed input outside an operation's documented domain."""

    exit_code = 2


class InternalInvariantError(MukaiError):
    """A consistency check the library guarantees has failed."""

    exit_code = 3
