"""Error taxonomy shared across the package.

The CLI maps InputError to exit code 2 and InvariantViolation to exit code 3.
"""


class InputError(ValueError):
    """Malformed input: bad file, bad flag combination, illegal sample."""


class InvariantViolation(RuntimeError):
    """An internal soundness or consistency check failed."""
