class InputError(ValueError):
    """Malformed or out-of-contract input (CLI exit status 2)."""


class FeasibilityError(RuntimeError):
    """A brute-force search would exceed its configured cap (CLI exit status 3)."""
