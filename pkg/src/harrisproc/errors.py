"""Exception types shared across the package.

Domain violations (bad parameter values) raise plain ``ValueError``; the
classes below mark failures of numerical machinery rather than of inputs.
"""


class ConvergenceError(RuntimeError):
    """A numerical routine failed to reach its configured tolerance."""


class ResourceLimitError(RuntimeError):
    """A configured resource cap (events, support size) was exceeded."""
