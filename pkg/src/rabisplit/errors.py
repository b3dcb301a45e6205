"""Exception types shared across the package.

The CLI maps ConfigurationError to exit code 2 and NumericalFailure
(and subclasses) to exit code 3.
"""


class ConfigurationError(ValueError):
    """Invalid or inconsistent run configuration."""


class NumericalFailure(RuntimeError):
    """A numerical routine left its validated operating regime."""
