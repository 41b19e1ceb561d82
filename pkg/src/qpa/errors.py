"""Exception types shared across the package.

All three map onto distinct command-line exit codes, so keeping them in
one place lets every module raise them without import cycles.
"""

__all__ = ["FormatError", "ParameterError", "PrecisionError"]


class FormatError(ValueError):
    """Malformed or inconsistent bit-file content."""


class ParameterError(ValueError):
    """A size, index, or security parameter violates its constraints."""


class PrecisionError(ArithmeticError):
    """Convolution values drifted too far from integers to round safely."""
