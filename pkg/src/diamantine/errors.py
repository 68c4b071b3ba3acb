"""Exception types shared across the package."""


class DiamantineError(Exception):
    """Base class for all library errors."""


class InputError(DiamantineError):
    """Malformed or out-of-contract user input."""


class ShapeError(InputError):
    """Wrong vector count, matrix size, or dimension."""


class ZeroLengthBarError(InputError):
    """An edge vector has zero length."""


class FormatError(InputError):
    """Requested output format is not available for this input."""


class UnsupportedLengthsError(InputError):
    """Closed-form planar test only derived for unit edge lengths."""


class ParseError(InputError):
    """Spec document violates the input schema."""

    def __init__(self, message: str, field: str | None = None):
        super().__init__(message if field is None else f"{field}: {message}")
        self.field = field


class DegenerateCellError(DiamantineError):
    """Operation requires a non-degenerate unit cell (nonzero volume)."""


class ConeViolationError(DiamantineError):
    """Matrix expected inside the positive definite cone is not."""


class OffHypersurfaceError(DiamantineError):
    """(omega, s) pair does not satisfy the realizability equation."""


class RealizationError(DiamantineError):
    """Gram matrix could not be factored as a rank-d configuration."""


class SaddleRequiredError(DiamantineError):
    """Operation is only defined at a realized saddle configuration."""


class IncapableError(DiamantineError):
    """Auxetic path requested from a configuration without auxetic capability."""
