"""Exception hierarchy shared by all modules."""


class ManyLetterError(Exception):
    """Base class for every error raised by the package."""


class ValidationError(ManyLetterError, ValueError):
    """Input violates a documented precondition or invariant."""


class ShapeMismatchError(ValidationError):
    """Two objects live on different truncated many-letter spaces."""


class ZeroNormError(ValidationError):
    """A state would have to be normalized but has (numerically) zero norm."""


class CapacityError(ManyLetterError):
    """A dense operator would exceed the configured dimension cap."""


class SpecFormatError(ManyLetterError):
    """A spec file is not valid JSON or lacks the required structure."""
