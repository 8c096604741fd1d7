"""Exception types shared across the package."""


class FvxError(Exception):
    """Base class for all package errors."""


class DomainError(FvxError):
    """Physically invalid state (non-positive height, density or pressure)."""


class GeometryError(FvxError):
    """Invalid grid geometry (degenerate cell, non-orthonormal frame)."""


class SchemeError(FvxError):
    """Numerical flux scheme failure (e.g. degenerate Roe linearization)."""


class ConfigError(FvxError):
    """Invalid run configuration."""


class FormatError(FvxError):
    """Malformed snapshot or weight file."""


class MetricError(FvxError):
    """Diagnostic metric evaluated on invalid data."""


class InferenceError(FvxError):
    """Shape or bundle mismatch during network inference."""
