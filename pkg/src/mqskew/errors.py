"""Exception types shared across the package."""


class MQSimError(Exception):
    """Base class for all errors raised by mqskew."""


class CapExceeded(MQSimError):
    """Requested system size exceeds the configured engine cap."""


class BasisMismatch(MQSimError):
    """Operands expressed in different bases were combined."""


class GeometryError(MQSimError):
    """Invalid spin geometry (coincident positions, degenerate axis, ...)."""


class NotADensityMatrix(MQSimError):
    """A matrix violates a density-matrix requirement beyond tolerance."""


class ConsistencyError(MQSimError):
    """Two computations that must agree numerically do not."""


class ConfigError(MQSimError):
    """A run configuration failed to parse or validate."""
