"""Exception hierarchy."""


class AlbumError(Exception):
    """Base class for solver errors."""


class DimensionError(AlbumError, ValueError):
    """An input vector or matrix has the wrong shape."""


class InnerSolverError(AlbumError, RuntimeError):
    """An inner subproblem solver hit its iteration cap.

    ``residual`` carries the last inner stationarity residual.
    """

    def __init__(self, message, residual):
        super().__init__(f"{message} (last inner residual {residual:.3e})")
        self.residual = residual


class UnboundedError(AlbumError, FloatingPointError):
    """The augmented Lagrangian became non-finite."""


class DivergenceError(AlbumError, RuntimeError):
    """The penalty parameter exceeded the divergence guard."""


class ConfigError(AlbumError, ValueError):
    """Invalid experiment configuration."""
