"""Adaptive augmented-Lagrangian methods for ``min f0(x) + h(F(x))``."""

from . import analysis, diagnostics, gallery, prox
from ._core import BACKEND
from .driver import IterationRecord, RunReport, adaptive_step, detect_stabilization, run
from .errors import (AlbumError, ConfigError, DimensionError, DivergenceError, InnerSolverError,
                     UnboundedError)
from .lagrangian import (SolverState, eval_aug_lagrangian, eval_lyapunov, grad_x_aug_lagrangian,
                         kkt_residuals, multiplier_step)
from .maps import ADM, ALBUM1, ALBUM2, ALBUM3, MapConstants, MapKind, map_constants
from .model import AlgoParams, CompositeProblem

__version__ = "0.1.0"

__all__ = [
    "ADM", "ALBUM1", "ALBUM2", "ALBUM3", "AlbumError", "AlgoParams", "BACKEND",
    "CompositeProblem", "ConfigError", "DimensionError", "DivergenceError", "InnerSolverError",
    "IterationRecord", "MapConstants", "MapKind", "RunReport", "SolverState", "UnboundedError",
    "adaptive_step", "analysis", "detect_stabilization", "diagnostics", "eval_aug_lagrangian",
    "eval_lyapunov", "gallery", "grad_x_aug_lagrangian", "kkt_residuals", "map_constants",
    "multiplier_step", "prox", "run",
]
