"""Structured-grid finite-volume solvers for shallow water and Euler
equations in 1D, 2D and on a logically rectangular sphere grid, with
interchangeable interface flux schemes, slope-limited reconstruction,
TVD Runge-Kutta stepping, exact Riemann references, and an inference-only
plug-in for learned reconstructions."""

from .equations import EquationModel, physical_flux, pressure, project_tangent, wave_speeds
from .errors import (
    ConfigError,
    DomainError,
    FormatError,
    FvxError,
    GeometryError,
    InferenceError,
    MetricError,
    SchemeError,
)
from .grid import Grid1D, Grid2D, SphereGrid, build_sphere_grid, map_disk, map_sphere
from .numerical_flux import FluxScheme, interface_flux, rotated_flux
from .reconstruction import FaceStates, SlopeCoefficients, blend_flux, minmod
from .solver import (
    BoundaryCondition,
    ConservedField,
    RunState,
    SolverAbort,
    fill_ghosts,
    initial_condition,
    rhs_cartesian,
    rhs_sphere,
    run,
)
from .time_integration import StepControl, compute_dt, step_heun, step_tvd_rk3

__version__ = "0.1.0"

__all__ = [
    "BoundaryCondition",
    "ConfigError",
    "ConservedField",
    "DomainError",
    "EquationModel",
    "FaceStates",
    "FluxScheme",
    "FormatError",
    "FvxError",
    "GeometryError",
    "Grid1D",
    "Grid2D",
    "InferenceError",
    "MetricError",
    "RunState",
    "SchemeError",
    "SlopeCoefficients",
    "SolverAbort",
    "SphereGrid",
    "StepControl",
    "blend_flux",
    "build_sphere_grid",
    "compute_dt",
    "fill_ghosts",
    "initial_condition",
    "interface_flux",
    "map_disk",
    "map_sphere",
    "minmod",
    "physical_flux",
    "pressure",
    "project_tangent",
    "rhs_cartesian",
    "rhs_sphere",
    "rotated_flux",
    "run",
    "step_heun",
    "step_tvd_rk3",
    "wave_speeds",
]
