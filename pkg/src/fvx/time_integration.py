"""Explicit time steppers and CFL step control."""

from dataclasses import dataclass

import numpy as np

from .equations import sound_speed
from .errors import ConfigError
from .grid import Grid1D, Grid2D


@dataclass(frozen=True)
class StepControl:
    t_end: float
    cfl: float = 0.3
    mode: str = "adaptive"
    fixed_dt: float | None = None
    fixed_dt_nx: int = 128
    dt_max: float = 1e30

    def __post_init__(self):
        if not 0.0 < self.cfl <= 1.0:
            raise ConfigError("cfl must be in (0, 1]")
        if self.mode not in ("adaptive", "fixed"):
            raise ConfigError(f"unknown step mode '{self.mode}'")
        if self.mode == "fixed" and (self.fixed_dt is None or self.fixed_dt <= 0):
            raise ConfigError("fixed step mode needs fixed_dt > 0")
        if self.t_end < 0:
            raise ConfigError("t_end must be nonnegative")


def _max_signal(model, q, direction):
    if model.system == "swe_sphere":
        un = np.sum(q[1:] * direction, axis=0) / q[0]
    else:
        un = q[1 + direction] / q[0]
    return np.abs(un) + sound_speed(model, q)


def compute_dt(control, model, field, grid):
    """CFL-limited step (adaptive) or the scaled pre-set step (fixed).

    Fixed mode replicates the reference protocol: fixed_dt is the step at
    fixed_dt_nx cells and scales with the resolution ratio.
    """
    if control.mode == "fixed":
        if isinstance(grid, Grid1D):
            n = grid.n_cells
        else:
            n = grid.nx
        return control.fixed_dt * (control.fixed_dt_nx / n)

    q = field.interior
    if isinstance(grid, Grid1D):
        smax = float(np.max(_max_signal(model, q, 0)))
        if smax <= 0.0:
            return control.dt_max
        return min(control.cfl * grid.dx / smax, control.dt_max)
    if isinstance(grid, Grid2D):
        sx = float(np.max(_max_signal(model, q, 0)))
        sy = float(np.max(_max_signal(model, q, 1)))
        if max(sx, sy) <= 0.0:
            return control.dt_max
        dt = control.cfl * min(
            grid.dx / sx if sx > 0 else np.inf, grid.dy / sy if sy > 0 else np.inf
        )
        return min(dt, control.dt_max)

    # Sphere: per-cell directional widths against edge-normal signal speeds.
    xlen, ylen = grid.xedge_length, grid.yedge_length
    wx = grid.cell_area / np.maximum(ylen[:, :-1], ylen[:, 1:])
    wy = grid.cell_area / np.maximum(xlen, np.roll(xlen, -1, axis=0))
    nx_frames = grid.xedge_frame[:, 0]  # normals of the cell's left edge
    ny_frames = grid.yedge_frame[:, 0][:, :, :-1]  # bottom edge normals
    sx = _max_signal(model, q, nx_frames)
    sy = _max_signal(model, q, ny_frames)
    smax = max(float(sx.max()), float(sy.max()))
    if smax <= 0.0:
        return control.dt_max
    with np.errstate(divide="ignore"):
        dt = control.cfl * min(float(np.min(wx / sx)), float(np.min(wy / sy)))
    return min(dt, control.dt_max)


def step_heun(q, rhs, dt):
    """Two-stage second-order (Heun) update."""
    if dt == 0.0:
        return q.copy()
    q1 = q + dt * rhs(q)
    return 0.5 * q + 0.5 * q1 + 0.5 * dt * rhs(q1)


def step_tvd_rk3(q, rhs, dt):
    """Three-stage TVD Runge-Kutta update (printed coefficients, order 3)."""
    if dt == 0.0:
        return q.copy()
    q1 = q + dt * rhs(q)
    q2 = 0.75 * q + 0.25 * q1 + 0.25 * dt * rhs(q1)
    return q / 3.0 + (2.0 / 3.0) * q2 + (2.0 / 3.0) * dt * rhs(q2)


STEPPERS = {"heun": step_heun, "tvd_rk3": step_tvd_rk3, "euler": None}


def step_euler(q, rhs, dt):
    """Single forward-Euler stage (first-order time)."""
    if dt == 0.0:
        return q.copy()
    return q + dt * rhs(q)


STEPPERS["euler"] = step_euler
