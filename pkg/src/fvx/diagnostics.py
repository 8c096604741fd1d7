"""Error metrics and conservation / energy / enstrophy series."""

from dataclasses import dataclass

import numpy as np

from .errors import MetricError
from .grid import Grid1D, Grid2D, SphereGrid

CSV_COLUMNS = (
    "time",
    "mass",
    "potential",
    "kinetic",
    "energy",
    "enstrophy",
    "min_h",
    "max_wavespeed",
)


@dataclass
class DiagnosticRecord:
    time: float
    mass: float
    potential: float
    kinetic: float
    energy: float
    enstrophy: float
    min_h: float
    max_wavespeed: float

    def row(self):
        return [getattr(self, c) for c in CSV_COLUMNS]


def relative_error(h_test, h_ref):
    """Mean of |h_ref - h_test| / h_ref over cells."""
    h_test = np.asarray(h_test, dtype=float)
    h_ref = np.asarray(h_ref, dtype=float)
    if h_test.shape != h_ref.shape:
        raise MetricError(f"shape mismatch {h_test.shape} vs {h_ref.shape}")
    if np.any(h_ref <= 0):
        raise MetricError("reference field has non-positive entries")
    return float(np.mean(np.abs(h_ref - h_test) / h_ref))


def coarsen(values, factor):
    """Block-average a 1D or 2D cell array by an integer factor."""
    a = np.asarray(values, dtype=float)
    factor = int(factor)
    if factor == 1:
        return a.copy()
    if factor < 1:
        raise MetricError("coarsening factor must be >= 1")
    for n in a.shape:
        if n % factor:
            raise MetricError(f"resolution {a.shape} not divisible by {factor}")
    if a.ndim == 1:
        return a.reshape(-1, factor).mean(axis=1)
    if a.ndim == 2:
        nx, ny = a.shape
        return a.reshape(nx // factor, factor, ny // factor, factor).mean(axis=(1, 3))
    raise MetricError("coarsen expects a 1D or 2D cell array")


def _cell_areas(grid):
    if isinstance(grid, Grid1D):
        return grid.dx
    if isinstance(grid, Grid2D):
        return grid.cell_area
    return grid.cell_area  # per-cell array on the sphere


def total_energy(q, grid, model):
    """Area-weighted (potential, kinetic, total) energy of a SWE state."""
    q = np.asarray(q, dtype=float)
    h = q[0]
    if np.any(h <= 0):
        raise MetricError("non-positive height in energy integral")
    area = _cell_areas(grid)
    pot = float(np.sum(0.5 * model.g * h * h * area))
    kin = float(np.sum(0.5 * np.sum(q[1:] * q[1:], axis=0) / h * area))
    return pot, kin, pot + kin


def _planar_vorticity(q, grid):
    u = q[1] / q[0]
    v = q[2] / q[0]
    dvdx = np.gradient(v, grid.dx, axis=0)
    dudy = np.gradient(u, grid.dy, axis=1)
    return dvdx - dudy


def _sphere_vorticity(q, grid):
    """Circulation around each cell divided by its area (discrete curl)."""
    vel = q[1:] / q[0]
    # velocity averaged to the edges; one-sided at the equator fold rows
    vx = 0.5 * (vel + np.roll(vel, 1, axis=1))
    vy = np.empty((3,) + grid.yedge_length.shape)
    vy[:, :, 1:-1] = 0.5 * (vel[:, :, 1:] + vel[:, :, :-1])
    vy[:, :, 0] = vel[:, :, 0]
    vy[:, :, -1] = vel[:, :, -1]
    tx = np.sum(vx * grid.xedge_frame[:, 1], axis=0) * grid.xedge_length
    ty = np.sum(vy * grid.yedge_frame[:, 1], axis=0) * grid.yedge_length
    # counterclockwise: +bottom, +right, -top, -left (t points +y on x-edges,
    # +x on y-edges)
    circ = ty[:, :-1] + np.roll(tx, -1, axis=0) - ty[:, 1:] - tx
    return circ / grid.cell_area


def potential_enstrophy(q, grid, model):
    """Sum of (zeta + f)^2 / (2h) times cell area."""
    q = np.asarray(q, dtype=float)
    h = q[0]
    if np.any(h <= 0):
        raise MetricError("non-positive height in enstrophy integral")
    if isinstance(grid, SphereGrid):
        zeta = _sphere_vorticity(q, grid)
        f = model.omega * grid.coriolis_f
    elif isinstance(grid, Grid2D):
        zeta = _planar_vorticity(q, grid)
        f = 0.0
    else:
        raise MetricError("potential enstrophy needs a 2D or sphere grid")
    area = _cell_areas(grid)
    return float(np.sum((zeta + f) ** 2 / (2.0 * h) * area))


def measure(time, q, grid, model):
    """One diagnostics record of the interior state q."""
    from .equations import sound_speed

    q = np.asarray(q, dtype=float)
    area = _cell_areas(grid)
    mass = float(np.sum(q[0] * area))
    c = sound_speed(model, q)
    if model.is_swe:
        vel2 = np.sum(q[1:] * q[1:], axis=0) / (q[0] * q[0])
    else:
        vel2 = np.sum(q[1:-1] * q[1:-1], axis=0) / (q[0] * q[0])
    max_speed = float(np.max(np.sqrt(vel2) + c))
    if model.is_swe:
        pot, kin, tot = total_energy(q, grid, model)
        if isinstance(grid, Grid1D):
            ens = 0.0
        else:
            ens = potential_enstrophy(q, grid, model)
    else:
        from .equations import pressure

        p = pressure(model, q, _validate=False)
        pot = float(np.sum(p / (model.gamma - 1.0) * area))  # internal energy
        tot = float(np.sum(q[-1] * area))
        kin = tot - pot
        ens = 0.0
    return DiagnosticRecord(
        time=time,
        mass=mass,
        potential=pot,
        kinetic=kin,
        energy=tot,
        enstrophy=ens,
        min_h=float(q[0].min()),
        max_wavespeed=max_speed,
    )


def write_diagnostics_csv(records, path):
    """Full-precision CSV: header row, '.' decimal, newline-terminated."""
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(",".join(CSV_COLUMNS) + "\n")
        for rec in records:
            f.write(",".join(f"{v:.17g}" for v in rec.row()) + "\n")


def read_diagnostics_csv(path):
    with open(path, "r", encoding="utf-8") as f:
        header = f.readline().strip().split(",")
        if header != list(CSV_COLUMNS):
            raise MetricError(f"unexpected diagnostics header {header}")
        rows = [
            DiagnosticRecord(*(float(v) for v in line.strip().split(",")))
            for line in f
            if line.strip()
        ]
    return rows
