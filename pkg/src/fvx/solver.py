"""End-to-end finite-volume drivers.

ConservedField stores cell averages with a ghost halo; rhs_cartesian /
rhs_sphere assemble flux divergences plus sources; run() advances a
validated configuration to t_end, recording diagnostics and snapshots.
"""

import os
from dataclasses import dataclass, field as dc_field

import numpy as np

from . import kernels
from .diagnostics import DiagnosticRecord, measure
from .equations import (
    EquationModel,
    N_COMPONENTS,
    bathymetry_source,
    coriolis_source,
    friction_source,
    physical_flux,
    project_tangent,
)
from .errors import ConfigError, DomainError
from .grid import Grid1D, Grid2D, SphereGrid, build_sphere_grid
from .numerical_flux import FluxScheme
from .reconstruction import (
    SlopeCoefficients,
    reconstruct_first_order,
    reconstruct_minmod,
    reconstruct_with_coefficients,
)
from .time_integration import STEPPERS, StepControl, compute_dt

DEFAULT_HALO = 2


@dataclass
class BoundaryCondition:
    x: str = "periodic"
    y: str = "periodic"

    def __post_init__(self):
        for side in (self.x, self.y):
            if side not in ("periodic", "wall"):
                raise ConfigError(f"unknown boundary kind '{side}'")


class ConservedField:
    """Cell-average state plus ghost halo.

    data has shape (ncomp, nx + 2*halo) in 1D and (ncomp, nx + 2*halo,
    ny + 2*halo) in 2D / sphere.
    """

    def __init__(self, grid, n_components, halo=DEFAULT_HALO, data=None):
        self.grid = grid
        self.halo = halo
        if isinstance(grid, Grid1D):
            shape = (n_components, grid.n_cells + 2 * halo)
        else:
            shape = (n_components, grid.nx + 2 * halo, grid.ny + 2 * halo)
        if data is None:
            data = np.zeros(shape)
        if data.shape != shape:
            raise ConfigError(f"field data shape {data.shape} != expected {shape}")
        self.data = data

    @property
    def n_components(self):
        return self.data.shape[0]

    @property
    def interior(self):
        h = self.halo
        if self.data.ndim == 2:
            return self.data[:, h:-h]
        return self.data[:, h:-h, h:-h]

    @interior.setter
    def interior(self, values):
        h = self.halo
        if self.data.ndim == 2:
            self.data[:, h:-h] = values
        else:
            self.data[:, h:-h, h:-h] = values

    def copy(self):
        return ConservedField(self.grid, self.n_components, self.halo, self.data.copy())


def _mirror_fill(data, axis, halo, flip_comp):
    """Wall ghosts: mirror the interior, negating the normal momentum row."""
    n = data.shape[axis]
    idx = [slice(None)] * data.ndim

    def ax(sl):
        i = list(idx)
        i[axis] = sl
        return tuple(i)

    left = data[ax(slice(2 * halo - 1, halo - 1, -1))].copy()
    right = data[ax(slice(n - halo - 1, n - 2 * halo - 1, -1))].copy()
    left[flip_comp] = -left[flip_comp]
    right[flip_comp] = -right[flip_comp]
    data[ax(slice(0, halo))] = left
    data[ax(slice(n - halo, n))] = right


def _periodic_fill(data, axis, halo):
    n = data.shape[axis]
    idx = [slice(None)] * data.ndim

    def ax(sl):
        i = list(idx)
        i[axis] = sl
        return tuple(i)

    data[ax(slice(0, halo))] = data[ax(slice(n - 2 * halo, n - halo))]
    data[ax(slice(n - halo, n))] = data[ax(slice(halo, 2 * halo))]


def fill_ghosts(field, bc, model=None):
    """Fill the halo per boundary kind; sphere grids use their own seams."""
    data = field.data
    h = field.halo
    if isinstance(field.grid, SphereGrid):
        _periodic_fill(data, 1, h)
        # Equator folds: ghost rows are the top/bottom interior rows of the
        # column-reversed array (Cartesian momentum carries over unchanged).
        data[:, :, :h] = data[:, ::-1, 2 * h - 1 : h - 1 : -1]
        data[:, :, -h:] = data[:, ::-1, -h - 1 : -2 * h - 1 : -1]
        return field
    if isinstance(field.grid, Grid1D):
        if bc.x == "periodic":
            _periodic_fill(data, 1, h)
        else:
            _mirror_fill(data, 1, h, 1)
        return field
    if bc.x == "periodic":
        _periodic_fill(data, 1, h)
    else:
        _mirror_fill(data, 1, h, 1)
    if bc.y == "periodic":
        _periodic_fill(data, 2, h)
    else:
        _mirror_fill(data, 2, h, 2)
    return field


class Reconstructor:
    """Strategy wrapper turning padded arrays into per-face states."""

    order = 1

    def faces(self, qpad, dx, halo, axis, bc_kind, normal_comp, q_interior):
        return reconstruct_first_order(qpad, halo, axis)


class MinmodReconstructor(Reconstructor):
    order = 2

    def __init__(self, variant="fixed"):
        self.variant = variant

    def faces(self, qpad, dx, halo, axis, bc_kind, normal_comp, q_interior):
        return reconstruct_minmod(qpad, dx, halo, axis, self.variant)


class CoefficientReconstructor(Reconstructor):
    """Slope stencils supplied per stage by a provider(q_interior, axis)."""

    order = 2

    def __init__(self, provider, width=3):
        self.provider = provider
        self.width = width

    def faces(self, qpad, dx, halo, axis, bc_kind, normal_comp, q_interior):
        alpha = self.provider(q_interior, axis)
        coeffs = alpha if isinstance(alpha, SlopeCoefficients) else SlopeCoefficients(alpha)
        return reconstruct_with_coefficients(
            qpad, coeffs, dx, halo, axis, bc=bc_kind, normal_comp=normal_comp
        )


def make_reconstructor(spec_string, bundle=None):
    if spec_string == "order1":
        return Reconstructor()
    if spec_string == "minmod":
        return MinmodReconstructor("fixed")
    if spec_string == "minmod-paper":
        return MinmodReconstructor("paper")
    if spec_string.startswith("coeff"):
        from .nn import coefficient_provider

        if bundle is None:
            raise ConfigError("coefficient reconstruction needs a weight bundle")
        return CoefficientReconstructor(coefficient_provider(bundle))
    raise ConfigError(f"unknown reconstruction '{spec_string}'")


_SWAP_XY = {3: [0, 2, 1], 4: [0, 2, 1, 3]}


def _face_flux(model, scheme, fl, fr, lf_ratio):
    ncomp = fl.shape[0]
    flat_l = fl.reshape(ncomp, -1)
    flat_r = fr.reshape(ncomp, -1)
    if model.is_swe:
        out = kernels.swe_flux(scheme.id, model.g, flat_l, flat_r, lf_ratio, scheme.entropy_fix)
    else:
        out = kernels.euler_flux(
            scheme.id, model.gamma, flat_l, flat_r, lf_ratio, scheme.entropy_fix
        )
    return out.reshape(fl.shape)


def rhs_cartesian(field, model, scheme, recon, bc, grid, dt=None, bed_slopes=None):
    """Flux-divergence + source derivative on 1D/2D Cartesian grids."""
    fill_ghosts(field, bc, model)
    h = field.halo
    q_int = field.interior

    if isinstance(grid, Grid1D):
        faces = recon.faces(field.data, grid.dx, h, 1, bc.x, 1, q_int)
        ratio = grid.dx / dt if (scheme.kind == "lf" and dt) else scheme.lf_ratio
        fx = _face_flux(model, scheme, faces.left, faces.right, ratio)
        dq = -(fx[:, 1:] - fx[:, :-1]) / grid.dx
    else:
        qx = field.data[:, :, h:-h]
        faces = recon.faces(qx, grid.dx, h, 1, bc.x, 1, q_int)
        ratio = grid.dx / dt if (scheme.kind == "lf" and dt) else scheme.lf_ratio
        fx = _face_flux(model, scheme, faces.left, faces.right, ratio)

        # y faces: reconstruct componentwise, swap hu<->hv only for the
        # normal-momentum slot of the 1D face solver, swap the flux back.
        swap = _SWAP_XY[model.n_components]
        qy = field.data[:, h:-h, :]
        faces = recon.faces(qy, grid.dy, h, 2, bc.y, 2, q_int)
        ratio = grid.dy / dt if (scheme.kind == "lf" and dt) else scheme.lf_ratio
        fy = _face_flux(model, scheme, faces.left[swap], faces.right[swap], ratio)[swap]

        dq = -(fx[:, 1:, :] - fx[:, :-1, :]) / grid.dx - (
            fy[:, :, 1:] - fy[:, :, :-1]
        ) / grid.dy

    if model.is_swe and bed_slopes is not None:
        dq = dq + bathymetry_source(model, q_int, bed_slopes)
    if model.is_swe and model.manning_n > 0.0:
        dq = dq + friction_source(model, q_int)
    return dq


def _rotate_edges_in(q, frames):
    """(h, m) -> (h, m.n, m.t, m.r) for batched edges; frames (3, 3, ...)."""
    out = np.empty(q.shape)
    out[0] = q[0]
    for k in range(3):
        out[1 + k] = np.sum(q[1:] * frames[:, k], axis=0)
    return out


def _rotate_edges_back(f, frames):
    out = np.empty(f.shape)
    out[0] = f[0]
    for i in range(3):
        out[1 + i] = (
            frames[i, 0] * f[1] + frames[i, 1] * f[2] + frames[i, 2] * f[3]
        )
    return out


def rhs_sphere(field, model, scheme, recon, grid, dt=None):
    """Flux divergence with metric correction and Coriolis on the sphere."""
    fill_ghosts(field, None, model)
    h = field.halo
    q_int = field.interior
    nx, ny = grid.nx, grid.ny

    # Vertical (x-direction) edges: edge i sits between cells i-1 and i.
    faces = recon.faces(field.data[:, :, h:-h], grid.dx, h, 1, "periodic", 1, q_int)
    ql = _rotate_edges_in(faces.left[:, :nx, :], grid.xedge_frame)
    qr = _rotate_edges_in(faces.right[:, :nx, :], grid.xedge_frame)
    ratio = (grid.xedge_span / dt).reshape(-1) if (scheme.kind == "lf" and dt) else scheme.lf_ratio
    fx = _rotate_edges_back(
        _face_flux(model, scheme, ql, qr, ratio), grid.xedge_frame
    )

    # Horizontal (y-direction) edges, including the two equator-fold rows.
    faces = recon.faces(field.data[:, h:-h, :], grid.dy, h, 2, "periodic", 1, q_int)
    ql = _rotate_edges_in(faces.left, grid.yedge_frame)
    qr = _rotate_edges_in(faces.right, grid.yedge_frame)
    ratio = (grid.yedge_span / dt).reshape(-1) if (scheme.kind == "lf" and dt) else scheme.lf_ratio
    fy = _rotate_edges_back(
        _face_flux(model, scheme, ql, qr, ratio), grid.yedge_frame
    )
    # Each fold edge appears in two columns (i and nx-1-i); keep the left
    # half's value on both so the pair cancels exactly in the global sum.
    half = nx // 2
    fy[:, half:, 0] = -fy[:, half - 1 :: -1, 0]
    fy[:, half:, ny] = -fy[:, half - 1 :: -1, ny]

    hfx = grid.xedge_length * fx
    hfy = grid.yedge_length * fy
    div = (np.roll(hfx, -1, axis=1) - hfx) + (hfy[:, :, 1:] - hfy[:, :, :-1])
    dq = -div / grid.cell_area

    # Metric correction: cancels the flux imbalance of a constant state.
    cor = physical_flux(model, q_int, direction=grid.edge_normal_sum)
    dq[1:] += cor[1:] / grid.cell_area

    if model.omega != 0.0:
        dq += coriolis_source(model, grid.cell_center, q_int)
    return dq


# ---------------------------------------------------------------------------
# Initial conditions


def _midpoints_1d(grid):
    return grid.cell_centers()


def initial_condition(name, grid, model, params=None):
    """Cell averages of a named analytic initial state (midpoint sampling)."""
    p = dict(params or {})
    field = ConservedField(grid, model.n_components)
    q = field.interior

    if name == "dambreak1d":
        x = _midpoints_1d(grid)
        hl, hr, x0 = p.get("hl", 1.0), p.get("hr", 0.35), p.get("x0", 0.5)
        q[0] = np.where(x < x0, hl, hr)
        return field

    if name == "sod1d":
        x = _midpoints_1d(grid)
        x0 = p.get("x0", 0.5)
        left = (1.0, 0.0, 1.0 / (model.gamma - 1.0))
        right = (0.125, 0.0, 0.1 / (model.gamma - 1.0))
        for k in range(3):
            q[k] = np.where(x < x0, left[k], right[k])
        return field

    if name == "gaussian2d":
        xc, yc = grid.cell_centers()
        x0, y0 = p.get("x0", 0.5), p.get("y0", 0.5)
        sigma = p.get("sigma", 0.5)
        q[0] = np.exp(-((xc - x0) ** 2 + (yc - y0) ** 2) / sigma**2) + 0.5
        return field

    if name == "euler2d_riemann":
        # Four-quadrant Riemann data (Liska & Wendroff configuration 4,
        # the standard quadrants example), split at (x0, y0).
        xc, yc = grid.cell_centers()
        x0, y0 = p.get("x0", 0.8), p.get("y0", 0.8)
        quads = {
            # (east, north): (rho, u, v, p)
            (True, True): (1.5, 0.0, 0.0, 1.5),
            (False, True): (0.532258064516129, 1.206045378311055, 0.0, 0.3),
            (False, False): (
                0.137992831541219,
                1.206045378311055,
                1.206045378311055,
                0.029032258064516,
            ),
            (True, False): (0.532258064516129, 0.0, 1.206045378311055, 0.3),
        }
        for (east, north), (rho, u, v, pr) in quads.items():
            mask = ((xc >= x0) == east) & ((yc >= y0) == north)
            q[0][mask] = rho
            q[1][mask] = rho * u
            q[2][mask] = rho * v
            q[3][mask] = pr / (model.gamma - 1.0) + 0.5 * rho * (u * u + v * v)
        return field

    if name == "lake_at_rest":
        q[0] = p.get("h0", 1.0)
        return field

    if name == "rossby_haurwitz":
        if not isinstance(grid, SphereGrid):
            raise ConfigError("rossby_haurwitz needs a sphere grid")
        return _rossby_haurwitz(grid, model, p, field)

    if name == "from_file":
        from .snapshot import read_snapshot

        snap = read_snapshot(p["file"])
        if snap.q.shape != q.shape:
            raise ConfigError(
                f"snapshot shape {snap.q.shape} does not match grid {q.shape}"
            )
        field.interior = snap.q
        return field

    raise ConfigError(f"unknown initial condition '{name}'")


def _rossby_haurwitz(grid, model, p, field):
    """Wave-number-4 Rossby-Haurwitz pattern, nondimensionalized so that the
    sphere has unit radius and one time unit is one day (86400 s)."""
    a_earth = p.get("a", 6.37122e6)
    t0 = p.get("t0", 86400.0)
    k_amp = p.get("k", 7.848e-6)
    h0 = p.get("h0", 8000.0)
    rr = p.get("wave_number", 4.0)
    omega_dim = p.get("omega", 7.292e-5)
    g_dim = p.get("g", 9.8)

    c = grid.cell_center / grid.radius
    lon = np.arctan2(c[1], c[0])
    lat = np.arcsin(np.clip(c[2], -1.0, 1.0))
    cosl = np.cos(lat)

    a_term = 0.5 * k_amp * (2.0 * omega_dim + k_amp) * cosl**2 + 0.25 * k_amp**2 * cosl ** (
        2.0 * rr
    ) * ((rr + 1.0) * cosl**2 + (2.0 * rr**2 - rr - 2.0) - 2.0 * rr**2 * cosl ** (-2.0))
    b_term = (
        (2.0 * (omega_dim + k_amp) * k_amp)
        / ((rr + 1.0) * (rr + 2.0))
        * cosl**rr
        * ((rr**2 + 2.0 * rr + 2.0) - (rr + 1.0) ** 2 * cosl**2)
    )
    c_term = 0.25 * k_amp**2 * cosl ** (2.0 * rr) * ((rr + 1.0) * cosl**2 - (rr + 2.0))

    h = h0 / a_earth + (a_earth / g_dim) * (
        a_term + b_term * np.cos(rr * lon) + c_term * np.cos(2.0 * rr * lon)
    )

    # angular velocities (1/s) scaled by the day: nondimensional velocities
    u_lon = (
        k_amp * cosl + k_amp * cosl ** (rr - 1.0) * (rr * np.sin(lat) ** 2 - cosl**2) * np.cos(rr * lon)
    ) * t0
    v_lat = (-k_amp * rr * cosl ** (rr - 1.0) * np.sin(lat) * np.sin(rr * lon)) * t0

    u = -np.sin(lon) * u_lon - np.sin(lat) * np.cos(lon) * v_lat
    v = np.cos(lon) * u_lon - np.sin(lat) * np.sin(lon) * v_lat
    w = cosl * v_lat

    q = field.interior
    q[0] = h
    q[1] = h * u
    q[2] = h * v
    q[3] = h * w
    field.interior = project_tangent(grid.cell_center, q)
    return field


def rossby_haurwitz_model(system="swe_sphere", a=6.37122e6, t0=86400.0, omega=7.292e-5, g=9.8):
    """Nondimensional model matching the rossby_haurwitz initial condition."""
    return EquationModel(
        system=system, g=g * t0 * t0 / a, omega=omega * t0, radius=1.0
    )


# ---------------------------------------------------------------------------
# Run loop


@dataclass
class RunState:
    field: ConservedField
    time: float
    step_count: int
    diagnostics: list = dc_field(default_factory=list)
    snapshots: list = dc_field(default_factory=list)


class SolverAbort(DomainError):
    def __init__(self, message, step, cell):
        super().__init__(message)
        self.step = step
        self.cell = cell


def _check_state(q, model, step):
    bad = ~np.isfinite(q)
    if np.any(bad):
        cell = tuple(np.argwhere(bad)[0])
        raise SolverAbort(
            f"non-finite value in component {cell[0]} at cell {cell[1:]} "
            f"after step {step}",
            step,
            cell,
        )
    if model.strict and np.any(q[0] <= 0.0):
        cell = tuple(np.argwhere(q[0] <= 0.0)[0])
        label = "height" if model.is_swe else "density"
        raise SolverAbort(
            f"non-positive {label} at cell {cell} after step {step}", step, cell
        )


def run(config, out_dir=None):
    """Advance a validated RunConfig from t=0 to t_end.

    Writes snapshots and the diagnostics CSV under out_dir when given; on a
    non-finite state the last valid snapshot is flushed and SolverAbort is
    raised.
    """
    from .diagnostics import write_diagnostics_csv
    from .snapshot import write_snapshot

    model = config.make_model()
    grid = config.make_grid()
    field = initial_condition(config.ic_name, grid, model, config.ic_params)
    bundle = None
    if config.reconstruction.split(":", 1)[0] == "coeff":
        from .nn import load_weights

        bundle = load_weights(config.weights)
        recon = make_reconstructor("coeff", bundle)
    else:
        recon = make_reconstructor(config.reconstruction)
    scheme = config.scheme
    stepper = STEPPERS[config.stepper]
    control = config.control
    bc = BoundaryCondition(config.bc_x, config.bc_y)
    is_sphere = isinstance(grid, SphereGrid)

    scratch = ConservedField(grid, model.n_components)
    dt_box = [None]

    def rhs(q):
        scratch.interior = q
        if is_sphere:
            return rhs_sphere(scratch, model, scheme, recon, grid, dt=dt_box[0])
        return rhs_cartesian(scratch, model, scheme, recon, bc, grid, dt=dt_box[0])

    q = field.interior.copy()
    t = 0.0
    step = 0
    state = RunState(field=field, time=0.0, step_count=0)
    state.diagnostics.append(measure(0.0, q, grid, model))

    def flush_snapshot(tag, time_val, values):
        if out_dir is None:
            return
        os.makedirs(out_dir, exist_ok=True)
        path = os.path.join(out_dir, f"{config.prefix}_{tag}.fvx")
        write_snapshot(values, grid, time_val, model.system, path)
        state.snapshots.append(path)

    flush_snapshot("000000", 0.0, q)
    next_snap_time = (
        config.snapshot_every_time if config.snapshot_every_time else None
    )

    t_end = control.t_end
    last_good = q
    last_good_t = 0.0
    try:
        while t < t_end * (1.0 - 1e-13):
            scratch.interior = q
            dt = compute_dt(control, model, scratch, grid)
            dt = min(dt, t_end - t)
            dt_box[0] = dt
            q = stepper(q, rhs, dt)
            if is_sphere:
                q = project_tangent(grid.cell_center, q)
            step += 1
            t += dt
            _check_state(q, model, step)
            last_good, last_good_t = q, t
            if config.diagnostics_every_steps and step % config.diagnostics_every_steps == 0:
                state.diagnostics.append(measure(t, q, grid, model))
            if config.snapshot_every_steps and step % config.snapshot_every_steps == 0:
                flush_snapshot(f"{step:06d}", t, q)
            elif next_snap_time is not None and t >= next_snap_time * (1 - 1e-13):
                flush_snapshot(f"{step:06d}", t, q)
                next_snap_time += config.snapshot_every_time
    except SolverAbort:
        flush_snapshot("abort", last_good_t, last_good)
        if out_dir is not None:
            write_diagnostics_csv(
                state.diagnostics,
                os.path.join(out_dir, f"{config.prefix}_diagnostics.csv"),
            )
        raise

    if state.diagnostics[-1].time < t:
        state.diagnostics.append(measure(t, q, grid, model))
    if out_dir is not None:
        os.makedirs(out_dir, exist_ok=True)
        write_diagnostics_csv(
            state.diagnostics,
            os.path.join(out_dir, f"{config.prefix}_diagnostics.csv"),
        )
    field.interior = q
    state.time = t
    state.step_count = step
    flush_snapshot("final", t, q)
    return state
