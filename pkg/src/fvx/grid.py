"""Uniform 1D/2D grids and the logically rectangular sphere grid.

The sphere grid lives on the computational rectangle [-3, 1] x [-1, 1].
The sub-square [-1, 1]^2 is mapped through the unit disk onto the upper
hemisphere; [-3, -1] x [-1, 1] onto the lower hemisphere.  Both hemisphere
seams (the equator) are covered twice: the x direction wraps periodically
(xc = 1 touches xc = -3) and the top/bottom rows of the rectangle fold onto
themselves under the column reversal i -> nx-1-i.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import GeometryError

SPHERE_XC_MIN, SPHERE_XC_MAX = -3.0, 1.0
SPHERE_YC_MIN, SPHERE_YC_MAX = -1.0, 1.0


@dataclass(frozen=True)
class Grid1D:
    x_left: float
    x_right: float
    n_cells: int

    def __post_init__(self):
        if self.n_cells < 1 or self.x_right <= self.x_left:
            raise GeometryError("Grid1D requires x_right > x_left and n_cells >= 1")

    @property
    def dx(self):
        return (self.x_right - self.x_left) / self.n_cells

    def cell_centers(self):
        return self.x_left + (np.arange(self.n_cells) + 0.5) * self.dx

    def interfaces(self):
        return self.x_left + np.arange(self.n_cells + 1) * self.dx

    def summary(self):
        return f"Grid1D: {self.n_cells} cells on [{self.x_left}, {self.x_right}], dx={self.dx:.6g}"


@dataclass(frozen=True)
class Grid2D:
    x_left: float
    x_right: float
    y_bottom: float
    y_top: float
    nx: int
    ny: int

    def __post_init__(self):
        if self.nx < 1 or self.ny < 1:
            raise GeometryError("Grid2D requires nx, ny >= 1")
        if self.x_right <= self.x_left or self.y_top <= self.y_bottom:
            raise GeometryError("Grid2D extents are empty")

    @property
    def dx(self):
        return (self.x_right - self.x_left) / self.nx

    @property
    def dy(self):
        return (self.y_top - self.y_bottom) / self.ny

    @property
    def cell_area(self):
        return self.dx * self.dy

    def cell_centers(self):
        x = self.x_left + (np.arange(self.nx) + 0.5) * self.dx
        y = self.y_bottom + (np.arange(self.ny) + 0.5) * self.dy
        return np.meshgrid(x, y, indexing="ij")

    def summary(self):
        return (
            f"Grid2D: {self.nx}x{self.ny} cells on "
            f"[{self.x_left}, {self.x_right}] x [{self.y_bottom}, {self.y_top}], "
            f"dx={self.dx:.6g}, dy={self.dy:.6g}"
        )


def map_disk(xc, yc):
    """Map the square [-1, 1]^2 onto the closed unit disk.

    A vertical segment of the square at |coordinate| = d goes to a circular
    arc of radius R(d) = 1 through (D, -D) and (D, D) with D(d) = d/sqrt(2).
    The formula is written for the sector where the x coordinate dominates;
    the other sectors are handled by reflecting/transposing into it and
    transforming the image back.
    """
    xc = np.asarray(xc, dtype=float)
    yc = np.asarray(yc, dtype=float)
    scalar = xc.ndim == 0 and yc.ndim == 0
    xc, yc = np.broadcast_arrays(xc, yc)
    xc = np.array(xc, dtype=float)
    yc = np.array(yc, dtype=float)

    swap = np.abs(yc) > np.abs(xc)
    a = np.where(swap, yc, xc)
    b = np.where(swap, xc, yc)
    neg = a < 0
    a = np.where(neg, -a, a)

    d = a
    safe_d = np.where(d > 0, d, 1.0)
    D = d / np.sqrt(2.0)
    # R = 1: arc center at D - sqrt(1 - D^2), image point on that arc.
    yp = b * D / safe_d
    xp = D - np.sqrt(1.0 - D * D) + np.sqrt(1.0 - yp * yp)
    xp = np.where(d > 0, xp, 0.0)
    yp = np.where(d > 0, yp, 0.0)
    # the square boundary maps onto the unit circle; pin it there exactly
    # so the two sphere patches share bit-identical equator nodes
    boundary = d == 1.0
    norm = np.where(boundary, np.hypot(xp, yp), 1.0)
    xp = xp / norm
    yp = yp / norm

    xp = np.where(neg, -xp, xp)
    xp2 = np.where(swap, yp, xp)
    yp2 = np.where(swap, xp, yp)
    if scalar:
        return float(xp2), float(yp2)
    return xp2, yp2


def map_sphere(xc, yc):
    """Map the rectangle [-3, 1] x [-1, 1] onto the unit sphere.

    xc >= -1 goes through the disk onto the upper hemisphere.  xc < -1 is
    sent to the mirrored disk point with negative z, so that the patch
    boundaries (xc = -1, and the wrap xc = 1 <-> xc = -3) land on identical
    equator points and the grid is seamless.
    """
    xc = np.asarray(xc, dtype=float)
    yc = np.asarray(yc, dtype=float)
    scalar = xc.ndim == 0 and yc.ndim == 0
    xc, yc = np.broadcast_arrays(xc, yc)

    lower = np.asarray(xc < -1.0)
    xeff = np.where(lower, -(xc + 2.0), xc)
    xp, yp = map_disk(xeff, yc)
    zp = np.sqrt(np.maximum(0.0, 1.0 - xp * xp - yp * yp))
    zp = np.where(np.maximum(np.abs(xeff), np.abs(yc)) == 1.0, 0.0, zp)
    zp = np.where(lower, -zp, zp)
    if scalar:
        return float(xp), float(yp), float(zp)
    return xp, yp, zp


def _unit(v, axis=0):
    return v / np.linalg.norm(v, axis=axis, keepdims=True)


def _great_circle_length(p1, p2, radius):
    # 2 arcsin of half chord: accurate for short edges.
    chord = np.linalg.norm(p1 - p2, axis=0) / radius
    return radius * 2.0 * np.arcsin(np.clip(0.5 * chord, 0.0, 1.0))


def _spherical_triangle_area(a, b, c):
    """Spherical excess of the triangle with unit-vector corners via l'Huilier."""
    sa = 2.0 * np.arcsin(np.clip(0.5 * np.linalg.norm(b - c, axis=0), 0.0, 1.0))
    sb = 2.0 * np.arcsin(np.clip(0.5 * np.linalg.norm(a - c, axis=0), 0.0, 1.0))
    sc = 2.0 * np.arcsin(np.clip(0.5 * np.linalg.norm(a - b, axis=0), 0.0, 1.0))
    s = 0.5 * (sa + sb + sc)
    t = (
        np.tan(0.5 * s)
        * np.tan(0.5 * (s - sa))
        * np.tan(0.5 * (s - sb))
        * np.tan(0.5 * (s - sc))
    )
    return 4.0 * np.arctan(np.sqrt(np.maximum(t, 0.0)))


def _edge_frame(p1, p2, outward_hint):
    """Orthonormal (n, t, r) triad of the edge p1 -> p2 on a sphere.

    t: unit chord, r: unit radial at the edge midpoint, n = t x r flipped if
    needed so that it points along ``outward_hint``.
    """
    t = _unit(p2 - p1)
    r = _unit(0.5 * (p1 + p2))
    n = np.cross(t, r, axis=0)
    n = _unit(n)
    sign = np.sign(np.sum(n * outward_hint, axis=0))
    if np.any(sign == 0):
        raise GeometryError("ambiguous edge normal orientation")
    return n * sign, t, r


@dataclass
class SphereGrid:
    """Logically rectangular grid covering the full sphere of given radius.

    Arrays are indexed [component, i, j] with i the computational x index
    (periodic, nx columns over [-3, 1]) and j the y index (ny rows over
    [-1, 1]).  ``xedge_*[:, i, j]`` describes the edge between cells
    (i-1, j) and (i, j) (wrapping at i = 0); ``yedge_*[:, i, j]`` the edge
    between cells (i, j-1) and (i, j).  Rows j = 0 and j = ny are the
    equator folds: the edge (i, 0) coincides with (nx-1-i, 0), likewise at
    j = ny, with opposite outward normals.
    """

    nx: int
    ny: int
    radius: float
    vertices: np.ndarray = field(repr=False)  # (3, nx+1, ny+1)
    cell_center: np.ndarray = field(repr=False)  # (3, nx, ny)
    cell_area: np.ndarray = field(repr=False)  # (nx, ny)
    xedge_length: np.ndarray = field(repr=False)  # (nx, ny)
    yedge_length: np.ndarray = field(repr=False)  # (nx, ny+1)
    xedge_frame: np.ndarray = field(repr=False)  # (3, 3, nx, ny): n, t, r
    yedge_frame: np.ndarray = field(repr=False)  # (3, 3, nx, ny+1)
    xedge_span: np.ndarray = field(repr=False)  # (nx, ny) center-to-center distance
    yedge_span: np.ndarray = field(repr=False)  # (nx, ny+1)
    edge_normal_sum: np.ndarray = field(repr=False)  # (3, nx, ny): sum h_e n_e outward
    coriolis_f: np.ndarray = field(repr=False)  # (nx, ny), 2*omega*z_c/a per unit omega

    @property
    def dx(self):
        return (SPHERE_XC_MAX - SPHERE_XC_MIN) / self.nx

    @property
    def dy(self):
        return (SPHERE_YC_MAX - SPHERE_YC_MIN) / self.ny

    def total_area(self):
        return float(self.cell_area.sum())

    def summary(self):
        return (
            f"SphereGrid: {self.nx}x{self.ny} cells, radius={self.radius:.6g}, "
            f"cell area [{self.cell_area.min():.6g}, {self.cell_area.max():.6g}], "
            f"edge length [{min(self.xedge_length.min(), self.yedge_length.min()):.6g}, "
            f"{max(self.xedge_length.max(), self.yedge_length.max()):.6g}]"
        )


def build_sphere_grid(nx, ny, radius=1.0):
    """Tessellate the computational rectangle and push it onto the sphere.

    nx must be even (half the columns per hemisphere) and >= 4, ny >= 2.
    """
    if nx < 4 or nx % 2 != 0:
        raise GeometryError("sphere grid needs nx >= 4 and even")
    if ny < 2:
        raise GeometryError("sphere grid needs ny >= 2")
    if radius <= 0:
        raise GeometryError("sphere radius must be positive")

    xc = np.linspace(SPHERE_XC_MIN, SPHERE_XC_MAX, nx + 1)
    yc = np.linspace(SPHERE_YC_MIN, SPHERE_YC_MAX, ny + 1)
    xg, yg = np.meshgrid(xc, yc, indexing="ij")
    vx, vy, vz = map_sphere(xg, yg)
    vertices = radius * np.stack([vx, vy, vz])

    dxc = (SPHERE_XC_MAX - SPHERE_XC_MIN) / nx
    dyc = (SPHERE_YC_MAX - SPHERE_YC_MIN) / ny
    xcc = SPHERE_XC_MIN + (np.arange(nx) + 0.5) * dxc
    ycc = SPHERE_YC_MIN + (np.arange(ny) + 0.5) * dyc
    xcg, ycg = np.meshgrid(xcc, ycc, indexing="ij")
    cx, cy, cz = map_sphere(xcg, ycg)
    cell_center = radius * np.stack([cx, cy, cz])

    bl = vertices[:, :-1, :-1]
    br = vertices[:, 1:, :-1]
    ur = vertices[:, 1:, 1:]
    ul = vertices[:, :-1, 1:]
    ubl, ubr, uur, uul = (_unit(p) for p in (bl, br, ur, ul))
    excess = _spherical_triangle_area(ubl, ubr, uur) + _spherical_triangle_area(
        ubl, uur, uul
    )
    cell_area = radius * radius * excess
    if np.any(cell_area < 1e-14 * radius * radius):
        i, j = np.argwhere(cell_area < 1e-14 * radius * radius)[0]
        raise GeometryError(f"degenerate sphere cell ({i}, {j}): area {cell_area[i, j]:.3e}")

    # Vertical computational edges: vertex column i spans cells (i-1, j) | (i, j).
    p1 = vertices[:, :-1, :-1]  # bottom vertex of edge column i (i = 0..nx-1)
    p2 = vertices[:, :-1, 1:]
    xedge_length = _great_circle_length(p1, p2, radius)
    left_center = cell_center[:, np.arange(-1, nx - 1), :]
    xhint = cell_center - left_center
    xn, xt, xr = _edge_frame(p1, p2, xhint)
    xedge_frame = np.stack([xn, xt, xr], axis=1)

    # Horizontal computational edges j = 0..ny: cells (i, j-1) | (i, j).
    p1 = vertices[:, :-1, :]
    p2 = vertices[:, 1:, :]
    yedge_length = _great_circle_length(p1, p2, radius)
    below = np.empty((3, nx, ny + 1))
    below[:, :, 1:] = cell_center
    below[:, :, 0] = cell_center[:, ::-1, 0]  # equator fold partner
    above = np.empty((3, nx, ny + 1))
    above[:, :, :-1] = cell_center
    above[:, :, -1] = cell_center[:, ::-1, -1]
    yn, yt, yr = _edge_frame(p1, p2, above - below)
    yedge_frame = np.stack([yn, yt, yr], axis=1)

    coriolis_f = 2.0 * cell_center[2] / radius

    xedge_span = np.linalg.norm(xhint, axis=0)
    yedge_span = np.linalg.norm(above - below, axis=0)
    hxn = xedge_length * xedge_frame[:, 0]
    hyn = yedge_length * yedge_frame[:, 0]
    edge_normal_sum = (np.roll(hxn, -1, axis=1) - hxn) + (hyn[:, :, 1:] - hyn[:, :, :-1])

    grid = SphereGrid(
        nx=nx,
        ny=ny,
        radius=radius,
        vertices=vertices,
        cell_center=cell_center,
        cell_area=cell_area,
        xedge_length=xedge_length,
        yedge_length=yedge_length,
        xedge_frame=xedge_frame,
        yedge_frame=yedge_frame,
        xedge_span=xedge_span,
        yedge_span=yedge_span,
        edge_normal_sum=edge_normal_sum,
        coriolis_f=coriolis_f,
    )
    return grid
