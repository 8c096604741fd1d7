"""Interface-state reconstruction from cell averages.

All functions work on ghost-padded arrays q[comp, cell...] and reconstruct
along one axis, returning per-face left/right states.  For an interior of n
cells along the axis there are n+1 faces; face f sits between padded cells
(halo+f-1) and (halo+f).
"""

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError


@dataclass
class FaceStates:
    """Per-face left/right states along one axis; shape (ncomp, n+1, ...)."""

    left: np.ndarray
    right: np.ndarray


def minmod(a, b):
    """a if |a|<|b| and ab>0; b if |b|<=|a| and ab>0; 0 if ab <= 0."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    picked = np.where(np.abs(a) < np.abs(b), a, b)
    return np.where(a * b > 0.0, picked, 0.0)


def _axis_slice(q, axis, lo, hi):
    idx = [slice(None)] * q.ndim
    idx[axis] = slice(lo, hi if hi != 0 else None)
    return q[tuple(idx)]


def reconstruct_first_order(q, halo, axis=1):
    """Piecewise-constant faces: left = cell below, right = cell above."""
    left = _axis_slice(q, axis, halo - 1, -halo)
    right = _axis_slice(q, axis, halo, -halo + 1)
    return FaceStates(left, right)


def limited_slopes(q, dx, halo, axis=1):
    """Minmod-limited slopes on cells (halo-1 .. halo+n), one ghost each side."""
    qm = _axis_slice(q, axis, halo - 2, -halo)
    qc = _axis_slice(q, axis, halo - 1, -halo + 1)
    qp = _axis_slice(q, axis, halo, -halo + 2)
    return minmod((qc - qm) / dx, (qp - qc) / dx)


def reconstruct_minmod(q, dx, halo, axis=1, variant="fixed"):
    """MUSCL faces with minmod-limited slopes.

    variant="fixed" extrapolates the upper cell downward (right = Q - s*dx/2),
    which keeps face values inside the adjacent cell range; variant="paper"
    uses + on both sides.
    """
    if halo < 2:
        raise ConfigError("minmod reconstruction needs halo >= 2")
    if variant not in ("fixed", "paper"):
        raise ConfigError(f"unknown minmod variant '{variant}'")
    slopes = limited_slopes(q, dx, halo, axis)
    n_ax = slopes.shape[axis]
    s_lo = _axis_slice(slopes, axis, 0, n_ax - 1)
    s_hi = _axis_slice(slopes, axis, 1, n_ax)
    cells = reconstruct_first_order(q, halo, axis)
    left = cells.left + s_lo * (0.5 * dx)
    sign = -1.0 if variant == "fixed" else 1.0
    right = cells.right + sign * s_hi * (0.5 * dx)
    return FaceStates(left, right)


@dataclass
class SlopeCoefficients:
    """Per-cell stencil weights alpha[comp, cell..., tap] producing slopes.

    slope_i = sum_k alpha[..., k] * Q_{i+k-w} / dx with w the half width.
    All-zero alpha reproduces first-order reconstruction exactly.
    """

    alpha: np.ndarray

    @property
    def width(self):
        return self.alpha.shape[-1]

    def __post_init__(self):
        if self.width % 2 != 1:
            raise ConfigError("slope coefficient stencil width must be odd")


def _flip_component(q, comp):
    out = q.copy()
    out[comp] = -out[comp]
    return out


def reconstruct_with_coefficients(q, coeffs, dx, halo, axis=1, bc="periodic", normal_comp=1):
    """Faces from externally supplied per-cell slope stencils.

    alpha covers interior cells only; the two outermost face states (which
    would need ghost-cell stencils) are closed by the boundary kind: periodic
    wraps the opposite interior face value, wall mirrors the interior value
    with the normal momentum component negated.
    """
    alpha = coeffs.alpha
    w = coeffs.width // 2
    if halo < w + 1:
        raise ConfigError(f"stencil width {coeffs.width} needs halo >= {w + 1}, have {halo}")
    n = q.shape[axis] - 2 * halo
    if alpha.shape[axis] != n:
        raise ConfigError(
            f"coefficient array covers {alpha.shape[axis]} cells, grid has {n}"
        )
    slope = np.zeros(alpha.shape[:-1], dtype=float)
    for k in range(coeffs.width):
        window = _axis_slice(q, axis, halo + k - w, halo + n + k - w - q.shape[axis])
        slope = slope + alpha[..., k] * window
    slope = slope / dx

    cells = reconstruct_first_order(q, halo, axis)
    left = np.array(cells.left)
    right = np.array(cells.right)
    s_half = slope * (0.5 * dx)
    lface = _axis_slice(left, axis, 1, left.shape[axis])
    np.copyto(lface, np.where(s_half == 0.0, lface, lface + s_half))
    rface = _axis_slice(right, axis, 0, right.shape[axis] - 1)
    np.copyto(rface, np.where(s_half == 0.0, rface, rface - s_half))

    first = [slice(None)] * left.ndim
    first[axis] = 0
    last = [slice(None)] * left.ndim
    last[axis] = -1
    if bc == "periodic":
        left[tuple(first)] = left[tuple(last)]
        right[tuple(last)] = right[tuple(first)]
    elif bc == "wall":
        left[tuple(first)] = _flip_component(right[tuple(first)], normal_comp)
        right[tuple(last)] = _flip_component(left[tuple(last)], normal_comp)
    else:
        raise ConfigError(f"unknown boundary kind '{bc}'")
    return FaceStates(left, right)


def _phi_minmod(r):
    return np.maximum(0.0, np.minimum(1.0, r))


def _phi_vanleer(r):
    return (r + np.abs(r)) / (1.0 + np.abs(r))


def _phi_superbee(r):
    return np.maximum(0.0, np.maximum(np.minimum(2.0 * r, 1.0), np.minimum(r, 2.0)))


_PHI = {"minmod-phi": _phi_minmod, "vanleer": _phi_vanleer, "superbee": _phi_superbee}


def blend_flux(f_low, f_high, r, limiter="minmod-phi"):
    """F = F_low - phi(r) (F_low - F_high), phi in [0, 2], phi(r<=0) = 0."""
    if limiter not in _PHI:
        raise ConfigError(f"unknown flux limiter '{limiter}' (have {sorted(_PHI)})")
    f_low = np.asarray(f_low, dtype=float)
    f_high = np.asarray(f_high, dtype=float)
    phi = _PHI[limiter](np.asarray(r, dtype=float))
    return f_low - phi * (f_low - f_high)
