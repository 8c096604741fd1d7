"""Physical flux vectors, wave speeds, equation of state and source terms.

State layout is component-first: q[k, ...] is the k-th conserved component.

    swe1d      (h, hu)
    swe2d      (h, hu, hv)
    swe_sphere (h, hu, hv, hw)     Cartesian momentum on the sphere surface
    euler1d    (rho, mu, E)
    euler2d    (rho, mu, mv, E)

All operations are pure and broadcast over trailing axes.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DomainError

N_COMPONENTS = {
    "swe1d": 2,
    "swe2d": 3,
    "swe_sphere": 4,
    "euler1d": 3,
    "euler2d": 4,
}

SYSTEM_TAGS = {name: tag for tag, name in enumerate(sorted(N_COMPONENTS))}
SYSTEM_FROM_TAG = {tag: name for name, tag in SYSTEM_TAGS.items()}


@dataclass(frozen=True)
class EquationModel:
    system: str
    g: float = 9.8
    gamma: float = 1.4
    omega: float = 0.0
    radius: float = 1.0
    manning_n: float = 0.0
    strict: bool = True

    def __post_init__(self):
        if self.system not in N_COMPONENTS:
            raise DomainError(f"unknown system '{self.system}'")
        if self.g <= 0 or self.gamma <= 1:
            raise DomainError("model requires g > 0 and gamma > 1")

    @property
    def n_components(self):
        return N_COMPONENTS[self.system]

    @property
    def is_euler(self):
        return self.system.startswith("euler")

    @property
    def is_swe(self):
        return self.system.startswith("swe")

    @property
    def n_space(self):
        if self.system in ("swe1d", "euler1d"):
            return 1
        if self.system == "swe_sphere":
            return 3
        return 2


def _first_bad_index(mask):
    idx = np.argwhere(mask)
    return tuple(idx[0]) if idx.size else None


def validate_state(model, q, where="state"):
    """Raise DomainError on non-positive h / rho / p, naming the first cell."""
    q = np.asarray(q)
    if model.is_swe:
        bad = ~(q[0] > 0)
        if np.any(bad):
            raise DomainError(f"non-positive height at {where} index {_first_bad_index(bad)}")
    else:
        bad = ~(q[0] > 0)
        if np.any(bad):
            raise DomainError(f"non-positive density at {where} index {_first_bad_index(bad)}")
        p = pressure(model, q, _validate=False)
        bad = ~(p > 0)
        if np.any(bad):
            raise DomainError(f"non-positive pressure at {where} index {_first_bad_index(bad)}")


def pressure(model, q, _validate=True):
    """Ideal gas pressure p = (gamma - 1) (E - |m|^2 / (2 rho))."""
    q = np.asarray(q, dtype=float)
    rho = q[0]
    if _validate and model.strict and np.any(~(rho > 0)):
        raise DomainError("non-positive density in pressure()")
    m2 = np.sum(q[1:-1] * q[1:-1], axis=0)
    p = (model.gamma - 1.0) * (q[-1] - 0.5 * m2 / rho)
    if _validate and model.strict and np.any(~(p > 0)):
        raise DomainError("non-positive pressure")
    return p


def physical_flux(model, q, direction=0):
    """Flux vector F(q) . e_direction.

    direction is an axis index for Cartesian systems; for swe_sphere it is a
    unit 3-vector (broadcastable against q[1:]) contracting the three flux
    columns.
    """
    q = np.asarray(q, dtype=float)
    if model.strict:
        validate_state(model, q, where="physical_flux")
    g = model.g
    if model.system == "swe1d":
        h, hu = q
        u = hu / h
        return np.stack([hu, hu * u + 0.5 * g * h * h])
    if model.system == "swe2d":
        h, hu, hv = q
        if direction == 0:
            u = hu / h
            return np.stack([hu, hu * u + 0.5 * g * h * h, hv * u])
        u = hv / h
        return np.stack([hv, hu * u, hv * u + 0.5 * g * h * h])
    if model.system == "swe_sphere":
        n = np.asarray(direction, dtype=float)
        h = q[0]
        mn = np.sum(q[1:] * n, axis=0)
        un = mn / h
        press = 0.5 * g * h * h
        mom = q[1:] * un + press * n
        return np.concatenate([mn[None], mom])
    p = pressure(model, q, _validate=False)
    if model.system == "euler1d":
        rho, mu, E = q
        u = mu / rho
        return np.stack([mu, mu * u + p, u * (E + p)])
    rho, mu, mv, E = q
    if direction == 0:
        u = mu / rho
        return np.stack([mu, mu * u + p, mv * u, u * (E + p)])
    v = mv / rho
    return np.stack([mv, mu * v, mv * v + p, v * (E + p)])


def sound_speed(model, q):
    if model.is_swe:
        return np.sqrt(model.g * np.asarray(q, dtype=float)[0])
    p = pressure(model, q, _validate=False)
    return np.sqrt(model.gamma * p / np.asarray(q, dtype=float)[0])


def wave_speeds(model, q, direction=0):
    """Slowest/fastest characteristic speeds (u_n - c, u_n + c)."""
    q = np.asarray(q, dtype=float)
    if model.strict:
        validate_state(model, q, where="wave_speeds")
    if model.system == "swe_sphere":
        n = np.asarray(direction, dtype=float)
        un = np.sum(q[1:] * n, axis=0) / q[0]
    else:
        un = q[1 + int(direction)] / q[0]
    c = sound_speed(model, q)
    return un - c, un + c


def bathymetry_source(model, q, bed_slope):
    """(0, -g h dz/dx, -g h dz/dy): bed-slope momentum forcing."""
    q = np.asarray(q, dtype=float)
    h = q[0]
    out = np.zeros_like(q)
    slopes = np.atleast_1d(np.asarray(bed_slope, dtype=float))
    for k in range(min(len(slopes), q.shape[0] - 1)):
        out[1 + k] = -model.g * h * slopes[k]
    return out


def friction_source(model, q):
    """Manning friction: (0, -C_f u |u|, -C_f v |u|) with C_f = g n^2 / h^(1/3)."""
    q = np.asarray(q, dtype=float)
    out = np.zeros_like(q)
    if model.manning_n == 0.0:
        return out
    h = q[0]
    vel = q[1:] / h
    speed = np.sqrt(np.sum(vel * vel, axis=0))
    cf = model.g * model.manning_n**2 / np.cbrt(h)
    out[1:] = -cf * vel * speed
    return out


def coriolis_source(model, cell_center, q):
    """Momentum source -(2 omega / a) z_c (x_hat x m) on the sphere."""
    q = np.asarray(q, dtype=float)
    x = np.asarray(cell_center, dtype=float)
    xhat = x / model.radius
    f = 2.0 * model.omega * xhat[2]
    m = q[1:]
    cross = np.stack(
        [
            xhat[1] * m[2] - xhat[2] * m[1],
            xhat[2] * m[0] - xhat[0] * m[2],
            xhat[0] * m[1] - xhat[1] * m[0],
        ]
    )
    out = np.zeros_like(q)
    out[1:] = -f * cross
    return out


def project_tangent(cell_center, q):
    """Remove the radial momentum component: m' = m - (x_hat . m) x_hat."""
    q = np.asarray(q, dtype=float)
    x = np.asarray(cell_center, dtype=float)
    xhat = x / np.linalg.norm(x, axis=0)
    radial = np.sum(q[1:] * xhat, axis=0)
    out = q.copy()
    out[1:] -= radial * xhat
    return out
