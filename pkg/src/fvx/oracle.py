"""Exact Riemann solutions for the 1D test problems.

These serve as independent references for the numerical solvers: the Stoker
construction for the shallow-water dam break and the classical two-family
pressure iteration for the ideal-gas Euler equations.  Samplers take the
similarity coordinate xi = (x - x0) / t.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DomainError


@dataclass
class RiemannSolution:
    sampler: callable
    left_wave: str
    right_wave: str
    star: dict


def _bisect_newton(f, df, lo, hi, tol, max_iter=200):
    """Bracketed bisection with Newton polish; |f(root)| driven below tol."""
    flo = f(lo)
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if flo * fm <= 0:
            hi = mid
        else:
            lo, flo = mid, fm
        if hi - lo < 1e-14 * max(1.0, abs(hi)):
            break
    x = 0.5 * (lo + hi)
    for _ in range(60):
        fx = f(x)
        if abs(fx) <= tol:
            break
        d = df(x)
        step = fx / d
        x_new = x - step
        if not lo <= x_new <= hi:
            x_new = 0.5 * (lo + hi)
        x = x_new
    return x


def exact_swe_dambreak(hl, hr, g=9.8):
    """Left rarefaction + right shock for two resting states with hl > hr."""
    if not hl > hr > 0:
        raise DomainError("dam break oracle needs hl > hr > 0")
    cl = np.sqrt(g * hl)

    def match(h):
        # rarefaction velocity minus shock velocity at intermediate depth h
        return 2.0 * (cl - np.sqrt(g * h)) - (h - hr) * np.sqrt(
            0.5 * g * (h + hr) / (h * hr)
        )

    def dmatch(h):
        eps = 1e-8 * hl
        return (match(h + eps) - match(h - eps)) / (2.0 * eps)

    hm = _bisect_newton(match, dmatch, hr * (1 + 1e-12), hl * (1 - 1e-12), tol=1e-13)
    um = 2.0 * (cl - np.sqrt(g * hm))
    cm = np.sqrt(g * hm)
    shock_speed = hm * um / (hm - hr)

    def sampler(xi):
        xi = np.asarray(xi, dtype=float)
        c_fan = (2.0 * cl - xi) / 3.0
        h_fan = c_fan * c_fan / g
        u_fan = xi + c_fan
        h = np.where(
            xi <= -cl,
            hl,
            np.where(xi <= um - cm, h_fan, np.where(xi < shock_speed, hm, hr)),
        )
        u = np.where(
            xi <= -cl,
            0.0,
            np.where(xi <= um - cm, u_fan, np.where(xi < shock_speed, um, 0.0)),
        )
        return np.stack([h, h * u])

    return RiemannSolution(
        sampler=sampler,
        left_wave="rarefaction",
        right_wave="shock",
        star={"h": float(hm), "u": float(um), "shock_speed": float(shock_speed)},
    )


def _primitive(q, gamma):
    rho, mu, e = (float(v) for v in q)
    if rho <= 0:
        raise DomainError("oracle needs positive density")
    u = mu / rho
    p = (gamma - 1.0) * (e - 0.5 * rho * u * u)
    if p <= 0:
        raise DomainError("oracle needs positive pressure")
    return rho, u, p


def exact_euler_riemann(left, right, gamma=1.4):
    """Exact ideal-gas Riemann solution from conserved (rho, rho u, E) data."""
    rl, ul, pl = _primitive(left, gamma)
    rr, ur, pr = _primitive(right, gamma)
    cl = np.sqrt(gamma * pl / rl)
    cr = np.sqrt(gamma * pr / rr)
    if 2.0 * (cl + cr) / (gamma - 1.0) <= ur - ul:
        raise DomainError("initial data generate vacuum; unsupported")

    gp1, gm1 = gamma + 1.0, gamma - 1.0

    def side(p, pk, rk, ck):
        if p > pk:  # shock
            ak = 2.0 / (gp1 * rk)
            bk = gm1 / gp1 * pk
            return (p - pk) * np.sqrt(ak / (p + bk))
        return 2.0 * ck / gm1 * ((p / pk) ** (gm1 / (2.0 * gamma)) - 1.0)

    def dside(p, pk, rk, ck):
        if p > pk:
            ak = 2.0 / (gp1 * rk)
            bk = gm1 / gp1 * pk
            return np.sqrt(ak / (bk + p)) * (1.0 - 0.5 * (p - pk) / (bk + p))
        return 1.0 / (rk * ck) * (p / pk) ** (-gp1 / (2.0 * gamma))

    def f(p):
        return side(p, pl, rl, cl) + side(p, pr, rr, cr) + (ur - ul)

    def df(p):
        return dside(p, pl, rl, cl) + dside(p, pr, rr, cr)

    p_hi = max(pl, pr)
    while f(p_hi) < 0:
        p_hi *= 4.0
    p_lo = 1e-12 * min(pl, pr)
    pstar = _bisect_newton(f, df, p_lo, p_hi, tol=1e-12)
    ustar = 0.5 * (ul + ur) + 0.5 * (side(pstar, pr, rr, cr) - side(pstar, pl, rl, cl))

    left_wave = "shock" if pstar > pl else "rarefaction"
    right_wave = "shock" if pstar > pr else "rarefaction"

    def sample_side(xi, sign, rk, uk, pk, ck):
        """State between the contact and the outer wave on one side.

        sign = -1 for the left family, +1 for the right family.
        """
        if pstar > pk:  # shock
            ratio = pstar / pk
            r_star = rk * (ratio + gm1 / gp1) / (gm1 / gp1 * ratio + 1.0)
            s = uk + sign * ck * np.sqrt(gp1 / (2 * gamma) * ratio + gm1 / (2 * gamma))
            if sign < 0:
                inside = xi > s
            else:
                inside = xi < s
            rho = np.where(inside, r_star, rk)
            u = np.where(inside, ustar, uk)
            p = np.where(inside, pstar, pk)
        else:  # rarefaction
            c_star = ck * (pstar / pk) ** (gm1 / (2.0 * gamma))
            head = uk + sign * ck
            tail = ustar + sign * c_star
            c_fan = 2.0 / gp1 * (ck + sign * gm1 / 2.0 * (xi - uk))
            u_fan = 2.0 / gp1 * (-sign * ck + gm1 / 2.0 * uk + xi)
            r_fan = rk * (c_fan / ck) ** (2.0 / gm1)
            p_fan = pk * (c_fan / ck) ** (2.0 * gamma / gm1)
            r_star = rk * (pstar / pk) ** (1.0 / gamma)
            if sign < 0:
                rho = np.where(xi <= head, rk, np.where(xi < tail, r_fan, r_star))
                u = np.where(xi <= head, uk, np.where(xi < tail, u_fan, ustar))
                p = np.where(xi <= head, pk, np.where(xi < tail, p_fan, pstar))
            else:
                rho = np.where(xi >= head, rk, np.where(xi > tail, r_fan, r_star))
                u = np.where(xi >= head, uk, np.where(xi > tail, u_fan, ustar))
                p = np.where(xi >= head, pk, np.where(xi > tail, p_fan, pstar))
        return rho, u, p

    def sampler(xi):
        xi = np.asarray(xi, dtype=float)
        rho_l, u_l, p_l = sample_side(xi, -1.0, rl, ul, pl, cl)
        rho_r, u_r, p_r = sample_side(xi, +1.0, rr, ur, pr, cr)
        on_left = xi <= ustar
        rho = np.where(on_left, rho_l, rho_r)
        u = np.where(on_left, u_l, u_r)
        p = np.where(on_left, p_l, p_r)
        e = p / (gamma - 1.0) + 0.5 * rho * u * u
        return np.stack([rho, rho * u, e])

    return RiemannSolution(
        sampler=sampler,
        left_wave=left_wave,
        right_wave=right_wave,
        star={"p": float(pstar), "u": float(ustar)},
    )


def reference_field(solution, grid, t, x0=0.0, n_quad=5):
    """Cell averages of the exact solution by Gauss-Legendre quadrature."""
    if t <= 0:
        raise DomainError("reference_field needs t > 0")
    nodes, weights = np.polynomial.legendre.leggauss(n_quad)
    edges = grid.interfaces()
    lo, hi = edges[:-1], edges[1:]
    acc = None
    for z, w in zip(nodes, weights):
        x = 0.5 * (lo + hi) + 0.5 * (hi - lo) * z
        q = solution.sampler((x - x0) / t)
        acc = q * w if acc is None else acc + q * w
    return 0.5 * acc
