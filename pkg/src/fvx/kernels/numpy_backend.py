"""Vectorized interface-flux kernels (pure numpy backend).

Both kernels take batches of left/right states already rotated into the face
frame: q[0] is h (or rho), q[1] the face-normal momentum, any further
momentum components are passively advected; for the Euler family the last
component is total energy.  Shapes are (n_components, n_faces), float64.

Scheme ids: 0 Lax-Friedrichs, 1 Rusanov, 2 Roe, 3 HLL, 4 HLLE, 5 HLLC.
"""

import numpy as np

LAX_FRIEDRICHS, RUSANOV, ROE, HLL, HLLE, HLLC = range(6)

NAME = "python"


def _swe_point_flux(g, q):
    un = q[1] / q[0]
    f = np.empty_like(q)
    f[0] = q[1]
    f[1] = q[1] * un + 0.5 * g * q[0] * q[0]
    f[2:] = q[2:] * un
    return f


def _euler_point_flux(gamma, q):
    rho = q[0]
    un = q[1] / rho
    m2 = np.sum(q[1:-1] * q[1:-1], axis=0)
    p = (gamma - 1.0) * (q[-1] - 0.5 * m2 / rho)
    f = np.empty_like(q)
    f[0] = q[1]
    f[1] = q[1] * un + p
    f[2:-1] = q[2:-1] * un
    f[-1] = un * (q[-1] + p)
    return f, p


def _hll_select(sl, sr, fl, fr, ql, qr):
    with np.errstate(divide="ignore", invalid="ignore"):
        mid = (sr * fl - sl * fr + sl * sr * (qr - ql)) / (sr - sl)
    out = np.where(sl >= 0.0, fl, np.where(sr <= 0.0, fr, mid))
    return _equal_state_guard(out, fl, ql, qr)


def _equal_state_guard(out, fl, ql, qr):
    """Bitwise-identical states short-circuit to the point flux (consistency)."""
    equal = np.all(ql == qr, axis=0)
    if np.any(equal):
        out = np.where(equal, fl, out)
    return out


def _harten(lam, eps):
    """Harten entropy fix: smooth |lambda| below eps."""
    a = np.abs(lam)
    return np.where(a < eps, (lam * lam / eps + eps) * 0.5, a)


def swe_flux(kind, g, ql, qr, lf_ratio=None, entropy_fix=0.0):
    ql = np.asarray(ql, dtype=float)
    qr = np.asarray(qr, dtype=float)
    hl, hr = ql[0], qr[0]
    ul, ur = ql[1] / hl, qr[1] / hr
    cl, cr = np.sqrt(g * hl), np.sqrt(g * hr)
    fl = _swe_point_flux(g, ql)
    fr = _swe_point_flux(g, qr)

    if kind == LAX_FRIEDRICHS:
        return 0.5 * (fl + fr) - 0.5 * lf_ratio * (qr - ql)

    if kind == RUSANOV:
        s = 0.5 * np.maximum(np.abs(ul) + cl, np.abs(ur) + cr)
        return 0.5 * (fl + fr) - s * (qr - ql)

    sqhl, sqhr = np.sqrt(hl), np.sqrt(hr)
    um = (sqhl * ul + sqhr * ur) / (sqhl + sqhr)
    cm = np.sqrt(0.5 * g * (hl + hr))

    if kind == ROE:
        dq = qr - ql
        lam1, lam3 = um - cm, um + cm
        if entropy_fix > 0.0:
            a1 = _harten(lam1, entropy_fix * cm)
            a3 = _harten(lam3, entropy_fix * cm)
        else:
            a1, a3 = np.abs(lam1), np.abs(lam3)
        alpha1 = ((um + cm) * dq[0] - dq[1]) / (2.0 * cm)
        alpha3 = ((cm - um) * dq[0] + dq[1]) / (2.0 * cm)
        k1 = a1 * alpha1
        k3 = a3 * alpha3
        diss = np.empty_like(dq)
        diss[0] = k1 + k3
        diss[1] = lam1 * k1 + lam3 * k3
        if ql.shape[0] > 2:
            vm = (sqhl * (ql[2:] / hl) + sqhr * (qr[2:] / hr)) / (sqhl + sqhr)
            kp = np.abs(um) * (dq[2:] - vm * dq[0])
            diss[2:] = vm * (k1 + k3) + kp
        return 0.5 * (fl + fr) - 0.5 * diss

    if kind == HLL:
        sl = np.minimum(ul - cl, ur - cr)
        sr = np.maximum(ul + cl, ur + cr)
        return _hll_select(sl, sr, fl, fr, ql, qr)

    if kind == HLLE:
        sl = np.minimum(np.minimum(ul - cl, um - cm), 0.0)
        sr = np.maximum(np.maximum(ur + cr, um + cm), 0.0)
        return _hll_select(sl, sr, fl, fr, ql, qr)

    if kind == HLLC:
        sl = np.minimum(ul - cl, um - cm)
        sr = np.maximum(ur + cr, um + cm)
        num = sl * hr * (ur - sr) - sr * hl * (ul - sl)
        den = hr * (ur - sr) - hl * (ul - sl)
        with np.errstate(divide="ignore", invalid="ignore"):
            safe = np.abs(den) > 0.0
            sstar = np.where(safe, num / den, 0.5 * (ul + ur))
            # star-state jumps in difference form: exact zero when ql == qr
            dsl = np.where(safe, (num - ul * den) / den, sstar - ul)
            dsr = np.where(safe, (num - ur * den) / den, sstar - ur)
            big_dl = hl * dsl / (sl - sstar)
            big_dr = hr * dsr / (sr - sstar)
        fsl = np.empty_like(fl)
        fsr = np.empty_like(fr)
        fsl[0] = fl[0] + sl * big_dl
        fsr[0] = fr[0] + sr * big_dr
        fsl[1] = fl[1] + sl * sl * big_dl
        fsr[1] = fr[1] + sr * sr * big_dr
        fsl[2:] = fl[2:] + sl * big_dl * (ql[2:] / hl)
        fsr[2:] = fr[2:] + sr * big_dr * (qr[2:] / hr)
        out = np.where(sl >= 0.0, fl, np.where(sstar >= 0.0, fsl, np.where(sr >= 0.0, fsr, fr)))
        return _equal_state_guard(out, fl, ql, qr)

    raise ValueError(f"unknown scheme id {kind}")


def euler_flux(kind, gamma, ql, qr, lf_ratio=None, entropy_fix=0.0):
    ql = np.asarray(ql, dtype=float)
    qr = np.asarray(qr, dtype=float)
    rl, rr = ql[0], qr[0]
    ul, ur = ql[1] / rl, qr[1] / rr
    fl, pl = _euler_point_flux(gamma, ql)
    fr, pr = _euler_point_flux(gamma, qr)
    cl = np.sqrt(gamma * pl / rl)
    cr = np.sqrt(gamma * pr / rr)

    if kind == LAX_FRIEDRICHS:
        return 0.5 * (fl + fr) - 0.5 * lf_ratio * (qr - ql)

    if kind == RUSANOV:
        s = 0.5 * np.maximum(np.abs(ul) + cl, np.abs(ur) + cr)
        return 0.5 * (fl + fr) - s * (qr - ql)

    # Roe averages (sqrt-density weighted), used by Roe/HLLE/HLLC.
    wl, wr = np.sqrt(rl), np.sqrt(rr)
    wsum = wl + wr
    um = (wl * ul + wr * ur) / wsum
    hl_tot = (ql[-1] + pl) / rl
    hr_tot = (qr[-1] + pr) / rr
    hm = (wl * hl_tot + wr * hr_tot) / wsum
    npass = ql.shape[0] - 3
    if npass:
        vl = ql[2:-1] / rl
        vr = qr[2:-1] / rr
        vm = (wl * vl + wr * vr) / wsum
        v2m = np.sum(vm * vm, axis=0)
    else:
        v2m = 0.0
    q2m = um * um + v2m
    cm = np.sqrt(np.maximum((gamma - 1.0) * (hm - 0.5 * q2m), 1e-300))

    if kind == ROE:
        dq = qr - ql
        drho, dmn, de = dq[0], dq[1], dq[-1]
        if npass:
            dshear = dq[2:-1] - vm * drho
            de_eff = de - np.sum(dshear * vm, axis=0)
        else:
            de_eff = de
        alpha2 = (gamma - 1.0) / (cm * cm) * (drho * (hm - um * um) + um * dmn - de_eff)
        alpha1 = (drho * (um + cm) - dmn - cm * alpha2) / (2.0 * cm)
        alpha3 = drho - (alpha1 + alpha2)
        lam1, lam2, lam3 = um - cm, um, um + cm
        if entropy_fix > 0.0:
            a1 = _harten(lam1, entropy_fix * cm)
            a3 = _harten(lam3, entropy_fix * cm)
        else:
            a1, a3 = np.abs(lam1), np.abs(lam3)
        a2 = np.abs(lam2)
        k1, k2, k3 = a1 * alpha1, a2 * alpha2, a3 * alpha3
        diss = np.empty_like(dq)
        diss[0] = k1 + k2 + k3
        diss[1] = lam1 * k1 + um * k2 + lam3 * k3
        diss[-1] = (hm - um * cm) * k1 + 0.5 * q2m * k2 + (hm + um * cm) * k3
        if npass:
            diss[2:-1] = vm * (k1 + k2 + k3) + a2 * dshear
            diss[-1] += np.sum(vm * (a2 * dshear), axis=0)
        return 0.5 * (fl + fr) - 0.5 * diss

    if kind == HLL:
        sl = np.minimum(ul - cl, ur - cr)
        sr = np.maximum(ul + cl, ur + cr)
        return _hll_select(sl, sr, fl, fr, ql, qr)

    if kind == HLLE:
        sl = np.minimum(np.minimum(ul - cl, um - cm), 0.0)
        sr = np.maximum(np.maximum(ur + cr, um + cm), 0.0)
        return _hll_select(sl, sr, fl, fr, ql, qr)

    if kind == HLLC:
        sl = np.minimum(ul - cl, um - cm)
        sr = np.maximum(ur + cr, um + cm)
        num = pr - pl + rl * ul * (sl - ul) - rr * ur * (sr - ur)
        den = rl * (sl - ul) - rr * (sr - ur)
        with np.errstate(divide="ignore", invalid="ignore"):
            safe = np.abs(den) > 0.0
            sstar = np.where(safe, num / den, 0.5 * (ul + ur))
            # star jumps in difference form: exact zero when ql == qr
            dsl = np.where(safe, (num - ul * den) / den, sstar - ul)
            dsr = np.where(safe, (num - ur * den) / den, sstar - ur)
            big_dl = rl * dsl / (sl - sstar)
            big_dr = rr * dsr / (sr - sstar)
        fsl = np.empty_like(fl)
        fsr = np.empty_like(fr)
        fsl[0] = fl[0] + sl * big_dl
        fsr[0] = fr[0] + sr * big_dr
        fsl[1] = fl[1] + sl * sl * big_dl
        fsr[1] = fr[1] + sr * sr * big_dr
        fsl[2:-1] = fl[2:-1] + sl * big_dl * (ql[2:-1] / rl)
        fsr[2:-1] = fr[2:-1] + sr * big_dr * (qr[2:-1] / rr)
        fsl[-1] = fl[-1] + sl * big_dl * (ql[-1] + rl * (sl - ul) * sstar + pl) / rl
        fsr[-1] = fr[-1] + sr * big_dr * (qr[-1] + rr * (sr - ur) * sstar + pr) / rr
        out = np.where(sl >= 0.0, fl, np.where(sstar >= 0.0, fsl, np.where(sr >= 0.0, fsr, fr)))
        return _equal_state_guard(out, fl, ql, qr)

    raise ValueError(f"unknown scheme id {kind}")
