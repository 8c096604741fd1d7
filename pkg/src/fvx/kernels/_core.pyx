# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled interface-flux kernels.

Mirrors numpy_backend: batches of face-frame states (component 0 h/rho,
component 1 normal momentum, trailing momentum passive, energy last for the
Euler family).  Selected at import when built; `fvx bench` compares it with
the pure-numpy backend.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport fabs, sqrt

cnp.import_array()

LAX_FRIEDRICHS = 0
RUSANOV = 1
ROE = 2
HLL = 3
HLLE = 4
HLLC = 5

NAME = "compiled"

cdef int C_LF = 0
cdef int C_RUSANOV = 1
cdef int C_ROE = 2
cdef int C_HLL = 3
cdef int C_HLLE = 4
cdef int C_HLLC = 5

DEF MAXC = 6


cdef inline double _harten(double lam, double eps) nogil:
    cdef double a = fabs(lam)
    if a < eps:
        return 0.5 * (lam * lam / eps + eps)
    return a


cdef inline void _swe_point_flux(double g, int nc, double* q, double* f) nogil:
    cdef double un = q[1] / q[0]
    cdef int k
    f[0] = q[1]
    f[1] = q[1] * un + 0.5 * g * q[0] * q[0]
    for k in range(2, nc):
        f[k] = q[k] * un


cdef void _swe_face(int kind, double g, int nc, double* ql, double* qr,
                    double lf_ratio, double entropy_fix, double* out) nogil:
    cdef double fl[MAXC]
    cdef double fr[MAXC]
    cdef double hl = ql[0]
    cdef double hr = qr[0]
    cdef double ul = ql[1] / hl
    cdef double ur = qr[1] / hr
    cdef double cl = sqrt(g * hl)
    cdef double cr = sqrt(g * hr)
    cdef double s, sl, sr, num, den, sstar, hsl, hsr
    cdef double sqhl, sqhr, wsum, um, cm, lam1, lam3, a1, a3, alpha1, alpha3
    cdef double k1, k3, vm, kp, dq0
    cdef int k

    _swe_point_flux(g, nc, ql, fl)
    _swe_point_flux(g, nc, qr, fr)

    if kind >= C_HLL:
        s = 1.0
        for k in range(nc):
            if ql[k] != qr[k]:
                s = 0.0
                break
        if s == 1.0:
            for k in range(nc):
                out[k] = fl[k]
            return

    if kind == C_LF:
        for k in range(nc):
            out[k] = 0.5 * (fl[k] + fr[k]) - 0.5 * lf_ratio * (qr[k] - ql[k])
        return

    if kind == C_RUSANOV:
        s = fabs(ul) + cl
        if fabs(ur) + cr > s:
            s = fabs(ur) + cr
        s = 0.5 * s
        for k in range(nc):
            out[k] = 0.5 * (fl[k] + fr[k]) - s * (qr[k] - ql[k])
        return

    sqhl = sqrt(hl)
    sqhr = sqrt(hr)
    wsum = sqhl + sqhr
    um = (sqhl * ul + sqhr * ur) / wsum
    cm = sqrt(0.5 * g * (hl + hr))

    if kind == C_ROE:
        dq0 = qr[0] - ql[0]
        lam1 = um - cm
        lam3 = um + cm
        if entropy_fix > 0.0:
            a1 = _harten(lam1, entropy_fix * cm)
            a3 = _harten(lam3, entropy_fix * cm)
        else:
            a1 = fabs(lam1)
            a3 = fabs(lam3)
        alpha1 = ((um + cm) * dq0 - (qr[1] - ql[1])) / (2.0 * cm)
        alpha3 = ((cm - um) * dq0 + (qr[1] - ql[1])) / (2.0 * cm)
        k1 = a1 * alpha1
        k3 = a3 * alpha3
        out[0] = 0.5 * (fl[0] + fr[0]) - 0.5 * (k1 + k3)
        out[1] = 0.5 * (fl[1] + fr[1]) - 0.5 * (lam1 * k1 + lam3 * k3)
        for k in range(2, nc):
            vm = (sqhl * (ql[k] / hl) + sqhr * (qr[k] / hr)) / wsum
            kp = fabs(um) * ((qr[k] - ql[k]) - vm * dq0)
            out[k] = 0.5 * (fl[k] + fr[k]) - 0.5 * (vm * (k1 + k3) + kp)
        return

    if kind == C_HLL:
        sl = ul - cl
        if ur - cr < sl:
            sl = ur - cr
        sr = ul + cl
        if ur + cr > sr:
            sr = ur + cr
    elif kind == C_HLLE:
        sl = ul - cl
        if um - cm < sl:
            sl = um - cm
        if sl > 0.0:
            sl = 0.0
        sr = ur + cr
        if um + cm > sr:
            sr = um + cm
        if sr < 0.0:
            sr = 0.0
    else:  # HLLC speeds
        sl = ul - cl
        if um - cm < sl:
            sl = um - cm
        sr = ur + cr
        if um + cm > sr:
            sr = um + cm

    if kind == C_HLL or kind == C_HLLE:
        if sl >= 0.0:
            for k in range(nc):
                out[k] = fl[k]
        elif sr <= 0.0:
            for k in range(nc):
                out[k] = fr[k]
        else:
            for k in range(nc):
                out[k] = (sr * fl[k] - sl * fr[k] + sl * sr * (qr[k] - ql[k])) / (sr - sl)
        return

    # HLLC, star jumps in difference form (exact zero when ql == qr)
    num = sl * hr * (ur - sr) - sr * hl * (ul - sl)
    den = hr * (ur - sr) - hl * (ul - sl)
    if fabs(den) > 0.0:
        sstar = num / den
    else:
        sstar = 0.5 * (ul + ur)
    if sl >= 0.0:
        for k in range(nc):
            out[k] = fl[k]
        return
    if sstar >= 0.0:
        if fabs(den) > 0.0:
            hsl = (num - ul * den) / den
        else:
            hsl = sstar - ul
        hsl = hl * hsl / (sl - sstar)
        out[0] = fl[0] + sl * hsl
        out[1] = fl[1] + sl * sl * hsl
        for k in range(2, nc):
            out[k] = fl[k] + sl * hsl * (ql[k] / hl)
        return
    if sr >= 0.0:
        if fabs(den) > 0.0:
            hsr = (num - ur * den) / den
        else:
            hsr = sstar - ur
        hsr = hr * hsr / (sr - sstar)
        out[0] = fr[0] + sr * hsr
        out[1] = fr[1] + sr * sr * hsr
        for k in range(2, nc):
            out[k] = fr[k] + sr * hsr * (qr[k] / hr)
        return
    for k in range(nc):
        out[k] = fr[k]


cdef inline void _euler_point_flux(double gamma, int nc, double* q,
                                   double* f, double* p_out) nogil:
    cdef double rho = q[0]
    cdef double un = q[1] / rho
    cdef double m2 = 0.0
    cdef int k
    for k in range(1, nc - 1):
        m2 += q[k] * q[k]
    cdef double p = (gamma - 1.0) * (q[nc - 1] - 0.5 * m2 / rho)
    f[0] = q[1]
    f[1] = q[1] * un + p
    for k in range(2, nc - 1):
        f[k] = q[k] * un
    f[nc - 1] = un * (q[nc - 1] + p)
    p_out[0] = p


cdef void _euler_face(int kind, double gamma, int nc, double* ql, double* qr,
                      double lf_ratio, double entropy_fix, double* out) nogil:
    cdef double fl[MAXC]
    cdef double fr[MAXC]
    cdef double vl[2]
    cdef double vr[2]
    cdef double vm[2]
    cdef double pl = 0.0, pr = 0.0
    cdef double rl = ql[0]
    cdef double rr = qr[0]
    cdef double ul = ql[1] / rl
    cdef double ur = qr[1] / rr
    cdef double cl, cr, s, sl, sr
    cdef double wl, wr, wsum, um, hl_tot, hr_tot, hm, v2m, q2m, cm
    cdef double drho, dmn, de, de_eff, alpha1, alpha2, alpha3
    cdef double lam1, lam3, a1, a2, a3, k1, k2, k3
    cdef double num, den, sstar, coefl, coefr, el, er, shear
    cdef int k, npass = nc - 3

    _euler_point_flux(gamma, nc, ql, fl, &pl)
    _euler_point_flux(gamma, nc, qr, fr, &pr)
    cl = sqrt(gamma * pl / rl)
    cr = sqrt(gamma * pr / rr)

    if kind >= C_HLL:
        s = 1.0
        for k in range(nc):
            if ql[k] != qr[k]:
                s = 0.0
                break
        if s == 1.0:
            for k in range(nc):
                out[k] = fl[k]
            return

    if kind == C_LF:
        for k in range(nc):
            out[k] = 0.5 * (fl[k] + fr[k]) - 0.5 * lf_ratio * (qr[k] - ql[k])
        return

    if kind == C_RUSANOV:
        s = fabs(ul) + cl
        if fabs(ur) + cr > s:
            s = fabs(ur) + cr
        s = 0.5 * s
        for k in range(nc):
            out[k] = 0.5 * (fl[k] + fr[k]) - s * (qr[k] - ql[k])
        return

    wl = sqrt(rl)
    wr = sqrt(rr)
    wsum = wl + wr
    um = (wl * ul + wr * ur) / wsum
    hl_tot = (ql[nc - 1] + pl) / rl
    hr_tot = (qr[nc - 1] + pr) / rr
    hm = (wl * hl_tot + wr * hr_tot) / wsum
    v2m = 0.0
    for k in range(npass):
        vl[k] = ql[2 + k] / rl
        vr[k] = qr[2 + k] / rr
        vm[k] = (wl * vl[k] + wr * vr[k]) / wsum
        v2m += vm[k] * vm[k]
    q2m = um * um + v2m
    cm = (gamma - 1.0) * (hm - 0.5 * q2m)
    if cm < 1e-300:
        cm = 1e-300
    cm = sqrt(cm)

    if kind == C_ROE:
        drho = qr[0] - ql[0]
        dmn = qr[1] - ql[1]
        de = qr[nc - 1] - ql[nc - 1]
        de_eff = de
        for k in range(npass):
            de_eff -= ((qr[2 + k] - ql[2 + k]) - vm[k] * drho) * vm[k]
        alpha2 = (gamma - 1.0) / (cm * cm) * (drho * (hm - um * um) + um * dmn - de_eff)
        alpha1 = (drho * (um + cm) - dmn - cm * alpha2) / (2.0 * cm)
        alpha3 = drho - (alpha1 + alpha2)
        lam1 = um - cm
        lam3 = um + cm
        if entropy_fix > 0.0:
            a1 = _harten(lam1, entropy_fix * cm)
            a3 = _harten(lam3, entropy_fix * cm)
        else:
            a1 = fabs(lam1)
            a3 = fabs(lam3)
        a2 = fabs(um)
        k1 = a1 * alpha1
        k2 = a2 * alpha2
        k3 = a3 * alpha3
        out[0] = 0.5 * (fl[0] + fr[0]) - 0.5 * (k1 + k2 + k3)
        out[1] = 0.5 * (fl[1] + fr[1]) - 0.5 * (lam1 * k1 + um * k2 + lam3 * k3)
        den = (hm - um * cm) * k1 + 0.5 * q2m * k2 + (hm + um * cm) * k3
        for k in range(npass):
            shear = a2 * ((qr[2 + k] - ql[2 + k]) - vm[k] * drho)
            out[2 + k] = 0.5 * (fl[2 + k] + fr[2 + k]) - 0.5 * (
                vm[k] * (k1 + k2 + k3) + shear
            )
            den += vm[k] * shear
        out[nc - 1] = 0.5 * (fl[nc - 1] + fr[nc - 1]) - 0.5 * den
        return

    if kind == C_HLL:
        sl = ul - cl
        if ur - cr < sl:
            sl = ur - cr
        sr = ul + cl
        if ur + cr > sr:
            sr = ur + cr
    elif kind == C_HLLE:
        sl = ul - cl
        if um - cm < sl:
            sl = um - cm
        if sl > 0.0:
            sl = 0.0
        sr = ur + cr
        if um + cm > sr:
            sr = um + cm
        if sr < 0.0:
            sr = 0.0
    else:
        sl = ul - cl
        if um - cm < sl:
            sl = um - cm
        sr = ur + cr
        if um + cm > sr:
            sr = um + cm

    if kind == C_HLL or kind == C_HLLE:
        if sl >= 0.0:
            for k in range(nc):
                out[k] = fl[k]
        elif sr <= 0.0:
            for k in range(nc):
                out[k] = fr[k]
        else:
            for k in range(nc):
                out[k] = (sr * fl[k] - sl * fr[k] + sl * sr * (qr[k] - ql[k])) / (sr - sl)
        return

    # HLLC, star jumps in difference form (exact zero when ql == qr)
    num = pr - pl + rl * ul * (sl - ul) - rr * ur * (sr - ur)
    den = rl * (sl - ul) - rr * (sr - ur)
    if fabs(den) > 0.0:
        sstar = num / den
    else:
        sstar = 0.5 * (ul + ur)
    if sl >= 0.0:
        for k in range(nc):
            out[k] = fl[k]
        return
    if sstar >= 0.0:
        if fabs(den) > 0.0:
            coefl = (num - ul * den) / den
        else:
            coefl = sstar - ul
        coefl = rl * coefl / (sl - sstar)
        out[0] = fl[0] + sl * coefl
        out[1] = fl[1] + sl * sl * coefl
        for k in range(npass):
            out[2 + k] = fl[2 + k] + sl * coefl * vl[k]
        out[nc - 1] = fl[nc - 1] + sl * coefl * (
            ql[nc - 1] + rl * (sl - ul) * sstar + pl
        ) / rl
        return
    if sr >= 0.0:
        if fabs(den) > 0.0:
            coefr = (num - ur * den) / den
        else:
            coefr = sstar - ur
        coefr = rr * coefr / (sr - sstar)
        out[0] = fr[0] + sr * coefr
        out[1] = fr[1] + sr * sr * coefr
        for k in range(npass):
            out[2 + k] = fr[2 + k] + sr * coefr * vr[k]
        out[nc - 1] = fr[nc - 1] + sr * coefr * (
            qr[nc - 1] + rr * (sr - ur) * sstar + pr
        ) / rr
        return
    for k in range(nc):
        out[k] = fr[k]


def _ratio_array(lf_ratio, Py_ssize_t m):
    if lf_ratio is None:
        return np.zeros(m)
    arr = np.asarray(lf_ratio, dtype=np.float64)
    if arr.ndim == 0:
        return np.full(m, float(arr))
    return np.ascontiguousarray(arr.reshape(-1))


def swe_flux(int kind, double g, ql, qr, lf_ratio=None, double entropy_fix=0.0):
    cdef cnp.ndarray[cnp.float64_t, ndim=2, mode="c"] a = np.ascontiguousarray(
        ql, dtype=np.float64
    )
    cdef cnp.ndarray[cnp.float64_t, ndim=2, mode="c"] b = np.ascontiguousarray(
        qr, dtype=np.float64
    )
    cdef Py_ssize_t nc = a.shape[0], m = a.shape[1], i, k
    cdef cnp.ndarray[cnp.float64_t, ndim=2, mode="c"] out = np.empty((nc, m))
    cdef cnp.ndarray[cnp.float64_t, ndim=1, mode="c"] ratio = _ratio_array(lf_ratio, m)
    cdef double qlbuf[MAXC]
    cdef double qrbuf[MAXC]
    cdef double fbuf[MAXC]
    with nogil:
        for i in range(m):
            for k in range(nc):
                qlbuf[k] = a[k, i]
                qrbuf[k] = b[k, i]
            _swe_face(kind, g, <int> nc, qlbuf, qrbuf, ratio[i], entropy_fix, fbuf)
            for k in range(nc):
                out[k, i] = fbuf[k]
    return out


def euler_flux(int kind, double gamma, ql, qr, lf_ratio=None, double entropy_fix=0.0):
    cdef cnp.ndarray[cnp.float64_t, ndim=2, mode="c"] a = np.ascontiguousarray(
        ql, dtype=np.float64
    )
    cdef cnp.ndarray[cnp.float64_t, ndim=2, mode="c"] b = np.ascontiguousarray(
        qr, dtype=np.float64
    )
    cdef Py_ssize_t nc = a.shape[0], m = a.shape[1], i, k
    cdef cnp.ndarray[cnp.float64_t, ndim=2, mode="c"] out = np.empty((nc, m))
    cdef cnp.ndarray[cnp.float64_t, ndim=1, mode="c"] ratio = _ratio_array(lf_ratio, m)
    cdef double qlbuf[MAXC]
    cdef double qrbuf[MAXC]
    cdef double fbuf[MAXC]
    with nogil:
        for i in range(m):
            for k in range(nc):
                qlbuf[k] = a[k, i]
                qrbuf[k] = b[k, i]
            _euler_face(kind, gamma, <int> nc, qlbuf, qrbuf, ratio[i], entropy_fix, fbuf)
            for k in range(nc):
                out[k, i] = fbuf[k]
    return out
