# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels for Reeb orbit integration.

Statement-for-statement twin of the pure-Python module; both evaluate
the same expressions in the same order so results agree bitwise.
"""

from libc.math cimport cos, exp, log, sin, sqrt

import numpy as np

KIND_ALPHA = 1
KIND_KLEIN = 2
KIND_SEGMENT = 3


def rk4_orbit(kind, params, t0, x10, x20, dt, n_steps):
    """Integrate n_steps of RK4; returns (orbit, status, n_done)."""
    cdef int ckind = int(kind)
    cdef double p0 = 0.0, p1 = 0.0, p2 = 0.0, p3 = 0.0
    if len(params) > 0:
        p0 = float(params[0])
    if len(params) > 1:
        p1 = float(params[1])
    if len(params) > 2:
        p2 = float(params[2])
    if len(params) > 3:
        p3 = float(params[3])

    cdef double s5 = sqrt(5.0)
    cdef double kc = sqrt(0.4)
    cdef double el = log((3.0 + s5) / 2.0)
    cdef double cm = (s5 - 1.0) / 2.0
    cdef double cp = (s5 + 1.0) / 2.0
    cdef double w = 2.0 * 3.141592653589793 * p0

    cdef long nsteps = int(n_steps)
    out_arr = np.empty((nsteps + 1, 3), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    cdef double t = float(t0)
    cdef double x1 = float(x10)
    cdef double x2 = float(x20)
    cdef double h = float(dt)
    out[0, 0] = t
    out[0, 1] = x1
    out[0, 2] = x2

    cdef int status = 0
    cdef long n_done = 0
    cdef long i
    cdef int stage, ok
    cdef double r1, r2, v1, v2
    cdef double ph, sph, cph, lt, lmt, h1, h2, pt, qt, dh1, dh2, delta
    for i in range(nsteps):
        ok = 1
        r1 = 0.0
        r2 = 0.0
        for stage in range(4):
            if ckind == 1:
                ph = 0.25 * 3.141592653589793 + w * t
                sph = sin(ph)
                cph = cos(ph)
                lt = exp(el * t)
                lmt = exp(-el * t)
                h1 = kc * (sph * lt - cph * lmt)
                h2 = kc * (cm * sph * lt + cp * cph * lmt)
                pt = (w * cph + el * sph) * lt
                qt = (w * sph + el * cph) * lmt
                dh1 = kc * (pt + qt)
                dh2 = kc * (cm * pt - cp * qt)
            elif ckind == 2:
                h1 = 1.0
                h2 = -t
                dh1 = 0.0
                dh2 = -1.0
            elif ckind == 3:
                h1 = p0 + p1 * t
                h2 = p2 + p3 * t
                dh1 = p1
                dh2 = p3
            else:
                ok = 0
                break
            delta = h1 * dh2 - dh1 * h2
            if not (delta < 0.0):
                ok = 0
                break
            v1 = dh2 / delta
            v2 = -dh1 / delta
            if stage == 0:
                r1 = v1
                r2 = v2
            elif stage == 1 or stage == 2:
                r1 = r1 + 2.0 * v1
                r2 = r2 + 2.0 * v2
            else:
                r1 = r1 + v1
                r2 = r2 + v2
        if ok == 0:
            status = 1
            break
        x1 = x1 + h * (r1 / 6.0)
        x2 = x2 + h * (r2 / 6.0)
        n_done = i + 1
        out[n_done, 0] = t
        out[n_done, 1] = x1
        out[n_done, 2] = x2
    return out_arr, status, n_done
