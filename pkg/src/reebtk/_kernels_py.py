"""Pure-Python reference kernels for Reeb orbit integration.

Mirrors the compiled extension statement by statement; both evaluate
the same expressions in the same order so results agree bitwise.  The
state is (t, x1, x2) with velocity (0, R1(t), R2(t)); the transverse
coordinate is carried explicitly so its exact conservation is an
output, not an assumption.
"""

import math

import numpy as np

KIND_ALPHA = 1
KIND_KLEIN = 2
KIND_SEGMENT = 3


def rk4_orbit(kind, params, t0, x10, x20, dt, n_steps):
    """Integrate n_steps of RK4; returns (orbit, status, n_done).

    ``orbit`` is an (n_steps + 1, 3) array of unreduced (t, x1, x2)
    states; rows beyond ``n_done`` are unset when ``status`` is 1
    (contact condition failed at a stage evaluation).
    """
    kind = int(kind)
    p0 = p1 = p2 = p3 = 0.0
    if len(params) > 0:
        p0 = float(params[0])
    if len(params) > 1:
        p1 = float(params[1])
    if len(params) > 2:
        p2 = float(params[2])
    if len(params) > 3:
        p3 = float(params[3])

    s5 = math.sqrt(5.0)
    kc = math.sqrt(0.4)
    el = math.log((3.0 + s5) / 2.0)
    cm = (s5 - 1.0) / 2.0
    cp = (s5 + 1.0) / 2.0
    w = 2.0 * math.pi * p0

    out = np.empty((n_steps + 1, 3), dtype=np.float64)
    t = float(t0)
    x1 = float(x10)
    x2 = float(x20)
    dt = float(dt)
    out[0, 0] = t
    out[0, 1] = x1
    out[0, 2] = x2

    status = 0
    n_done = 0
    for i in range(n_steps):
        ok = True
        r1 = 0.0
        r2 = 0.0
        # four stage evaluations; the t-velocity is identically zero so
        # every stage sees the same transverse coordinate
        for _stage in range(4):
            if kind == KIND_ALPHA:
                ph = 0.25 * math.pi + w * t
                sph = math.sin(ph)
                cph = math.cos(ph)
                lt = math.exp(el * t)
                lmt = math.exp(-el * t)
                h1 = kc * (sph * lt - cph * lmt)
                h2 = kc * (cm * sph * lt + cp * cph * lmt)
                pt = (w * cph + el * sph) * lt
                qt = (w * sph + el * cph) * lmt
                dh1 = kc * (pt + qt)
                dh2 = kc * (cm * pt - cp * qt)
            elif kind == KIND_KLEIN:
                h1 = 1.0
                h2 = -t
                dh1 = 0.0
                dh2 = -1.0
            elif kind == KIND_SEGMENT:
                h1 = p0 + p1 * t
                h2 = p2 + p3 * t
                dh1 = p1
                dh2 = p3
            else:
                ok = False
                break
            delta = h1 * dh2 - dh1 * h2
            if not (delta < 0.0):
                ok = False
                break
            v1 = dh2 / delta
            v2 = -dh1 / delta
            if _stage == 0:
                r1 = v1
                r2 = v2
            elif _stage == 1 or _stage == 2:
                r1 = r1 + 2.0 * v1
                r2 = r2 + 2.0 * v2
            else:
                r1 = r1 + v1
                r2 = r2 + v2
        if not ok:
            status = 1
            break
        x1 = x1 + dt * (r1 / 6.0)
        x2 = x2 + dt * (r2 / 6.0)
        n_done = i + 1
        out[n_done, 0] = t
        out[n_done, 1] = x1
        out[n_done, 2] = x2
    return out, status, n_done
