"""Reeb orbit integration on the thickened torus.

States are (t, x1, x2): the transverse coordinate plus two angles.
The Reeb velocity (0, R1(t), R2(t)) has no transverse component, so t
is a conserved quantity of every orbit; the integrator carries it as a
state variable anyway and reports its drift, which must vanish exactly.
Closed-form curve families dispatch to the selected kernel backend;
sampled curves integrate through a generic RK4 driven by their spline.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import backend, registry
from .curves import BottProfile, LutzCurve, reeb_velocity
from .errors import ContactViolationError, NumericError, ValidationError

TWO_PI = 2.0 * math.pi


def reduce_angle(x):
    """Reduce an angle (or array of angles) into [0, 2*pi)."""
    r = np.mod(x, TWO_PI)
    return np.where(r == TWO_PI, 0.0, r)


@dataclass(frozen=True)
class FlowState:
    """One orbit sample: transverse coordinate, two reduced angles, flow time."""

    t: float
    x1: float
    x2: float
    time: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "x1", float(reduce_angle(self.x1)))
        object.__setattr__(self, "x2", float(reduce_angle(self.x2)))


class Trajectory:
    """Integrated orbit with drift diagnostics and CSV export.

    ``raw`` holds unreduced (t, x1, x2) rows including the initial
    state; angle reduction happens only at output.  ``status`` is "ok"
    or "contact_violation"; in the latter case rows stop at ``n_done``.
    """

    def __init__(self, raw: np.ndarray, step: float, status: str, n_done: int,
                 profile: BottProfile | None = None):
        self.raw = raw[: n_done + 1]
        self.step = float(step)
        self.status = status
        self.n_done = int(n_done)
        self.profile = profile or BottProfile.linear()

    @property
    def times(self) -> np.ndarray:
        return self.step * np.arange(self.raw.shape[0])

    @property
    def states(self) -> list[FlowState]:
        return [FlowState(float(r[0]), float(r[1]), float(r[2]), float(tm))
                for r, tm in zip(self.raw, self.times)]

    def states_array(self) -> np.ndarray:
        """(n+1, 3) array of (t, x1, x2) rows with angles reduced."""
        out = self.raw.copy()
        out[:, 1] = reduce_angle(out[:, 1])
        out[:, 2] = reduce_angle(out[:, 2])
        return out

    @property
    def initial_state(self) -> FlowState:
        r = self.raw[0]
        return FlowState(float(r[0]), float(r[1]), float(r[2]), 0.0)

    @property
    def final_state(self) -> FlowState:
        r = self.raw[-1]
        return FlowState(float(r[0]), float(r[1]), float(r[2]), float(self.times[-1]))

    def transverse_drift(self) -> float:
        """Max |t - t(0)| along the orbit; exactly zero for Reeb flows."""
        return float(np.max(np.abs(self.raw[:, 0] - self.raw[0, 0])))

    @property
    def integral_drift(self) -> float:
        """Max |f(t) - f(t(0))|; zero because the orbit preserves t."""
        f = np.asarray(self.profile.f(self.raw[:, 0]), dtype=float)
        return float(np.max(np.abs(f - f[0])))

    def to_csv(self, target=None) -> str | None:
        """Write rows "time,t,x1,x2,f" (angles reduced); returns the text
        when ``target`` is None, else writes to the path or file object."""
        st = self.states_array()
        f = np.asarray(self.profile.f(st[:, 0]), dtype=float)
        buf = io.StringIO()
        buf.write("time,t,x1,x2,f\n")
        for i, tm in enumerate(self.times):
            buf.write(f"{tm:.12g},{st[i, 0]:.17g},{st[i, 1]:.17g},{st[i, 2]:.17g},{f[i]:.17g}\n")
        text = buf.getvalue()
        if target is None:
            return text
        if hasattr(target, "write"):
            target.write(text)
            return None
        with open(target, "w") as fh:
            fh.write(text)
        return None


def _step_count(T: float, dt: float) -> tuple[int, float]:
    if not (T > 0.0 and dt > 0.0):
        raise ValidationError("flow requires positive duration and step")
    n = int(round(T / dt))
    if n < 1:
        raise ValidationError("duration shorter than one step")
    return n, T / n


def _as_initial(x0) -> tuple[float, float, float]:
    if isinstance(x0, FlowState):
        return x0.t, x0.x1, x0.x2
    vals = tuple(float(v) for v in x0)
    if len(vals) != 3:
        raise ValidationError("initial state must be a FlowState or (t, x1, x2)")
    return vals


def rk4_generic(velocity: Callable, y0, dt: float, n_steps: int) -> np.ndarray:
    """Classical RK4 for an autonomous field y' = velocity(y) on R^k."""
    y = np.asarray(y0, dtype=float).copy()
    out = np.empty((n_steps + 1, y.size))
    out[0] = y
    for i in range(n_steps):
        k1 = np.asarray(velocity(y), dtype=float)
        k2 = np.asarray(velocity(y + (0.5 * dt) * k1), dtype=float)
        k3 = np.asarray(velocity(y + (0.5 * dt) * k2), dtype=float)
        k4 = np.asarray(velocity(y + dt * k3), dtype=float)
        y = y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        out[i + 1] = y
    return out


def integrate_reeb(curve: LutzCurve, profile: BottProfile | None, x0,
                   T: float, dt: float, backward: bool = False) -> Trajectory:
    """Flow the Reeb field of ``curve`` from ``x0`` for time T.

    ``x0`` is a FlowState or a (t, x1, x2) triple.  The step count is
    round(T / dt); the effective step is T / n so the requested duration
    is hit exactly.  Closed-form families run on the compiled kernel
    when available.
    """
    t0, x1, x2 = _as_initial(x0)
    curve._check_domain(np.array([t0]))
    n, h = _step_count(T, dt)
    if backward:
        h = -h

    if curve.kind == "closed_form":
        fam = registry.get_family(curve.name)
        raw, status, n_done = backend.rk4_orbit(
            fam.kernel_kind, fam.pack(curve.params), t0, x1, x2, h, n
        )
    else:
        raw = np.empty((n + 1, 3))
        raw[0] = (t0, x1, x2)
        status_code = 0
        n_done = 0

        def velocity(y):
            r1, r2 = reeb_velocity(curve, float(y[0]))
            return (0.0, float(r1), float(r2))

        y = np.array([t0, x1, x2], dtype=float)
        for i in range(n):
            try:
                k1 = np.asarray(velocity(y))
                k2 = np.asarray(velocity(y + (0.5 * h) * k1))
                k3 = np.asarray(velocity(y + (0.5 * h) * k2))
                k4 = np.asarray(velocity(y + h * k3))
            except ContactViolationError:
                status_code = 1
                break
            y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            n_done = i + 1
            raw[n_done] = y
        status = status_code

    if not np.all(np.isfinite(raw[: n_done + 1])):
        raise NumericError("non-finite state produced during integration")
    tag = "ok" if status == 0 else "contact_violation"
    return Trajectory(raw, h, tag, n_done, profile)


def exact_linear_flow(curve: LutzCurve, t: float, x0, T: float) -> tuple[float, float]:
    """Closed-form endpoint: the Reeb velocity is constant on each level,
    so the orbit is the straight winding line x0 + T * R(t) on the torus."""
    r1, r2 = reeb_velocity(curve, t)
    x1, x2 = (float(v) for v in x0)
    return (float(reduce_angle(x1 + T * float(r1))),
            float(reduce_angle(x2 + T * float(r2))))
