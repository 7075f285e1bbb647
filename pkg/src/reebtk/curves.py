"""Curve algebra for contact forms h1(t) dx1 + h2(t) dx2 on thickened tori.

A curve t -> (h1, h2) determines the form; the contact condition is a
strictly negative determinant Delta = h1 h2' - h1' h2.  This module
carries the curve types (closed-form and sampled), the pointwise
operators (contact determinant, Reeb velocity, transverse field), the
winding-angle machinery used for torsion counting, the full-twist
surgery template, and the critical-surface perturbation model.

Sign conventions: winding angles are accumulated counterclockwise
positive, so contact curves (angular velocity Delta / |h|^2 < 0) wind
negatively and each extra full twist lowers the winding by 2*pi.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.optimize import brentq

from . import registry
from .errors import (
    ConstructionError,
    ContactViolationError,
    DomainError,
    InconsistencyError,
    NumericError,
    ResolutionError,
    ShapeError,
    SingularityError,
    ValidationError,
)

TWO_PI = 2.0 * math.pi

# grid sizes for invariant checks; 10^4 samples decide contact validity
VALIDATE_SAMPLES = 10_000
DERIV_MISMATCH_TOL = 1e-6


def _smoothstep5(x):
    """Quintic smoothstep on [0, 1]: C^2 joins, slope max 1.875 at 1/2."""
    x = np.clip(x, 0.0, 1.0)
    return x * x * x * (10.0 + x * (-15.0 + 6.0 * x))


def _dsmoothstep5(x):
    x = np.clip(x, 0.0, 1.0)
    return 30.0 * x * x * (1.0 - x) * (1.0 - x)


@dataclass(frozen=True)
class BottProfile:
    """Integral profile f(t) with derivative, tangent to the torus fibres.

    ``mode`` declares the critical structure the caller promises:
    "morse" (isolated critical points) or "monotone".
    """

    f: Callable
    df: Callable
    mode: str = "morse"

    def __post_init__(self):
        if self.mode not in ("morse", "monotone"):
            raise ValidationError(f"unknown profile mode {self.mode!r}")

    @classmethod
    def cosine(cls, k: int = 1) -> "BottProfile":
        w = TWO_PI * k
        return cls(f=lambda t: np.cos(w * np.asarray(t, dtype=float)),
                   df=lambda t: -w * np.sin(w * np.asarray(t, dtype=float)),
                   mode="morse")

    @classmethod
    def linear(cls) -> "BottProfile":
        return cls(f=lambda t: np.asarray(t, dtype=float) + 0.0,
                   df=lambda t: np.ones_like(np.asarray(t, dtype=float)),
                   mode="monotone")

    @classmethod
    def quadratic(cls) -> "BottProfile":
        return cls(f=lambda t: np.asarray(t, dtype=float) ** 2,
                   df=lambda t: 2.0 * np.asarray(t, dtype=float),
                   mode="morse")


@dataclass(frozen=True, eq=False)
class LutzCurve:
    """Curve t -> (h1(t), h2(t)) over a closed parameter interval.

    ``kind`` is "closed_form" (registry family plus parameters) or
    "sampled" (uniform samples with cubic-spline reconstruction).
    Evaluation returns (h1, h2, dh1, dh2); derivatives of sampled
    curves come from the spline and their mismatch against finite
    differences is checked at construction.
    """

    kind: str
    t_lo: float
    t_hi: float
    name: str | None = None
    params: dict = field(default_factory=dict)
    samples: np.ndarray | None = None  # (n, 3) rows t, h1, h2
    grid_step: float | None = None
    deriv_mismatch: float | None = None
    meta: dict = field(default_factory=dict)
    _eval: Callable = field(default=None, repr=False)

    @property
    def domain(self) -> tuple[float, float]:
        return (self.t_lo, self.t_hi)

    @classmethod
    def closed_form(cls, name: str, params: dict | None = None,
                    domain: tuple[float, float] | None = None,
                    meta: dict | None = None) -> "LutzCurve":
        fam = registry.get_family(name)
        params = fam.check_params(params or {})
        lo, hi = domain if domain is not None else fam.default_domain
        lo, hi = float(lo), float(hi)
        if not (lo < hi):
            raise ValidationError(f"empty domain [{lo}, {hi}]")
        return cls(kind="closed_form", t_lo=lo, t_hi=hi, name=name, params=dict(params),
                   meta=dict(meta or {}), _eval=fam.evaluator(params))

    @classmethod
    def from_samples(cls, ts, h1s, h2s, *, deriv_tol: float = DERIV_MISMATCH_TOL,
                     meta: dict | None = None) -> "LutzCurve":
        ts = np.asarray(ts, dtype=float)
        h1s = np.asarray(h1s, dtype=float)
        h2s = np.asarray(h2s, dtype=float)
        if ts.ndim != 1 or ts.size < 8:
            raise ValidationError("sampled curve needs at least 8 uniform samples")
        if h1s.shape != ts.shape or h2s.shape != ts.shape:
            raise ValidationError("sample arrays must share one shape")
        if not (np.all(np.isfinite(ts)) and np.all(np.isfinite(h1s)) and np.all(np.isfinite(h2s))):
            raise NumericError("non-finite values in curve samples")
        steps = np.diff(ts)
        step = (ts[-1] - ts[0]) / (ts.size - 1)
        if step <= 0 or np.max(np.abs(steps - step)) > 1e-9 * max(abs(step), 1e-30):
            raise ValidationError("sample grid must be uniform and increasing")

        sp1 = CubicSpline(ts, h1s)
        sp2 = CubicSpline(ts, h2s)
        d1, d2 = sp1.derivative(), sp2.derivative()

        # spline derivative vs central differences at interior nodes
        fd1 = (h1s[2:] - h1s[:-2]) / (2.0 * step)
        fd2 = (h2s[2:] - h2s[:-2]) / (2.0 * step)
        scale = max(np.max(np.abs(fd1)), np.max(np.abs(fd2)), 1e-30)
        mism = max(np.max(np.abs(d1(ts[1:-1]) - fd1)), np.max(np.abs(d2(ts[1:-1]) - fd2))) / scale
        if mism > deriv_tol:
            raise ValidationError(
                f"derivative reconstruction mismatch {mism:.3e} exceeds {deriv_tol:.1e}; "
                "sample grid too coarse for this curve"
            )

        def evaluate(t):
            return sp1(t), sp2(t), d1(t), d2(t)

        data = np.column_stack([ts, h1s, h2s])
        return cls(kind="sampled", t_lo=float(ts[0]), t_hi=float(ts[-1]), samples=data,
                   grid_step=float(step), deriv_mismatch=float(mism),
                   meta=dict(meta or {}), _eval=evaluate)

    def _check_domain(self, t):
        t = np.asarray(t, dtype=float)
        slack = 1e-9 * max(self.t_hi - self.t_lo, 1.0)
        if np.any(t < self.t_lo - slack) or np.any(t > self.t_hi + slack):
            raise DomainError(
                f"parameter outside curve domain [{self.t_lo}, {self.t_hi}]"
            )

    def evaluate(self, t):
        """(h1, h2, dh1, dh2) at t (scalar or array), domain-checked."""
        self._check_domain(t)
        return self._eval(t)

    def grid(self, n: int) -> np.ndarray:
        return np.linspace(self.t_lo, self.t_hi, n)

    def validate(self, samples: int = VALIDATE_SAMPLES) -> "LutzCurve":
        """Reject the curve unless Delta < 0 strictly at all grid points."""
        ts = self.grid(samples)
        h1, h2, dh1, dh2 = self.evaluate(ts)
        delta = h1 * dh2 - dh1 * h2
        if not np.all(np.isfinite(delta)):
            raise NumericError("non-finite contact determinant on validation grid")
        worst = float(np.max(delta))
        if worst >= 0.0:
            bad = float(ts[int(np.argmax(delta))])
            raise ContactViolationError(
                f"contact determinant {worst:.6e} >= 0 at t = {bad:.6g}"
            )
        return self

    def to_json(self) -> dict:
        if self.kind == "closed_form":
            return {
                "kind": "closed_form",
                "name": self.name,
                "params": {k: (int(v) if isinstance(v, int) else float(v))
                           for k, v in self.params.items()},
                "domain": [self.t_lo, self.t_hi],
            }
        return {
            "kind": "sampled",
            "domain": [self.t_lo, self.t_hi],
            "samples": [[float(a), float(b), float(c)] for a, b, c in self.samples],
        }

    @classmethod
    def from_json(cls, obj) -> "LutzCurve":
        if not isinstance(obj, dict) or "kind" not in obj:
            raise ValidationError("curve JSON must be an object with a 'kind'")
        kind = obj["kind"]
        if kind == "closed_form":
            name = obj.get("name")
            if not isinstance(name, str):
                raise ValidationError("closed-form curve JSON needs a family 'name'")
            domain = obj.get("domain")
            if domain is not None:
                if not (isinstance(domain, list) and len(domain) == 2):
                    raise ValidationError("'domain' must be [lo, hi]")
                domain = (float(domain[0]), float(domain[1]))
            return cls.closed_form(name, obj.get("params") or {}, domain)
        if kind == "sampled":
            rows = obj.get("samples")
            if not isinstance(rows, list) or len(rows) < 8:
                raise ValidationError("sampled curve JSON needs a 'samples' array")
            arr = np.asarray(rows, dtype=float)
            if arr.ndim != 2 or arr.shape[1] != 3:
                raise ValidationError("'samples' rows must be [t, h1, h2]")
            return cls.from_samples(arr[:, 0], arr[:, 1], arr[:, 2])
        raise ValidationError(f"unknown curve kind {kind!r}")


def alpha_curve(n: int, domain: tuple[float, float] = (0.0, 1.0)) -> LutzCurve:
    """Convenience constructor for the n-twist torus-bundle family."""
    return LutzCurve.closed_form("alpha_n", {"n": int(n)}, domain)


def klein_curve(domain: tuple[float, float] = (-0.5, 0.5)) -> LutzCurve:
    return LutzCurve.closed_form("klein_normal", {}, domain)


def segment_curve(a1: float, b1: float, a2: float, b2: float,
                  domain: tuple[float, float] = (0.0, 1.0)) -> LutzCurve:
    return LutzCurve.closed_form(
        "segment", {"a1": a1, "b1": b1, "a2": a2, "b2": b2}, domain
    )


def contact_defect(curve: LutzCurve, t):
    """Contact determinant Delta(t) = h1 h2' - h1' h2 (negative on contact curves)."""
    h1, h2, dh1, dh2 = curve.evaluate(t)
    delta = h1 * dh2 - dh1 * h2
    if not np.all(np.isfinite(delta)):
        raise NumericError("non-finite contact determinant")
    return delta


def is_contact(curve: LutzCurve, samples: int = VALIDATE_SAMPLES) -> bool:
    try:
        curve.validate(samples)
    except (ContactViolationError, NumericError):
        return False
    return True


def reeb_velocity(curve: LutzCurve, t):
    """Reeb velocity (R1, R2) = (h2', -h1') / Delta; the transverse component is zero.

    Raises if the contact condition fails at any evaluated t.
    """
    h1, h2, dh1, dh2 = curve.evaluate(t)
    delta = h1 * dh2 - dh1 * h2
    if not np.all(np.isfinite(delta)):
        raise NumericError("non-finite contact determinant")
    if np.any(delta >= 0.0):
        raise ContactViolationError("contact determinant >= 0; Reeb field undefined")
    return dh2 / delta, -dh1 / delta


def transverse_Y(curve: LutzCurve, profile: BottProfile, t):
    """Section Y of the contact structure with i_Y d(alpha) = -df.

    Solves alpha(Y) = 0 and h1' Y1 + h2' Y2 = f'(t); in closed form
    Y = f'(t) * (-h2, h1) / Delta.
    """
    h1, h2, dh1, dh2 = curve.evaluate(t)
    delta = h1 * dh2 - dh1 * h2
    if not np.all(np.isfinite(delta)):
        raise NumericError("non-finite contact determinant")
    if np.any(delta == 0.0):
        raise ContactViolationError("degenerate determinant; transverse field undefined")
    fp = profile.df(t)
    return -fp * h2 / delta, fp * h1 / delta


def winding_angle(curve: LutzCurve, t0: float, t1: float,
                  *, initial_samples: int = 256, max_doublings: int = 16) -> float:
    """Total turning angle of (h1, h2) about the origin over [t0, t1].

    Counterclockwise positive.  Increments are accumulated with atan2
    over a refinement fine enough that every step turns less than pi/2,
    then confirmed against one further doubling; between sampled
    directions the atan2 increment is the exact continuous angle change,
    so the refined total is exact up to rounding.
    """
    if not (t0 < t1):
        raise DomainError("winding requires t0 < t1")
    curve._check_domain(np.array([t0, t1]))

    confirmed = None
    n = initial_samples
    for _ in range(max_doublings + 1):
        ts = np.linspace(t0, t1, n + 1)
        h1, h2, _, _ = curve.evaluate(ts)
        if not (np.all(np.isfinite(h1)) and np.all(np.isfinite(h2))):
            raise NumericError("non-finite curve values while accumulating winding")
        if np.any((h1 == 0.0) & (h2 == 0.0)):
            raise SingularityError("curve passes through the origin; winding undefined")
        cross = h1[:-1] * h2[1:] - h2[:-1] * h1[1:]
        dot = h1[:-1] * h1[1:] + h2[:-1] * h2[1:]
        dth = np.arctan2(cross, dot)
        total = float(np.sum(dth))
        if np.max(np.abs(dth)) < 0.5 * math.pi:
            if confirmed is not None and abs(total - confirmed) <= 1e-10 * max(1.0, abs(total)):
                return total
            confirmed = total
        else:
            confirmed = None
        n *= 2
    raise ResolutionError(
        f"winding refinement did not stabilize below pi/2 steps by n = {n // 2}"
    )


def torsion_count_relative(curve: LutzCurve, base: LutzCurve,
                           *, tol: float = 1e-3) -> int:
    """Integer number of extra full twists of ``curve`` relative to ``base``.

    Computed as (winding(base) - winding(curve)) / (2*pi) over the shared
    domain; a clockwise extra twist counts +1.  The ratio must sit within
    ``tol`` of an integer.
    """
    if abs(curve.t_lo - base.t_lo) > 1e-12 or abs(curve.t_hi - base.t_hi) > 1e-12:
        raise ValidationError("torsion count requires curves on the same domain")
    w_curve = winding_angle(curve, curve.t_lo, curve.t_hi)
    w_base = winding_angle(base, base.t_lo, base.t_hi)
    ratio = (w_base - w_curve) / TWO_PI
    k = round(ratio)
    if abs(ratio - k) > tol:
        raise InconsistencyError(
            f"winding difference {ratio:.6f} full twists is not within {tol} of an integer"
        )
    return int(k)


def zero_torsion_witness(curve: LutzCurve, samples: int = VALIDATE_SAMPLES) -> bool:
    """True when h2 > 0 at every sampled t, certifying an untwisted form."""
    ts = curve.grid(samples)
    _, h2, _, _ = curve.evaluate(ts)
    if not np.all(np.isfinite(h2)):
        raise NumericError("non-finite h2 while checking positivity")
    return bool(np.all(h2 > 0.0))


# ---------------------------------------------------------------------------
# full twist surgery


def _hermite_coeffs(d: float, length: float, va: float, vb: float):
    """Cubic s(t) on [0, d] with s(0)=0, s(d)=length, s'(0)=va, s'(d)=vb.

    Returns (c2, c3); monotonicity is checked by the caller.
    """
    a = length - va * d
    b = vb - va
    c2 = 3.0 * a / (d * d) - b / d
    c3 = (b * d - 2.0 * a) / (d ** 3)
    return c2, c3


def _hermite_min_slope(d: float, va: float, c2: float, c3: float) -> float:
    lo = min(va, va + 2.0 * c2 * d + 3.0 * c3 * d * d)
    if abs(c3) > 0.0:
        tv = -c2 / (3.0 * c3)
        if 0.0 < tv < d:
            lo = min(lo, va + 2.0 * c2 * tv + 3.0 * c3 * tv * tv)
    return lo


class _TwistTemplate:
    """Rounded loop in the (h1, h2) plane inserting one clockwise turn.

    Built over the window u = t - s0 in [-eps, eps].  The curve leaves
    the affine entry (x0 + u, C), arcs down the right side, crosses
    under the origin, returns along a semicircle centered at (x0, 0)
    and eases back onto the affine exit.  Each piece owns a fixed share
    of the parameter window, so the mollifier (width eps/10) leaves the
    cores of the three axis-aligned pieces exactly axis-aligned; speeds
    match at the junctions through cubic easing, making the template C^1
    with curvature jumps only where the mollifier smooths them.
    """

    # parameter shares of [-eps, eps]: affine entry, entry arc, right
    # side, lower corner, bottom run, semicircle, top run, affine exit
    FRACTIONS = (-1.0, -0.75, -0.55, -0.25, -0.05, 0.25, 0.45, 0.75, 1.0)

    def __init__(self, x0: float, eps: float, C: float):
        if eps > 0.5 * C:
            raise ConstructionError(
                f"twist window halfwidth {eps:.4g} too large for level C = {C:.4g}"
            )
        if abs(x0) > 0.6 * C:
            raise ConstructionError(
                f"window h1-offset {x0:.4g} too far from the origin for level C = {C:.4g}"
            )
        rho1, rho2, rho3 = C, C / 4.0, C
        xa = x0 - 0.75 * eps      # plane x where the entry arc attaches
        xr = xa + rho1            # x of the descending right side
        if xr <= 0.0:
            raise ConstructionError("right side of the twist loop would cross the origin")

        bounds = [f * eps for f in self.FRACTIONS]
        lengths = [
            0.25 * eps,                 # affine entry
            rho1 * math.pi / 2.0,       # entry arc
            C - rho2,                   # right side
            rho2 * math.pi / 2.0,       # lower corner
            xr - rho2 - x0,             # bottom run
            rho3 * math.pi,             # semicircle about (x0, 0)
            0.75 * eps,                 # top run
            0.25 * eps,                 # affine exit
        ]
        if lengths[4] <= 0.0:
            raise ConstructionError("bottom run of the twist loop has nonpositive length")

        durations = [bounds[i + 1] - bounds[i] for i in range(8)]
        avg = [lengths[i] / durations[i] for i in range(8)]
        # junction speeds: the smaller neighbouring average speed, except
        # unit speed where the loop meets the exact affine margins
        vj = [1.0] + [min(avg[i], avg[i + 1]) for i in range(7)] + [1.0]
        vj[1] = 1.0
        vj[7] = 1.0

        self.bounds = bounds
        self.lengths = lengths
        self.pieces = []
        for i in range(8):
            d, ln = durations[i], lengths[i]
            va, vb = vj[i], vj[i + 1]
            if i in (0, 7):
                self.pieces.append(None)  # exact affine, handled directly
                continue
            c2, c3 = _hermite_coeffs(d, ln, va, vb)
            if _hermite_min_slope(d, va, c2, c3) <= 0.0:
                raise ConstructionError(
                    "twist template easing is not monotone for these proportions"
                )
            self.pieces.append((va, c2, c3))

        self.x0, self.eps, self.C = x0, eps, C
        self.rho1, self.rho2, self.rho3 = rho1, rho2, rho3
        self.xa, self.xr = xa, xr
        self.config = {
            "x_offset": x0, "eps": eps, "C": C,
            "rho1": rho1, "rho2": rho2, "rho3": rho3,
            "bounds": list(bounds), "mollifier_width": eps / 10.0,
        }

    def _pathpoint(self, i: int, s, out_x, out_y):
        C, x0 = self.C, self.x0
        if i == 1:
            ph = math.pi / 2.0 - s / self.rho1
            out_x[...] = self.xa + self.rho1 * np.cos(ph)
            out_y[...] = (C - self.rho1) + self.rho1 * np.sin(ph)
        elif i == 2:
            out_x[...] = self.xr
            out_y[...] = -s
        elif i == 3:
            ph = -s / self.rho2
            out_x[...] = (self.xr - self.rho2) + self.rho2 * np.cos(ph)
            out_y[...] = (-C + self.rho2) + self.rho2 * np.sin(ph)
        elif i == 4:
            out_x[...] = (self.xr - self.rho2) - s
            out_y[...] = -C
        elif i == 5:
            ph = -math.pi / 2.0 - s / self.rho3
            out_x[...] = x0 + self.rho3 * np.cos(ph)
            out_y[...] = self.rho3 * np.sin(ph)
        elif i == 6:
            out_x[...] = x0 + s
            out_y[...] = C

    def __call__(self, u):
        """Plane position (x, y) of the template at window parameter u."""
        u = np.asarray(u, dtype=float)
        x = np.empty_like(u)
        y = np.empty_like(u)
        idx = np.clip(np.searchsorted(self.bounds, u, side="right") - 1, 0, 7)
        for i in range(8):
            sel = idx == i
            if not np.any(sel):
                continue
            if i in (0, 7):
                x[sel] = self.x0 + u[sel]
                y[sel] = self.C
                continue
            tloc = u[sel] - self.bounds[i]
            va, c2, c3 = self.pieces[i]
            s = tloc * (va + tloc * (c2 + tloc * c3))
            xx = np.empty_like(s)
            yy = np.empty_like(s)
            self._pathpoint(i, s, xx, yy)
            x[sel] = xx
            y[sel] = yy
        return x, y

    def subannuli(self, s0: float, smear: float):
        """Axis-aligned sub-windows in absolute parameter, cores only."""
        b = self.bounds
        runs = [
            (b[2], b[3], "x1", 1),    # right side: Reeb along +x1
            (b[4], b[5], "x2", -1),   # bottom run: Reeb along -x2
            (b[6], b[7], "x2", 1),    # top run: Reeb along +x2
        ]
        out = []
        for ua, ub, axis, sign in runs:
            ta, tb = s0 + ua + smear, s0 + ub - smear
            if tb > ta:
                out.append({"t": (float(ta), float(tb)), "axis": axis, "sign": sign})
        return out


def _bump_kernel(halfwidth: float, step: float) -> np.ndarray:
    """Discrete compactly supported mollifier, unit mass, symmetric."""
    taps = int(math.floor(halfwidth / step))
    if taps < 2:
        raise ConstructionError("mollifier unresolved: sampling step too coarse")
    x = np.arange(-taps, taps + 1) * (step / halfwidth)
    k = np.zeros_like(x)
    inside = np.abs(x) < 1.0
    k[inside] = np.exp(-1.0 / (1.0 - x[inside] ** 2))
    return k / np.sum(k)


def full_lutz_twist(curve: LutzCurve, s0: float, eps: float, C: float) -> LutzCurve:
    """Insert one extra full (clockwise) twist in the window [s0-eps, s0+eps].

    Requires the curve to be in the local normal form h = (s - c, C)
    with unit slope across the window (any offset c).  The replacement
    is a rounded loop around the origin with C^1 matching at the window
    boundary, smoothed by a mollifier of width eps/10; the output is a
    sampled curve agreeing with the input outside the window whose
    winding over the domain drops by exactly 2*pi.
    """
    if eps <= 0.0:
        raise ValidationError("twist window halfwidth eps must be positive")
    if C <= 0.0:
        raise ValidationError("twist level C must be positive")
    lo, hi = curve.domain
    if s0 - eps < lo - 1e-12 or s0 + eps > hi + 1e-12:
        raise DomainError("twist window extends beyond the curve domain")

    # normal-form precondition across the window
    tw = np.linspace(s0 - eps, s0 + eps, 1001)
    h1, h2, dh1, dh2 = curve.evaluate(tw)
    x0 = float(np.asarray(curve.evaluate(np.array([s0]))[0])[0])
    scale = max(abs(C), eps, 1.0)
    if (np.max(np.abs(h2 - C)) > 1e-8 * scale
            or np.max(np.abs(h1 - (x0 + tw - s0))) > 1e-8 * scale
            or np.max(np.abs(dh1 - 1.0)) > 1e-6
            or np.max(np.abs(dh2)) > 1e-6 * scale):
        raise ShapeError(
            "curve is not in the normal form (s - c, C) across the twist window"
        )

    template = _TwistTemplate(x0, eps, C)
    width = eps / 10.0

    span = hi - lo
    n = int(max(4097, math.ceil(span / (eps / 80.0)) + 1))
    out = None
    last_err: Exception | None = None
    while n <= (1 << 19):
        ts = np.linspace(lo, hi, n)
        step = span / (n - 1)
        hh1 = np.empty(n)
        hh2 = np.empty(n)

        inside = (ts > s0 - eps) & (ts < s0 + eps)
        outside = ~inside
        o1, o2, _, _ = curve.evaluate(ts[outside])
        hh1[outside] = o1          # bit-for-bit the input outside the window
        hh2[outside] = o2
        u_in = ts[inside] - s0
        x_in, y_in = template(u_in)

        kern = _bump_kernel(width, step)
        taps = (len(kern) - 1) // 2
        # smooth only points at least one kernel halfwidth inside the
        # window, so the kernel support never leaves the window; the
        # affine margins are reproduced exactly by symmetry
        deep = np.where((u_in > -eps + width) & (u_in < eps - width))[0]
        if deep.size:
            i0, i1 = int(deep[0]), int(deep[-1])
            pad_u = u_in[0] + step * np.arange(i0 - taps, i1 + 1 + taps)
            px, py = template(pad_u)
            x_in[i0:i1 + 1] = np.convolve(px, kern, mode="valid")
            y_in[i0:i1 + 1] = np.convolve(py, kern, mode="valid")
        hh1[inside] = x_in
        hh2[inside] = y_in

        try:
            out = LutzCurve.from_samples(ts, hh1, hh2)
            break
        except ValidationError as exc:
            last_err = exc
            n *= 2
    if out is None:
        raise ConstructionError(f"could not resolve twist template: {last_err}")

    try:
        out.validate()
    except ContactViolationError as exc:
        raise ConstructionError(
            f"twist template violates the contact condition: {exc}"
        ) from exc

    # the surgery must lower the winding by exactly one full turn
    delta_w = winding_angle(out, lo, hi) - winding_angle(curve, lo, hi)
    if abs(delta_w + TWO_PI) > 1e-6:
        raise ConstructionError(
            f"twist template winds {delta_w / TWO_PI:+.6f} turns instead of -1"
        )

    smear = width + 2.0 * (hi - lo) / (n - 1)
    meta = {
        "twist": {"s0": s0, "window": (s0 - eps, s0 + eps),
                  "config": template.config, "winding_delta": float(delta_w)},
        "subannuli": template.subannuli(s0, smear),
    }
    return LutzCurve(kind="sampled", t_lo=out.t_lo, t_hi=out.t_hi, samples=out.samples,
                     grid_step=out.grid_step, deriv_mismatch=out.deriv_mismatch,
                     meta=meta, _eval=out._eval)


# ---------------------------------------------------------------------------
# critical-surface perturbation


@dataclass(frozen=True)
class PerturbationBump:
    """Radial bump chi used to split a critical surface into two orbits.

    Invariants: 0 <= chi <= epsilon^2, chi == epsilon^2 on [-eps, eps],
    chi == 0 outside (-2 eps, 2 eps), 2*eps < delta, and the slope bound
    |chi'(r)| < |2 r| away from r = 0.
    """

    delta: float
    epsilon: float
    chi: Callable
    dchi: Callable

    @classmethod
    def smoothstep(cls, delta: float, epsilon: float) -> "PerturbationBump":
        """Standard bump with quintic smoothstep transition regions."""
        delta, epsilon = float(delta), float(epsilon)
        e2 = epsilon * epsilon

        def chi(r):
            a = np.abs(np.asarray(r, dtype=float))
            ramp = e2 * _smoothstep5((2.0 * epsilon - a) / epsilon)
            return np.where(a <= epsilon, e2, np.where(a < 2.0 * epsilon, ramp, 0.0))

        def dchi(r):
            r = np.asarray(r, dtype=float)
            a = np.abs(r)
            slope = -np.sign(r) * epsilon * _dsmoothstep5((2.0 * epsilon - a) / epsilon)
            return np.where((a > epsilon) & (a < 2.0 * epsilon), slope, 0.0)

        bump = cls(delta=delta, epsilon=epsilon, chi=chi, dchi=dchi)
        bump.validate()
        return bump

    def validate(self, samples: int = 2001) -> "PerturbationBump":
        if not (self.delta > 0.0 and self.epsilon > 0.0):
            raise ValidationError("bump scales must be positive")
        if not (2.0 * self.epsilon < self.delta):
            raise ValidationError("bump requires 2*epsilon < delta")
        e2 = self.epsilon ** 2
        tiny = 1e-12 * e2
        r = np.linspace(-self.delta, self.delta, samples)
        c = np.asarray(self.chi(r), dtype=float)
        dc = np.asarray(self.dchi(r), dtype=float)
        if not (np.all(np.isfinite(c)) and np.all(np.isfinite(dc))):
            raise NumericError("non-finite bump values")
        if np.min(c) < -tiny or np.max(c) > e2 + tiny:
            raise ValidationError("bump must take values in [0, epsilon^2]")
        plateau = np.abs(r) <= self.epsilon
        if np.max(np.abs(c[plateau] - e2)) > tiny:
            raise ValidationError("bump must equal epsilon^2 on the inner plateau")
        outer = np.abs(r) >= 2.0 * self.epsilon
        if np.max(np.abs(c[outer])) > tiny:
            raise ValidationError("bump must vanish outside twice the plateau radius")
        nz = r != 0.0
        if np.any(np.abs(dc[nz]) >= np.abs(2.0 * r[nz])):
            raise ValidationError("bump slope must stay strictly below |2 r|")
        return self


def perturbation_energy(bump: PerturbationBump, r, theta):
    """Height g(r, theta) = r^2 + chi(r) cos(theta) after the perturbation."""
    r = np.asarray(r, dtype=float)
    return r * r + np.asarray(bump.chi(r), dtype=float) * np.cos(theta)


def perturbation_gradient(bump: PerturbationBump, r, theta):
    """(dg/dr, dg/dtheta) of the perturbed height."""
    r = np.asarray(r, dtype=float)
    return (2.0 * r + np.asarray(bump.dchi(r), dtype=float) * np.cos(theta),
            -np.asarray(bump.chi(r), dtype=float) * np.sin(theta))


@dataclass(frozen=True)
class CriticalPoint:
    r: float
    theta: float
    kind: str  # "minimum" | "saddle" | "maximum"
    hessian: tuple[tuple[float, float], tuple[float, float]]
    eigenvalues: tuple[float, float]


@dataclass(frozen=True)
class CriticalSetReport:
    points: tuple[CriticalPoint, ...]

    def kinds(self) -> dict:
        return {(p.r, p.theta): p.kind for p in self.points}


def perturb_critical_surface(bump: PerturbationBump) -> CriticalSetReport:
    """Critical set of the perturbed height on [-delta, delta] x S^1.

    The angular gradient -chi(r) sin(theta) vanishes only where
    sin(theta) = 0 or chi(r) = 0; where chi vanishes the radial gradient
    is 2r, nonzero on that region, so all critical points lie on the
    lines theta = 0 and theta = pi.  Roots of the radial gradient are
    isolated there by a sign scan and refined by bisection; each point
    is classified by the numerically assembled Hessian.
    """
    bump.validate()
    eps = bump.epsilon
    points = []
    hstep = min(1e-4, eps / 8.0)
    for theta in (0.0, math.pi):
        ct = math.cos(theta)

        def radial(r, ct=ct):
            return 2.0 * r + float(bump.dchi(r)) * ct

        rs = np.linspace(-bump.delta, bump.delta, 4097)
        vals = 2.0 * rs + np.asarray(bump.dchi(rs), dtype=float) * ct
        roots = [float(rs[i]) for i in np.where(vals == 0.0)[0]]
        flips = np.where(vals[:-1] * vals[1:] < 0.0)[0]
        for i in flips:
            roots.append(float(brentq(radial, rs[i], rs[i + 1], xtol=1e-14)))
        roots.sort()
        merged: list[float] = []
        for r in roots:
            if not merged or abs(r - merged[-1]) > 1e-10 * max(1.0, bump.delta):
                merged.append(r)

        for r0 in merged:
            chi0 = float(bump.chi(r0))
            dchi0 = float(bump.dchi(r0))
            ddchi0 = (float(bump.dchi(r0 + hstep)) - float(bump.dchi(r0 - hstep))) / (2.0 * hstep)
            g_rr = 2.0 + ddchi0 * ct
            g_rt = -dchi0 * math.sin(theta)
            g_tt = -chi0 * ct
            tr = g_rr + g_tt
            det = g_rr * g_tt - g_rt * g_rt
            disc = math.sqrt(max(tr * tr / 4.0 - det, 0.0))
            lam1, lam2 = tr / 2.0 - disc, tr / 2.0 + disc
            if lam1 > 0.0:
                kind = "minimum"
            elif lam2 < 0.0:
                kind = "maximum"
            elif lam1 < 0.0 < lam2:
                kind = "saddle"
            else:
                raise NumericError(
                    f"degenerate Hessian at (r, theta) = ({r0:.3g}, {theta:.3g})"
                )
            points.append(CriticalPoint(
                r=r0, theta=theta, kind=kind,
                hessian=((g_rr, g_rt), (g_rt, g_tt)),
                eigenvalues=(lam1, lam2),
            ))
    points.sort(key=lambda p: (p.theta, p.r))
    return CriticalSetReport(points=tuple(points))
