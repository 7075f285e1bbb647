"""Registry of closed-form curve families.

Each family maps a parameter dict to vectorized evaluators
``(h1, h2, dh1, dh2)`` of the transverse coordinate, plus a flat float
packing consumed by the integrator kernels.  Derivatives are expanded
by hand so the contact determinant is available in closed form; no
numerical differentiation happens for these families.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import ValidationError

# torus-bundle family constants: growth rate of the monodromy
SQRT5 = math.sqrt(5.0)
LAMBDA = (3.0 + SQRT5) / 2.0
LOG_LAMBDA = math.log(LAMBDA)
_K = math.sqrt(2.0 / 5.0)
_CM = (SQRT5 - 1.0) / 2.0
_CP = (SQRT5 + 1.0) / 2.0

# kernel dispatch codes, mirrored in _kernels.pyx and _kernels_py
KIND_ALPHA = 1
KIND_KLEIN = 2
KIND_SEGMENT = 3


def alpha_components(n: int, t):
    """Closed-form (h1, h2, dh1, dh2) of the n-twist torus-bundle family.

    Accepts scalars or numpy arrays.  The phase advances by 2*pi*n per
    unit of t on top of a fixed pi/4 offset; the radial parts grow and
    decay with the monodromy eigenvalue.
    """
    if n < 0 or int(n) != n:
        raise ValidationError("twisting count n must be a nonnegative integer")
    w = 2.0 * math.pi * n
    ph = math.pi / 4.0 + w * t
    s, c = np.sin(ph), np.cos(ph)
    lt = np.exp(LOG_LAMBDA * t)
    lmt = np.exp(-LOG_LAMBDA * t)
    p = (w * c + LOG_LAMBDA * s) * lt
    q = (w * s + LOG_LAMBDA * c) * lmt
    h1 = _K * (s * lt - c * lmt)
    h2 = _K * (_CM * s * lt + _CP * c * lmt)
    dh1 = _K * (p + q)
    dh2 = _K * (_CM * p - _CP * q)
    return h1, h2, dh1, dh2


def alpha_contact_determinant(n: int, t):
    """Closed form of h1*dh2 - dh1*h2 for the n-twist family."""
    w = 2.0 * math.pi * n
    return -(2.0 / SQRT5) * (w + np.cos(2.0 * w * t) * LOG_LAMBDA)


def klein_components(t):
    """Vertical-annulus normal form: h = (1, -t), so the form is ds - r dtheta."""
    t = np.asarray(t, dtype=float) if not np.isscalar(t) else t
    one = np.ones_like(t) if not np.isscalar(t) else 1.0
    zero = np.zeros_like(t) if not np.isscalar(t) else 0.0
    return one, -t, zero, -one


def segment_components(a1: float, b1: float, a2: float, b2: float, t):
    """Affine family h1 = a1 + b1*t, h2 = a2 + b2*t."""
    t = np.asarray(t, dtype=float) if not np.isscalar(t) else t
    one = np.ones_like(t) if not np.isscalar(t) else 1.0
    return a1 + b1 * t, a2 + b2 * t, b1 * one, b2 * one


@dataclass(frozen=True)
class ChartFamily:
    name: str
    kernel_kind: int
    params_spec: tuple[str, ...]
    default_domain: tuple[float, float]

    def check_params(self, params: dict) -> dict:
        clean = {}
        for key in self.params_spec:
            if key not in params:
                raise ValidationError(f"family '{self.name}' requires parameter '{key}'")
            clean[key] = params[key]
        extra = set(params) - set(self.params_spec)
        if extra:
            raise ValidationError(f"family '{self.name}' got unknown parameters {sorted(extra)}")
        return clean

    def pack(self, params: dict) -> tuple[float, ...]:
        return tuple(float(params[k]) for k in self.params_spec)

    def evaluator(self, params: dict) -> Callable:
        if self.name == "alpha_n":
            n = int(params["n"])
            if n < 0 or params["n"] != n:
                raise ValidationError("twisting count n must be a nonnegative integer")
            return lambda t: alpha_components(n, t)
        if self.name == "klein_normal":
            return klein_components
        if self.name == "segment":
            a1, b1 = float(params["a1"]), float(params["b1"])
            a2, b2 = float(params["a2"]), float(params["b2"])
            return lambda t: segment_components(a1, b1, a2, b2, t)
        raise ValidationError(f"unknown family '{self.name}'")


FAMILIES: dict[str, ChartFamily] = {
    "alpha_n": ChartFamily("alpha_n", KIND_ALPHA, ("n",), (0.0, 1.0)),
    "klein_normal": ChartFamily("klein_normal", KIND_KLEIN, (), (-0.5, 0.5)),
    "segment": ChartFamily("segment", KIND_SEGMENT, ("a1", "b1", "a2", "b2"), (0.0, 1.0)),
}


def get_family(name: str) -> ChartFamily:
    try:
        return FAMILIES[name]
    except KeyError:
        raise ValidationError(
            f"unknown closed-form family '{name}' (known: {sorted(FAMILIES)})"
        ) from None
