"""Hyperbolic torus-bundle model: monodromy algebra and the twist family.

The bundle glues T^2 x [0, 1] by the linear map with matrix
[[2, 1], [1, 1]]; the curve family alpha_n realizes contact forms on it
whose Reeb flow is a constant suspension-direction drift, with n
counting full twists of the coefficient curve.  This module carries the
monodromy constants, the equivariance check that makes the family
descend to the bundle, and the fundamental-group presentation feeding
the homology computation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import registry
from .errors import InconsistencyError, ValidationError
from .zlinalg import HomologyGroup, IntMatrix, homology_from_presentation

MONODROMY = ((2, 1), (1, 1))


@dataclass(frozen=True)
class CatConstants:
    """Spectral data of the monodromy matrix [[2, 1], [1, 1]]."""

    expansion: float          # larger eigenvalue (3 + sqrt 5) / 2
    log_expansion: float
    eigvec_ratio: float       # unstable direction slope (1 + sqrt 5) / 2

    @classmethod
    def standard(cls) -> "CatConstants":
        s5 = math.sqrt(5.0)
        return cls(expansion=(3.0 + s5) / 2.0,
                   log_expansion=math.log((3.0 + s5) / 2.0),
                   eigvec_ratio=(1.0 + s5) / 2.0)

    def check(self, tol: float = 1e-12) -> None:
        m = np.array(MONODROMY, dtype=float)
        lam = self.expansion
        if abs(lam * lam - 3.0 * lam + 1.0) > tol:
            raise InconsistencyError("expansion rate fails the characteristic equation")
        if abs(float(np.linalg.det(m)) - 1.0) > tol:
            raise InconsistencyError("monodromy must be unimodular")
        v = np.array([self.eigvec_ratio, 1.0])
        resid = m @ v - lam * v
        if float(np.max(np.abs(resid))) > tol * max(lam, 1.0):
            raise InconsistencyError("unstable eigenvector residual too large")


def alpha_n(n: int, t):
    """(h1, h2, dh1, dh2) of the n-twist family at parameter t."""
    return registry.alpha_components(int(n), t)


def contact_determinant(n: int, t):
    """Closed form of Delta for the family: -(2/sqrt 5)(2 pi n + L cos(4 pi n t))."""
    return registry.alpha_contact_determinant(int(n), t)


def check_equivariance(n: int, t, matrix=MONODROMY) -> float:
    """Max absolute residual of h(t) = matrix . h(t - 1) for the family.

    The family descends to the bundle exactly when this vanishes for
    the standard monodromy; a wrong matrix leaves residuals of order
    one or larger.
    """
    (a, b), (c, d) = matrix
    t = np.asarray(t, dtype=float)
    h1, h2, _, _ = alpha_n(n, t)
    p1, p2, _, _ = alpha_n(n, t - 1.0)
    r1 = h1 - (a * p1 + b * p2)
    r2 = h2 - (c * p1 + d * p2)
    return float(max(np.max(np.abs(r1)), np.max(np.abs(r2))))


# fundamental-group relators of the bundle, in generators a, b (fibre)
# and c (suspension); uppercase letters are inverses
PI1_RELATORS = ("abAB", "acBAAC", "bcBAC")
PI1_GENERATORS = ("a", "b", "c")


def _exponent_sums(word: str, generators: tuple[str, ...]) -> list[int]:
    sums = {g: 0 for g in generators}
    for ch in word:
        low = ch.lower()
        if low not in sums:
            raise ValidationError(f"relator letter {ch!r} outside generator set")
        sums[low] += -1 if ch.isupper() else 1
    return [sums[g] for g in generators]


def cat_h1_presentation() -> IntMatrix:
    """Abelianized relator matrix: rows are exponent sums over (a, b, c)."""
    rows = [_exponent_sums(w, PI1_GENERATORS) for w in PI1_RELATORS]
    return IntMatrix(rows)


def cat_homology() -> HomologyGroup:
    """First homology of the bundle: infinite cyclic, carried by c."""
    pres = cat_h1_presentation()
    return homology_from_presentation(pres, ngens=len(PI1_GENERATORS))


def torsion_of_family(n: int, base_n: int = 0) -> int:
    """Twist count of alpha_n relative to alpha_{base_n}: exactly n - base_n.

    The family adds one clockwise turn of the coefficient curve per unit
    of n over the fundamental domain.
    """
    return int(n) - int(base_n)
