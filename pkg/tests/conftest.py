"""Shared fixtures and independent oracles for the test suite.

The oracles here deliberately avoid the package's own algorithms:
determinants by cofactor expansion, invariant factors by minor gcds,
graph Betti numbers by union-find, and critical points by brute-force
grid search.  Tests compare the fast implementations against these.
"""

from __future__ import annotations

import itertools
import math
from math import gcd

import numpy as np
import pytest
from hypothesis import settings

from reebtk import segment_curve
from reebtk.zlinalg import IntMatrix

settings.register_profile("suite", deadline=None, max_examples=60)
settings.load_profile("suite")

TWO_PI = 2.0 * math.pi


# --- integer linear algebra oracles ---------------------------------------

def det_cofactor(rows) -> int:
    """Determinant by cofactor expansion along the first row (exact)."""
    rows = [list(r) for r in rows]
    n = len(rows)
    assert all(len(r) == n for r in rows)
    if n == 0:
        return 1
    if n == 1:
        return rows[0][0]
    total = 0
    for j, x in enumerate(rows[0]):
        if x == 0:
            continue
        minor = [r[:j] + r[j + 1:] for r in rows[1:]]
        total += (-1) ** j * x * det_cofactor(minor)
    return total


def invariant_factors_minor_gcd(rows) -> tuple[int, ...]:
    """Invariant factors via determinantal divisors d_k = gcd of k-minors.

    Exponential in the dimensions; keep matrices at most 5x5.
    """
    rows = [list(r) for r in rows]
    m = len(rows)
    n = len(rows[0]) if m else 0
    factors = []
    prev = 1
    for k in range(1, min(m, n) + 1):
        d = 0
        for ri in itertools.combinations(range(m), k):
            for ci in itertools.combinations(range(n), k):
                sub = [[rows[i][j] for j in ci] for i in ri]
                d = gcd(d, abs(det_cofactor(sub)))
        if d == 0:
            break
        factors.append(d // prev)
        prev = d
    return tuple(factors)


def forest_betti(vertices: int, edges) -> int:
    """First Betti number E - V + C via union-find component counting."""
    parent = list(range(vertices))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in edges:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
    comps = sum(1 for v in range(vertices) if find(v) == v)
    return len(list(edges)) - vertices + comps


def random_int_matrix(rng: np.random.Generator, max_dim: int = 8,
                      lo: int = -20, hi: int = 20) -> IntMatrix:
    m = int(rng.integers(1, max_dim + 1))
    n = int(rng.integers(1, max_dim + 1))
    return IntMatrix(rng.integers(lo, hi + 1, size=(m, n)).tolist())


def random_unimodular(rng: np.random.Generator, n: int, steps: int = 12) -> IntMatrix:
    """Product of elementary integer row operations applied to the identity."""
    rows = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(steps):
        op = int(rng.integers(0, 3))
        i, j = rng.choice(n, size=2, replace=False) if n > 1 else (0, 0)
        i, j = int(i), int(j)
        if op == 0 and i != j:
            q = int(rng.integers(-3, 4))
            rows[i] = [a + q * b for a, b in zip(rows[i], rows[j])]
        elif op == 1 and i != j:
            rows[i], rows[j] = rows[j], rows[i]
        else:
            rows[i] = [-a for a in rows[i]]
    return IntMatrix(rows)


# --- perturbation grid oracle ---------------------------------------------

def grid_critical_candidates(bump, n: int = 2001):
    """Brute-force candidate critical points of the perturbed height.

    Scans an n x n grid of [-delta, delta] x [0, 2*pi) for points where
    both gradient components fall below thresholds scaled to the grid
    step, and returns the candidate (r, theta) pairs.
    """
    rs = np.linspace(-bump.delta, bump.delta, n)
    th = np.linspace(0.0, TWO_PI, n, endpoint=False)
    dr = 2.0 * bump.delta / (n - 1)
    dth = TWO_PI / n
    chi = np.asarray(bump.chi(rs), dtype=float)
    dchi = np.asarray(bump.dchi(rs), dtype=float)
    gr = 2.0 * rs[:, None] + dchi[:, None] * np.cos(th)[None, :]
    gt = -chi[:, None] * np.sin(th)[None, :]
    e2 = bump.epsilon ** 2
    mask = (np.abs(gr) < 2.0 * dr) & (np.abs(gt) < e2 * dth)
    ii, jj = np.nonzero(mask)
    return rs[ii], th[jj], dr, dth


def assert_grid_confirms_two_points(bump, n: int = 2001):
    """The grid oracle must find candidates near (0,0) and (0,pi) only."""
    rr, tt, dr, dth = grid_critical_candidates(bump, n)
    assert rr.size > 0, "grid oracle found no critical candidates"
    near_zero = np.minimum(tt, TWO_PI - tt) <= 2.0 * dth
    near_pi = np.abs(tt - math.pi) <= 2.0 * dth
    assert np.all(np.abs(rr) <= 2.0 * dr), "candidate with |r| away from 0"
    assert np.all(near_zero | near_pi), "candidate with theta away from {0, pi}"
    assert np.any(near_zero), "grid oracle missed the saddle at theta = 0"
    assert np.any(near_pi), "grid oracle missed the minimum at theta = pi"


# --- curve helpers ---------------------------------------------------------

def normal_form_curve(level: float = 2.0, domain=(-2.0, 2.0)):
    """Straight curve h = (t, level): the twist-surgery normal form."""
    return segment_curve(0.0, 1.0, level, 0.0, domain=domain)


def angle_residual(a: float, b: float) -> float:
    """Distance between two angles on the circle."""
    d = abs(a - b) % TWO_PI
    return min(d, TWO_PI - d)


@pytest.fixture
def rng():
    return np.random.default_rng(20260822)
