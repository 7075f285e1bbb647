"""Exact integer linear algebra: Smith normal form, finitely presented
abelian groups, and first Betti numbers of multigraphs.

Everything here runs on arbitrary-precision Python integers; no floats
enter any code path.  Matrices are immutable after construction.

The Smith normal form follows the classical elimination scheme: select
the minimal-magnitude nonzero pivot (lowest row-major index on ties),
clear its row and column with floor-division steps, and enforce the
divisibility chain by folding non-divisible entries into the pivot row.
Both transform matrices are accumulated and the factorization
``D = U @ M @ V`` is re-verified exactly before returning.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import DimensionError, ValidationError

_JSON_INT_LIMIT = 1 << 53


def _int_to_json(x: int):
    # JSON numbers are only faithful up to 53 bits; ship big entries as strings
    return x if -_JSON_INT_LIMIT < x < _JSON_INT_LIMIT else str(x)


def _int_from_json(x) -> int:
    if isinstance(x, bool) or not isinstance(x, (int, str)):
        raise ValidationError(f"expected integer entry, got {x!r}")
    return int(x)


class IntMatrix:
    """Dense integer matrix with exact arithmetic.

    Rows are stored as tuples; instances are immutable.  Supports the
    handful of operations the toolkit needs: multiplication, transpose,
    exact determinant, and JSON round-tripping.
    """

    __slots__ = ("rows", "cols", "data")

    def __init__(self, data: Iterable[Iterable[int]], cols: int | None = None):
        rows = tuple(tuple(int(x) for x in row) for row in data)
        if rows:
            width = len(rows[0])
            if any(len(r) != width for r in rows):
                raise DimensionError("ragged rows in integer matrix")
            if cols is not None and cols != width:
                raise DimensionError(f"expected {cols} columns, found {width}")
        else:
            if cols is None:
                cols = 0
            width = cols
        object.__setattr__(self, "rows", len(rows))
        object.__setattr__(self, "cols", width)
        object.__setattr__(self, "data", rows)

    def __setattr__(self, name, value):
        raise AttributeError("IntMatrix is immutable")

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls([[0] * cols for _ in range(rows)], cols=cols)

    @classmethod
    def diagonal(cls, entries: Sequence[int]) -> "IntMatrix":
        n = len(entries)
        return cls([[entries[i] if i == j else 0 for j in range(n)] for i in range(n)])

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def row(self, i: int) -> tuple[int, ...]:
        return self.data[i]

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.data[i][j]

    def __eq__(self, other) -> bool:
        return isinstance(other, IntMatrix) and self.data == other.data and self.cols == other.cols

    def __hash__(self):
        return hash((self.cols, self.data))

    def __repr__(self):
        return f"IntMatrix({[list(r) for r in self.data]!r})"

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
        ot = other.transpose().data
        return IntMatrix(
            [[sum(a * b for a, b in zip(row, col)) for col in ot] for row in self.data],
            cols=other.cols,
        )

    def mulvec(self, v: Sequence[int]) -> tuple[int, ...]:
        if len(v) != self.cols:
            raise DimensionError(f"vector length {len(v)} != {self.cols} columns")
        return tuple(sum(a * b for a, b in zip(row, v)) for row in self.data)

    def transpose(self) -> "IntMatrix":
        return IntMatrix(
            [[self.data[i][j] for i in range(self.rows)] for j in range(self.cols)],
            cols=self.rows,
        )

    def diagonal_entries(self) -> tuple[int, ...]:
        return tuple(self.data[i][i] for i in range(min(self.rows, self.cols)))

    def is_diagonal(self) -> bool:
        return all(
            self.data[i][j] == 0
            for i in range(self.rows)
            for j in range(self.cols)
            if i != j
        )

    def determinant(self) -> int:
        """Exact determinant by fraction-free (Bareiss) elimination."""
        if self.rows != self.cols:
            raise DimensionError("determinant requires a square matrix")
        n = self.rows
        if n == 0:
            return 1
        a = [list(r) for r in self.data]
        sign = 1
        prev = 1
        for k in range(n - 1):
            if a[k][k] == 0:
                for i in range(k + 1, n):
                    if a[i][k] != 0:
                        a[k], a[i] = a[i], a[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    # exact division is guaranteed by the Bareiss identity
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
                a[i][k] = 0
            prev = a[k][k]
        return sign * a[n - 1][n - 1]

    def is_unimodular(self) -> bool:
        return self.rows == self.cols and abs(self.determinant()) == 1

    def to_json(self) -> list:
        return [[_int_to_json(x) for x in row] for row in self.data]

    @classmethod
    def from_json(cls, obj, cols: int | None = None) -> "IntMatrix":
        if not isinstance(obj, list) or any(not isinstance(r, list) for r in obj):
            raise ValidationError("matrix JSON must be an array of arrays")
        return cls([[_int_from_json(x) for x in row] for row in obj], cols=cols)


@dataclass(frozen=True)
class HomologyGroup:
    """Finitely generated abelian group: free rank plus invariant factors.

    ``torsion`` lists the invariant factors >= 2 in divisibility order.
    """

    free_rank: int
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        if self.free_rank < 0:
            raise ValidationError("free rank must be nonnegative")
        object.__setattr__(self, "torsion", tuple(int(d) for d in self.torsion))
        for d in self.torsion:
            if d < 2:
                raise ValidationError("torsion coefficients must be >= 2")
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a != 0:
                raise ValidationError("torsion coefficients must form a divisibility chain")

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def __str__(self):
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        parts.extend(f"Z/{d}" for d in self.torsion)
        return " + ".join(parts) if parts else "0"


@dataclass(frozen=True)
class Multigraph:
    """Undirected multigraph; loops and parallel edges allowed."""

    vertex_count: int
    edges: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        if self.vertex_count < 0:
            raise ValidationError("vertex count must be nonnegative")
        edges = tuple((int(a), int(b)) for a, b in self.edges)
        object.__setattr__(self, "edges", edges)
        for a, b in edges:
            if not (0 <= a < self.vertex_count and 0 <= b < self.vertex_count):
                raise ValidationError(f"edge ({a}, {b}) has endpoint outside 0..{self.vertex_count - 1}")

    def component_count(self) -> int:
        parent = list(range(self.vertex_count))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for a, b in self.edges:
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[ra] = rb
        return len({find(v) for v in range(self.vertex_count)})

    def to_json(self) -> dict:
        return {"vertices": self.vertex_count, "edges": [list(e) for e in self.edges]}

    @classmethod
    def from_json(cls, obj) -> "Multigraph":
        if not isinstance(obj, dict) or "vertices" not in obj or "edges" not in obj:
            raise ValidationError("graph JSON must have 'vertices' and 'edges'")
        edges = obj["edges"]
        if not isinstance(edges, list) or any(
            not isinstance(e, list) or len(e) != 2 for e in edges
        ):
            raise ValidationError("graph edges must be an array of [a, b] pairs")
        return cls(int(obj["vertices"]), tuple((int(a), int(b)) for a, b in edges))


def graph_first_betti(g: Multigraph) -> int:
    """First Betti number E - V + C of a multigraph.

    Loops and parallel edges each contribute an independent cycle.
    """
    return len(g.edges) - g.vertex_count + g.component_count()


def content(v: Sequence[int]) -> int:
    """gcd of the entries; 0 for the zero (or empty) vector."""
    return math.gcd(*(abs(int(x)) for x in v)) if v else 0


def divisible_by(v: Sequence[int], m: int) -> bool:
    """Whether every entry of v is divisible by m.

    ``m = 0`` demands v be the zero vector, matching the convention
    content(0) = 0.
    """
    if m < 0:
        raise ValidationError("modulus must be nonnegative")
    if m == 0:
        return all(int(x) == 0 for x in v)
    return all(int(x) % m == 0 for x in v)


def _min_pivot(a: list[list[int]], k: int, m: int, n: int) -> tuple[int, int] | None:
    best = None
    where = None
    for i in range(k, m):
        for j in range(k, n):
            x = a[i][j]
            if x != 0 and (best is None or abs(x) < best):
                best = abs(x)
                where = (i, j)
                # |pivot| = 1 cannot be improved; lowest index already wins
                if best == 1:
                    return where
    return where


def smith_normal_form(mat: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Smith normal form: returns (U, D, V) with D = U @ mat @ V.

    U and V are unimodular, D is diagonal with nonnegative entries
    satisfying the divisibility chain d1 | d2 | ... .  All three
    identities are re-verified exactly before returning.
    """
    m, n = mat.rows, mat.cols
    a = [list(r) for r in mat.data]
    u = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
    v = [[1 if i == j else 0 for j in range(n)] for i in range(n)]

    def row_swap(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def col_swap(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def row_addmul(dst, src, q):
        # row_dst -= q * row_src
        ad, asrc = a[dst], a[src]
        for j in range(n):
            ad[j] -= q * asrc[j]
        ud, usrc = u[dst], u[src]
        for j in range(m):
            ud[j] -= q * usrc[j]

    def col_addmul(dst, src, q):
        # col_dst -= q * col_src
        for row in a:
            row[dst] -= q * row[src]
        for row in v:
            row[dst] -= q * row[src]

    def row_negate(i):
        a[i] = [-x for x in a[i]]
        u[i] = [-x for x in u[i]]

    k = 0
    limit = min(m, n)
    while k < limit:
        where = _min_pivot(a, k, m, n)
        if where is None:
            break
        i, j = where
        if i != k:
            row_swap(k, i)
        if j != k:
            col_swap(k, j)
        if a[k][k] < 0:
            row_negate(k)

        # clear row and column k; each pass strictly shrinks the pivot
        # until everything reduces, so this loop terminates
        dirty = True
        while dirty:
            dirty = False
            p = a[k][k]
            for i in range(k + 1, m):
                if a[i][k] != 0:
                    q = a[i][k] // p
                    if q:
                        row_addmul(i, k, q)
                    if a[i][k] != 0:
                        dirty = True
            for j in range(k + 1, n):
                if a[k][j] != 0:
                    q = a[k][j] // p
                    if q:
                        col_addmul(j, k, q)
                    if a[k][j] != 0:
                        dirty = True
            if dirty:
                where = _min_pivot(a, k, m, n)
                i, j = where
                if i != k:
                    row_swap(k, i)
                if j != k:
                    col_swap(k, j)
                if a[k][k] < 0:
                    row_negate(k)
                continue

            # pivot must divide the remaining block for the chain to hold
            stop = False
            for i in range(k + 1, m):
                for j in range(k + 1, n):
                    if a[i][j] % p != 0:
                        row_addmul(k, i, -1)  # fold row i into row k
                        dirty = True
                        stop = True
                        break
                if stop:
                    break
        k += 1

    U = IntMatrix(u, cols=m)
    V = IntMatrix(v, cols=n)
    D = IntMatrix(a, cols=n)

    # exact self-check: factorization, unimodularity, diagonal chain
    if U @ mat @ V != D:
        raise AssertionError("smith_normal_form: U @ M @ V != D")
    if not U.is_unimodular() or not V.is_unimodular():
        raise AssertionError("smith_normal_form: transform matrix not unimodular")
    if not D.is_diagonal():
        raise AssertionError("smith_normal_form: D not diagonal")
    diag = D.diagonal_entries()
    for x in diag:
        if x < 0:
            raise AssertionError("smith_normal_form: negative invariant factor")
    for x, y in zip(diag, diag[1:]):
        if x == 0 and y != 0:
            raise AssertionError("smith_normal_form: zero before nonzero on diagonal")
        if x != 0 and y % x != 0:
            raise AssertionError("smith_normal_form: divisibility chain broken")
    return U, D, V


def invariant_factors(mat: IntMatrix) -> tuple[int, ...]:
    """Nonzero diagonal of the Smith form, in chain order."""
    _, d, _ = smith_normal_form(mat)
    return tuple(x for x in d.diagonal_entries() if x != 0)


def unimodular_inverse(mat: IntMatrix) -> IntMatrix:
    """Exact integer inverse of a unimodular square matrix.

    From U M V = I the inverse is V U; the Smith form of a unimodular
    matrix is the identity, anything else is rejected.
    """
    if mat.rows != mat.cols:
        raise DimensionError("inverse requires a square matrix")
    u, d, v = smith_normal_form(mat)
    if d != IntMatrix.identity(mat.rows):
        raise ValidationError("matrix is not unimodular; no integer inverse")
    return v @ u


def homology_from_presentation(relations: IntMatrix, ngens: int) -> HomologyGroup:
    """Cokernel of a relation matrix acting on Z^ngens.

    Rows of ``relations`` are relation vectors over the generators.
    """
    if ngens < 0:
        raise DimensionError("generator count must be nonnegative")
    if relations.rows and relations.cols != ngens:
        raise DimensionError(
            f"relation matrix has {relations.cols} columns for {ngens} generators"
        )
    if relations.rows == 0:
        return HomologyGroup(free_rank=ngens)
    _, d, _ = smith_normal_form(relations)
    diag = d.diagonal_entries()
    rank = sum(1 for x in diag if x != 0)
    torsion = tuple(x for x in diag if x > 1)
    return HomologyGroup(free_rank=ngens - rank, torsion=torsion)
