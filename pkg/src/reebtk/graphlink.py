"""Graph-manifold descriptions and the graph-link representability test.

A description packages the JSJ complexes of the irreducible summands,
a count k of extra S^1 x S^2 summands, a presentation of the first
homology of the irreducible part N, and the integer matrix of the
collapse map rho from H_1(N) to the cycle space of the JSJ complex.
First homology of the whole manifold splits as H_1(N) + Z^k, and
classes are handled as coordinate pairs (a, b) for that splitting.

The central decision: a class (a, b) is representable by a graph link
precisely when every coordinate of rho . a is divisible by the content
gcd of b, where content 0 (the k = 0 case or b = 0) demands rho . a = 0
outright.  An overtwisted contact structure on the described manifold
admits a Bott-integrable Reeb flow exactly when the Poincare dual of
its Euler class passes this test.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from importlib import resources

from .errors import DimensionError, ValidationError
from .zlinalg import (
    HomologyGroup,
    IntMatrix,
    Multigraph,
    content,
    divisible_by,
    graph_first_betti,
    homology_from_presentation,
    smith_normal_form,
    unimodular_inverse,
)


@dataclass(frozen=True)
class H1Class:
    """Homology class as coordinates (a, b) for the splitting H_1(N) + Z^k."""

    a: tuple[int, ...]
    b: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(int(x) for x in self.a))
        object.__setattr__(self, "b", tuple(int(x) for x in self.b))

    @classmethod
    def zero(cls, ngens: int, k: int) -> "H1Class":
        return cls((0,) * ngens, (0,) * k)

    def __add__(self, other: "H1Class") -> "H1Class":
        if len(self.a) != len(other.a) or len(self.b) != len(other.b):
            raise DimensionError("class coordinates have mismatched lengths")
        return H1Class(tuple(x + y for x, y in zip(self.a, other.a)),
                       tuple(x + y for x, y in zip(self.b, other.b)))

    def __neg__(self) -> "H1Class":
        return H1Class(tuple(-x for x in self.a), tuple(-x for x in self.b))

    def __sub__(self, other: "H1Class") -> "H1Class":
        return self + (-other)

    def scale(self, c: int) -> "H1Class":
        c = int(c)
        return H1Class(tuple(c * x for x in self.a), tuple(c * x for x in self.b))

    def coords(self) -> tuple[int, ...]:
        return self.a + self.b

    def is_zero(self) -> bool:
        return all(x == 0 for x in self.coords())


@dataclass(frozen=True)
class PlaneField:
    """Homotopy data of a cooriented plane field: Euler-class dual plus an
    opaque label for the 3-dimensional invariant (never computed with)."""

    euler_pd: H1Class
    d3_tag: int = 0


@dataclass(frozen=True)
class CriticalLinkDesc:
    """Critical periodic-orbit link: (orbit_type, class) per component."""

    components: tuple[tuple[str, H1Class], ...]

    def __post_init__(self):
        comps = tuple((str(t), c) for t, c in self.components)
        object.__setattr__(self, "components", comps)
        for t, c in comps:
            if t not in ("elliptic", "hyperbolic"):
                raise ValidationError(f"orbit type must be elliptic or hyperbolic, got {t!r}")
            if not isinstance(c, H1Class):
                raise ValidationError("link component class must be an H1Class")


@dataclass(frozen=True)
class GraphManifoldDesc:
    """Validated description of a closed graph manifold N # k(S^1 x S^2)."""

    summand_graphs: tuple[Multigraph, ...]
    s1xs2_count: int
    ngens: int
    h1_relations: IntMatrix
    rho_matrix: IntMatrix
    generator_names: tuple[str, ...] = field(default=())

    def __post_init__(self):
        if not self.summand_graphs:
            raise ValidationError("description needs at least one summand graph")
        if self.s1xs2_count < 0:
            raise ValidationError("field 'k' must be nonnegative")
        if self.ngens < 0:
            raise ValidationError("field 'ngens' must be nonnegative")
        if self.h1_relations.rows and self.h1_relations.cols != self.ngens:
            raise DimensionError(
                f"field 'h1_relations' has {self.h1_relations.cols} columns, expected ngens = {self.ngens}"
            )
        cycles = sum(graph_first_betti(g) for g in self.summand_graphs)
        if self.rho_matrix.rows != cycles:
            raise DimensionError(
                f"field 'rho' has {self.rho_matrix.rows} rows, expected total cycle rank {cycles}"
            )
        if self.rho_matrix.rows and self.rho_matrix.cols != self.ngens:
            raise DimensionError(
                f"field 'rho' has {self.rho_matrix.cols} columns, expected ngens = {self.ngens}"
            )
        names = self.generator_names or tuple(f"g{i}" for i in range(self.ngens))
        if len(names) != self.ngens:
            raise ValidationError("field 'generator_names' length must equal ngens")
        object.__setattr__(self, "generator_names", tuple(str(s) for s in names))
        # the collapse map must vanish on every relation, else it does
        # not descend to the homology quotient
        if self.rho_matrix.rows:
            for r in self.h1_relations.data:
                if any(x != 0 for x in self.rho_matrix.mulvec(r)):
                    raise ValidationError(
                        "field 'rho' does not annihilate an 'h1_relations' row"
                    )

    @property
    def k(self) -> int:
        return self.s1xs2_count

    @cached_property
    def homology(self) -> HomologyGroup:
        """H_1 of the irreducible part N (the Z^k split off separately)."""
        return homology_from_presentation(self.h1_relations, self.ngens)

    @cached_property
    def _canonical_basis(self):
        """(T, T_inv, moduli) of the reduction basis.

        In the transformed coordinates z = T . a the relation subgroup
        is diagonal: modulus 0 marks a free coordinate, 1 a killed one,
        d >= 2 a residue mod d.  T_inv carries the reduced vector back
        to generator coordinates; computed once from the Smith form of
        the relations and fixed thereafter.
        """
        if self.h1_relations.rows == 0:
            ident = IntMatrix.identity(self.ngens)
            return ident, ident, (0,) * self.ngens
        _, d, v = smith_normal_form(self.h1_relations)
        diag = d.diagonal_entries()
        moduli = tuple(
            (diag[j] if j < len(diag) else 0) for j in range(self.ngens)
        )
        t = v.transpose()
        return t, unimodular_inverse(t), moduli

    def check_class(self, u: H1Class) -> H1Class:
        if len(u.a) != self.ngens:
            raise DimensionError(
                f"class has {len(u.a)} N-coordinates, expected ngens = {self.ngens}"
            )
        if len(u.b) != self.s1xs2_count:
            raise DimensionError(
                f"class has {len(u.b)} free coordinates, expected k = {self.s1xs2_count}"
            )
        return u

    def class_from_coords(self, coords) -> H1Class:
        coords = tuple(int(x) for x in coords)
        if len(coords) != self.ngens + self.s1xs2_count:
            raise DimensionError(
                f"class vector length {len(coords)} != ngens + k = {self.ngens + self.s1xs2_count}"
            )
        return H1Class(coords[: self.ngens], coords[self.ngens:])

    def canonical(self, u: H1Class) -> H1Class:
        """Canonical representative of a class in generator coordinates.

        The a-part is reduced against the moduli in the diagonalizing
        basis and mapped back, so the result is an ordinary class vector
        and the map is idempotent; the free b-part passes through.  Two
        classes are equal in homology exactly when their canonical
        representatives coincide."""
        self.check_class(u)
        t, t_inv, moduli = self._canonical_basis
        z = list(t.mulvec(u.a))
        for j, m in enumerate(moduli):
            if m == 1:
                z[j] = 0
            elif m >= 2:
                z[j] %= m
        return H1Class(t_inv.mulvec(z), u.b)

    def classes_equal(self, u: H1Class, v: H1Class) -> bool:
        return self.canonical(u) == self.canonical(v)

    def to_json(self) -> dict:
        return {
            "summands": [g.to_json() for g in self.summand_graphs],
            "k": self.s1xs2_count,
            "h1_relations": self.h1_relations.to_json(),
            "ngens": self.ngens,
            "rho": self.rho_matrix.to_json(),
            "generator_names": list(self.generator_names),
        }

    @classmethod
    def from_json(cls, obj) -> "GraphManifoldDesc":
        if not isinstance(obj, dict):
            raise ValidationError("description JSON must be an object")
        for key in ("summands", "k", "ngens"):
            if key not in obj:
                raise ValidationError(f"description JSON missing field {key!r}")
        summands = obj["summands"]
        if not isinstance(summands, list) or not summands:
            raise ValidationError("field 'summands' must be a nonempty array")
        graphs = tuple(Multigraph.from_json(g) for g in summands)
        ngens = int(obj["ngens"])
        rel = IntMatrix.from_json(obj.get("h1_relations", []), cols=ngens)
        rho = IntMatrix.from_json(obj.get("rho", []), cols=ngens)
        names = tuple(obj.get("generator_names", ()))
        return cls(summand_graphs=graphs, s1xs2_count=int(obj["k"]), ngens=ngens,
                   h1_relations=rel, rho_matrix=rho, generator_names=names)

    @classmethod
    def load(cls, path) -> "GraphManifoldDesc":
        with open(path) as fh:
            try:
                obj = json.load(fh)
            except json.JSONDecodeError as exc:
                raise ValidationError(f"malformed description JSON: {exc}") from exc
        return cls.from_json(obj)


def fixture_path(name: str):
    """Path of a packaged description fixture (e.g. "cat_torus.json")."""
    p = resources.files("reebtk").joinpath("fixtures", name)
    if not p.is_file():
        raise ValidationError(f"no packaged fixture named {name!r}")
    return p


def jsj_complex(desc: GraphManifoldDesc) -> Multigraph:
    """Single JSJ complex: disjoint union of the summand graphs joined by
    one edge per consecutive pair (lowest-index vertices), so connecting
    edges add no cycles and the first Betti number is the sum."""
    offsets = []
    total = 0
    for g in desc.summand_graphs:
        offsets.append(total)
        total += g.vertex_count
    edges = []
    for off, g in zip(offsets, desc.summand_graphs):
        edges.extend((a + off, b + off) for a, b in g.edges)
    for i in range(len(desc.summand_graphs) - 1):
        edges.append((offsets[i], offsets[i + 1]))
    return Multigraph(total, tuple(edges))


def rho_push(desc: GraphManifoldDesc, a) -> tuple[int, ...]:
    """Image of an H_1(N) coordinate vector in the cycle space of the
    JSJ complex (the collapse map on homology)."""
    a = tuple(int(x) for x in a)
    if len(a) != desc.ngens:
        raise DimensionError(
            f"vector length {len(a)} != ngens = {desc.ngens}"
        )
    if desc.rho_matrix.rows == 0:
        return ()
    return desc.rho_matrix.mulvec(a)


def graph_link_representable(desc: GraphManifoldDesc, u: H1Class) -> bool:
    """Whether the class (a, b) is the class of some graph link.

    True exactly when rho . a is divisible (coordinatewise) by the
    content gcd of b; content 0 demands rho . a = 0, which covers both
    k = 0 and b = 0.
    """
    desc.check_class(u)
    return divisible_by(rho_push(desc, u.a), content(u.b))


def bott_integrable_overtwisted(desc: GraphManifoldDesc, xi: PlaneField) -> bool:
    """Verdict for an overtwisted structure on the described manifold:
    Bott integrable exactly when its Euler-class dual is representable
    by a graph link.  The d3 label never enters."""
    return graph_link_representable(desc, xi.euler_pd)


def euler_from_critical_link(desc: GraphManifoldDesc, link: CriticalLinkDesc) -> H1Class:
    """Euler-class dual of the structure with the given critical link:
    elliptic components count +1, hyperbolic -1, summed and reduced to
    canonical form."""
    total = H1Class.zero(desc.ngens, desc.s1xs2_count)
    for orbit_type, c in link.components:
        desc.check_class(c)
        total = total + (c if orbit_type == "elliptic" else -c)
    return desc.canonical(total)


@dataclass(frozen=True)
class D2Report:
    additivity_holds: bool
    doubling_holds: bool

    @property
    def all_hold(self) -> bool:
        return self.additivity_holds and self.doubling_holds


def check_d2_algebra(desc: GraphManifoldDesc, d12: H1Class, d23: H1Class,
                     d13: H1Class, e1: H1Class, e2: H1Class) -> D2Report:
    """Verify the two-dimensional obstruction identities in canonical form:
    additivity d12 + d23 = d13 and doubling 2 d12 = e1 - e2."""
    for u in (d12, d23, d13, e1, e2):
        desc.check_class(u)
    additivity = desc.classes_equal(d12 + d23, d13)
    doubling = desc.classes_equal(d12.scale(2), e1 - e2)
    return D2Report(additivity_holds=additivity, doubling_holds=doubling)


def lutz_twist_bookkeeping(desc: GraphManifoldDesc, d_xi_eta: H1Class,
                           K: H1Class) -> H1Class:
    """Obstruction class after a full twist along a transverse knot in
    class K: the twist contributes -K, composed with the existing
    difference class by additivity; returned in canonical form."""
    desc.check_class(d_xi_eta)
    desc.check_class(K)
    return desc.canonical(d_xi_eta - K)
