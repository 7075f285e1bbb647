"""Graph-manifold descriptions, representability, Euler and twist algebra."""

import json

import numpy as np
import pytest

from reebtk.errors import DimensionError, ValidationError
from reebtk.graphlink import (
    CriticalLinkDesc,
    D2Report,
    GraphManifoldDesc,
    H1Class,
    PlaneField,
    bott_integrable_overtwisted,
    check_d2_algebra,
    euler_from_critical_link,
    fixture_path,
    graph_link_representable,
    jsj_complex,
    lutz_twist_bookkeeping,
    rho_push,
)
from reebtk.zlinalg import IntMatrix, Multigraph, graph_first_betti, smith_normal_form

FIXTURES = ("cat_torus.json", "seifert_vertex.json", "cat_plus_s1s2.json")


def load(name: str) -> GraphManifoldDesc:
    return GraphManifoldDesc.load(fixture_path(name))


@pytest.fixture(scope="module")
def cat():
    return load("cat_torus.json")


@pytest.fixture(scope="module")
def seifert():
    return load("seifert_vertex.json")


@pytest.fixture(scope="module")
def cat_s1s2():
    return load("cat_plus_s1s2.json")


def random_desc_k0(rng):
    """Random k=0 description with a consistent collapse matrix.

    The collapse rows are integer combinations of a kernel basis of the
    relation matrix, so they annihilate every relation by construction;
    the summand graph is a single vertex with one loop per row.
    """
    ngens = int(rng.integers(1, 5))
    nrel = int(rng.integers(0, 4))
    rel = IntMatrix(rng.integers(-4, 5, size=(nrel, ngens)).tolist(), cols=ngens)
    if nrel == 0:
        kernel = [tuple(int(i == j) for j in range(ngens)) for i in range(ngens)]
    else:
        _, d, v = smith_normal_form(rel)
        diag = d.diagonal_entries()
        rank = sum(1 for x in diag if x != 0)
        cols = v.transpose().data  # rows of V^T are columns of V
        kernel = [cols[j] for j in range(rank, ngens)]
    n_rows = int(rng.integers(0, 3)) if kernel else 0
    rows = []
    for _ in range(n_rows):
        coeffs = rng.integers(-2, 3, size=len(kernel))
        rows.append(tuple(int(sum(c * k[j] for c, k in zip(coeffs, kernel)))
                          for j in range(ngens)))
    rho = IntMatrix(rows, cols=ngens)
    graph = Multigraph(1, tuple((0, 0) for _ in range(n_rows)))
    return GraphManifoldDesc(
        summand_graphs=(graph,), s1xs2_count=0, ngens=ngens,
        h1_relations=rel, rho_matrix=rho,
    )


class TestH1Class:
    def test_arithmetic(self):
        u = H1Class((1, 2), (3,))
        v = H1Class((0, -1), (2,))
        assert (u + v).coords() == (1, 1, 5)
        assert (u - v).coords() == (1, 3, 1)
        assert (-u).coords() == (-1, -2, -3)
        assert u.scale(3).coords() == (3, 6, 9)
        assert H1Class.zero(2, 1).is_zero()
        assert not u.is_zero()

    def test_mismatched_addition(self):
        with pytest.raises(DimensionError):
            H1Class((1,)) + H1Class((1, 2))

    def test_link_and_field_validation(self):
        with pytest.raises(ValidationError, match="elliptic"):
            CriticalLinkDesc((("spiral", H1Class((1,))),))
        with pytest.raises(ValidationError):
            CriticalLinkDesc((("elliptic", (1, 0)),))
        assert PlaneField(H1Class((0,))).d3_tag == 0


class TestFixtures:
    @pytest.mark.parametrize("name", FIXTURES)
    def test_round_trip(self, name):
        desc = load(name)
        again = GraphManifoldDesc.from_json(desc.to_json())
        assert again.to_json() == desc.to_json()
        assert again == desc

    @pytest.mark.parametrize("name", FIXTURES)
    def test_fixture_file_is_valid_json(self, name):
        with open(fixture_path(name)) as fh:
            obj = json.load(fh)
        assert GraphManifoldDesc.from_json(obj).to_json() == load(name).to_json()

    def test_cat_structure(self, cat):
        assert cat.ngens == 1 and cat.k == 0
        assert str(cat.homology) == "Z"
        assert cat.generator_names == ("c",)

    def test_seifert_structure(self, seifert):
        assert seifert.ngens == 2 and seifert.k == 0
        assert str(seifert.homology) == "Z + Z/3"
        assert seifert.rho_matrix.rows == 0

    def test_cat_s1s2_structure(self, cat_s1s2):
        assert cat_s1s2.k == 1
        assert str(cat_s1s2.homology) == "Z"

    def test_unknown_fixture(self):
        with pytest.raises(ValidationError):
            fixture_path("enoent.json")


class TestDescriptionValidation:
    def test_missing_fields_named(self):
        with pytest.raises(ValidationError, match="summands"):
            GraphManifoldDesc.from_json({"k": 0, "ngens": 1})
        with pytest.raises(ValidationError, match="'k'"):
            GraphManifoldDesc.from_json({"summands": [{"vertices": 1, "edges": []}], "ngens": 1})

    def test_relation_width_checked(self):
        with pytest.raises(DimensionError, match="columns"):
            GraphManifoldDesc.from_json({
                "summands": [{"vertices": 1, "edges": []}], "k": 0,
                "ngens": 2, "h1_relations": [[1, 2, 3]], "rho": [],
            })

    def test_rho_row_count_checked(self):
        with pytest.raises(DimensionError, match="rho"):
            GraphManifoldDesc.from_json({
                "summands": [{"vertices": 1, "edges": []}], "k": 0,
                "ngens": 1, "h1_relations": [], "rho": [[1]],
            })

    def test_rho_must_annihilate_relations(self):
        with pytest.raises(ValidationError, match="rho"):
            GraphManifoldDesc.from_json({
                "summands": [{"vertices": 1, "edges": [[0, 0]]}], "k": 0,
                "ngens": 2, "h1_relations": [[2, 0]], "rho": [[1, 0]],
            })

    def test_generator_names_length(self):
        with pytest.raises(ValidationError, match="generator_names"):
            GraphManifoldDesc.from_json({
                "summands": [{"vertices": 1, "edges": []}], "k": 0,
                "ngens": 2, "h1_relations": [], "rho": [],
                "generator_names": ["a"],
            })

    def test_malformed_file(self, tmp_path):
        p = tmp_path / "bad.json"
        p.write_text("{not json")
        with pytest.raises(ValidationError, match="malformed"):
            GraphManifoldDesc.load(p)


class TestJsjComplex:
    def test_single_loop_summand_is_itself(self, cat):
        g = jsj_complex(cat)
        assert g.vertex_count == 1
        assert tuple(g.edges) == ((0, 0),)
        assert graph_first_betti(g) == 1

    def test_two_trees_join_to_a_tree(self):
        tree = {"vertices": 3, "edges": [[0, 1], [1, 2]]}
        desc = GraphManifoldDesc.from_json({
            "summands": [tree, tree], "k": 0, "ngens": 1,
            "h1_relations": [], "rho": [],
        })
        g = jsj_complex(desc)
        assert g.vertex_count == 6
        assert len(g.edges) == 5
        assert g.component_count() == 1
        assert graph_first_betti(g) == 0

    def test_betti_adds_over_summands(self):
        one = {"vertices": 1, "edges": [[0, 0]]}
        two = {"vertices": 2, "edges": [[0, 1], [0, 1], [1, 1]]}
        desc = GraphManifoldDesc.from_json({
            "summands": [one, two], "k": 0, "ngens": 3,
            "h1_relations": [], "rho": [[1, 0, 0], [0, 1, 0], [0, 0, 1]],
        })
        g = jsj_complex(desc)
        assert g.vertex_count == 3
        assert len(g.edges) == 5
        assert graph_first_betti(g) == 3


class TestRhoPush:
    def test_zero_maps_to_zero(self, cat):
        assert rho_push(cat, (0,)) == (0,)

    def test_cat_identity(self, cat):
        assert rho_push(cat, (3,)) == (3,)
        assert rho_push(cat, (-2,)) == (-2,)

    def test_seifert_collapses_everything(self, seifert):
        assert rho_push(seifert, (4, 7)) == ()

    def test_dimension_checked(self, cat):
        with pytest.raises(DimensionError):
            rho_push(cat, (1, 2))


class TestRepresentability:
    def test_cat_torus_iff_trivial(self, cat):
        for c in range(-3, 4):
            assert graph_link_representable(cat, H1Class((c,))) == (c == 0)

    def test_seifert_everything_representable(self, seifert):
        for x in range(-3, 4):
            for y in range(-3, 4):
                assert graph_link_representable(seifert, H1Class((x, y)))

    def test_k1_hand_divisibility_table(self, cat_s1s2):
        for a in (0, 1, -1, 2, -2, 3):
            for b in (0, 1, 2, 3):
                expect = (a == 0) if b == 0 else (a % b == 0)
                got = graph_link_representable(cat_s1s2, H1Class((a,), (b,)))
                assert got == expect, (a, b)

    def test_spec_case_triple(self, cat_s1s2):
        u = lambda b: H1Class((3,), (b,))
        assert not graph_link_representable(cat_s1s2, u(2))
        assert graph_link_representable(cat_s1s2, u(3))
        assert graph_link_representable(cat_s1s2, u(1))

    def test_k0_reduces_to_kernel_membership(self, rng):
        for _ in range(100):
            desc = random_desc_k0(rng)
            for _ in range(5):
                a = tuple(int(x) for x in rng.integers(-6, 7, size=desc.ngens))
                u = H1Class(a)
                direct = all(
                    sum(r * x for r, x in zip(row, a)) == 0
                    for row in desc.rho_matrix.data
                )
                assert graph_link_representable(desc, u) == direct

    def test_dimension_mismatch(self, cat):
        with pytest.raises(DimensionError):
            graph_link_representable(cat, H1Class((1,), (2,)))


class TestCanonicalForm:
    def test_seifert_matches_residue_oracle(self, seifert):
        for x in range(-4, 5):
            for y in range(-4, 5):
                got = seifert.canonical(H1Class((x, y)))
                assert got.a == (x, y % 3)

    def test_idempotent_and_homomorphic(self, seifert, rng):
        for _ in range(1000):
            u = H1Class(tuple(int(x) for x in rng.integers(-30, 31, size=2)))
            v = H1Class(tuple(int(x) for x in rng.integers(-30, 31, size=2)))
            cu = seifert.canonical(u)
            assert seifert.canonical(cu) == cu
            lhs = seifert.canonical(u + v)
            rhs = seifert.canonical(seifert.canonical(u) + seifert.canonical(v))
            assert lhs == rhs

    def test_classes_equal(self, seifert):
        assert seifert.classes_equal(H1Class((0, 5)), H1Class((0, 2)))
        assert seifert.classes_equal(H1Class((1, -1)), H1Class((1, 2)))
        assert not seifert.classes_equal(H1Class((1, 0)), H1Class((0, 0)))

    def test_free_part_untouched(self, cat_s1s2):
        u = H1Class((7,), (5,))
        assert cat_s1s2.canonical(u) == u

    def test_class_from_coords(self, cat_s1s2):
        u = cat_s1s2.class_from_coords((2, 3))
        assert u.a == (2,) and u.b == (3,)
        with pytest.raises(DimensionError):
            cat_s1s2.class_from_coords((1, 2, 3))


class TestEulerFromLink:
    def test_elliptic_hyperbolic_cancellation(self, cat):
        c = H1Class((2,))
        link = CriticalLinkDesc((("elliptic", c), ("hyperbolic", c)))
        assert euler_from_critical_link(cat, link).is_zero()

    def test_empty_link(self, cat):
        assert euler_from_critical_link(cat, CriticalLinkDesc(())).is_zero()

    def test_two_elliptic_orbits_sum(self, seifert):
        link = CriticalLinkDesc((
            ("elliptic", H1Class((1, 2))),
            ("elliptic", H1Class((0, 2))),
        ))
        got = euler_from_critical_link(seifert, link)
        assert got == seifert.canonical(H1Class((1, 4)))
        assert got.a == (1, 1)

    def test_signs(self, cat):
        link = CriticalLinkDesc((
            ("elliptic", H1Class((3,))),
            ("hyperbolic", H1Class((1,))),
        ))
        assert euler_from_critical_link(cat, link) == H1Class((2,))


class TestBottVerdict:
    def test_cat_torus_trivial_euler_only(self, cat):
        assert bott_integrable_overtwisted(cat, PlaneField(H1Class((0,))))
        for c in (-2, -1, 1, 2):
            assert not bott_integrable_overtwisted(cat, PlaneField(H1Class((c,))))

    def test_seifert_always(self, seifert):
        for x in range(-2, 3):
            for y in range(-2, 3):
                assert bott_integrable_overtwisted(seifert, PlaneField(H1Class((x, y))))

    def test_d3_tag_never_matters(self, cat):
        for c in (0, 1):
            verdicts = {
                bott_integrable_overtwisted(cat, PlaneField(H1Class((c,)), d3_tag=tag))
                for tag in (-5, 0, 17)
            }
            assert len(verdicts) == 1

    def test_verdict_depends_only_on_canonical_form(self, seifert):
        # (0, 3) is homologous to 0, so the verdict must match the zero class
        a = bott_integrable_overtwisted(seifert, PlaneField(H1Class((0, 3))))
        b = bott_integrable_overtwisted(seifert, PlaneField(H1Class((0, 0))))
        assert a == b


class TestD2Algebra:
    def test_zero_zero_implies_zero(self, cat):
        z = H1Class((0,))
        report = check_d2_algebra(cat, z, z, z, z, z)
        assert report.additivity_holds and report.doubling_holds and report.all_hold

    def test_additivity_detects_mismatch(self, cat):
        z = H1Class((0,))
        bad = check_d2_algebra(cat, z, z, H1Class((1,)), z, z)
        assert not bad.additivity_holds
        assert not bad.all_hold

    def test_equal_euler_classes_force_doubled_difference_to_die(self, seifert):
        # with e1 = e2 doubling demands 2 d12 ~ 0
        e = H1Class((1, 1))
        z = H1Class((0, 0))
        ok = check_d2_algebra(seifert, H1Class((0, 3)), z, H1Class((0, 3)), e, e)
        assert ok.additivity_holds and ok.doubling_holds
        bad = check_d2_algebra(seifert, H1Class((0, 1)), z, H1Class((0, 1)), e, e)
        assert bad.additivity_holds
        assert not bad.doubling_holds
        assert not bad.all_hold
        assert not D2Report(True, False).all_hold

    def test_random_consistent_tuples(self, seifert, rng):
        for _ in range(200):
            d12 = H1Class(tuple(int(x) for x in rng.integers(-9, 10, size=2)))
            d23 = H1Class(tuple(int(x) for x in rng.integers(-9, 10, size=2)))
            e2 = H1Class(tuple(int(x) for x in rng.integers(-9, 10, size=2)))
            d13 = d12 + d23
            e1 = e2 + d12.scale(2)
            report = check_d2_algebra(seifert, d12, d23, d13, e1, e2)
            assert report.all_hold
            # antisymmetry: the reverse difference class is the negative
            assert seifert.classes_equal(-d12, d12.scale(-1))

    def test_antisymmetry_in_canonical_form(self, seifert):
        d12 = H1Class((2, 5))
        d21 = -d12
        assert seifert.canonical(d12 + d21).is_zero()


class TestLutzBookkeeping:
    def test_twist_along_own_obstruction_clears_it(self, seifert):
        d = H1Class((1, 2))
        assert lutz_twist_bookkeeping(seifert, d, d).is_zero()

    def test_trivial_twist_fixes_class(self, seifert):
        d = H1Class((1, 2))
        out = lutz_twist_bookkeeping(seifert, d, H1Class((0, 0)))
        assert out == seifert.canonical(d)

    def test_twist_then_untwist_round_trips(self, seifert):
        d = H1Class((1, 1))
        k = H1Class((0, 2))
        once = lutz_twist_bookkeeping(seifert, d, k)
        back = lutz_twist_bookkeeping(seifert, once, -k)
        assert back == seifert.canonical(d)

    def test_torsion_twist(self, seifert):
        # a class of order 3: twisting three times along it returns the start
        k = H1Class((0, 1))
        d = H1Class((1, 0))
        out = d
        for _ in range(3):
            out = lutz_twist_bookkeeping(seifert, out, k)
        assert out == seifert.canonical(d)


class TestSoundnessOverFixtureCorpus:
    """Critical links assembled from the shipped descriptions must produce
    Euler classes that are themselves representable by graph links."""

    def test_cat_alpha_family_links(self, cat):
        # the family's critical orbits come in elliptic-hyperbolic pairs in
        # the fibre class, which dies in H_1 of the bundle
        for pairs in (1, 2, 3):
            comps = []
            for _ in range(pairs):
                comps.append(("elliptic", H1Class((0,))))
                comps.append(("hyperbolic", H1Class((0,))))
            e = euler_from_critical_link(cat, CriticalLinkDesc(tuple(comps)))
            assert graph_link_representable(cat, e)

    def test_seifert_fibre_links(self, seifert):
        links = [
            CriticalLinkDesc((("elliptic", H1Class((0, 1))),)),
            CriticalLinkDesc((("elliptic", H1Class((0, 1))), ("hyperbolic", H1Class((0, 2))))),
            CriticalLinkDesc((("elliptic", H1Class((1, 0))), ("elliptic", H1Class((2, 1))))),
        ]
        for link in links:
            e = euler_from_critical_link(seifert, link)
            assert graph_link_representable(seifert, e)

    def test_cat_s1s2_free_class_links(self, cat_s1s2):
        for b in (0, 1, 2):
            link = CriticalLinkDesc((("elliptic", H1Class((0,), (b,))),))
            e = euler_from_critical_link(cat_s1s2, link)
            assert graph_link_representable(cat_s1s2, e)
