import random
from math import comb

import pytest

from diffeokit.catalog import ambient_inclusion, build_catalog_space
from diffeokit.linalg import RatMat
from diffeokit.tangent import (
    VectDiagram,
    apply_fibre_functor,
    pushforward_map,
    rho_map,
    vect_colimit,
    vect_limit,
)
from diffeokit.presentation import PresentedMap
from util_rand import rand_diagram, rand_matrix


def space(name, **params):
    return build_catalog_space(name, params or None).presentation


class TestFibreFunctor:
    def test_wedge_tangent_diagram(self):
        d = apply_fibre_functor(space("wedge_lines", m=2), 1)
        assert d.objects == [0, 1, 1]
        assert [(s, t) for s, t, _ in d.arrows] == [(0, 1), (0, 2)]
        assert all(m.rows == 1 and m.cols == 0 for _, _, m in d.arrows)

    def test_wedge_degree_two_collapses(self):
        d = apply_fibre_functor(space("wedge_lines", m=2), 2)
        assert d.objects == [0, 0, 0]

    def test_z2_degree_two_is_trivial_action(self):
        d = apply_fibre_functor(space("z2_quotient"), 2)
        assert d.objects == [1]
        assert all(m == RatMat.from_rows([[1]]) for _, _, m in d.arrows)

    def test_invalid_presentation_rejected(self):
        from diffeokit.presentation import Arrow, GermPresentation
        from diffeokit.symcalc import PolyMap

        bad = GermPresentation(
            "bad", [("a", 1)], [Arrow("f", "a", "a", PolyMap.identity(2))]
        )
        with pytest.raises(ValueError):
            apply_fibre_functor(bad, 1)


class TestColimit:
    def test_single_object_is_its_own_colimit(self):
        d = VectDiagram([3], [])
        colim = vect_colimit(d)
        assert colim.dim == 3
        assert colim.cocones[0] == RatMat.identity(3)

    def test_z2_tangent_space_collapses(self):
        colim = vect_colimit(apply_fibre_functor(space("z2_quotient"), 1))
        assert colim.dim == 0

    def test_wedge_tangent_space_is_a_plane(self):
        colim = vect_colimit(apply_fibre_functor(space("wedge_lines", m=2), 1))
        assert colim.dim == 2

    def test_cocone_compatibility_random(self):
        rng = random.Random(71)
        for _ in range(60):
            d = rand_diagram(rng)
            colim = vect_colimit(d)
            for src, dst, mat in d.arrows:
                assert colim.cocones[dst] @ mat == colim.cocones[src]

    def test_cocones_jointly_surjective(self):
        rng = random.Random(73)
        for _ in range(40):
            colim = vect_colimit(rand_diagram(rng))
            stacked = RatMat.hstack(colim.cocones, rows=colim.dim)
            assert stacked.rank() == colim.dim

    def test_universal_property(self):
        # every compatible cocone factors uniquely, with zero residual
        rng = random.Random(79)
        for _ in range(60):
            d = rand_diagram(rng)
            colim = vect_colimit(d)
            t = rng.randint(0, 3)
            b = rand_matrix(rng, t, colim.dim)
            cocone = [b @ c for c in colim.cocones]
            assembled = RatMat.hstack(cocone, rows=t)
            assert (assembled @ colim.relations.relation_basis).is_zero()
            factored = assembled @ colim.section
            for original, image in zip(colim.cocones, cocone):
                assert factored @ original == image
            assert factored == b  # uniqueness via joint surjectivity

    def test_invariance_under_adding_composites_and_identities(self):
        rng = random.Random(83)
        for _ in range(60):
            d = rand_diagram(rng)
            base = vect_colimit(d)
            arrows = list(d.arrows)
            composable = [
                (a, b) for a in d.arrows for b in d.arrows if a[1] == b[0]
            ]
            for (i, _, first), (_, l, second) in composable[:3]:
                arrows.append((i, l, second @ first))
            for idx, dim in enumerate(d.objects):
                arrows.append((idx, idx, RatMat.identity(dim)))
            enriched = vect_colimit(VectDiagram(list(d.objects), arrows))
            assert enriched.dim == base.dim
            assert enriched.cocones == base.cocones
            assert enriched.relations.projection == base.relations.projection


class TestLimit:
    def test_single_object(self):
        lim = vect_limit(VectDiagram([4], []))
        assert lim.dim == 4

    def test_two_objects_no_arrows_is_a_product(self):
        lim = vect_limit(VectDiagram([1, 1], []))
        assert lim.dim == 2

    def test_equalizer_of_identity_and_negation(self):
        arrows = [
            (0, 0, RatMat.identity(2)),
            (0, 0, RatMat.identity(2).scale(-1)),
        ]
        lim = vect_limit(VectDiagram([2], arrows))
        assert lim.dim == 0

    def test_cone_compatibility_random(self):
        rng = random.Random(89)
        for _ in range(40):
            d = rand_diagram(rng)
            lim = vect_limit(d)
            for src, dst, mat in d.arrows:
                assert mat @ lim.cones[src] == lim.cones[dst]


class TestRho:
    def test_plane_degree_two_is_iso(self):
        r = rho_map(space("euclidean", n=2), 2)
        assert r == RatMat.from_rows([[1]])
        assert r.is_invertible()

    def test_wedge_degree_two_not_surjective(self):
        r = rho_map(space("wedge_lines", m=2), 2)
        assert (r.rows, r.cols) == (1, 0)
        assert r.is_injective()
        assert not r.is_surjective()

    def test_z2_degree_two_not_injective(self):
        r = rho_map(space("z2_quotient"), 2)
        assert (r.rows, r.cols) == (0, 1)
        assert r.is_surjective()
        assert not r.is_injective()

    def test_degree_one_is_the_identity_on_the_colimit(self):
        for name in ("euclidean", "wedge_lines", "z2_quotient", "spaghetti", "axes_subset"):
            p = space(name)
            colim = vect_colimit(apply_fibre_functor(p, 1))
            assert rho_map(p, 1) == RatMat.identity(colim.dim)

    def test_degree_zero_is_invertible_on_connected_presentations(self):
        for name in ("euclidean", "wedge_lines", "z2_quotient", "spaghetti", "axes_subset"):
            assert rho_map(space(name), 0).is_invertible()


class TestPushforward:
    def test_identity_map_induces_identities(self):
        p = space("wedge_lines", m=2)
        fibre, wedge = pushforward_map(PresentedMap.identity(p), 2)
        assert fibre == RatMat.identity(0)
        assert wedge == RatMat.identity(1)

    def test_axes_inclusion_tangent_iso(self):
        inclusion = ambient_inclusion(space("axes_subset"))
        fibre, wedge = pushforward_map(inclusion, 1)
        assert fibre == wedge
        assert (fibre.rows, fibre.cols) == (2, 2)
        assert fibre.is_invertible()

    def test_axes_inclusion_wedge_square_sends_generator_to_volume(self):
        inclusion = ambient_inclusion(space("axes_subset"))
        _, wedge = pushforward_map(inclusion, 2)
        assert wedge == RatMat.from_rows([[1]])

    def test_invalid_map_rejected(self):
        src = space("axes_subset")
        dst = space("euclidean", n=2)
        from diffeokit.symcalc import Poly, PolyMap

        broken = PresentedMap(
            src,
            dst,
            {
                "x": ("e", PolyMap(1, 2, [Poly.variable(1, 1), Poly.zero(1)])),
                "y": ("e", PolyMap(1, 2, [Poly.zero(1), Poly.variable(1, 1)])),
                # missing the point chart assignment
            },
        )
        with pytest.raises(ValueError):
            pushforward_map(broken, 1)


def test_degree_collapse_above_chart_dimension():
    for name in ("euclidean", "wedge_lines", "z2_quotient", "spaghetti", "axes_subset"):
        p = space(name)
        n = max(dim for _, dim in p.charts)
        for k in range(n + 1, n + 4):
            assert vect_colimit(apply_fibre_functor(p, k)).dim == 0


def test_wedge_lines_dimension_table():
    for m in range(1, 6):
        p = space("wedge_lines", m=m)
        tangent = vect_colimit(apply_fibre_functor(p, 1))
        assert tangent.dim == m
        assert vect_colimit(apply_fibre_functor(p, 2)).dim == 0
        assert comb(tangent.dim, 2) == comb(m, 2)
