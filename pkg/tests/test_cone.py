import random
from fractions import Fraction

import pytest

from backend.lattice.cone import (
    Cone,
    Membership,
    complete,
    contains,
    dimension,
    dual,
    interiors_overlap,
    intersect,
    subdivide,
)
from backend.lattice.corevec import IntMatrix, RationalVector
from backend.lattice.exceptions import DomainError, StructuralError


def _random_cone(rng: random.Random):
    n = rng.randint(1, 5)
    count = rng.randint(1, 6)
    rays = []
    while len(rays) < count:
        v = tuple(rng.randint(-3, 3) for _ in range(n))
        if any(v):
            rays.append(v)
    return n, rays


def _random_cone_of_rank(rng: random.Random, n: int, min_rays: int = 1) -> Cone:
    count = rng.randint(min_rays, min_rays + 3)
    rays = []
    while len(rays) < count:
        v = tuple(rng.randint(-3, 3) for _ in range(n))
        if any(v):
            rays.append(v)
    return Cone.from_rays(n, rays)


def _random_point(rng: random.Random, n: int, rays):
    if rng.random() < 0.5:
        return RationalVector(tuple(Fraction(rng.randint(-6, 6), rng.randint(1, 3)) for _ in range(n)))
    coefficients = [rng.randint(0, 3) for _ in rays]
    return RationalVector(tuple(sum(c * r[j] for c, r in zip(coefficients, rays)) for j in range(n)))


class TestBasicCones:
    def test_orthant_membership(self):
        orthant = Cone.orthant(4)
        assert orthant.contains(RationalVector.of(1, 1, 1, 1)) is Membership.INTERIOR
        assert orthant.contains(RationalVector.of(0, 1, 1, 1)) is Membership.BOUNDARY
        assert orthant.contains(RationalVector.of(-1, 1, 1, 1)) is Membership.OUTSIDE

    def test_chamber_from_facets(self):
        chamber = Cone.from_facets(2, [(-2, 1), (1, -2)])
        assert [r.coords for r in chamber.rays] == [(-2, -1), (-1, -2)]
        assert chamber.dimension == 2
        assert chamber.is_pointed

    def test_redundant_rays_dropped(self):
        a = Cone.from_rays(2, [(1, 0), (0, 1), (1, 1), (2, 0)])
        b = Cone.from_facets(2, [(1, 0), (0, 1)])
        assert a == b
        assert len(a.rays) == 2

    def test_halfspace_has_lineality(self):
        half = Cone.halfspace((1, 0))
        assert half.dimension == 2
        assert not half.is_pointed
        assert [r.coords for r in half.extreme_rays] == [(1, 0)]
        assert [r.coords for r in half.lineality] == [(0, 1)]
        assert len(half.rays) == 3

    def test_zero_cone(self):
        zero = Cone.zero(3)
        assert zero.dimension == 0
        assert zero.rays == ()
        assert len(zero.facets) == 6
        assert zero.contains(RationalVector.of(0, 0, 0)) is Membership.INTERIOR
        assert zero.contains(RationalVector.of(1, 0, 0)) is Membership.OUTSIDE

    def test_full_space(self):
        full = Cone.full_space(3)
        assert full.dimension == 3
        assert full.facets == ()
        assert full.contains(RationalVector.of(-5, 2, 1)) is Membership.INTERIOR

    def test_lower_dimensional_relative_interior(self):
        ray = Cone.from_rays(2, [(1, 1)])
        assert ray.dimension == 1
        assert ray.contains(RationalVector.of(2, 2)) is Membership.INTERIOR
        assert ray.contains(RationalVector.of(0, 0)) is Membership.BOUNDARY
        assert ray.contains(RationalVector.of(1, 2)) is Membership.OUTSIDE

    def test_needs_a_representation(self):
        with pytest.raises(DomainError):
            Cone(2)
        with pytest.raises(DomainError):
            Cone.from_rays(2, [(0, 0)])

    def test_rank_checked(self):
        with pytest.raises(StructuralError):
            Cone.from_rays(2, [(1, 0, 0)])
        with pytest.raises(StructuralError):
            Cone.orthant(2).contains(RationalVector.of(1, 1, 1))


class TestOperations:
    def test_dual_of_orthant(self):
        orthant = Cone.orthant(3)
        assert dual(orthant) == orthant
        assert dual(Cone.full_space(2)) == Cone.zero(2)

    def test_dual_is_involution(self):
        c = Cone.from_rays(3, [(1, 0, 0), (1, 1, 0), (1, 0, 1), (1, 1, 1)])
        assert c.dual().dual() == c

    def test_intersect_face(self):
        orthant = Cone.orthant(4)
        face = intersect(orthant, Cone.halfspace((-1, 0, 0, 0)))
        assert dimension(face) == 3
        assert sorted(r.coords for r in face.rays) == [(0, 0, 0, 1), (0, 0, 1, 0), (0, 1, 0, 0)]

    def test_intersect_rank_mismatch(self):
        with pytest.raises(StructuralError):
            intersect(Cone.orthant(2), Cone.orthant(3))

    def test_module_helpers(self):
        c = complete(Cone.from_facets(2, [(1, 0), (0, 1)]))
        assert contains(c, RationalVector.of(1, 0)) is Membership.BOUNDARY

    def test_interiors_overlap(self):
        orthant = Cone.orthant(2)
        assert not interiors_overlap(orthant, Cone.from_rays(2, [(-1, 0), (0, -1)]))
        assert not interiors_overlap(orthant, Cone.from_rays(2, [(-1, 0), (0, 1)]))
        assert interiors_overlap(orthant, Cone.from_rays(2, [(1, 1), (-1, 2)]))
        assert interiors_overlap(orthant, Cone.full_space(2))

    def test_interiors_overlap_needs_full_dimension(self):
        with pytest.raises(DomainError):
            interiors_overlap(Cone.orthant(2), Cone.from_rays(2, [(1, 1)]))

    def test_transform(self):
        reflection = IntMatrix(((-1, 0, 0, 0), (2, 1, 0, 0), (2, 0, 1, 0), (2, 0, 0, 1)))
        image = Cone.orthant(4).transform(reflection)
        assert sorted(r.coords for r in image.rays) == sorted(
            [(-1, 2, 2, 2), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)])
        assert image.contains(RationalVector.of(-1, 3, 3, 3)) is Membership.INTERIOR

    def test_transform_keeps_lineality(self):
        m = IntMatrix(((1, 1), (0, 1)))
        image = Cone.halfspace((0, 1)).transform(m)
        assert image == Cone.halfspace((0, 1))

    def test_interior_point(self):
        assert Cone.orthant(3).interior_point() == RationalVector.of(1, 1, 1)
        c = Cone.from_facets(2, [(-2, 1), (1, -2)])
        assert c.contains(c.interior_point()) is Membership.INTERIOR

    def test_subdivide_quadrants(self):
        cells = subdivide(Cone.full_space(2), [(1, 0), (0, 1), (-1, 0)])
        assert len(cells) == 4
        assert Cone.orthant(2) in cells

    def test_subdivide_ignores_missing_hyperplanes(self):
        cells = subdivide(Cone.orthant(2), [(1, 1)])
        assert cells == [Cone.orthant(2)]

    def test_sample_stays_inside(self, rng):
        c = Cone.from_facets(3, [(1, 0, 0), (0, 1, 0), (1, 1, -1)])
        for _ in range(50):
            assert c.contains(c.sample(rng, 10)) is not Membership.OUTSIDE


class TestProperties:
    def test_double_description_round_trip(self):
        rng = random.Random(2024)
        for _ in range(200):
            n, rays = _random_cone(rng)
            c = Cone.from_rays(n, rays)
            again = Cone.from_facets(n, c.facets)
            assert again == c
            assert Cone.from_rays(n, again.rays) == c
            assert c.dimension == again.dimension

    def test_membership_agreement(self):
        rng = random.Random(7)
        for _ in range(200):
            n, rays = _random_cone(rng)
            c = Cone.from_rays(n, rays)
            for _ in range(100):
                x = _random_point(rng, n, rays)
                by_facets = c.contains(x) is not Membership.OUTSIDE
                assert by_facets == c.contains_by_rays(x)

    def test_input_generators_satisfy_facets(self):
        rng = random.Random(11)
        for _ in range(200):
            n, rays = _random_cone(rng)
            c = Cone.from_rays(n, rays)
            for r in rays:
                assert c.contains(RationalVector(r)) is not Membership.OUTSIDE

    def test_dual_of_dual_random(self):
        rng = random.Random(31)
        for _ in range(200):
            n, rays = _random_cone(rng)
            c = Cone.from_rays(n, rays)
            assert dual(dual(c)) == c

    def test_intersect_commutative_and_associative(self):
        rng = random.Random(5)
        for _ in range(100):
            n = rng.randint(1, 4)
            a, b, c = (_random_cone_of_rank(rng, n) for _ in range(3))
            assert intersect(a, b) == intersect(b, a)
            assert intersect(intersect(a, b), c) == intersect(a, intersect(b, c))

    def test_interiors_overlap_symmetric(self):
        rng = random.Random(13)
        checked = 0
        for _ in range(300):
            n = rng.randint(1, 3)
            a = _random_cone_of_rank(rng, n, min_rays=n)
            b = _random_cone_of_rank(rng, n, min_rays=n)
            if not (a.is_full_dimensional and b.is_full_dimensional):
                continue
            assert interiors_overlap(a, b) == interiors_overlap(b, a)
            checked += 1
        assert checked > 50

    def test_interiors_overlap_with_itself(self):
        rng = random.Random(17)
        for _ in range(200):
            n = rng.randint(1, 4)
            a = _random_cone_of_rank(rng, n)
            if a.dimension == n:
                assert interiors_overlap(a, a)
            else:
                with pytest.raises(DomainError):
                    interiors_overlap(a, a)
