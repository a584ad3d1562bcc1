from fractions import Fraction
from itertools import combinations

import pytest

from backend.lattice.cone import Cone, Membership, interiors_overlap
from backend.lattice.corevec import IntMatrix, RationalCovector, RationalVector
from backend.lattice.exceptions import DomainError, PreconditionError
from backend.lattice.looijenga import (
    ConeAction,
    exhaustive_coverage,
    pi_xi,
    polyhedral_type_check,
    stabilizer_trivial,
)
from backend.lattice.roots import builtin
from backend.lattice.weyl import fundamental_chamber

SHEAR = IntMatrix(((1, 1), (0, 1)))


@pytest.fixture
def co_action(co):
    return ConeAction.from_root_system(co, region_depth=2)


@pytest.fixture
def a2_full(a2):
    return ConeAction.from_root_system(a2, cone=Cone.full_space(2))


class TestConeAction:
    def test_inverse_adjoined(self):
        action = ConeAction.create(2, [SHEAR], Cone.orthant(2))
        assert len(action.generators) == 2
        assert action.labels == ("g1", "g1^-1")
        assert (action.generators[0] @ action.generators[1]).is_identity()

    def test_involutions_not_doubled(self, a2_full):
        assert len(a2_full.generators) == 2

    def test_lattice_preserved(self):
        with pytest.raises(DomainError):
            ConeAction.create(2, [IntMatrix(((2, 0), (0, 1)))], Cone.orthant(2))

    def test_preservation(self, a2_full, co):
        assert a2_full.preservation_violations() == []
        on_orthant = ConeAction.from_root_system(co, cone=Cone.orthant(4))
        violations = on_orthant.preservation_violations()
        assert violations
        assert all(on_orthant.cone.contains(image) is Membership.OUTSIDE for _, image in violations)


class TestPiXi:
    def test_co_orthant(self, co_action):
        result = pi_xi(co_action, RationalCovector.of(1, 1, 1, 1), 4)
        assert result.cone == Cone.orthant(4)
        assert result.stabilized
        assert result.depth_used == 4
        words = {facet.normal: facet.word for facet in result.active_words}
        assert words[(1, 0, 0, 0)] == (0,)
        assert words[(0, 0, 0, 1)] == (3,)

    def test_trivial_group(self):
        action = ConeAction.create(2, [], Cone.orthant(2))
        result = pi_xi(action, RationalCovector.of(1, 1), 0)
        assert result.cone == Cone.orthant(2)
        assert result.stabilized
        assert all(facet.word is None for facet in result.active_words)

    def test_finite_group_gives_chamber(self, a2, a2_full):
        result = pi_xi(a2_full, RationalCovector.of(1, 1), 3)
        assert result.cone == fundamental_chamber(a2).cone
        assert result.stabilized

    def test_shrinks_with_depth(self, co_action):
        xi = RationalCovector.of(1, 2, 2, 3)
        previous = pi_xi(co_action, xi, 0).cone
        assert previous == co_action.cone
        for depth in range(1, 4):
            current = pi_xi(co_action, xi, depth).cone
            for ray in current.generator_ints():
                assert previous.contains(RationalVector(ray)) is not Membership.OUTSIDE
            previous = current
        assert previous == Cone.orthant(4)

    def test_xi_must_be_integral(self, co_action):
        with pytest.raises(DomainError):
            pi_xi(co_action, RationalCovector.of(Fraction(1, 2), 1, 1, 1), 2)

    def test_xi_must_be_positive(self, co):
        action = ConeAction.from_root_system(co, cone=Cone.orthant(4))
        with pytest.raises(PreconditionError):
            pi_xi(action, RationalCovector.of(1, 0, 0, 0), 2)

    def test_negative_depth(self, co_action):
        with pytest.raises(DomainError):
            pi_xi(co_action, RationalCovector.of(1, 1, 1, 1), -1)

    @pytest.mark.parametrize("name, xi, depth", [
        ("dynkin:A2", (2, 3), 3),
        ("dynkin:B3", (1, 2, 3), 4),
        ("dynkin:G2", (1, 4), 6),
    ])
    def test_inside_closed_chamber(self, name, xi, depth):
        rs = builtin(name)
        action = ConeAction.from_root_system(rs, cone=Cone.full_space(rs.ambient_rank))
        functional = RationalCovector.of(*xi)
        # xi is positive on every E_i
        assert all(functional(root.E) > 0 for root in rs.roots)
        chamber = fundamental_chamber(rs).cone
        cone = pi_xi(action, functional, depth).cone
        assert cone.is_full_dimensional
        for ray in cone.generator_ints():
            assert chamber.contains(RationalVector(ray)) is not Membership.OUTSIDE


class TestStabilizer:
    def test_co_trivial(self, co_action):
        assert stabilizer_trivial(co_action, RationalCovector.of(1, 1, 1, 1), 3)
        assert stabilizer_trivial(co_action, RationalCovector.of(1, 1, 1, 1), 4)

    def test_fixed_by_reflection(self, a2_full):
        # xi(E_1) = 0, so xi o s_1 = xi
        assert not stabilizer_trivial(a2_full, RationalCovector.of(0, 1), 2)

    def test_trivial_group(self):
        action = ConeAction.create(2, [], Cone.orthant(2))
        assert stabilizer_trivial(action, RationalCovector.of(1, 1), 5)


class TestCoverage:
    def test_co_translates_cover(self, co_action):
        report = polyhedral_type_check(co_action, Cone.orthant(4), 5, samples=200, seed=0, sample_depth=4)
        assert report.passed
        assert len(report.samples) == 200

    def test_zero_cone_fails(self, co_action):
        report = polyhedral_type_check(co_action, Cone.zero(4), 2, samples=20, seed=0)
        assert not report.passed
        assert len(report.failures) == 20

    def test_exhaustive_finite(self, a2, a2_full):
        report = exhaustive_coverage(a2_full, fundamental_chamber(a2).cone, 3)
        assert report.group_order == 6
        assert report.cell_count == 6
        assert report.passed

    def test_exhaustive_detects_gap(self, a2_full):
        report = exhaustive_coverage(a2_full, Cone.from_rays(2, [(-1, -1)]), 3)
        assert not report.passed

    def test_exhaustive_needs_finite_group(self, a2_full, co_action):
        with pytest.raises(PreconditionError):
            exhaustive_coverage(a2_full, Cone.full_space(2), 2)
        with pytest.raises(PreconditionError):
            exhaustive_coverage(co_action, Cone.orthant(4), 3)


class TestFundamentalDomain:
    def _assert_translates_disjoint(self, action, cone, depth):
        translates = [cone.transform(e.matrix) for e in action.ball(depth)]
        for i, j in combinations(range(len(translates)), 2):
            assert not interiors_overlap(translates[i], translates[j]), (i, j)

    def test_co_translates_tile(self, co_action):
        xi = RationalCovector.of(1, 1, 1, 1)
        result = pi_xi(co_action, xi, 4)
        assert result.stabilized
        assert stabilizer_trivial(co_action, xi, 4)
        assert polyhedral_type_check(co_action, result.cone, 5, samples=200, seed=0, sample_depth=4).passed
        self._assert_translates_disjoint(co_action, result.cone, 3)

    def test_finite_translates_tile(self, a2_full):
        xi = RationalCovector.of(1, 1)
        result = pi_xi(a2_full, xi, 3)
        assert result.stabilized
        assert stabilizer_trivial(a2_full, xi, 3)
        assert polyhedral_type_check(a2_full, result.cone, 3, samples=50, seed=2).passed
        self._assert_translates_disjoint(a2_full, result.cone, 3)
