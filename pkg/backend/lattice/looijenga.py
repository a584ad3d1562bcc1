"""
Looijenga Cones

A group Gamma given by finitely many unimodular integer matrices acting on a
cone C. For an integral functional xi positive on C,

    Pi_xi = {x in C : xi(gamma x) >= xi(x) for all gamma in Gamma}

is the locus where xi is minimal on the orbit. Over a word ball Pi_xi is
approximated from above; stabilization of the facet description between two
radii is evidence (not proof) that the truncation is exact.
"""

import random
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from backend.infra.config import Config
from backend.lattice.cone import Cone, Membership, subdivide
from backend.lattice.corevec import IntMatrix, RationalCovector, RationalVector, canonical_primitive
from backend.lattice.exceptions import DomainError, PreconditionError, StructuralError
from backend.lattice.reports import ActiveFacet, CoverageReport, CoverageSample, PiXiResult, PolyhedralTypeReport, Word
from backend.lattice.roots import RootSystem
from backend.lattice.weyl import GroupElement, enumerate_ball, reflections, tits_region
from backend.utils.logger import Logger


@dataclass(frozen=True)
class ConeAction:
    """
    Generators of Gamma (inverses adjoined) and the cone they act on.

    Use ConeAction.create; the dataclass constructor does no checking.
    """
    ambient_rank: int
    generators: Tuple[IntMatrix, ...]
    cone: Cone
    labels: Tuple[str, ...]

    @classmethod
    def create(cls, ambient_rank: int, generators: Sequence[IntMatrix], cone: Cone,
               labels: Optional[Sequence[str]] = None) -> "ConeAction":
        if cone.ambient_rank != ambient_rank:
            raise StructuralError(f"Cone has rank {cone.ambient_rank}, action has rank {ambient_rank}")
        labels = list(labels) if labels is not None else [f"g{i + 1}" for i in range(len(generators))]
        if len(labels) != len(generators):
            raise StructuralError("One label per generator expected")
        matrices: List[IntMatrix] = []
        names: List[str] = []
        for m, label in zip(generators, labels):
            if m.size != ambient_rank:
                raise StructuralError(f"Generator {label} is {m.size}x{m.size}, action has rank {ambient_rank}")
            if abs(m.det()) != 1:
                raise DomainError(f"Generator {label} does not preserve the lattice (det {m.det()})")
            matrices.append(m)
            names.append(label)
        for m, label in list(zip(matrices, names)):
            inverse = m.inverse()
            if inverse not in matrices:
                matrices.append(inverse)
                names.append(f"{label}^-1")
        return cls(ambient_rank, tuple(matrices), cone.complete(), tuple(names))

    @classmethod
    def from_root_system(cls, rs: RootSystem, cone: Optional[Cone] = None,
                         region_depth: Optional[int] = None) -> "ConeAction":
        """
        The Weyl group acting on cone, by default the cone spanned by the
        chamber translates of the region_depth ball. For infinite groups that
        region is not preserved; preservation_violations lists the failures.
        """
        if cone is None:
            depth = Config.get("REGION_DEPTH") if region_depth is None else region_depth
            cone = tits_region(rs, depth)
        labels = [root.label or f"s{i + 1}" for i, root in enumerate(rs.roots)]
        return cls.create(rs.ambient_rank, reflections(rs), cone, labels)

    def ball(self, depth: int) -> List[GroupElement]:
        layers = enumerate_ball(self.ambient_rank, self.generators, depth)
        return [element for layer in layers for element in layer]

    def preservation_violations(self) -> List[Tuple[str, RationalVector]]:
        """(generator label, image) for every generator image of a ray of C that leaves C."""
        violations = []
        for m, label in zip(self.generators, self.labels):
            for ray in self.cone.generator_ints():
                image = RationalVector(m.apply_ints(ray))
                if self.cone.contains(image) is Membership.OUTSIDE:
                    violations.append((label, image))
        if violations:
            Logger.warning("action does not preserve C", violations=len(violations))
        return violations


def _integral_xi(action: ConeAction, xi: RationalCovector) -> Tuple[int, ...]:
    if len(xi) != action.ambient_rank:
        raise StructuralError(f"xi has rank {len(xi)}, action has rank {action.ambient_rank}")
    if not xi.is_integral():
        raise DomainError(f"xi must be integral, got {xi}")
    values = xi.integers()
    # Only the pointed part is constrained; lineality directions are exempt.
    for ray in action.cone.extreme_rays:
        if xi(ray) <= 0:
            raise PreconditionError(f"xi = {xi} is not positive on the ray {ray} of C")
    return values


def _halfspaces(xi: Tuple[int, ...], elements: Sequence[GroupElement]) -> Dict[Tuple[int, ...], Word]:
    """Canonical normals of xi o gamma - xi, each with its first word in enumeration order."""
    normals: Dict[Tuple[int, ...], Word] = {}
    for element in elements:
        pulled = element.matrix.pull_back_ints(xi)
        normal = tuple(a - b for a, b in zip(pulled, xi))
        if any(normal):
            normals.setdefault(canonical_primitive(normal), element.word)
    return normals


def _cut(cone: Cone, normals: Sequence[Tuple[int, ...]]) -> Cone:
    return Cone.from_facets(cone.ambient_rank, list(normals) + cone.facet_ints()).complete()


def pi_xi(action: ConeAction, xi: RationalCovector, depth: int) -> PiXiResult:
    """
    Pi_xi truncated to the word ball of radius depth, and whether radius
    depth + 1 gives the same cone.
    """
    if depth < 0:
        raise DomainError(f"Depth must be nonnegative, got {depth}")
    values = _integral_xi(action, xi)
    layers = enumerate_ball(action.ambient_rank, action.generators, depth + 1)
    inner = [e for layer in layers[:depth + 1] for e in layer]
    outer = [e for layer in layers for e in layer]

    inner_normals = _halfspaces(values, inner)
    cone = _cut(action.cone, list(inner_normals))
    stabilized = cone == _cut(action.cone, list(_halfspaces(values, outer)))

    active = [ActiveFacet(f, inner_normals.get(f)) for f in cone.facet_ints()]
    if any(action.cone.contains(RationalVector(r)) is Membership.OUTSIDE for r in cone.generator_ints()):
        Logger.warning("pi_xi not inside closed C", depth=depth)
    Logger.info("pi_xi done", depth=depth, facets=len(cone.facet_ints()), rays=len(cone.generator_ints()),
                stabilized=stabilized)
    return PiXiResult(cone=cone, xi=xi, depth_used=depth, stabilized=stabilized, active_words=active)


def stabilizer_trivial(action: ConeAction, xi: RationalCovector, depth: int) -> bool:
    """True iff no non-identity element of the depth ball fixes xi."""
    values = _integral_xi(action, xi)
    for element in action.ball(depth):
        if element.word and element.matrix.pull_back_ints(values) == values:
            return False
    return True


def polyhedral_type_check(action: ConeAction, pi: Cone, depth: int, samples: Optional[int] = None,
                          seed: Optional[int] = None, sample_depth: Optional[int] = None) -> PolyhedralTypeReport:
    """
    Sampled check that the translates gamma(pi), gamma in the depth ball, cover C.

    Samples come from C, or from the translates of pi over the sample_depth ball
    when given (for infinite groups, whose translates only reach part of C).
    """
    if pi.ambient_rank != action.ambient_rank:
        raise StructuralError(f"Cone has rank {pi.ambient_rank}, action has rank {action.ambient_rank}")
    samples = Config.get("DEFAULT_SAMPLES") if samples is None else samples
    seed = Config.get("DEFAULT_SEED") if seed is None else seed
    elements = action.ball(depth)
    translates = [pi.transform(e.matrix) for e in elements]
    if sample_depth is None:
        sources = [action.cone]
    else:
        sources = [pi.transform(e.matrix) for e in action.ball(sample_depth)]

    rng = random.Random(seed)
    bound = Config.get("DENOMINATOR_BOUND")
    report = PolyhedralTypeReport(depth=depth, seed=seed)
    for _ in range(samples):
        point = sources[rng.randrange(len(sources))].sample(rng, bound)
        word = next((e.word for e, t in zip(elements, translates) if t.contains(point) is not Membership.OUTSIDE),
                    None)
        report.samples.append(CoverageSample(point, word))
    Logger.info("polyhedral type check done", depth=depth, samples=samples, uncovered=len(report.failures))
    return report


def exhaustive_coverage(action: ConeAction, pi: Cone, max_depth: int) -> CoverageReport:
    """
    Exact coverage of C by the translates of pi for a finite group.

    The group must be exhausted within max_depth. C is cut by every facet
    hyperplane of every translate; each cell then lies in a translate iff its
    interior point does.
    """
    layers = enumerate_ball(action.ambient_rank, action.generators, max_depth + 1)
    if len(layers) > max_depth + 1:
        raise PreconditionError(f"Group is not exhausted within word length {max_depth}")
    elements = [e for layer in layers for e in layer]
    translates = [pi.transform(e.matrix) for e in elements]
    normals = {f for t in translates for f in t.facet_ints()}
    cells = subdivide(action.cone, normals)
    uncovered = []
    for cell in cells:
        point = cell.interior_point()
        if not any(t.contains(point) is not Membership.OUTSIDE for t in translates):
            uncovered.append(point)
    Logger.info("exhaustive coverage done", order=len(elements), cells=len(cells), uncovered=len(uncovered))
    return CoverageReport(group_order=len(elements), cell_count=len(cells), uncovered=uncovered)
