"""
Rational Polyhedral Cones

Exact double description engine. A cone of V = Q^n is given by ray generators
or by facet inequalities {x : f(x) >= 0}; the other representation is computed
lazily by the double description method (incremental constraint insertion with
combinatorial adjacency pruning).

Canonical form of a completed cone:
    - lineality: RREF basis of the lineality space, rows made primitive
    - extreme rays: pointed-part rays projected orthogonally off the lineality
      space, primitive, sorted
    - equations / facet normals: the same construction on the dual side
The public ``rays`` are the extreme rays plus +-lineality basis vectors, and the
public ``facets`` are the facet normals plus +-equation basis covectors, so an
equality always shows up as a pair of opposite inequalities.
"""

import random
from enum import Enum
from fractions import Fraction
from itertools import combinations
from typing import Iterable, List, Optional, Sequence, Tuple, Union

from backend.lattice.corevec import (
    IntMatrix,
    RationalCovector,
    RationalVector,
    canonical_primitive,
    dot,
    matrix_rank,
    primitive_ints,
    project_out,
    row_reduce,
    solve_combination,
    to_rational,
)
from backend.lattice.exceptions import DomainError, StructuralError
from backend.utils.logger import Logger

IntVec = Tuple[int, ...]
CoordsLike = Union[RationalVector, RationalCovector, Sequence]


class Membership(Enum):
    """Position of a point relative to a cone (interior means relative interior)."""
    INTERIOR = "interior"
    BOUNDARY = "boundary"
    OUTSIDE = "outside"


# ---------------------------------------------------------------------------
# Double description core
# ---------------------------------------------------------------------------

def _combine(s: int, u: IntVec, t: int, v: IntVec) -> IntVec:
    return tuple(s * a + t * b for a, b in zip(u, v))


def _double_description(constraints: Sequence[IntVec], n: int) -> Tuple[List[IntVec], List[IntVec]]:
    """
    Generators of {x : a(x) >= 0 for every a in constraints}.

    Returns (lineality basis, extreme rays modulo lineality). Tight sets are
    kept as bitmasks over constraint indices.
    """
    lineality: List[IntVec] = [tuple(1 if i == j else 0 for j in range(n)) for i in range(n)]
    rays: List[IntVec] = []
    zeros: List[int] = []

    for k, a in enumerate(constraints):
        bit = 1 << k

        pivot_index = next((i for i, l in enumerate(lineality) if dot(a, l) != 0), None)
        if pivot_index is not None:
            # The constraint cuts the lineality space: rotate it into a new ray.
            pivot = lineality[pivot_index]
            a_pivot = dot(a, pivot)
            if a_pivot < 0:
                pivot = tuple(-x for x in pivot)
                a_pivot = -a_pivot
            lineality = [primitive_ints(_combine(a_pivot, l, -dot(a, l), pivot))
                         for i, l in enumerate(lineality) if i != pivot_index]
            rays = [primitive_ints(_combine(a_pivot, r, -dot(a, r), pivot)) for r in rays]
            zeros = [z | bit for z in zeros]
            rays.append(primitive_ints(pivot))
            zeros.append(bit - 1)
            continue

        values = [dot(a, r) for r in rays]
        new_rays: List[IntVec] = []
        new_zeros: List[int] = []
        positive: List[int] = []
        negative: List[int] = []
        for i, value in enumerate(values):
            if value > 0:
                positive.append(i)
                new_rays.append(rays[i])
                new_zeros.append(zeros[i])
            elif value == 0:
                new_rays.append(rays[i])
                new_zeros.append(zeros[i] | bit)
            else:
                negative.append(i)

        if not negative:
            zeros = new_zeros
            rays = new_rays
            continue

        for p in positive:
            for q in negative:
                common = zeros[p] & zeros[q]
                if any(r != p and r != q and (zeros[r] & common) == common for r in range(len(rays))):
                    continue
                new_rays.append(primitive_ints(_combine(values[p], rays[q], -values[q], rays[p])))
                new_zeros.append(common | bit)
        rays, zeros = new_rays, new_zeros

    return lineality, rays


def _canonical_space(basis: Sequence[IntVec]) -> List[IntVec]:
    if not basis:
        return []
    reduced, _ = row_reduce(basis)
    return [canonical_primitive(row) for row in reduced]


def _canonical_rays(rays: Iterable[IntVec], space: Sequence[IntVec]) -> List[IntVec]:
    unique = set()
    for r in rays:
        projected = project_out(r, space) if space else r
        if any(x != 0 for x in projected):
            unique.add(canonical_primitive(projected))
    return sorted(unique)


def _generators(lineality: Sequence[IntVec], rays: Sequence[IntVec]) -> List[IntVec]:
    return list(rays) + [l for l in lineality] + [tuple(-x for x in l) for l in lineality]


def _coords(item: CoordsLike) -> Tuple[Fraction, ...]:
    if isinstance(item, (RationalVector, RationalCovector)):
        return item.coords
    return tuple(to_rational(x) for x in item)


def _evaluate(f: IntVec, x: Sequence[Fraction]) -> Fraction:
    return sum((a * b for a, b in zip(f, x)), Fraction(0))


# ---------------------------------------------------------------------------
# Cone
# ---------------------------------------------------------------------------

class Cone:
    """
    Rational polyhedral cone in V = Q^n.

    Build with ``Cone.from_rays`` / ``Cone.from_facets`` (or the shortcuts
    ``orthant``, ``full_space``, ``zero``, ``halfspace``). The cone is completed
    on first access to either representation; after that it never changes.
    """

    def __init__(self, ambient_rank: int, rays: Optional[Iterable[CoordsLike]] = None,
                 facets: Optional[Iterable[CoordsLike]] = None):
        if ambient_rank < 1:
            raise DomainError(f"Ambient rank must be positive, got {ambient_rank}")
        if rays is None and facets is None:
            raise DomainError("A cone needs rays or facets")
        if rays is not None and facets is not None:
            raise DomainError("Give either rays or facets; the other side is computed")
        self.ambient_rank = ambient_rank
        self._input_rays = self._normalize(rays) if rays is not None else None
        self._input_facets = self._normalize(facets) if facets is not None else None
        self._lineality: Optional[List[IntVec]] = None
        self._extreme: Optional[List[IntVec]] = None
        self._equations: Optional[List[IntVec]] = None
        self._normals: Optional[List[IntVec]] = None

    def _normalize(self, items: Iterable[CoordsLike]) -> List[IntVec]:
        result = []
        for item in items:
            coords = _coords(item)
            if len(coords) != self.ambient_rank:
                raise StructuralError(f"Generator {item} has rank {len(coords)}, expected {self.ambient_rank}")
            result.append(canonical_primitive(coords))
        return result

    # -- constructors -------------------------------------------------------

    @classmethod
    def from_rays(cls, ambient_rank: int, rays: Iterable[CoordsLike]) -> "Cone":
        return cls(ambient_rank, rays=rays)

    @classmethod
    def from_facets(cls, ambient_rank: int, facets: Iterable[CoordsLike]) -> "Cone":
        return cls(ambient_rank, facets=facets)

    @classmethod
    def full_space(cls, ambient_rank: int) -> "Cone":
        return cls(ambient_rank, facets=[])

    @classmethod
    def zero(cls, ambient_rank: int) -> "Cone":
        return cls(ambient_rank, rays=[])

    @classmethod
    def orthant(cls, ambient_rank: int) -> "Cone":
        return cls(ambient_rank, rays=[RationalVector.unit(ambient_rank, i) for i in range(ambient_rank)])

    @classmethod
    def halfspace(cls, normal: CoordsLike) -> "Cone":
        coords = _coords(normal)
        return cls(len(coords), facets=[coords])

    @classmethod
    def _from_parts(cls, ambient_rank: int, lineality: List[IntVec], extreme: List[IntVec],
                    equations: List[IntVec], normals: List[IntVec]) -> "Cone":
        cone = cls.__new__(cls)
        cone.ambient_rank = ambient_rank
        cone._input_rays = None
        cone._input_facets = None
        cone._lineality = lineality
        cone._extreme = extreme
        cone._equations = equations
        cone._normals = normals
        return cone

    # -- completion ---------------------------------------------------------

    def complete(self) -> "Cone":
        """Compute both canonical, irredundant representations (idempotent)."""
        if self._extreme is not None:
            return self
        n = self.ambient_rank
        if self._input_facets is not None:
            lineality, extreme = _double_description(self._input_facets, n)
            lineality = _canonical_space(lineality)
            extreme = _canonical_rays(extreme, lineality)
            equations, normals = _double_description(_generators(lineality, extreme), n)
        else:
            equations, normals = _double_description(self._input_rays, n)
            equations = _canonical_space(equations)
            normals = _canonical_rays(normals, equations)
            lineality, extreme = _double_description(_generators(equations, normals), n)
            lineality = _canonical_space(lineality)
            extreme = _canonical_rays(extreme, lineality)
        equations = _canonical_space(equations)
        self._lineality = lineality
        self._extreme = extreme
        self._equations = equations
        self._normals = _canonical_rays(normals, equations)
        Logger.debug("cone completed", rank=n, lineality=len(lineality), rays=len(extreme),
                     equations=len(equations), facets=len(self._normals))
        return self

    # -- representations ----------------------------------------------------

    @property
    def rays(self) -> Tuple[RationalVector, ...]:
        self.complete()
        return tuple(RationalVector(r) for r in _generators(self._lineality, self._extreme))

    @property
    def facets(self) -> Tuple[RationalCovector, ...]:
        self.complete()
        return tuple(RationalCovector(f) for f in _generators(self._equations, self._normals))

    @property
    def extreme_rays(self) -> Tuple[RationalVector, ...]:
        self.complete()
        return tuple(RationalVector(r) for r in self._extreme)

    @property
    def lineality(self) -> Tuple[RationalVector, ...]:
        self.complete()
        return tuple(RationalVector(r) for r in self._lineality)

    @property
    def equations(self) -> Tuple[RationalCovector, ...]:
        self.complete()
        return tuple(RationalCovector(f) for f in self._equations)

    @property
    def facet_normals(self) -> Tuple[RationalCovector, ...]:
        self.complete()
        return tuple(RationalCovector(f) for f in self._normals)

    def generator_ints(self) -> List[IntVec]:
        self.complete()
        return _generators(self._lineality, self._extreme)

    def facet_ints(self) -> List[IntVec]:
        self.complete()
        return _generators(self._equations, self._normals)

    @property
    def dimension(self) -> int:
        self.complete()
        return self.ambient_rank - len(self._equations)

    @property
    def is_full_dimensional(self) -> bool:
        return self.dimension == self.ambient_rank

    @property
    def is_pointed(self) -> bool:
        self.complete()
        return not self._lineality

    # -- queries ------------------------------------------------------------

    def _check_point(self, x: CoordsLike) -> Tuple[Fraction, ...]:
        coords = _coords(x)
        if len(coords) != self.ambient_rank:
            raise StructuralError(f"Point has rank {len(coords)}, cone has rank {self.ambient_rank}")
        return coords

    def contains(self, x: CoordsLike) -> Membership:
        """Locate x: relative interior, relative boundary or outside."""
        coords = self._check_point(x)
        self.complete()
        for e in self._equations:
            if _evaluate(e, coords) != 0:
                return Membership.OUTSIDE
        tight = False
        for f in self._normals:
            value = _evaluate(f, coords)
            if value < 0:
                return Membership.OUTSIDE
            if value == 0:
                tight = True
        return Membership.BOUNDARY if tight else Membership.INTERIOR

    def contains_by_rays(self, x: CoordsLike) -> bool:
        """Conic-combination membership over the generators (Caratheodory search)."""
        coords = self._check_point(x)
        if all(c == 0 for c in coords):
            return True
        generators = self.generator_ints()
        for size in range(1, self.dimension + 1):
            for subset in combinations(generators, size):
                if matrix_rank(subset) < size:
                    continue
                coefficients = solve_combination(subset, coords)
                if coefficients is not None and all(c >= 0 for c in coefficients):
                    return True
        return False

    def interior_point(self) -> RationalVector:
        """A point of the relative interior: the sum of the extreme rays."""
        self.complete()
        total = [0] * self.ambient_rank
        for r in self._extreme:
            total = [a + b for a, b in zip(total, r)]
        return RationalVector(tuple(total))

    def sample(self, rng: random.Random, bound: int) -> RationalVector:
        """
        Random rational point of the cone: a nonnegative integer combination of
        the generators (coefficients <= bound, not all zero) over a random
        denominator in [1, bound].
        """
        generators = self.generator_ints()
        if not generators:
            return RationalVector.zero(self.ambient_rank)
        coefficients = [rng.randint(0, bound) for _ in generators]
        if not any(coefficients):
            coefficients[rng.randrange(len(generators))] = 1
        denominator = rng.randint(1, bound)
        return RationalVector(tuple(
            Fraction(sum(c * g[j] for c, g in zip(coefficients, generators)), denominator)
            for j in range(self.ambient_rank)
        ))

    # -- constructions ------------------------------------------------------

    def dual(self) -> "Cone":
        self.complete()
        return Cone._from_parts(self.ambient_rank, list(self._equations), list(self._normals),
                                list(self._lineality), list(self._extreme))

    def intersect(self, other: "Cone") -> "Cone":
        if self.ambient_rank != other.ambient_rank:
            raise StructuralError(f"Cannot intersect cones of rank {self.ambient_rank} and {other.ambient_rank}")
        cone = Cone(self.ambient_rank, facets=[])
        cone._input_facets = self.facet_ints() + other.facet_ints()
        return cone.complete()

    def transform(self, m: IntMatrix, inverse: Optional[IntMatrix] = None) -> "Cone":
        """Image of the cone under an invertible integer matrix."""
        if m.size != self.ambient_rank:
            raise StructuralError(f"Cannot transform rank {self.ambient_rank} cone by {m.size}x{m.size} matrix")
        self.complete()
        inv = inverse if inverse is not None else m.inverse()
        lineality = _canonical_space([m.apply_ints(l) for l in self._lineality])
        equations = _canonical_space([inv.pull_back_ints(e) for e in self._equations])
        return Cone._from_parts(
            self.ambient_rank,
            lineality,
            _canonical_rays((m.apply_ints(r) for r in self._extreme), lineality),
            equations,
            _canonical_rays((inv.pull_back_ints(f) for f in self._normals), equations),
        )

    # -- dunder -------------------------------------------------------------

    def _key(self):
        self.complete()
        return (self.ambient_rank, tuple(self._lineality), tuple(self._extreme))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Cone):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self) -> int:
        return hash(self._key())

    def __repr__(self) -> str:
        self.complete()
        return (f"Cone(rank={self.ambient_rank}, dim={self.dimension}, "
                f"rays={[list(r) for r in self.generator_ints()]}, "
                f"facets={[list(f) for f in self.facet_ints()]})")


# ---------------------------------------------------------------------------
# Module-level operations
# ---------------------------------------------------------------------------

def cone_from_rays(ambient_rank: int, rays: Iterable[CoordsLike]) -> Cone:
    return Cone.from_rays(ambient_rank, rays)


def cone_from_facets(ambient_rank: int, facets: Iterable[CoordsLike]) -> Cone:
    return Cone.from_facets(ambient_rank, facets)


def complete(c: Cone) -> Cone:
    return c.complete()


def dual(c: Cone) -> Cone:
    return c.dual()


def intersect(a: Cone, b: Cone) -> Cone:
    return a.intersect(b)


def contains(c: Cone, x: CoordsLike) -> Membership:
    return c.contains(x)


def dimension(c: Cone) -> int:
    return c.dimension


def _separated(a: Cone, b: Cone) -> bool:
    """True if some facet of a has b entirely on its non-positive side."""
    generators = b.generator_ints()
    return any(all(dot(f, g) <= 0 for g in generators) for f in a.facet_ints())


def interiors_overlap(a: Cone, b: Cone) -> bool:
    """
    Whether two full-dimensional cones share interior points, i.e. whether their
    intersection is full-dimensional. A facet of either cone that weakly
    separates them settles the answer without a double description run.
    """
    if a.ambient_rank != b.ambient_rank:
        raise StructuralError(f"Rank mismatch: {a.ambient_rank} vs {b.ambient_rank}")
    if not a.is_full_dimensional or not b.is_full_dimensional:
        raise DomainError("interiors_overlap needs full-dimensional cones")
    if _separated(a, b) or _separated(b, a):
        return False
    return a.intersect(b).dimension == a.ambient_rank


def subdivide(c: Cone, normals: Iterable[CoordsLike]) -> List[Cone]:
    """
    Refine c by a hyperplane arrangement: the closed cells of c cut by every
    hyperplane {h = 0}, keeping only cells of the same dimension as c.
    """
    c.complete()
    hyperplanes = sorted({canonical_primitive(_coords(h)) for h in normals})
    cells = [c]
    for h in hyperplanes:
        if len(h) != c.ambient_rank:
            raise StructuralError(f"Hyperplane normal has rank {len(h)}, cone has rank {c.ambient_rank}")
        refined: List[Cone] = []
        for cell in cells:
            values = [dot(h, g) for g in cell.generator_ints()]
            if all(v >= 0 for v in values) or all(v <= 0 for v in values):
                refined.append(cell)
                continue
            for side in (h, tuple(-x for x in h)):
                piece = cell.intersect(Cone.halfspace(side))
                if piece.dimension == cell.dimension:
                    refined.append(piece)
        cells = refined
    return cells
