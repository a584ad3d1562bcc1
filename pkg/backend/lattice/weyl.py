"""
Weyl Group

W(Delta) acting on V by exact integer matrices. Group elements are words in
the reflections together with their matrices; two elements are equal exactly
when their matrices are (the action is faithful), so no word reduction is
needed.

Word convention: the word (i1, ..., ik) is the element s_i1 ... s_ik, i.e. the
matrix product M_i1 @ ... @ M_ik. Indices are 0-based in the library.
"""

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Iterable, List, Optional, Sequence, Set, Tuple

from backend.infra.config import Config
from backend.lattice.cone import Cone, Membership, interiors_overlap
from backend.lattice.corevec import IntMatrix, RationalCovector, RationalVector, to_rational
from backend.lattice.exceptions import (
    DomainError,
    EmptyChamberError,
    LimitExceededError,
    PreconditionError,
    StructuralError,
)
from backend.lattice.reports import (
    CoverageSample,
    Dominant,
    DominanceResult,
    OverlapWitness,
    RelationCheck,
    RelationReport,
    Stratum,
    TilingReport,
    Undecided,
    Word,
)
from backend.lattice.roots import RootSystem, coxeter_matrix, require_valid
from backend.utils.logger import Logger


@dataclass(frozen=True, eq=False)
class GroupElement:
    """An element of a matrix group: a witness word and its matrix. Equality is matrix equality."""
    word: Word
    matrix: IntMatrix

    def __eq__(self, other) -> bool:
        if not isinstance(other, GroupElement):
            return NotImplemented
        return self.matrix == other.matrix

    def __hash__(self) -> int:
        return hash(self.matrix)

    @property
    def length(self) -> int:
        return len(self.word)

    def is_identity(self) -> bool:
        return self.matrix.is_identity()

    def apply(self, v: RationalVector) -> RationalVector:
        return self.matrix.apply(v)


@dataclass(frozen=True)
class Chamber:
    """Closed fundamental chamber {x : ell_i(x) >= 0 for every root}."""
    cone: Cone
    normals: Tuple[RationalCovector, ...]

    def contains(self, x: RationalVector) -> Membership:
        return self.cone.contains(x)


def _as_vector(x, rank: int) -> RationalVector:
    v = x if isinstance(x, RationalVector) else RationalVector(tuple(to_rational(c) for c in x))
    if len(v) != rank:
        raise StructuralError(f"Point has rank {len(v)}, system has rank {rank}")
    return v


# ---------------------------------------------------------------------------
# Reflections and words
# ---------------------------------------------------------------------------

@lru_cache(maxsize=128)
def reflections(rs: RootSystem) -> Tuple[IntMatrix, ...]:
    """Matrices I + E ell^T of all reflections x -> x + ell(x) E of a valid system."""
    require_valid(rs)
    n = rs.ambient_rank
    matrices = []
    for index, root in enumerate(rs.roots):
        rows = []
        for r in range(n):
            row = []
            for c in range(n):
                entry = (1 if r == c else 0) + root.E[r] * root.ell[c]
                if entry.denominator != 1:
                    raise DomainError(f"Reflection in root {index + 1} is not an integer matrix")
                row.append(entry.numerator)
            rows.append(tuple(row))
        matrices.append(IntMatrix(tuple(rows)))
    return tuple(matrices)


def reflection(rs: RootSystem, i: int) -> IntMatrix:
    if not 0 <= i < len(rs):
        raise DomainError(f"Root index {i} out of range for {len(rs)} roots")
    return reflections(rs)[i]


def word_to_element(rs: RootSystem, word: Sequence[int]) -> GroupElement:
    matrices = reflections(rs)
    result = IntMatrix.identity(rs.ambient_rank)
    for i in word:
        if not 0 <= i < len(matrices):
            raise DomainError(f"Root index {i} out of range for {len(matrices)} roots")
        result = result @ matrices[i]
    return GroupElement(tuple(word), result)


# ---------------------------------------------------------------------------
# Ball enumeration
# ---------------------------------------------------------------------------

def enumerate_ball(rank: int, generators: Sequence[IntMatrix], depth: int,
                   limit: Optional[int] = None) -> List[List[GroupElement]]:
    """
    Breadth-first layers of the word ball of radius depth.

    Layer k holds the elements first reached at word length k, each with the
    first word found in length-lex order. Enumeration stops early once a layer
    comes out empty (the group is exhausted).
    """
    if depth < 0:
        raise DomainError(f"Depth must be nonnegative, got {depth}")
    limit = Config.get("MAX_ELEMENTS") if limit is None else limit
    identity = GroupElement((), IntMatrix.identity(rank))
    layers = [[identity]]
    seen: Set[IntMatrix] = {identity.matrix}
    for _ in range(depth):
        layer = []
        for element in layers[-1]:
            for index, generator in enumerate(generators):
                candidate = element.matrix @ generator
                if candidate in seen:
                    continue
                seen.add(candidate)
                layer.append(GroupElement(element.word + (index,), candidate))
                if len(seen) > limit:
                    raise LimitExceededError(f"Word ball exceeds {limit} elements at length {len(layers)}")
        if not layer:
            break
        layers.append(layer)
    Logger.debug("word ball enumerated", depth=depth, elements=len(seen), layers=[len(l) for l in layers])
    return layers


def group_ball(rs: RootSystem, depth: int) -> List[GroupElement]:
    layers = enumerate_ball(rs.ambient_rank, reflections(rs), depth)
    return [element for layer in layers for element in layer]


def growth_series(rs: RootSystem, depth: int) -> List[int]:
    """Number of new elements at each word length 1..depth."""
    if depth < 1:
        raise DomainError(f"Growth series needs depth >= 1, got {depth}")
    layers = enumerate_ball(rs.ambient_rank, reflections(rs), depth)
    counts = [len(layer) for layer in layers[1:]]
    return counts + [0] * (depth - len(counts))


def orbit(rs: RootSystem, x, depth: int) -> List[RationalVector]:
    """Distinct images of x under the depth ball, in enumeration order."""
    point = _as_vector(x, rs.ambient_rank)
    images = []
    seen = set()
    for element in group_ball(rs, depth):
        image = element.apply(point)
        if image not in seen:
            seen.add(image)
            images.append(image)
    return images


# ---------------------------------------------------------------------------
# Relations
# ---------------------------------------------------------------------------

def _order(m: IntMatrix, bound: int) -> Optional[int]:
    power = m
    for k in range(1, bound + 1):
        if power.is_identity():
            return k
        power = power @ m
    return None


def verify_relations(rs: RootSystem, power_bound: Optional[int] = None) -> RelationReport:
    """
    Check sigma_i^2 = 1 and that sigma_i sigma_j has exactly the order m(i, j);
    for m = inf, that no power up to power_bound is the identity.
    """
    bound = Config.get("POWER_BOUND") if power_bound is None else power_bound
    if bound < 1:
        raise DomainError(f"Power bound must be positive, got {bound}")
    cox = coxeter_matrix(rs)
    matrices = reflections(rs)
    report = RelationReport(power_bound=bound)
    for i, m in enumerate(matrices):
        if not (m @ m).is_identity():
            report.involution_failures.append(i)
    for i, j in combinations(range(len(matrices)), 2):
        expected = cox[i, j]
        search = bound if expected == float("inf") else max(bound, int(expected))
        order = _order(matrices[i] @ matrices[j], search)
        passed = order is None if expected == float("inf") else order == expected
        report.checks.append(RelationCheck(i, j, expected, order, passed))
    Logger.info("relations checked", system=rs.name or "-", passed=report.passed, bound=bound)
    return report


# ---------------------------------------------------------------------------
# Chamber, strata, dominance
# ---------------------------------------------------------------------------

def fundamental_chamber(rs: RootSystem) -> Chamber:
    require_valid(rs)
    normals = tuple(root.ell for root in rs.roots)
    return Chamber(Cone.from_facets(rs.ambient_rank, normals).complete(), normals)


def chamber_nonempty(rs: RootSystem) -> Tuple[bool, Optional[RationalVector]]:
    """Whether the open chamber is nonempty, with an interior witness when it is."""
    cone = fundamental_chamber(rs).cone
    if not cone.is_full_dimensional:
        return False, None
    witness = cone.interior_point()
    return True, witness if witness.is_zero() else witness.primitive()


def _require_chamber(rs: RootSystem) -> Chamber:
    chamber = fundamental_chamber(rs)
    if not chamber.cone.is_full_dimensional:
        raise EmptyChamberError(f"Open chamber of {rs.name or 'the system'} is empty")
    return chamber


def stratum(rs: RootSystem, x) -> Stratum:
    """X = {i : ell_i(x) = 0} for x in the closed chamber."""
    _require_chamber(rs)
    point = _as_vector(x, rs.ambient_rank)
    values = tuple(root.ell(point) for root in rs.roots)
    negative = [i + 1 for i, v in enumerate(values) if v < 0]
    if negative:
        raise DomainError(f"Point {point} is outside the closed chamber (ell < 0 for roots {negative})")
    tight = tuple(v == 0 for v in values)
    return Stratum(tuple(i for i, t in enumerate(tight) if t), values, tight)


def make_dominant(rs: RootSystem, x, xi: Optional[RationalCovector] = None, step_cap: Optional[int] = None,
                  rng: Optional[random.Random] = None) -> DominanceResult:
    """
    Reflect x into the closed chamber.

    Each step reflects in a violated root (ell_i(x) < 0): the lowest index, or a
    random one when rng is given. When xi is supplied with xi(E_i) > 0 for every
    root, xi(x) strictly decreases along the descent. Stops with Undecided after
    step_cap reflections.
    """
    cap = Config.get("STEP_CAP") if step_cap is None else step_cap
    if cap <= 0:
        raise DomainError(f"Step cap must be positive, got {cap}")
    _require_chamber(rs)
    point = _as_vector(x, rs.ambient_rank)
    if xi is not None:
        if len(xi) != rs.ambient_rank:
            raise StructuralError(f"xi has rank {len(xi)}, system has rank {rs.ambient_rank}")
        for index, root in enumerate(rs.roots):
            if xi(root.E) <= 0:
                raise PreconditionError(f"xi(E_{index + 1}) = {xi(root.E)} is not positive")

    word: List[int] = []
    for step in range(cap + 1):
        violated = [i for i, root in enumerate(rs.roots) if root.ell(point) < 0]
        if not violated:
            return Dominant(point, tuple(word))
        if step == cap:
            break
        i = rng.choice(violated) if rng is not None else violated[0]
        root = rs.roots[i]
        point = point + root.E.scale(root.ell(point))
        word.append(i)
    Logger.debug("dominance descent undecided", steps=cap)
    return Undecided(cap, point)


def fixing_violations(rs: RootSystem, x, depth: int) -> List[Tuple[Word, RationalVector]]:
    """
    Elements w of the depth ball with w(x) in the closed chamber but w(x) != x.
    Empty for a fundamental domain in the strong sense.
    """
    point = _as_vector(x, rs.ambient_rank)
    stratum(rs, point)
    chamber = fundamental_chamber(rs)
    violations = []
    for element in group_ball(rs, depth):
        image = element.apply(point)
        if image != point and chamber.contains(image) is not Membership.OUTSIDE:
            violations.append((element.word, image))
    return violations


def parabolic_subsystem(rs: RootSystem, indices: Iterable[int]) -> RootSystem:
    """The root system of W_X: the roots with index in X, in their original order."""
    chosen = sorted(set(indices))
    for i in chosen:
        if not 0 <= i < len(rs):
            raise DomainError(f"Root index {i} out of range for {len(rs)} roots")
    label = ",".join(str(i + 1) for i in chosen)
    return RootSystem(rs.ambient_rank, tuple(rs.roots[i] for i in chosen), rs.kind_tag,
                      f"{rs.name}[{label}]")


def intersect_with_chamber(rs: RootSystem, ambient: Cone) -> Cone:
    """ambient intersected with the closed chamber."""
    if ambient.ambient_rank != rs.ambient_rank:
        raise StructuralError(f"Cone has rank {ambient.ambient_rank}, system has rank {rs.ambient_rank}")
    return ambient.intersect(fundamental_chamber(rs).cone)


def tits_region(rs: RootSystem, depth: int) -> Cone:
    """Cone spanned by the rays of the closed-chamber translates over the depth ball."""
    chamber = _require_chamber(rs).cone
    rays = set()
    for element in group_ball(rs, depth):
        rays.update(chamber.transform(element.matrix).generator_ints())
    return Cone.from_rays(rs.ambient_rank, sorted(rays)).complete()


# ---------------------------------------------------------------------------
# Tiling audit
# ---------------------------------------------------------------------------

def _overlap_chunk(payload: Tuple[List[Cone], List[Tuple[int, int]]]) -> List[bool]:
    translates, pairs = payload
    return [interiors_overlap(translates[i], translates[j]) for i, j in pairs]


def pairwise_overlaps(translates: List[Cone], jobs: int = 1) -> List[Tuple[int, int]]:
    """Index pairs i < j whose cones share interior points, in pair order."""
    pairs = list(combinations(range(len(translates)), 2))
    if jobs <= 1 or len(pairs) < 2:
        flags = _overlap_chunk((translates, pairs))
    else:
        size = -(-len(pairs) // jobs)
        chunks = [pairs[k:k + size] for k in range(0, len(pairs), size)]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            flags = [flag for part in pool.map(_overlap_chunk, [(translates, c) for c in chunks]) for flag in part]
    return [pair for pair, flag in zip(pairs, flags) if flag]


def _cover(rs: RootSystem, base: Cone, point: RationalVector, elements: List[GroupElement],
           translates: List[Cone], step_cap: int) -> CoverageSample:
    outcome = make_dominant(rs, point, step_cap=step_cap)
    if isinstance(outcome, Dominant) and base.contains(outcome.point) is not Membership.OUTSIDE:
        if word_to_element(rs, outcome.word).apply(outcome.point) == point:
            return CoverageSample(point, outcome.word)
    for element, translate in zip(elements, translates):
        if translate.contains(point) is not Membership.OUTSIDE:
            return CoverageSample(point, element.word)
    return CoverageSample(point, None)


def tile_check(rs: RootSystem, base: Cone, depth: int, samples: Optional[int] = None,
               seed: Optional[int] = None, jobs: Optional[int] = None,
               step_cap: Optional[int] = None) -> TilingReport:
    """
    Audit that the translates w(base), w in the depth ball, tile their union.

    Every pair of distinct translates is checked for interior overlap. Samples
    are drawn from random translates; each is covered when descent lands in
    base and the descent word maps the dominant point back to the sample, or
    failing that when some translate in the ball contains it.
    """
    if base.ambient_rank != rs.ambient_rank:
        raise StructuralError(f"Cone has rank {base.ambient_rank}, system has rank {rs.ambient_rank}")
    if not base.is_full_dimensional:
        raise DomainError("Base cone must be full-dimensional")
    samples = Config.get("DEFAULT_SAMPLES") if samples is None else samples
    seed = Config.get("DEFAULT_SEED") if seed is None else seed
    jobs = Config.get("JOBS") if jobs is None else jobs
    cap = Config.get("STEP_CAP") if step_cap is None else step_cap

    chamber = _require_chamber(rs).cone
    if any(chamber.contains(RationalVector(g)) is Membership.OUTSIDE for g in base.generator_ints()):
        Logger.warning("base cone not inside the closed chamber", system=rs.name or "-")

    elements = group_ball(rs, depth)
    translates = [base.transform(element.matrix) for element in elements]
    report = TilingReport(depth=depth, translate_count=len(translates), seed=seed)
    for i, j in pairwise_overlaps(translates, jobs):
        report.overlap_witnesses.append(OverlapWitness(elements[i].word, elements[j].word))

    rng = random.Random(seed)
    bound = Config.get("DENOMINATOR_BOUND")
    for _ in range(samples):
        source = translates[rng.randrange(len(translates))]
        report.coverage.append(_cover(rs, base, source.sample(rng, bound), elements, translates, cap))

    Logger.info("tiling done", system=rs.name or "-", depth=depth, translates=len(translates),
                overlaps=len(report.overlap_witnesses), covered=report.covered_count, samples=samples)
    return report
