"""
Result Types

Report values returned by the lattice engine. Report-valued operations never
raise for mathematical failures: a violation, an overlap or an uncovered sample
is a result, recorded here with its witness.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Tuple, Union

from backend.lattice.cone import Cone
from backend.lattice.corevec import RationalCovector, RationalVector

Word = Tuple[int, ...]


@dataclass(frozen=True)
class ValidationReport:
    """
    Outcome of checking the generalized root axioms.

    Axioms are numbered:
        1  self pairing ell(E) = -2
        2  off-diagonal pairings nonnegative
        3  ell_a(E_b) = 0 iff ell_b(E_a) = 0
        4  pairwise linear independence of the E's and of the ell's
        5  injectivity of E -> ell

    Attributes:
        valid: True when no axiom is violated
        axiom: number of the first violated axiom
        axiom_name: short name of that axiom
        indices: witness root indices (0-based)
        values: pairing values computed for the witness
        message: human-readable description
    """
    valid: bool
    axiom: Optional[int] = None
    axiom_name: Optional[str] = None
    indices: Tuple[int, ...] = ()
    values: Tuple[Fraction, ...] = ()
    message: str = ""

    @classmethod
    def ok(cls) -> "ValidationReport":
        return cls(valid=True, message="Valid")


@dataclass(frozen=True)
class RelationCheck:
    """Order of sigma_i sigma_j against the Coxeter matrix entry."""
    i: int
    j: int
    expected: Union[int, float]
    order: Optional[int]
    passed: bool


@dataclass
class RelationReport:
    power_bound: int
    involution_failures: List[int] = field(default_factory=list)
    checks: List[RelationCheck] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.involution_failures and all(c.passed for c in self.checks)


@dataclass(frozen=True)
class Stratum:
    """X = {i : ell_i(x) = 0} for a point of the closed chamber."""
    indices: Tuple[int, ...]
    values: Tuple[Fraction, ...]
    tight: Tuple[bool, ...]


@dataclass(frozen=True)
class Dominant:
    """
    Dominant representative of a Tits cone point.

    point is in the closed chamber and word_to_element(word) maps it back to the
    original point.
    """
    point: RationalVector
    word: Word


@dataclass(frozen=True)
class Undecided:
    """Descent stopped at the step cap; the start point may lie outside the Tits cone."""
    steps: int
    point: RationalVector


DominanceResult = Union[Dominant, Undecided]


@dataclass(frozen=True)
class OverlapWitness:
    word1: Word
    word2: Word
    full_dimensional: bool = True


@dataclass(frozen=True)
class CoverageSample:
    """A sampled point and the word of a translate containing it (None if undecided)."""
    point: RationalVector
    word: Optional[Word]

    @property
    def covered(self) -> bool:
        return self.word is not None


@dataclass
class TilingReport:
    depth: int
    translate_count: int
    seed: int
    overlap_witnesses: List[OverlapWitness] = field(default_factory=list)
    coverage: List[CoverageSample] = field(default_factory=list)

    @property
    def overlap_free(self) -> bool:
        return not self.overlap_witnesses

    @property
    def covered_count(self) -> int:
        return sum(1 for s in self.coverage if s.covered)

    @property
    def all_covered(self) -> bool:
        return self.covered_count == len(self.coverage)


@dataclass(frozen=True)
class ActiveFacet:
    """A facet normal of Pi_xi and the first word whose half-space produces it (None: a facet of C)."""
    normal: Tuple[int, ...]
    word: Optional[Word]


@dataclass
class PiXiResult:
    """
    Truncated Looijenga cone.

    Attributes:
        cone: Pi_xi cut out by the half-spaces of the depth ball
        xi: the functional
        depth_used: word-ball radius
        stabilized: the canonical facets at depth and depth + 1 agree
        active_words: one witness word per facet of the cone
    """
    cone: Cone
    xi: RationalCovector
    depth_used: int
    stabilized: bool
    active_words: List[ActiveFacet] = field(default_factory=list)


@dataclass
class PolyhedralTypeReport:
    depth: int
    seed: int
    samples: List[CoverageSample] = field(default_factory=list)

    @property
    def failures(self) -> List[CoverageSample]:
        return [s for s in self.samples if not s.covered]

    @property
    def passed(self) -> bool:
        return not self.failures


@dataclass
class CoverageReport:
    """Exact coverage of C by the translates of a cone under a finite group."""
    group_order: int
    cell_count: int
    uncovered: List[RationalVector] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.uncovered
