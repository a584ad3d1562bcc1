"""
Generalized Root Systems

A generalized root is a pair (E, ell) with ell(E) = -2: E a class in V, ell a
covector. A finite ordered set of roots is a root system when the pairing
axioms hold (see ValidationReport for the numbering). The pairwise products
ell_a(E_b) * ell_b(E_a) determine the Coxeter matrix of the Weyl group.

Constructors cover the Cantat-Oguiso degeneration, finite and affine Dynkin
types from their generalized Cartan matrices, diagram foldings and orthogonal
products.
"""

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

from backend.lattice.corevec import (
    IntMatrix,
    RationalCovector,
    RationalVector,
    matrix_rank,
    pair,
)
from backend.lattice.exceptions import (
    DomainError,
    InvalidRootSystemError,
    StructuralError,
    UnknownNameError,
)
from backend.lattice.reports import ValidationReport

# product ell_a(E_b) * ell_b(E_a) -> m(a, b); anything else is infinite
COXETER_ORDERS = {0: 2, 1: 3, 2: 4, 3: 6}


@dataclass(frozen=True)
class Root:
    """A generalized root (E, ell). The axiom ell(E) = -2 is checked by validation, not here."""
    E: RationalVector
    ell: RationalCovector
    label: str = ""

    def __post_init__(self):
        if not isinstance(self.E, RationalVector):
            object.__setattr__(self, "E", RationalVector(tuple(self.E)))
        if not isinstance(self.ell, RationalCovector):
            object.__setattr__(self, "ell", RationalCovector(tuple(self.ell)))
        if len(self.E) != len(self.ell):
            raise StructuralError(f"Root {self.label or ''}: E has rank {len(self.E)}, ell has rank {len(self.ell)}")

    @property
    def self_pairing(self) -> Fraction:
        return pair(self.ell, self.E)


@dataclass(frozen=True)
class RootSystem:
    ambient_rank: int
    roots: Tuple[Root, ...]
    kind_tag: Optional[str] = None
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "roots", tuple(self.roots))
        if self.ambient_rank < 1:
            raise StructuralError(f"Ambient rank must be positive, got {self.ambient_rank}")
        for index, root in enumerate(self.roots):
            if len(root.E) != self.ambient_rank:
                raise StructuralError(
                    f"Root {index + 1} has rank {len(root.E)}, system has rank {self.ambient_rank}")

    def __len__(self) -> int:
        return len(self.roots)

    def pairing(self, i: int, j: int) -> Fraction:
        """ell_i(E_j)."""
        return pair(self.roots[i].ell, self.roots[j].E)

    def pairing_table(self) -> List[List[Fraction]]:
        return [[self.pairing(i, j) for j in range(len(self))] for i in range(len(self))]


@dataclass(frozen=True)
class CoxeterMatrix:
    """Symmetric matrix of pairwise orders, entries in {1, 2, 3, 4, 6, inf}."""
    entries: Tuple[Tuple[Union[int, float], ...], ...]

    def __getitem__(self, index: Tuple[int, int]) -> Union[int, float]:
        i, j = index
        return self.entries[i][j]

    @property
    def size(self) -> int:
        return len(self.entries)

    def as_lists(self) -> List[List[Union[int, float]]]:
        return [list(row) for row in self.entries]


# ---------------------------------------------------------------------------
# Validation and Coxeter data
# ---------------------------------------------------------------------------

def _violation(axiom: int, name: str, indices: Tuple[int, ...], values: Sequence[Fraction],
               message: str) -> ValidationReport:
    return ValidationReport(valid=False, axiom=axiom, axiom_name=name, indices=indices,
                            values=tuple(values), message=message)


def validate_root_system(rs: RootSystem) -> ValidationReport:
    """
    Check the axioms and report the first violation.

    Index pairs are visited in lexicographic order (i, j) with j >= i; on the
    diagonal the self pairing is checked, off the diagonal independence,
    injectivity, nonnegativity and zero symmetry in that order.
    """
    roots = rs.roots
    for i in range(len(roots)):
        for j in range(i, len(roots)):
            a, b = roots[i], roots[j]
            if i == j:
                value = a.self_pairing
                if value != -2:
                    return _violation(1, "self pairing", (i,), (value,),
                                      f"Root {i + 1}: ell(E) = {value}, expected -2")
                continue

            if matrix_rank([a.E.coords, b.E.coords]) < 2:
                return _violation(4, "independence", (i, j), (),
                                  f"Roots {i + 1}, {j + 1}: E-pair linearly dependent")
            if a.ell == b.ell:
                return _violation(5, "injectivity", (i, j), (),
                                  f"Roots {i + 1}, {j + 1}: distinct roots share the covector ell")
            if matrix_rank([a.ell.coords, b.ell.coords]) < 2:
                return _violation(4, "independence", (i, j), (),
                                  f"Roots {i + 1}, {j + 1}: ell-pair linearly dependent")

            ab, ba = rs.pairing(i, j), rs.pairing(j, i)
            if ab < 0 or ba < 0:
                return _violation(2, "nonnegativity", (i, j), (ab, ba),
                                  f"Roots {i + 1}, {j + 1}: negative pairing ({ab}, {ba})")
            if (ab == 0) != (ba == 0):
                return _violation(3, "zero symmetry", (i, j), (ab, ba),
                                  f"Roots {i + 1}, {j + 1}: only one pairing vanishes ({ab}, {ba})")
    return ValidationReport.ok()


def require_valid(rs: RootSystem) -> None:
    report = validate_root_system(rs)
    if not report.valid:
        raise InvalidRootSystemError(f"Invalid root system {rs.name or ''}: {report.message}", report)


def coxeter_order(product: Fraction) -> Union[int, float]:
    return COXETER_ORDERS.get(product, math.inf) if product.denominator == 1 else math.inf


def coxeter_matrix(rs: RootSystem) -> CoxeterMatrix:
    require_valid(rs)
    n = len(rs)
    entries = tuple(
        tuple(1 if i == j else coxeter_order(rs.pairing(i, j) * rs.pairing(j, i)) for j in range(n))
        for i in range(n)
    )
    return CoxeterMatrix(entries)


# ---------------------------------------------------------------------------
# Generalized Cartan matrices
# ---------------------------------------------------------------------------

def _check_cartan(a: Sequence[Sequence[int]]) -> List[List[int]]:
    matrix = [list(row) for row in a]
    n = len(matrix)
    if n == 0 or any(len(row) != n for row in matrix):
        raise StructuralError("Cartan matrix must be square and nonempty")
    for i in range(n):
        if matrix[i][i] != 2:
            raise DomainError(f"Cartan matrix diagonal entry ({i + 1},{i + 1}) is {matrix[i][i]}, expected 2")
        for j in range(n):
            if i == j:
                continue
            if matrix[i][j] > 0:
                raise DomainError(f"Cartan matrix entry ({i + 1},{j + 1}) is positive")
            if (matrix[i][j] == 0) != (matrix[j][i] == 0):
                raise DomainError(f"Cartan matrix entries ({i + 1},{j + 1}) and ({j + 1},{i + 1}) vanish asymmetrically")
    return matrix


def from_cartan(a: Sequence[Sequence[int]], name: str = "", kind_tag: Optional[str] = "sm") -> RootSystem:
    """
    Realize a generalized Cartan matrix as a root system with ell_i(E_j) = -A_ij.

    Nonsingular matrices use rank n: E_i = e_i and ell_i = -(row i).
    Singular (affine) matrices need extra room for independent covectors and
    use rank 2n: E_i = (e_i, 0) and ell_i = (-(row i), e_i).
    """
    matrix = _check_cartan(a)
    n = len(matrix)
    roots = []
    if IntMatrix(tuple(tuple(r) for r in matrix)).det() != 0:
        for i in range(n):
            roots.append(Root(RationalVector.unit(n, i), RationalCovector(tuple(-x for x in matrix[i])),
                              label=f"a{i + 1}"))
        return RootSystem(n, tuple(roots), kind_tag, name)

    for i in range(n):
        e = tuple(1 if k == i else 0 for k in range(n)) + (0,) * n
        ell = tuple(-x for x in matrix[i]) + tuple(1 if k == i else 0 for k in range(n))
        roots.append(Root(RationalVector(e), RationalCovector(ell), label=f"a{i + 1}"))
    return RootSystem(2 * n, tuple(roots), kind_tag, name)


def _cartan_from_edges(n: int, edges: Sequence[Tuple[int, int]],
                       weighted: Sequence[Tuple[int, int, int, int]] = ()) -> List[List[int]]:
    """Simply laced edges (i, j) get -1 both ways; weighted edges (i, j, a_ij, a_ji) are explicit."""
    matrix = [[2 if i == j else 0 for j in range(n)] for i in range(n)]
    for i, j in edges:
        matrix[i][j] = matrix[j][i] = -1
    for i, j, a_ij, a_ji in weighted:
        matrix[i][j] = a_ij
        matrix[j][i] = a_ji
    return matrix


def _chain(n: int) -> List[Tuple[int, int]]:
    return [(i, i + 1) for i in range(n - 1)]


def finite_cartan(family: str, n: int) -> List[List[int]]:
    """Cartan matrix of the finite type X_n (n nodes)."""
    if family == "A" and n >= 1:
        return _cartan_from_edges(n, _chain(n))
    if family == "B" and n >= 2:
        return _cartan_from_edges(n, _chain(n - 1), [(n - 2, n - 1, -2, -1)])
    if family == "C" and n >= 2:
        b = finite_cartan("B", n)
        return [list(row) for row in zip(*b)]
    if family == "D" and n >= 4:
        return _cartan_from_edges(n, _chain(n - 1) + [(n - 3, n - 1)])
    if family == "E" and n in (6, 7, 8):
        return _cartan_from_edges(n, _chain(n - 1) + [(2, n - 1)])
    if family == "F" and n == 4:
        return _cartan_from_edges(4, [(0, 1), (2, 3)], [(1, 2, -1, -2)])
    if family == "G" and n == 2:
        return [[2, -1], [-3, 2]]
    raise UnknownNameError(f"No finite Dynkin type {family}{n}")


def affine_cartan(family: str, n: int) -> List[List[int]]:
    """Cartan matrix of the untwisted affine type X_n (n + 1 nodes)."""
    if family == "A" and n == 1:
        return [[2, -2], [-2, 2]]
    if family == "A" and n >= 2:
        return _cartan_from_edges(n + 1, _chain(n + 1) + [(n, 0)])
    if family == "B" and n >= 3:
        return _cartan_from_edges(n + 1, _chain(n - 1) + [(1, n)], [(n - 2, n - 1, -2, -1)])
    if family == "C" and n >= 2:
        return _cartan_from_edges(n + 1, _chain(n + 1)[1:-1], [(0, 1, -1, -2), (n - 1, n, -2, -1)])
    if family == "D" and n >= 4:
        return _cartan_from_edges(n + 1, _chain(n - 1) + [(n - 3, n - 1), (1, n)])
    if family == "E" and n == 6:
        return _cartan_from_edges(7, [(0, 1), (1, 2), (0, 3), (3, 4), (0, 5), (5, 6)])
    if family == "E" and n == 7:
        return _cartan_from_edges(8, _chain(7) + [(3, 7)])
    if family == "E" and n == 8:
        return _cartan_from_edges(9, _chain(8) + [(2, 8)])
    if family == "F" and n == 4:
        return _cartan_from_edges(5, [(0, 1), (1, 2), (3, 4)], [(2, 3, -1, -2)])
    if family == "G" and n == 2:
        return _cartan_from_edges(3, [(0, 1)], [(1, 2, -1, -3)])
    raise UnknownNameError(f"No affine Dynkin type {family}{n}")


# ---------------------------------------------------------------------------
# Constructions
# ---------------------------------------------------------------------------

def cantat_oguiso(n: int = 4) -> RootSystem:
    """
    Roots of the (2,...,2) hypersurface in (P^1)^n degenerating to the
    reducible fiber: ell_i = e_i*, E_i = 2 * (1,...,1) - 4 e_i, so ell_j(E_i) = -2
    on the diagonal and 2 off it.
    """
    if n < 3:
        raise DomainError(f"co:{n} has dependent E-pairs; need n >= 3")
    roots = []
    for i in range(n):
        e = tuple(-2 if k == i else 2 for k in range(n))
        roots.append(Root(RationalVector(e), RationalCovector.unit(n, i), label=f"E{i + 1}"))
    return RootSystem(n, tuple(roots), "big", "co2222" if n == 4 else f"co:{n}")


def fold(cartan: Sequence[Sequence[int]], permutation: Sequence[int], name: str = "") -> RootSystem:
    """
    Fold the realization of a Cartan matrix along a diagram symmetry.

    permutation lists 0-based images of the nodes. Each orbit O contributes the
    root (sum of E_k over O, ell of the smallest k in O). The result is
    revalidated; foldings that break the axioms are rejected.
    """
    matrix = _check_cartan(cartan)
    n = len(matrix)
    if sorted(permutation) != list(range(n)):
        raise DomainError(f"{list(permutation)} is not a permutation of {n} nodes")
    for i in range(n):
        for j in range(n):
            if matrix[permutation[i]][permutation[j]] != matrix[i][j]:
                raise DomainError(f"Permutation {[p + 1 for p in permutation]} is not a diagram symmetry")

    base = from_cartan(matrix)
    orbits: List[List[int]] = []
    seen = set()
    for start in range(n):
        if start in seen:
            continue
        orbit = [start]
        k = permutation[start]
        while k != start:
            orbit.append(k)
            k = permutation[k]
        seen.update(orbit)
        orbits.append(sorted(orbit))

    roots = []
    for orbit in orbits:
        e = RationalVector.zero(base.ambient_rank)
        for k in orbit:
            e = e + base.roots[k].E
        roots.append(Root(e, base.roots[orbit[0]].ell, label="+".join(f"a{k + 1}" for k in orbit)))
    folded = RootSystem(base.ambient_rank, tuple(roots), "sm", name)
    require_valid(folded)
    return folded


def product(*systems: RootSystem) -> RootSystem:
    """Orthogonal direct sum; its Weyl group is the product of the factors' groups."""
    if not systems:
        raise DomainError("product needs at least one root system")
    total = sum(s.ambient_rank for s in systems)
    roots = []
    offset = 0
    for s in systems:
        before = (0,) * offset
        after = (0,) * (total - offset - s.ambient_rank)
        for root in s.roots:
            roots.append(Root(RationalVector(before + root.E.coords + after),
                              RationalCovector(before + root.ell.coords + after),
                              label=f"{s.name}:{root.label}" if s.name else root.label))
        offset += s.ambient_rank
    tags = {s.kind_tag for s in systems}
    return RootSystem(total, tuple(roots), tags.pop() if len(tags) == 1 else None,
                      " x ".join(s.name for s in systems))


# ---------------------------------------------------------------------------
# Builtin catalog
# ---------------------------------------------------------------------------

BUILTIN_CATALOG: Dict[str, str] = {
    "co2222": "Cantat-Oguiso degeneration of the (2,2,2,2) divisor in (P^1)^4; Weyl group Z2*Z2*Z2*Z2",
    "co:<n>": "Cantat-Oguiso type system in rank n >= 3, all off-diagonal orders infinite",
    "dynkin:A2": "ADE curve configuration of a cDV singularity; Weyl group of the singularity",
    "dynkin:<X><n>": "finite Dynkin type X in {A,B,C,D,E,F,G} realized from its Cartan matrix",
    "affine:A1": "elliptic fibration with an I2 Kodaira fiber; infinite dihedral Weyl group",
    "affine:<X><n>": "Kodaira fiber of an elliptic fibration: untwisted affine type, rank 2(n+1) realization",
    "folded:A3:3,2,1": "folding of A3 by its diagram flip; order-4 relation",
    "folded:D4:3,2,4,1": "folding of D4 by triality; order-6 relation",
    "folded:<X><n>:<perm>": "diagram folding of a finite type by a symmetry (1-based images)",
    "folded:affine-<X><n>:<perm>": "diagram folding of an affine type by a symmetry (1-based images)",
}

# Worked-example section each catalog entry illustrates
BUILTIN_SECTIONS: Dict[str, str] = {
    name: "6.2" if name.startswith("co") else "6.1" for name in BUILTIN_CATALOG
}

_TYPE_PATTERN = re.compile(r"^([A-G])(\d+)$")


def _parse_type(text: str, full_name: str) -> Tuple[str, int]:
    match = _TYPE_PATTERN.match(text)
    if not match:
        raise UnknownNameError(f"Unknown builtin: {full_name}")
    return match.group(1), int(match.group(2))


def _parse_permutation(text: str, full_name: str) -> List[int]:
    try:
        return [int(p) - 1 for p in text.split(",") if p.strip()]
    except ValueError:
        raise UnknownNameError(f"Unknown builtin: {full_name} (bad permutation)")


def builtin(name: str) -> RootSystem:
    """Construct a named root system from the builtin catalog."""
    if name == "co2222":
        return cantat_oguiso(4)
    prefix, _, rest = name.partition(":")
    if prefix == "co":
        try:
            n = int(rest)
        except ValueError:
            raise UnknownNameError(f"Unknown builtin: {name}")
        return cantat_oguiso(n)
    if prefix == "dynkin":
        family, n = _parse_type(rest, name)
        return from_cartan(finite_cartan(family, n), name=name)
    if prefix == "affine":
        family, n = _parse_type(rest, name)
        return from_cartan(affine_cartan(family, n), name=name)
    if prefix == "folded":
        type_text, _, perm_text = rest.partition(":")
        if not perm_text:
            raise UnknownNameError(f"Unknown builtin: {name} (missing permutation)")
        if type_text.startswith("affine-"):
            family, n = _parse_type(type_text[len("affine-"):], name)
            cartan = affine_cartan(family, n)
        else:
            family, n = _parse_type(type_text, name)
            cartan = finite_cartan(family, n)
        return fold(cartan, _parse_permutation(perm_text, name), name=name)
    raise UnknownNameError(f"Unknown builtin: {name}")


def builtin_list() -> List[Tuple[str, str, str]]:
    return [(name, BUILTIN_SECTIONS[name], provenance) for name, provenance in BUILTIN_CATALOG.items()]
