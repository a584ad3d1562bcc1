"""
Exact Rational Linear Algebra

Vectors of V = Q^n, covectors of V*, the V x V* pairing, integer matrices and
the canonical primitive form used as a deduplication key everywhere else.

All values are immutable and every operation is exact: coordinates are
fractions.Fraction, matrix entries are Python ints (arbitrary precision).
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Iterator, List, Optional, Sequence, Tuple, Union

from backend.lattice.exceptions import DomainError, StructuralError

RationalLike = Union[int, Fraction, str]


def to_rational(value: RationalLike) -> Fraction:
    """Convert an int, Fraction or "p/q" string to a Fraction. Floats are rejected."""
    if isinstance(value, bool):
        raise DomainError(f"Boolean is not a rational number: {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as e:
            raise DomainError(f"Invalid rational literal {value!r}: {e}")
    raise DomainError(f"Expected an exact rational, got {type(value).__name__}: {value!r}")


def format_rational(value: Fraction) -> str:
    """Serialize a rational as "p/q" (or "p" when integral)."""
    return str(value)


# ---------------------------------------------------------------------------
# Vectors and covectors
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class _RationalCoords:
    coords: Tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(to_rational(c) for c in self.coords))

    @classmethod
    def of(cls, *values: RationalLike):
        return cls(tuple(values))

    @classmethod
    def parse(cls, text: str):
        """Parse a comma-separated coordinate list such as "1,-1/2,3"."""
        parts = [p for p in text.replace(" ", "").split(",") if p != ""]
        if not parts:
            raise DomainError(f"Empty coordinate list: {text!r}")
        return cls(tuple(parts))

    @classmethod
    def zero(cls, rank: int):
        return cls((0,) * rank)

    @classmethod
    def unit(cls, rank: int, index: int):
        return cls(tuple(1 if i == index else 0 for i in range(rank)))

    @property
    def rank(self) -> int:
        return len(self.coords)

    def __len__(self) -> int:
        return len(self.coords)

    def __iter__(self) -> Iterator[Fraction]:
        return iter(self.coords)

    def __getitem__(self, index: int) -> Fraction:
        return self.coords[index]

    def _check_rank(self, other: "_RationalCoords"):
        if self.rank != other.rank:
            raise StructuralError(f"Rank mismatch: {self.rank} vs {other.rank}")

    def __add__(self, other):
        self._check_rank(other)
        return type(self)(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other):
        self._check_rank(other)
        return type(self)(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self):
        return type(self)(tuple(-a for a in self.coords))

    def scale(self, factor: RationalLike):
        f = to_rational(factor)
        return type(self)(tuple(f * a for a in self.coords))

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coords)

    def integers(self) -> Tuple[int, ...]:
        if not self.is_integral():
            raise DomainError(f"Coordinates are not integral: {self}")
        return tuple(c.numerator for c in self.coords)

    def primitive(self):
        """Canonical primitive representative of the ray through this point."""
        return type(self)(canonical_primitive(self))

    def __str__(self) -> str:
        return ",".join(format_rational(c) for c in self.coords)


class RationalVector(_RationalCoords):
    """A point of V (divisor classes, points of H^2 at rational arguments)."""
    pass


class RationalCovector(_RationalCoords):
    """A linear functional on V (curve classes, the functional xi)."""

    def __call__(self, v: "RationalVector") -> Fraction:
        return pair(self, v)


def pair(ell: RationalCovector, v: RationalVector) -> Fraction:
    """Evaluate the covector on the vector: sum of ell_i * v_i."""
    if len(ell) != len(v):
        raise StructuralError(f"Cannot pair covector of rank {len(ell)} with vector of rank {len(v)}")
    return sum((a * b for a, b in zip(ell, v)), Fraction(0))


def canonical_primitive(v: Sequence[RationalLike]) -> Tuple[int, ...]:
    """
    Canonical primitive integer form of a nonzero vector.

    Clears denominators and divides by the gcd of the numerators. Only positive
    scaling is applied, so the sign pattern is preserved.
    """
    values = [to_rational(c) for c in v]
    if all(c == 0 for c in values):
        raise DomainError("Zero vector has no canonical primitive form")
    denominator = reduce(lambda a, b: a * b // gcd(a, b), (c.denominator for c in values), 1)
    scaled = [c.numerator * (denominator // c.denominator) for c in values]
    g = reduce(gcd, (abs(x) for x in scaled))
    return tuple(x // g for x in scaled)


# ---------------------------------------------------------------------------
# Integer tuple helpers (hot paths of the cone engine)
# ---------------------------------------------------------------------------

def dot(a: Sequence[int], b: Sequence[int]) -> int:
    return sum(x * y for x, y in zip(a, b))


def primitive_ints(v: Sequence[int]) -> Tuple[int, ...]:
    g = reduce(gcd, (abs(x) for x in v), 0)
    if g <= 1:
        return tuple(v)
    return tuple(x // g for x in v)


# ---------------------------------------------------------------------------
# Rational row reduction
# ---------------------------------------------------------------------------

def row_reduce(rows: Sequence[Sequence[RationalLike]]) -> Tuple[List[List[Fraction]], List[int]]:
    """Reduced row echelon form. Returns the nonzero rows and the pivot columns."""
    m = [[to_rational(x) for x in r] for r in rows]
    if not m:
        return [], []
    n_rows, n_cols = len(m), len(m[0])
    pivots: List[int] = []
    r = 0
    for c in range(n_cols):
        p = next((i for i in range(r, n_rows) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(n_rows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == n_rows:
            break
    return m[:r], pivots


def matrix_rank(rows: Sequence[Sequence[RationalLike]]) -> int:
    return len(row_reduce(rows)[1])


def solve_combination(generators: Sequence[Sequence[RationalLike]],
                      target: Sequence[RationalLike]) -> Optional[List[Fraction]]:
    """
    Coefficients c with sum c_i * g_i = target, or None if target is not in the span.
    The generators must be linearly independent.
    """
    if not generators:
        return [] if all(to_rational(t) == 0 for t in target) else None
    k = len(generators)
    augmented = [[g[j] for g in generators] + [target[j]] for j in range(len(target))]
    reduced, pivots = row_reduce(augmented)
    if k in pivots:
        return None
    coefficients = [Fraction(0)] * k
    for row, col in zip(reduced, pivots):
        coefficients[col] = row[k]
    return coefficients


def project_out(v: Sequence[RationalLike], basis: Sequence[Sequence[int]]) -> List[Fraction]:
    """Orthogonal (standard inner product) projection of v onto the complement of span(basis)."""
    values = [to_rational(x) for x in v]
    if not basis:
        return values
    gram = [[Fraction(dot(a, b)) for b in basis] + [sum((x * y for x, y in zip(a, values)), Fraction(0))]
            for a in basis]
    reduced, pivots = row_reduce(gram)
    k = len(basis)
    coefficients = [Fraction(0)] * k
    for row, col in zip(reduced, pivots):
        if col < k:
            coefficients[col] = row[k]
    return [x - sum((c * b[j] for c, b in zip(coefficients, basis)), Fraction(0)) for j, x in enumerate(values)]


# ---------------------------------------------------------------------------
# Integer matrices
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IntMatrix:
    """A square matrix with exact integer entries, acting on column vectors."""
    rows: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(self._as_int(x) for x in r) for r in self.rows)
        if any(len(r) != len(rows) for r in rows):
            raise StructuralError(f"Matrix is not square: {len(rows)} rows of lengths {[len(r) for r in rows]}")
        object.__setattr__(self, "rows", rows)

    @staticmethod
    def _as_int(x) -> int:
        if isinstance(x, bool):
            raise DomainError("Boolean matrix entry")
        if isinstance(x, int):
            return x
        q = to_rational(x)
        if q.denominator != 1:
            raise DomainError(f"Matrix entry {q} is not an integer")
        return q.numerator

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n)))

    @property
    def size(self) -> int:
        return len(self.rows)

    def apply(self, v: RationalVector) -> RationalVector:
        if len(v) != self.size:
            raise StructuralError(f"Cannot apply {self.size}x{self.size} matrix to vector of rank {len(v)}")
        return RationalVector(tuple(sum((a * x for a, x in zip(row, v)), Fraction(0)) for row in self.rows))

    def apply_ints(self, v: Sequence[int]) -> Tuple[int, ...]:
        return tuple(dot(row, v) for row in self.rows)

    def pull_back(self, f: RationalCovector) -> RationalCovector:
        """The covector x -> f(Mx)."""
        if len(f) != self.size:
            raise StructuralError(f"Cannot pull back covector of rank {len(f)} along {self.size}x{self.size} matrix")
        n = self.size
        return RationalCovector(tuple(sum((f[i] * self.rows[i][j] for i in range(n)), Fraction(0))
                                      for j in range(n)))

    def pull_back_ints(self, f: Sequence[int]) -> Tuple[int, ...]:
        n = self.size
        return tuple(sum(f[i] * self.rows[i][j] for i in range(n)) for j in range(n))

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.size != other.size:
            raise StructuralError(f"Cannot multiply {self.size}x{self.size} by {other.size}x{other.size}")
        columns = list(zip(*other.rows))
        return IntMatrix(tuple(tuple(dot(row, col) for col in columns) for row in self.rows))

    def transpose(self) -> "IntMatrix":
        return IntMatrix(tuple(zip(*self.rows)))

    def power(self, k: int) -> "IntMatrix":
        if k < 0:
            return self.inverse().power(-k)
        result = IntMatrix.identity(self.size)
        base = self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def is_identity(self) -> bool:
        return all(x == (1 if i == j else 0) for i, r in enumerate(self.rows) for j, x in enumerate(r))

    def det(self) -> int:
        """Exact determinant by fraction-free (Bareiss) elimination."""
        n = self.size
        if n == 0:
            return 1
        m = [list(r) for r in self.rows]
        sign = 1
        prev = 1
        for k in range(n - 1):
            if m[k][k] == 0:
                swap = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
                if swap is None:
                    return 0
                m[k], m[swap] = m[swap], m[k]
                sign = -sign
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            prev = m[k][k]
        return sign * m[n - 1][n - 1]

    def inverse(self) -> "IntMatrix":
        """Inverse of a unimodular matrix. Raises DomainError if it is not integral."""
        n = self.size
        augmented = [list(r) + [1 if i == j else 0 for j in range(n)] for i, r in enumerate(self.rows)]
        reduced, pivots = row_reduce(augmented)
        if pivots[:n] != list(range(n)) or len(reduced) < n:
            raise DomainError("Matrix is singular")
        inverse_rows = [row[n:] for row in reduced]
        if any(x.denominator != 1 for r in inverse_rows for x in r):
            raise DomainError("Matrix inverse is not integral (determinant is not +-1)")
        return IntMatrix(tuple(tuple(x.numerator for x in r) for r in inverse_rows))

    def __str__(self) -> str:
        return "[" + "; ".join(" ".join(str(x) for x in r) for r in self.rows) + "]"


def mat_identity(n: int) -> IntMatrix:
    return IntMatrix.identity(n)


def mat_apply(m: IntMatrix, v: RationalVector) -> RationalVector:
    return m.apply(v)


def mat_mul(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    return a @ b


def mat_det(m: IntMatrix) -> int:
    return m.det()
