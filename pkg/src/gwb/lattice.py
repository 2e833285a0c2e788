"""
Integer lattices: LLL reduction, Smith invariants, rational row spaces and
kernels.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import List, Optional, Sequence, Tuple

from sympy import Matrix, Rational
from sympy.matrices.normalforms import invariant_factors
from sympy.polys.domains import QQ, ZZ
from sympy.polys.matrices import DomainMatrix

from gwb.errors import DependentRows, PreconditionViolated
from gwb.numbers import from_sympy_rational, primitive_integer_vector

log = logging.getLogger(__name__)

IntVector = Tuple[int, ...]


@dataclass(frozen=True)
class LatticeBasis:
    """
    Rows spanning an integer lattice. `transform`, when set, is the unimodular
    matrix taking the basis the lattice was reduced from to `rows`.
    """
    rows: Tuple[IntVector, ...]
    transform: Optional[Tuple[IntVector, ...]] = None

    @property
    def dimension(self) -> int:
        return len(self.rows[0]) if self.rows else 0

    @property
    def rank(self) -> int:
        return len(self.rows)


def _int_rows(rows) -> List[List[int]]:
    return [[int(v) for v in row] for row in rows]


def rational_rank(rows: Sequence[Sequence]) -> int:
    rows = [list(r) for r in rows]
    if not rows or not rows[0]:
        return 0
    return Matrix(rows).rank()


def lll_reduce(B: LatticeBasis, delta: Fraction = Fraction(3, 4)) -> LatticeBasis:
    """
    LLL-reduces a basis with parameter delta.

    Keyword arguments:
    B -- the basis; its rows must be linearly independent.
    delta -- Lovasz parameter in (1/4, 1).

    Returns:
    The reduced basis, with the unimodular transform recorded.
    """
    delta = Fraction(delta)
    if not Fraction(1, 4) < delta < 1:
        raise PreconditionViolated(f"LLL parameter {delta} is outside (1/4, 1).")
    rows = _int_rows(B.rows)
    if not rows:
        return LatticeBasis(rows=(), transform=())
    if rational_rank(rows) < len(rows):
        raise DependentRows(
            f"The {len(rows)} basis rows are linearly dependent.")
    dm = DomainMatrix([[ZZ(v) for v in row] for row in rows],
                      (len(rows), len(rows[0])), ZZ)
    reduced, transform = dm.lll_transform(
        delta=QQ(delta.numerator, delta.denominator))
    return LatticeBasis(
        rows=tuple(tuple(int(v) for v in row) for row in reduced.to_list()),
        transform=tuple(tuple(int(v) for v in row) for row in transform.to_list()))


def smith_invariants(rows: Sequence[Sequence[int]]) -> Tuple[int, ...]:
    """
    Nonzero invariant factors of the lattice spanned by integer rows.
    """
    rows = _int_rows(rows)
    if not rows or not rows[0]:
        return ()
    factors = invariant_factors(Matrix(rows), domain=ZZ)
    return tuple(abs(int(f)) for f in factors if int(f) != 0)


def lattice_rank(rows: Sequence[Sequence[int]]) -> int:
    return len(smith_invariants(rows))


def lattice_contains(rows: Sequence[Sequence[int]], v: Sequence[int]) -> bool:
    """
    Tests whether v lies in the Z-span of the rows: adjoining v must change
    neither the rank nor the product of the Smith invariants.
    """
    v = [int(x) for x in v]
    if not any(v):
        return True
    rows = _int_rows(rows)
    if not rows:
        return False
    before = smith_invariants(rows)
    after = smith_invariants(rows + [v])
    if len(after) != len(before):
        return False
    prod_before, prod_after = 1, 1
    for f in before:
        prod_before *= f
    for f in after:
        prod_after *= f
    return prod_before == prod_after


def scale_to_integers(rows: Sequence[Sequence[Fraction]]) -> Tuple[int, List[List[int]]]:
    """
    Multiplies rational rows by the least common denominator.

    Returns:
    The common denominator and the scaled integer rows.
    """
    lcm = 1
    for row in rows:
        for x in row:
            d = Fraction(x).denominator
            lcm = lcm * d // gcd(lcm, d)
    return lcm, [[int(Fraction(x) * lcm) for x in row] for row in rows]


def canonical_row_space(rows: Sequence[Sequence]) -> Tuple[IntVector, ...]:
    """
    Canonical representative of the rational row space: the reduced row
    echelon form with each row scaled to a primitive integer vector.
    """
    rows = [[_sympify_exact(x) for x in row] for row in rows]
    if not rows or not rows[0]:
        return ()
    rref, pivots = Matrix(rows).rref()
    canonical = []
    for i in range(len(pivots)):
        canonical.append(primitive_integer_vector(
            [from_sympy_rational(x) for x in rref.row(i)]))
    return tuple(canonical)


def rational_kernel(rows: Sequence[Sequence], ncols: Optional[int] = None) \
        -> Tuple[IntVector, ...]:
    """
    Integer vectors m spanning the rational solutions of rows . m = 0, in
    canonical form. Entries must be rational (ints, Fractions or sympy
    Rationals).
    """
    rows = [list(r) for r in rows]
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    if ncols == 0:
        return ()
    if not rows:
        return tuple(tuple(int(i == j) for j in range(ncols))
                     for i in range(ncols))
    matrix = Matrix([[_sympify_exact(x) for x in row] for row in rows])
    basis = matrix.nullspace()
    if not basis:
        return ()
    return canonical_row_space(
        [[from_sympy_rational(x) for x in v] for v in basis])


def _sympify_exact(x):
    if isinstance(x, (int, Fraction)):
        x = Fraction(x)
        return Rational(x.numerator, x.denominator)
    return x
