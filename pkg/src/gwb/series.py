"""
A truncated model of the exponential differential equation Dy = y Dx:
power series in t over Q(i) (or complex doubles) with D = d/dt.

All identities are checked through order N - 1, where N is the truncation
order. The derivative of a series of order N keeps its length; its last
coefficient is padding and is always 0.
"""
import logging
from dataclasses import dataclass
from itertools import product
from math import comb
from typing import Dict, Optional, Sequence, Tuple

from sympy import QQ_I
from sympy.polys.matrices import DomainMatrix

from gwb.config import DEFAULT_SETTINGS, Settings
from gwb.errors import (LengthMismatch, NonzeroConstantTerm, ParseError,
                        PreconditionViolated, ResolutionTooLow, ZeroConstant)
from gwb.geometry import IntMat, g_ring
from gwb.lattice import rational_kernel
from gwb.numbers import (as_gauss, format_complex, format_gauss, gauss_parts,
                         parse_complex, parse_gauss, to_complex)
from gwb.polynomials import poly_to_json

log = logging.getLogger(__name__)

EXACT = 'exact'
NUMERIC = 'numeric'

# Relative tolerance for coefficient comparisons in numeric mode.
NUMERIC_TOL = 1e-9

NO_RELATION_AT_BOUND = 'NoRelationAtBound'
RELATION_FOUND = 'RelationFound'
SUBGROUP_FOUND = 'SubgroupFound'


@dataclass(frozen=True)
class PowerSeries:
    """
    c_0 + c_1 t + ... + c_N t^N. Exact series hold Gaussian rationals,
    numeric ones complex doubles.
    """
    coeffs: Tuple
    mode: str = EXACT

    def __post_init__(self):
        if self.mode not in (EXACT, NUMERIC):
            raise PreconditionViolated(f"Unknown series mode {self.mode!r}.")
        if not self.coeffs:
            raise PreconditionViolated("A series needs at least one coefficient.")
        convert = as_gauss if self.mode == EXACT else to_complex
        object.__setattr__(self, 'coeffs', tuple(convert(c) for c in self.coeffs))

    @property
    def N(self) -> int:
        return len(self.coeffs) - 1

    @property
    def _zero(self):
        return QQ_I.zero if self.mode == EXACT else 0j

    @classmethod
    def zero(cls, N: int, mode: str = EXACT) -> 'PowerSeries':
        return cls((0,) * (N + 1), mode)

    @classmethod
    def constant(cls, c, N: int, mode: str = EXACT) -> 'PowerSeries':
        return cls((c,) + (0,) * N, mode)

    @classmethod
    def monomial(cls, k: int, N: int, c=1, mode: str = EXACT) -> 'PowerSeries':
        coeffs = [0] * (N + 1)
        if k <= N:
            coeffs[k] = c
        return cls(tuple(coeffs), mode)

    @classmethod
    def from_terms(cls, terms: Dict[int, object], N: int,
                   mode: str = EXACT) -> 'PowerSeries':
        coeffs = [0] * (N + 1)
        for k, c in terms.items():
            if k <= N:
                coeffs[k] = c
        return cls(tuple(coeffs), mode)

    def __getitem__(self, k: int):
        return self.coeffs[k]

    def _check(self, other: 'PowerSeries'):
        if other.N != self.N:
            raise LengthMismatch(
                f"Series of orders {self.N} and {other.N} cannot be combined.")
        if other.mode != self.mode:
            raise PreconditionViolated("Cannot mix exact and numeric series.")

    def _scalar(self, c):
        return as_gauss(c) if self.mode == EXACT else to_complex(c)

    def __add__(self, other: 'PowerSeries') -> 'PowerSeries':
        self._check(other)
        return PowerSeries(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)),
                           self.mode)

    def __neg__(self) -> 'PowerSeries':
        return PowerSeries(tuple(-a for a in self.coeffs), self.mode)

    def __sub__(self, other: 'PowerSeries') -> 'PowerSeries':
        return self + (-other)

    def scale(self, c) -> 'PowerSeries':
        c = self._scalar(c)
        return PowerSeries(tuple(c * a for a in self.coeffs), self.mode)

    def __mul__(self, other) -> 'PowerSeries':
        if not isinstance(other, PowerSeries):
            return self.scale(other)
        self._check(other)
        a, b = self.coeffs, other.coeffs
        coeffs = []
        for k in range(self.N + 1):
            total = self._zero
            for j in range(k + 1):
                if a[j] and b[k - j]:
                    total += a[j] * b[k - j]
            coeffs.append(total)
        return PowerSeries(tuple(coeffs), self.mode)

    def __rmul__(self, other) -> 'PowerSeries':
        return self.scale(other)

    def truncate(self, N: int) -> 'PowerSeries':
        if N > self.N:
            raise LengthMismatch(f"Cannot extend a series of order {self.N} to {N}.")
        return PowerSeries(self.coeffs[:N + 1], self.mode)

    def to_json(self) -> dict:
        if self.mode == EXACT:
            return {'N': self.N, 'coeffs': [format_gauss(c) for c in self.coeffs]}
        return {'N': self.N, 'mode': NUMERIC,
                'coeffs': [format_complex(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, data) -> 'PowerSeries':
        if not isinstance(data, dict) or 'coeffs' not in data:
            raise ParseError("A series needs a 'coeffs' list.")
        mode = data.get('mode', EXACT)
        parse = parse_gauss if mode == EXACT else parse_complex
        coeffs = [parse(c) for c in data['coeffs']]
        N = data.get('N', len(coeffs) - 1)
        if N != len(coeffs) - 1:
            raise LengthMismatch(
                f"'N' is {N} but {len(coeffs)} coefficients were given.")
        return cls(tuple(coeffs), mode)


@dataclass(frozen=True)
class DiffPoint:
    x: PowerSeries
    y: PowerSeries

    def to_json(self) -> dict:
        return {'x': self.x.to_json(), 'y': self.y.to_json()}

    @classmethod
    def from_json(cls, data) -> 'DiffPoint':
        if not isinstance(data, dict) or 'x' not in data or 'y' not in data:
            raise ParseError("A point needs series 'x' and 'y'.")
        return cls(PowerSeries.from_json(data['x']), PowerSeries.from_json(data['y']))


def d(s: PowerSeries) -> PowerSeries:
    """
    Termwise derivative. The result keeps the length of s; its coefficient of
    t^N is 0 padding.
    """
    coeffs = [(k + 1) * s.coeffs[k + 1] for k in range(s.N)]
    return PowerSeries(tuple(coeffs) + (s._zero,), s.mode)


def exp_series(x: PowerSeries) -> PowerSeries:
    """
    y = exp(x) for x with zero constant term, by k c_k = sum_j j a_j c_{k-j}.
    """
    if x.coeffs[0]:
        raise NonzeroConstantTerm("exp_series needs x(0) = 0.")
    a = x.coeffs
    c = [x._scalar(1)]
    for k in range(1, x.N + 1):
        total = x._zero
        for j in range(1, k + 1):
            if a[j]:
                total += j * a[j] * c[k - j]
        c.append(total / x._scalar(k))
    return PowerSeries(tuple(c), x.mode)


def _close(a, b, mode: str) -> bool:
    if mode == EXACT:
        return a == b
    return abs(a - b) <= NUMERIC_TOL * max(1.0, abs(a), abs(b))


def in_gamma_de(p: DiffPoint, N: int) -> bool:
    """
    True iff Dy and y Dx agree through order N - 1 and y(0) != 0.
    """
    if p.x.N < N or p.y.N < N:
        raise LengthMismatch(
            f"Checking through order {N - 1} needs series of order {N}, got "
            f"{p.x.N} and {p.y.N}.")
    if p.x.mode != p.y.mode:
        raise PreconditionViolated("Cannot mix exact and numeric series.")
    if not p.y.coeffs[0]:
        return False
    x, y = p.x.truncate(N), p.y.truncate(N)
    left, right = d(y), y * d(x)
    for k in range(N):
        if not _close(left[k], right[k], x.mode):
            log.debug(f"Dy and y Dx differ at order {k}.")
            return False
    return True


def make_gamma_point(x: PowerSeries, c) -> DiffPoint:
    """
    The solution (x, c exp(x)) of Dy = y Dx.
    """
    c = x._scalar(c)
    if not c:
        raise ZeroConstant("The constant c must be nonzero.")
    return DiffPoint(x, exp_series(x).scale(c))


def gamma_add(p: DiffPoint, q: DiffPoint) -> DiffPoint:
    """
    The group law of G: (x1 + x2, y1 y2).
    """
    return DiffPoint(p.x + q.x, p.y * q.y)


@dataclass(frozen=True)
class EmpiricalVerdict:
    """
    Outcome of the bounded Ax-Schanuel test. `kernel` lists every polynomial
    of degree <= D vanishing on the points; `relations` repeats it only for
    RelationFound, where the kernel is large enough to force td <= n.
    `checked_order` is the order through which series identities hold.
    """
    status: str
    degree_bound: int
    checked_order: int
    subgroup: Optional[IntMat] = None
    relations: Tuple = ()
    kernel: Tuple = ()
    rank: Optional[int] = None
    hilbert_bound: Optional[int] = None

    @property
    def is_bounded_evidence(self) -> bool:
        return self.status == NO_RELATION_AT_BOUND

    def to_json(self) -> dict:
        data = {'status': self.status, 'degree_bound': self.degree_bound,
                'checked_order': self.checked_order}
        if self.subgroup is not None:
            data['M'] = self.subgroup.to_json()
        if self.rank is not None:
            data['rank'] = self.rank
            data['hilbert_bound'] = self.hilbert_bound
            data['evaluation_kernel'] = [poly_to_json(p) for p in self.kernel]
        if self.status == RELATION_FOUND:
            data['relations'] = [poly_to_json(p) for p in self.relations]
        return data


def _monomials(nvars: int, degree: int) -> Sequence[Tuple[int, ...]]:
    exps = [e for e in product(range(degree + 1), repeat=nvars) if sum(e) <= degree]
    return sorted(exps, key=lambda e: (sum(e), tuple(-v for v in e)))


def _linear_subgroup(points: Sequence[DiffPoint]) -> Tuple[Tuple[int, ...], ...]:
    """
    Integer m with sum m_i x_i constant: the rational kernel of the realified
    coefficients of the x's at orders >= 1.
    """
    rows = []
    for k in range(1, points[0].x.N + 1):
        parts = [gauss_parts(p.x[k]) for p in points]
        rows.append([re for re, _ in parts])
        rows.append([im for _, im in parts])
    return rational_kernel(rows, ncols=len(points))


def empirical_ax_schanuel(points: Sequence[DiffPoint], degree_bound: int, N: int,
                          settings: Settings = DEFAULT_SETTINGS) -> EmpiricalVerdict:
    """
    Tests the Ax-Schanuel dichotomy on solutions of Dy = y Dx: either the
    x's are Q-linearly dependent modulo constants, or td(x, y/C) >= n + 1.

    Keyword arguments:
    points -- n exact points of Gamma_DE.
    degree_bound -- D, the largest total degree of polynomial relations.
    N -- truncation order; at least 3 (D + 1) n.

    Returns:
    SubgroupFound(M) for linear relations; otherwise RelationFound when the
    evaluation rank of monomials of degree <= D drops below the number of
    such monomials in n + 1 variables (which forces td <= n), else
    NoRelationAtBound. The evaluation kernel is reported either way; under
    NoRelationAtBound it holds relations that do not bound td, such as
    algebraic relations among the x's alone.
    """
    n = len(points)
    if n == 0:
        raise PreconditionViolated("At least one point is needed.")
    required = 3 * (degree_bound + 1) * n
    if N < required:
        raise ResolutionTooLow(
            f"Degree {degree_bound} with {n} points needs N >= {required}.",
            required=required)
    for p in points:
        if p.x.mode != EXACT or p.y.mode != EXACT:
            raise PreconditionViolated("The Ax-Schanuel test needs exact series.")
        if not in_gamma_de(p, N):
            raise PreconditionViolated("Every point must satisfy Dy = y Dx.")
    points = [DiffPoint(p.x.truncate(N), p.y.truncate(N)) for p in points]

    kernel = _linear_subgroup(points)
    if kernel:
        M = IntMat(kernel)
        log.info(f"Linear relations {kernel} among the x's modulo constants.")
        return EmpiricalVerdict(status=SUBGROUP_FOUND, degree_bound=degree_bound,
                                checked_order=N - 1, subgroup=M)

    coordinates = [p.x for p in points] + [p.y for p in points]
    monomials = _monomials(2 * n, degree_bound)
    powers = {}

    def power(i, e):
        if (i, e) not in powers:
            powers[(i, e)] = PowerSeries.constant(1, N) if e == 0 \
                else power(i, e - 1) * coordinates[i]
        return powers[(i, e)]

    columns = []
    for monom in monomials:
        series = PowerSeries.constant(1, N)
        for i, e in enumerate(monom):
            if e:
                series = series * power(i, e)
        columns.append(series.coeffs)
    matrix = DomainMatrix([[col[k] for col in columns] for k in range(N + 1)],
                          (N + 1, len(monomials)), QQ_I)
    rank = matrix.rank()
    hilbert = comb(n + 1 + degree_bound, degree_bound)
    ring = g_ring(n)
    relations = []
    if rank < len(monomials):
        for row in matrix.nullspace().to_list():
            poly = ring.from_dict({m: c for m, c in zip(monomials, row) if c})
            relations.append(poly.monic())
    status = RELATION_FOUND if rank < hilbert else NO_RELATION_AT_BOUND
    log.info(f"Evaluation rank {rank} of {len(monomials)} monomials against "
             f"{hilbert}; kernel of size {len(relations)}.")
    kernel = tuple(relations)
    return EmpiricalVerdict(status=status, degree_bound=degree_bound,
                            checked_order=N - 1,
                            relations=kernel if status == RELATION_FOUND else (),
                            kernel=kernel, rank=rank, hilbert_bound=hilbert)
