"""
Integer relation detection by LLL on scaled lattices, at mpmath precision.
"""
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import mpmath

from gwb.config import DEFAULT_SETTINGS, Settings
from gwb.errors import PrecisionTooLow, PreconditionViolated
from gwb.lattice import LatticeBasis, lll_reduce, rational_rank
from gwb.numbers import format_rat

log = logging.getLogger(__name__)

FLOAT_DIGITS = 15


@dataclass(frozen=True)
class RelationCandidate:
    """
    An integer vector m with |sum m_i x_i| = residual. For multiplicative
    relations, `constant` is the c with prod y_i^m_i = c.
    """
    coefficients: Tuple[int, ...]
    residual: float
    verified: bool
    scale_digits: int = 0
    constant: Optional[complex] = None

    def to_json(self) -> dict:
        data = {'coefficients': list(self.coefficients),
                'residual': self.residual, 'verified': self.verified,
                'scale_digits': self.scale_digits}
        if self.constant is not None:
            data['constant'] = [repr(self.constant.real), repr(self.constant.imag)]
        return data


def two_pi() -> mpmath.mpf:
    return 2 * mpmath.mp.pi


def to_mp(value) -> mpmath.mpc:
    if isinstance(value, str):
        return mpmath.mpc(mpmath.mpmathify(value))
    if isinstance(value, (list, tuple)):
        return mpmath.mpc(mpmath.mpf(value[0]), mpmath.mpf(value[1]))
    return mpmath.mpc(value)


def _digits_of(value, settings: Settings) -> int:
    """
    Significant decimal digits carried by an input value. Exact values and
    mpmath values are trusted to the working precision.
    """
    if isinstance(value, (float, complex)):
        return FLOAT_DIGITS
    if isinstance(value, str):
        mantissa = value.lower().split('e')[0]
        return len([c for c in mantissa if c.isdigit()])
    if isinstance(value, (list, tuple)):
        return min(_digits_of(v, settings) for v in value)
    return settings.precision


def _normalize(vector: Sequence[int]) -> Tuple[int, ...]:
    lead = next((v for v in vector if v != 0), 0)
    return tuple(-v for v in vector) if lead < 0 else tuple(vector)


def _scale_digits(tol: float) -> int:
    if tol <= 0:
        raise PreconditionViolated(f"Tolerance must be positive, got {tol}.")
    return max(1, math.ceil(-math.log10(tol)))


def simultaneous_relation(rows: Sequence[Sequence], bound: int, tol: float,
                          periods: bool = False,
                          available: Optional[int] = None,
                          settings: Settings = DEFAULT_SETTINGS) \
        -> Optional[RelationCandidate]:
    """
    Looks for one integer vector m annihilating several data rows at once.

    Keyword arguments:
    rows -- data rows of equal length n; entries real or complex numbers (or
            decimal strings).
    bound -- maximum |m_i|.
    tol -- residual threshold per row.
    periods -- when True, each row may additionally be shifted by an integer
               multiple of 2*pi*i, i.e. m is sought with
               sum m_i x_ji in 2*pi*i*Z for every row j.
    available -- significant digits of the data, when they were derived
                 from inputs of known precision.

    Returns:
    The shortest verified candidate, or None when no relation exists at this
    bound, tolerance and precision.
    """
    if not rows:
        return None
    n = len(rows[0])
    if any(len(r) != n for r in rows):
        raise PreconditionViolated("All data rows must have the same length.")
    digits = _scale_digits(tol)
    if available is None:
        available = min(_digits_of(v, settings) for r in rows for v in r)
    if digits > available:
        raise PrecisionTooLow(
            f"A tolerance of {tol} needs {digits} digits but the inputs carry "
            f"{available}.", digits=available, required=digits)
    with mpmath.workdps(max(settings.precision, digits + 10)):
        data = [[to_mp(v) for v in r] for r in rows]
        scale = mpmath.mpf(10) ** digits
        k = len(data) if periods else 0
        width = n + k
        basis = []
        for i in range(n):
            row = [int(i == j) for j in range(width)]
            for r in data:
                row.append(int(mpmath.nint(scale * r[i].real)))
                row.append(int(mpmath.nint(scale * r[i].imag)))
            basis.append(row)
        for j in range(k):
            row = [int(n + j == c) for c in range(width)]
            for jj in range(len(data)):
                row.append(0)
                row.append(int(mpmath.nint(scale * two_pi())) if jj == j else 0)
            basis.append(row)
        # Drop all-zero data columns; they only inflate the lattice.
        keep = [c for c in range(len(basis[0]))
                if c < width or any(b[c] for b in basis)]
        basis = [[b[c] for c in keep] for b in basis]
        reduced = lll_reduce(LatticeBasis(tuple(tuple(b) for b in basis)))

        best = None
        for row in reduced.rows:
            m = row[:n]
            if not any(m) or max(abs(v) for v in m) > bound:
                continue
            shifts = row[n:width]
            residual = mpmath.mpf(0)
            for j, r in enumerate(data):
                total = mpmath.fsum(m_i * x for m_i, x in zip(m, r))
                if periods:
                    total += shifts[j] * two_pi() * 1j
                residual = max(residual, abs(total))
            if residual >= tol:
                continue
            key = (max(abs(v) for v in m), sum(abs(v) for v in m), residual)
            if best is None or key < best[0]:
                best = (key, _normalize(m), residual)
    if best is None:
        log.debug(f"No relation with |m| <= {bound} at {digits} digits.")
        return None
    _, m, residual = best
    return RelationCandidate(coefficients=m, residual=float(residual),
                             verified=True, scale_digits=digits)


def integer_relation(xs: Sequence, bound: int, tol: float,
                     settings: Settings = DEFAULT_SETTINGS) \
        -> Optional[RelationCandidate]:
    """
    Finds m != 0 with |m_i| <= bound and |sum m_i x_i| < tol by LLL on the
    lattice scaled by 10^ceil(-log10 tol). Complex inputs constrain both parts.
    """
    return simultaneous_relation([list(xs)], bound, tol, settings=settings)


def multiplicative_relation(ys: Sequence, bound: int, tol: float,
                            settings: Settings = DEFAULT_SETTINGS) \
        -> Optional[RelationCandidate]:
    """
    Finds m with prod y_i^m_i = 1 within tol: an integer relation among the
    principal logarithms modulo 2*pi*i, confirmed by direct evaluation.
    """
    with mpmath.workdps(settings.precision):
        values = [to_mp(y) for y in ys]
        if any(abs(y) == 0 for y in values):
            raise PreconditionViolated("Multiplicative relations need nonzero inputs.")
        logs = [mpmath.log(y) for y in values]
    candidate = simultaneous_relation(
        [logs], bound, tol, periods=True,
        available=min(_digits_of(y, settings) for y in ys), settings=settings)
    if candidate is None:
        return None
    with mpmath.workdps(settings.precision):
        total = mpmath.mpc(1)
        for m, y in zip(candidate.coefficients, values):
            total *= y ** m
        residual = abs(total - 1)
    if residual >= tol:
        log.debug(f"Candidate {candidate.coefficients} failed direct evaluation "
                  f"with residual {mpmath.nstr(residual, 5)}.")
        return None
    return RelationCandidate(coefficients=candidate.coefficients,
                             residual=float(residual), verified=True,
                             scale_digits=candidate.scale_digits, constant=1 + 0j)


def qlin_dim(xs: Sequence, c_basis: Sequence, bound: int, tol: float,
             settings: Settings = DEFAULT_SETTINGS) -> int:
    """
    Estimates the Q-linear dimension of xs modulo the span of c_basis: n minus
    the rank of the relations found at this bound. The estimate is an upper
    bound; it never certifies independence.
    """
    xs, c_basis = list(xs), list(c_basis)
    n = len(xs)
    if n == 0:
        return 0
    relations = relation_rows(xs + c_basis, bound, tol, settings)
    parts = [r[:n] for r in relations if any(r[:n])]
    return n - (rational_rank(parts) if parts else 0)


def relation_rows(values: Sequence, bound: int, tol: float,
                   settings: Settings) -> List[Tuple[int, ...]]:
    """
    All reduced lattice rows that are verified relations among `values`.
    """
    digits = _scale_digits(tol)
    available = min(_digits_of(v, settings) for v in values)
    if digits > available:
        raise PrecisionTooLow(
            f"A tolerance of {tol} needs {digits} digits but the inputs carry "
            f"{available}.", digits=available, required=digits)
    n = len(values)
    with mpmath.workdps(max(settings.precision, digits + 10)):
        data = [to_mp(v) for v in values]
        scale = mpmath.mpf(10) ** digits
        basis = []
        for i in range(n):
            row = [int(i == j) for j in range(n)]
            row.append(int(mpmath.nint(scale * data[i].real)))
            row.append(int(mpmath.nint(scale * data[i].imag)))
            basis.append(row)
        reduced = lll_reduce(LatticeBasis(tuple(tuple(b) for b in basis)))
        found = []
        for row in reduced.rows:
            m = row[:n]
            if not any(m) or max(abs(v) for v in m) > bound:
                continue
            residual = abs(mpmath.fsum(m_i * x for m_i, x in zip(m, data)))
            if residual < tol:
                found.append(_normalize(m))
    return found


def decompose_over_basis(z, qmax: int, tol: float,
                         settings: Settings = DEFAULT_SETTINGS) \
        -> Optional[Tuple[Fraction, Fraction]]:
    """
    Writes z as p/q + (r/s) 2 pi i with denominators at most qmax.

    Returns:
    The pair (p/q, r/s) when the error is below tol, otherwise None.
    """
    if qmax < 1:
        raise PreconditionViolated(f"qmax must be at least 1, got {qmax}.")
    with mpmath.workdps(settings.precision):
        value = to_mp(z)
        alpha, beta = best_rationals(value, qmax)
        error = abs(value - (fraction_mpf(alpha) + fraction_mpf(beta) * two_pi() * 1j))
    if error < tol:
        return alpha, beta
    log.debug(f"Best decomposition ({format_rat(alpha)}, {format_rat(beta)}) "
              f"misses by {mpmath.nstr(error, 5)}.")
    return None


def best_rationals(value: mpmath.mpc, qmax: int) -> Tuple[Fraction, Fraction]:
    """
    Continued-fraction approximations of Re(value) and Im(value)/(2 pi) with
    denominators at most qmax. Must be called inside an mpmath precision
    context.
    """
    alpha = mpf_to_fraction(value.real).limit_denominator(qmax)
    beta = mpf_to_fraction(value.imag / two_pi()).limit_denominator(qmax)
    return alpha, beta


def mpf_to_fraction(x) -> Fraction:
    """
    The exact binary value of an mpf. The stored mantissa is unsigned, so the
    sign is taken from the value itself.
    """
    x = mpmath.mpf(x)
    if not mpmath.isfinite(x):
        raise PreconditionViolated(f"Cannot convert {x} to a fraction.")
    man, exp = x.man_exp
    man = -abs(int(man)) if x < 0 else abs(int(man))
    if exp >= 0:
        return Fraction(man * 2 ** int(exp))
    return Fraction(man, 2 ** int(-exp))


def fraction_mpf(q: Fraction) -> mpmath.mpf:
    return mpmath.mpf(q.numerator) / q.denominator
