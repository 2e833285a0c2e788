"""
Freeness of subvarieties of G^n: V is additively free when no equation
sum m_i x_i = c holds on it, multiplicatively free when no equation
prod y_i^m_i = c does.
"""
import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import mpmath

from gwb.config import DEFAULT_SETTINGS, Settings
from gwb.errors import MaxRestartsExceeded, SamplingFailed, SingularLocusOnly
from gwb.geometry import GSubvariety
from gwb.groebner import normal_form
from gwb.lattice import rational_kernel
from gwb.numbers import GaussRat, format_gauss, gauss_parts
from gwb.relations import RelationCandidate, simultaneous_relation
from gwb.witness import sample_points

log = logging.getLogger(__name__)

FREE = 'Free'
NOT_FREE = 'NotFree'
FREE_UP_TO = 'FreeUpTo'
UNKNOWN = 'Unknown'

# Log data from double precision samples carry about this many digits.
SAMPLE_DIGITS = 15


@dataclass(frozen=True)
class FreenessVerdict:
    """
    NotFree carries (m, c) with the defining equation in V's ideal, which was
    confirmed exactly. FreeUpTo is evidence up to `bound` only; Unknown means
    a numeric candidate failed exact confirmation.
    """
    status: str
    kind: str
    m: Optional[Tuple[int, ...]] = None
    c: Optional[GaussRat] = None
    bound: Optional[int] = None
    candidate: Optional[RelationCandidate] = None

    @property
    def is_bounded_evidence(self) -> bool:
        return self.status in (FREE_UP_TO, UNKNOWN)

    def to_json(self) -> dict:
        data = {'status': self.status, 'kind': self.kind}
        if self.m is not None:
            data['m'] = list(self.m)
            data['c'] = format_gauss(self.c)
        if self.bound is not None:
            data['bound'] = self.bound
        if self.candidate is not None:
            data['candidate'] = self.candidate.to_json()
        return data


@dataclass(frozen=True)
class FreeReport:
    status: str
    additive: FreenessVerdict
    multiplicative: FreenessVerdict

    @property
    def is_bounded_evidence(self) -> bool:
        return self.status in (FREE_UP_TO, UNKNOWN)

    def to_json(self) -> dict:
        return {'status': self.status, 'additive': self.additive.to_json(),
                'multiplicative': self.multiplicative.to_json()}


def _constant_term(p):
    zero = (0,) * p.ring.ngens
    return dict(p.items()).get(zero, p.ring.domain.zero)


def is_additively_free(V: GSubvariety,
                       settings: Settings = DEFAULT_SETTINGS) -> FreenessVerdict:
    """
    Exact test: sum m_i x_i - c lies in the ideal iff the normal form of
    sum m_i x_i is the constant c. Normal forms are linear, so the m's are
    the rational kernel of the non-constant coefficients of NF(x_i).

    Returns:
    Free, or NotFree with the first canonical kernel vector m and its c.
    """
    forms = [normal_form(x, V.ideal, settings) for x in V.x]
    zero = (0,) * V.ring.ngens
    monomials = sorted({m for p in forms for m in p.keys() if m != zero})
    rows = []
    for monom in monomials:
        parts = [gauss_parts(dict(p.items()).get(monom, V.ring.domain.zero))
                 for p in forms]
        rows.append([re for re, _ in parts])
        rows.append([im for _, im in parts])
    kernel = rational_kernel(rows, ncols=V.n)
    if not kernel:
        return FreenessVerdict(status=FREE, kind='additive')
    m = kernel[0]
    c = V.ring.domain.zero
    for m_i, p in zip(m, forms):
        c += m_i * _constant_term(p)
    log.debug(f"Additive relation {m} = {format_gauss(c)} holds on V.")
    return FreenessVerdict(status=NOT_FREE, kind='additive', m=m, c=c)


def _binomial_constant(V: GSubvariety, m: Tuple[int, ...],
                       settings: Settings) -> Optional[GaussRat]:
    """
    The c with y^{m+} - c y^{m-} in the ideal, if there is one.
    """
    ring = V.ring
    positive, negative = ring.one, ring.one
    for y, e in zip(V.y, m):
        if e > 0:
            positive *= y ** e
        elif e < 0:
            negative *= y ** (-e)
    p = normal_form(positive, V.ideal, settings)
    q = normal_form(negative, V.ideal, settings)
    if not q or set(p.keys()) != set(q.keys()):
        return None
    c = p.LC / q.LC
    if p - q.mul_ground(c):
        return None
    return c


def is_multiplicatively_free(V: GSubvariety, bound: int, seed: int = 0,
                             settings: Settings = DEFAULT_SETTINGS) -> FreenessVerdict:
    """
    Two phases: integer relations among the log ratios of the y's at n + 2
    sample points, modulo 2 pi i, propose m; the binomial y^{m+} - c y^{m-}
    is then tested for membership, also for multiples k m within the bound.

    Keyword arguments:
    V -- the variety.
    bound -- largest |m_i| searched.
    seed -- seed of the sampling.

    Returns:
    NotFree with exact (m, c), FreeUpTo(bound), or Unknown.
    """
    try:
        points = sample_points(V, V.n + 2, seed, settings)
    except (MaxRestartsExceeded, SingularLocusOnly) as e:
        raise SamplingFailed(f"Could not sample V: {e}") from e
    tol = 1e3 * settings.tol
    with mpmath.workdps(settings.precision):
        logs = [[mpmath.log(mpmath.mpc(y)) for y in p.y] for p in points]
        rows = [[l - l0 for l, l0 in zip(row, logs[0])] for row in logs[1:]]
    candidate = simultaneous_relation(rows, bound, tol, periods=True,
                                      available=SAMPLE_DIGITS, settings=settings)
    if candidate is None:
        return FreenessVerdict(status=FREE_UP_TO, kind='multiplicative', bound=bound)
    m = candidate.coefficients
    for k in range(1, bound // max(abs(e) for e in m) + 1):
        multiple = tuple(k * e for e in m)
        c = _binomial_constant(V, multiple, settings)
        if c is not None:
            log.debug(f"Multiplicative relation {multiple} = {format_gauss(c)} "
                      f"confirmed.")
            return FreenessVerdict(status=NOT_FREE, kind='multiplicative',
                                   m=multiple, c=c)
    log.warning(f"Numeric relation {m} was not confirmed by ideal membership.")
    return FreenessVerdict(status=UNKNOWN, kind='multiplicative', bound=bound,
                           candidate=candidate)


def is_free(V: GSubvariety, bound: int, seed: int = 0,
            settings: Settings = DEFAULT_SETTINGS) -> FreeReport:
    """
    Free means both additively and multiplicatively free. The additive
    verdict is exact; the combined status is at best FreeUpTo(bound).
    """
    additive = is_additively_free(V, settings)
    multiplicative = is_multiplicatively_free(V, bound, seed, settings)
    if additive.status == NOT_FREE or multiplicative.status == NOT_FREE:
        status = NOT_FREE
    else:
        status = multiplicative.status
    return FreeReport(status=status, additive=additive,
                      multiplicative=multiplicative)
