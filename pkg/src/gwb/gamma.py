"""
Finitely presented Gamma-field configurations.

A presentation lists generator pairs g_k = (x_k, y_k), the polynomial relations
among their coordinates and a lattice of rational combinations of the pairs
declared to lie in Gamma. Divisibility of Gamma is approximated by
`denominator_bound`. On top of it live the predimension, bounded relative
Gamma-closedness, blurring by a subgroup H of Gm, Ax-Schanuel witnesses for
numeric points and the Ax-Schanuel pair check.
"""
import dataclasses
import logging
import re
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from math import gcd
from typing import List, Mapping, Optional, Sequence, Tuple

import mpmath
from more_itertools import unique_everseen

from gwb.config import DEFAULT_SETTINGS, Settings
from gwb.errors import (MalformedPresentation, NotPure, ParseError,
                        PrecisionTooLow, PreconditionViolated,
                        ToleranceUnachievable, UnsupportedHSpec,
                        VNotOverConstants)
from gwb.geometry import (GSubvariety, IntMat, SubgroupSpec, make_variety,
                          product_variety, variety_from_json, x_names,
                          y_names, g_ring)
from gwb.groebner import (IdealBasis, contains, eliminate, ideal,
                          ideal_dimension, is_unit_ideal, saturate_units)
from gwb.lattice import (lattice_contains, lattice_rank, rational_rank,
                         scale_to_integers)
from gwb.numbers import as_gauss, format_rat, parse_rat
from gwb.polynomials import poly_from_json, poly_ring, poly_to_json, transfer
from gwb.relations import relation_rows, to_mp
from gwb.rotundity import RotundityVerdict, is_strongly_rotund

log = logging.getLogger(__name__)

Vector = Tuple[Fraction, ...]

TRIVIAL = 'Trivial'
LATTICE_EXP = 'LatticeExp'
CONSTANTS_FIELD = 'ConstantsField'
FULL = 'Full'
HSPEC_KINDS = (TRIVIAL, LATTICE_EXP, CONSTANTS_FIELD, FULL)

TWO_PI_I = '2*pi*i'

CLOSED_UP_TO = 'ClosedUpTo'
NOT_CLOSED = 'NotClosed'

_LABEL_PATTERN = re.compile(r'^[A-Za-z][A-Za-z0-9]*$')


def _rational_label(label: str) -> Fraction:
    try:
        value = parse_rat(label)
    except ParseError as e:
        raise UnsupportedHSpec(
            f"Basis label {label!r} is neither '{TWO_PI_I}' nor a rational "
            f"number.") from e
    if value == 0:
        raise UnsupportedHSpec("The basis label 0 generates the trivial group.")
    return value


def label_value(label: str) -> mpmath.mpc:
    """
    The complex constant behind a basis label, at the current mpmath
    precision.
    """
    if label == TWO_PI_I:
        return mpmath.mpc(0, 2 * mpmath.mp.pi)
    q = _rational_label(label)
    return mpmath.mpc(mpmath.mpf(q.numerator) / q.denominator)


@dataclass(frozen=True)
class HSpec:
    """
    A subgroup H of Gm used to blur exponentiation: Gamma_H is the set of
    (x, y) with y / exp(x) in H.

    Keyword arguments:
    kind -- Trivial (H = {1}), LatticeExp (H = exp of the Q-span of `basis`),
            ConstantsField (H = Gm(C)) or Full (H = Gm).
    basis -- LatticeExp labels: '2*pi*i' or nonzero rationals such as '1'.
    tag -- a name for the constants field of ConstantsField.
    """
    kind: str = TRIVIAL
    basis: Tuple[str, ...] = ()
    tag: str = ''

    def __post_init__(self):
        if self.kind not in HSPEC_KINDS:
            raise UnsupportedHSpec(
                f"Unknown H kind {self.kind!r}; expecting one of {list(HSPEC_KINDS)}.")
        basis = tuple(str(b) for b in self.basis)
        if self.kind == LATTICE_EXP:
            if not basis:
                raise UnsupportedHSpec("A LatticeExp group needs a nonempty basis.")
            if len(set(basis)) != len(basis):
                raise UnsupportedHSpec(f"Repeated basis labels in {list(basis)}.")
            for label in basis:
                if label != TWO_PI_I:
                    _rational_label(label)
        object.__setattr__(self, 'basis', basis)

    @classmethod
    def lattice(cls, basis: Sequence[str] = ('1', TWO_PI_I)) -> 'HSpec':
        return cls(kind=LATTICE_EXP, basis=tuple(basis))

    def is_dense(self) -> bool:
        """
        True when H is dense in Gm(C). A lattice is dense when it contains the
        torsion direction 2*pi*i and a real direction.
        """
        if self.kind in (CONSTANTS_FIELD, FULL):
            return True
        if self.kind == LATTICE_EXP:
            return TWO_PI_I in self.basis and \
                any(label != TWO_PI_I for label in self.basis)
        return False

    def to_json(self) -> dict:
        data = {'kind': self.kind}
        if self.kind == LATTICE_EXP:
            data['basis'] = list(self.basis)
        if self.kind == CONSTANTS_FIELD:
            data['tag'] = self.tag
        return data

    @classmethod
    def from_json(cls, data) -> 'HSpec':
        if isinstance(data, str):
            data = {'kind': data}
        if not isinstance(data, Mapping) or 'kind' not in data:
            raise ParseError(f"An H specification needs a 'kind', got {data!r}.")
        return cls(kind=data['kind'], basis=tuple(data.get('basis') or ()),
                   tag=str(data.get('tag') or ''))


def x_name(label: str) -> str:
    return f'x_{label}'


def y_name(label: str) -> str:
    return f'y_{label}'


def coordinates(labels: Sequence[str]) -> Tuple[str, ...]:
    return tuple(x_name(l) for l in labels) + tuple(y_name(l) for l in labels)


@dataclass(frozen=True)
class GammaPresentation:
    """
    A finitely presented Gamma-field configuration. `relations` is saturated
    at every y coordinate; `declarations` span the declared lattice inside
    Q^g, one coordinate per generator pair; `group_relations` are integer
    vectors m with sum m_k g_k = 0 in G(F).
    """
    labels: Tuple[str, ...]
    relations: IdealBasis
    declarations: Tuple[Vector, ...] = ()
    constants: Tuple[str, ...] = ()
    blur: HSpec = field(default_factory=HSpec)
    denominator_bound: int = 1
    group_relations: Tuple[Tuple[int, ...], ...] = ()
    blur_labels: Tuple[str, ...] = ()

    @property
    def g(self) -> int:
        return len(self.labels)

    @property
    def ring(self):
        return self.relations.ring

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError as e:
            raise MalformedPresentation(
                f"Unknown generator {label!r}; the generators are "
                f"{list(self.labels)}.") from e

    def unit(self, label: str) -> Vector:
        k = self.index(label)
        return tuple(Fraction(int(i == k)) for i in range(self.g))

    def to_json(self) -> dict:
        data = {
            'generators': list(self.labels),
            'constants': list(self.constants),
            'relations': [poly_to_json(p) for p in self.relations.generators],
            'gamma': [combination_to_json(v) for v in self.declarations],
            'blur': self.blur.to_json(),
            'denominator_bound': self.denominator_bound,
        }
        if self.group_relations:
            data['group_relations'] = [list(m) for m in self.group_relations]
        if self.blur_labels:
            data['blur_generators'] = list(self.blur_labels)
        return data


@dataclass(frozen=True)
class PredimReport:
    td: int
    ldim: int
    delta: int
    mode: str = 'symbolic'

    def to_json(self) -> dict:
        return {'td': self.td, 'ldim': self.ldim, 'delta': self.delta,
                'mode': self.mode}


@dataclass(frozen=True)
class ClosureVerdict:
    """
    NotClosed carries a tuple b outside Gamma(A) with delta(b/A) <= 0;
    ClosedUpTo is evidence up to the two bounds only.
    """
    status: str
    rank_bound: int
    comb_bound: int
    witness: Optional[Tuple[Vector, ...]] = None
    report: Optional[PredimReport] = None
    checked: int = 0

    @property
    def is_bounded_evidence(self) -> bool:
        return self.status == CLOSED_UP_TO

    def to_json(self) -> dict:
        data = {'status': self.status, 'rank_bound': self.rank_bound,
                'comb_bound': self.comb_bound, 'checked': self.checked}
        if self.witness is not None:
            data['witness'] = [combination_to_json(v) for v in self.witness]
            data['predimension'] = self.report.to_json()
        return data


def _is_term(term) -> bool:
    def is_int(v):
        return isinstance(v, int) and not isinstance(v, bool)
    return isinstance(term, list) and len(term) == 2 and is_int(term[0]) and \
        isinstance(term[1], list) and len(term[1]) == 2 and \
        all(is_int(c) for c in term[1])


def combination_from_json(record, g: int) -> Vector:
    """
    Reads a rational combination of generator pairs: either one term
    [pair_index, [num, den]] or a list of such terms.
    """
    terms = [record] if _is_term(record) else record
    if not isinstance(terms, list):
        raise ParseError(f"Malformed combination {record!r}.")
    vector = [Fraction(0)] * g
    for term in terms:
        if not _is_term(term):
            raise ParseError(
                f"A combination term is [pair_index, [num, den]], got {term!r}.")
        k, (num, den) = term
        if not 0 <= k < g:
            raise MalformedPresentation(
                f"Pair index {k} does not refer to one of the {g} generators.")
        if den == 0:
            raise ParseError(f"Zero denominator in {term!r}.")
        vector[k] += Fraction(num, den)
    return tuple(vector)


def combination_to_json(v: Vector) -> list:
    terms = [[k, [q.numerator, q.denominator]] for k, q in enumerate(v) if q]
    return terms[0] if len(terms) == 1 else terms


def _as_vector(P: GammaPresentation, v) -> Vector:
    if isinstance(v, Mapping):
        vector = [Fraction(0)] * P.g
        for label, q in v.items():
            vector[P.index(label)] += Fraction(q)
        return tuple(vector)
    if _is_term(v) or (isinstance(v, list) and all(_is_term(t) for t in v)):
        return combination_from_json(v, P.g)
    vector = tuple(Fraction(q) for q in v)
    if len(vector) != P.g:
        raise MalformedPresentation(
            f"A combination has {P.g} coefficients, got {len(vector)}.")
    return vector


def _group_relation_polys(ring, labels: Sequence[str], m: Sequence[int]):
    gens = dict(zip(coordinates(labels), ring.gens))
    linear = ring.zero
    positive, negative = ring.one, ring.one
    for label, e in zip(labels, m):
        linear += e * gens[x_name(label)]
        if e > 0:
            positive *= gens[y_name(label)] ** e
        elif e < 0:
            negative *= gens[y_name(label)] ** (-e)
    return linear, positive - negative


def make_presentation(labels: Sequence[str], relations: Sequence,
                      declarations: Sequence[Vector] = (),
                      constants: Sequence[str] = (),
                      blur: Optional[HSpec] = None,
                      denominator_bound: int = 1,
                      group_relations: Sequence[Sequence[int]] = (),
                      blur_labels: Sequence[str] = (),
                      settings: Settings = DEFAULT_SETTINGS) -> GammaPresentation:
    """
    Validates and builds a presentation.

    Keyword arguments:
    labels -- generator labels; the coordinates of label l are x_l and y_l.
    relations -- polynomials in those coordinates.
    declarations -- rational vectors (one entry per generator) declared to lie
                    in Gamma.
    constants -- labels of generators whose pair lies in G(C).
    blur -- the H this configuration is blurred by; Trivial by default.
    denominator_bound -- the divisibility bound standing in for a divisible
                         Gamma.
    group_relations -- integer vectors m with sum m_k g_k = 0, checked by
                       ideal membership.

    Returns:
    The presentation, with its relations saturated at the y coordinates.
    """
    labels = tuple(labels)
    if len(set(labels)) != len(labels):
        raise MalformedPresentation(f"Repeated generator labels in {list(labels)}.")
    bad = [l for l in labels if not _LABEL_PATTERN.match(l)]
    if bad:
        raise MalformedPresentation(
            f"Generator labels must be alphanumeric and start with a letter: {bad}.")
    missing = [c for c in constants if c not in labels]
    if missing:
        raise MalformedPresentation(f"Constants {missing} are not generators.")
    if not isinstance(denominator_bound, int) or denominator_bound < 1:
        raise MalformedPresentation(
            f"The denominator bound must be a positive integer, got {denominator_bound!r}.")
    ring = poly_ring(coordinates(labels))
    try:
        gens = [transfer(p, ring) for p in relations]
    except ValueError as e:
        raise MalformedPresentation(
            f"Relations may only use the coordinates {list(coordinates(labels))}.") from e
    saturated = saturate_units(ideal(gens, ring=ring),
                               tuple(y_name(l) for l in labels), settings)
    if is_unit_ideal(saturated, settings):
        raise MalformedPresentation("The relations generate the unit ideal.")
    vectors = []
    for v in declarations:
        v = tuple(Fraction(q) for q in v)
        if len(v) != len(labels):
            raise MalformedPresentation(
                f"Declared vector {v} does not have {len(labels)} entries.")
        vectors.append(v)
    checked = []
    for m in group_relations:
        m = tuple(int(e) for e in m)
        if len(m) != len(labels) or not any(m):
            raise MalformedPresentation(f"Malformed group relation {list(m)}.")
        for f in _group_relation_polys(ring, labels, m):
            if not contains(saturated, f, settings):
                raise MalformedPresentation(
                    f"Group relation {list(m)} does not follow from the relations.")
        checked.append(m)
    return GammaPresentation(
        labels=labels, relations=saturated, declarations=tuple(vectors),
        constants=tuple(constants), blur=blur or HSpec(),
        denominator_bound=denominator_bound, group_relations=tuple(checked),
        blur_labels=tuple(blur_labels))


def presentation_from_json(data: Mapping,
                           settings: Settings = DEFAULT_SETTINGS) -> GammaPresentation:
    if not isinstance(data, Mapping) or 'generators' not in data:
        raise ParseError("A presentation needs a 'generators' list.")
    labels = data['generators']
    if not isinstance(labels, list) or not all(isinstance(l, str) for l in labels):
        raise ParseError("'generators' must be a list of labels.")
    ring = poly_ring(coordinates(labels))
    relations = []
    for p in data.get('relations') or []:
        try:
            relations.append(poly_from_json(p, ring))
        except ValueError as e:
            raise MalformedPresentation(str(e)) from e
    declarations = [combination_from_json(r, len(labels))
                    for r in data.get('gamma') or []]
    return make_presentation(
        labels, relations, declarations,
        constants=data.get('constants') or (),
        blur=HSpec.from_json(data.get('blur') or {'kind': TRIVIAL}),
        denominator_bound=data.get('denominator_bound', 1),
        group_relations=data.get('group_relations') or (),
        blur_labels=data.get('blur_generators') or (),
        settings=settings)


def _supported_on(P: GammaPresentation, v: Vector, labels) -> bool:
    allowed = set(labels)
    return all(not q or P.labels[k] in allowed for k, q in enumerate(v))


def _lattice_rows(P: GammaPresentation, labels=None) -> List[Vector]:
    """
    Rows spanning the declared lattice (restricted to declarations supported
    on `labels` when given) together with the group relations.
    """
    rows = [v for v in P.declarations
            if labels is None or _supported_on(P, v, labels)]
    rows += [tuple(Fraction(e) for e in m) for m in P.group_relations]
    return rows


def _contains(rows: Sequence[Vector], v: Vector) -> bool:
    if not any(v):
        return True
    if not rows:
        return False
    _, scaled = scale_to_integers(list(rows) + [v])
    return lattice_contains(scaled[:-1], scaled[-1])


def _rank(rows: Sequence[Vector]) -> int:
    rows = [r for r in rows if any(r)]
    if not rows:
        return 0
    _, scaled = scale_to_integers(rows)
    return lattice_rank(scaled)


def is_declared(P: GammaPresentation, v) -> bool:
    """
    Whether a combination of generator pairs lies in the declared lattice
    (modulo the group relations).
    """
    return _contains(_lattice_rows(P), _as_vector(P, v))


def purity_violations(P: GammaPresentation) -> List[str]:
    """
    Generators g with k*g declared for some k <= denominator_bound while g
    itself is not.
    """
    rows = _lattice_rows(P)
    found = []
    for label in P.labels:
        e = P.unit(label)
        if _contains(rows, e):
            continue
        for k in range(2, P.denominator_bound + 1):
            if _contains(rows, tuple(k * q for q in e)):
                found.append(f"{k}*{label} is declared but {label} is not.")
                break
    return found


def _describe(P: GammaPresentation, v: Vector) -> str:
    parts = [f"{format_rat(q)}*{P.labels[k]}" for k, q in enumerate(v) if q]
    return ' + '.join(parts) or '0'


def _base_labels(P: GammaPresentation, A: Sequence[str]) -> Tuple[str, ...]:
    for label in A:
        P.index(label)
    base = set(A) | set(P.constants)
    return tuple(l for l in P.labels if l in base)


def _combination_ideal(P: GammaPresentation, vectors: Sequence[Vector],
                       settings: Settings):
    """
    Adjoins a coordinate pair (X_j, Y_j) for every combination v_j, with
    X_j = sum v_jk x_k and Y_j = prod y_k^(D v_jk) where D clears the
    denominators of v_j. Y_j is algebraic over the coordinates of v_j, so
    transcendence degrees and image dimensions are unchanged.

    Returns:
    The saturated ideal and the names of the X's and Y's.
    """
    names = coordinates(P.labels)
    new_x = tuple(f'_bx{j}' for j in range(1, len(vectors) + 1))
    new_y = tuple(f'_by{j}' for j in range(1, len(vectors) + 1))
    big = poly_ring(names + new_x + new_y)
    gens = dict(zip(names + new_x + new_y, big.gens))
    polys = [transfer(f, big) for f in P.relations.generators]
    for j, v in enumerate(vectors):
        linear = big.zero
        denominator = 1
        for k, q in enumerate(v):
            if q:
                linear += gens[x_name(P.labels[k])].mul_ground(as_gauss(q))
                denominator = denominator * q.denominator // gcd(denominator, q.denominator)
        polys.append(gens[new_x[j]] - linear)
        positive, negative = big.one, big.one
        for k, q in enumerate(v):
            e = int(q * denominator)
            if e > 0:
                positive *= gens[y_name(P.labels[k])] ** e
            elif e < 0:
                negative *= gens[y_name(P.labels[k])] ** (-e)
        polys.append(gens[new_y[j]] * negative - positive)
    J = saturate_units(ideal(polys, ring=big),
                       tuple(y_name(l) for l in P.labels), settings)
    return J, new_x, new_y


def _trdeg(I: IdealBasis, keep: Sequence[str], settings: Settings) -> int:
    if not keep:
        return 0
    return ideal_dimension(eliminate(I, keep, settings), settings)


def _td(P: GammaPresentation, base_labels: Sequence[str],
        vectors: Sequence[Vector], settings: Settings) -> int:
    base = coordinates(base_labels)
    if not vectors:
        return 0
    J, new_x, new_y = _combination_ideal(P, vectors, settings)
    return _trdeg(J, base + new_x + new_y, settings) - \
        _trdeg(P.relations, base, settings)


def _check_declared(P: GammaPresentation, vectors: Sequence[Vector]):
    rows = _lattice_rows(P)
    for v in vectors:
        if not _contains(rows, v):
            raise MalformedPresentation(
                f"{_describe(P, v)} is not a declared Gamma-point.")


def predimension(P: GammaPresentation, A: Sequence[str], b: Sequence,
                 settings: Settings = DEFAULT_SETTINGS) -> PredimReport:
    """
    delta(b/A) = td(b/A) - ldim_Q(b/Gamma(A)).

    Keyword arguments:
    P -- the presentation.
    A -- labels of the generators of the subfield A; the constants are
         always part of A.
    b -- declared Gamma-points, as rational combinations of generators.

    Returns:
    A PredimReport. The linear dimension is a Smith rank modulo the
    declarations supported on A and the group relations.
    """
    base_labels = _base_labels(P, A)
    vectors = [_as_vector(P, v) for v in b]
    _check_declared(P, vectors)
    base = _lattice_rows(P, base_labels)
    for v in vectors:
        if _contains(base, v):
            continue
        for k in range(2, P.denominator_bound + 1):
            if _contains(base, tuple(k * q for q in v)):
                raise NotPure(
                    f"{k} * ({_describe(P, v)}) lies in Gamma(A) but "
                    f"{_describe(P, v)} does not.")
    td = _td(P, base_labels, vectors, settings)
    ldim = _rank(base + vectors) - _rank(base)
    log.debug(f"td = {td}, ldim = {ldim} for {len(vectors)} points over "
              f"{list(base_labels)}.")
    return PredimReport(td=td, ldim=ldim, delta=td - ldim)


def _combinations(P: GammaPresentation, comb_bound: int) -> List[Vector]:
    rows = list(P.declarations)
    if not rows:
        return []
    vectors = []
    for coeffs in product(range(-comb_bound, comb_bound + 1), repeat=len(rows)):
        lead = next((c for c in coeffs if c), 0)
        if lead <= 0:
            continue
        v = tuple(sum((c * row[k] for c, row in zip(coeffs, rows)), Fraction(0))
                  for k in range(P.g))
        if any(v):
            vectors.append(v)
    return list(unique_everseen(vectors))


def is_rel_gamma_closed(P: GammaPresentation, A: Sequence[str],
                        rank_bound: int, comb_bound: int,
                        settings: Settings = DEFAULT_SETTINGS) -> ClosureVerdict:
    """
    Searches tuples of up to `rank_bound` integer combinations (coefficients
    bounded by `comb_bound`) of the declarations for one outside Gamma(A) with
    non-positive predimension.
    """
    if rank_bound < 1 or comb_bound < 1:
        raise PreconditionViolated("Both bounds must be positive.")
    candidates = _combinations(P, comb_bound)
    checked = 0
    for size in range(1, rank_bound + 1):
        for b in combinations(candidates, size):
            if rational_rank(b) < size:
                continue
            report = predimension(P, A, b, settings)
            checked += 1
            if report.ldim > 0 and report.delta <= 0:
                log.info(f"Found {[_describe(P, v) for v in b]} with delta "
                         f"{report.delta} over {list(A)}.")
                return ClosureVerdict(status=NOT_CLOSED, rank_bound=rank_bound,
                                      comb_bound=comb_bound, witness=tuple(b),
                                      report=report, checked=checked)
    return ClosureVerdict(status=CLOSED_UP_TO, rank_bound=rank_bound,
                          comb_bound=comb_bound, checked=checked)


def _fresh_label(taken: Sequence[str], stem: str = 'eta') -> str:
    k = 1
    while f'{stem}{k}' in taken:
        k += 1
    return f'{stem}{k}'


def blur(P: GammaPresentation, H: HSpec,
         settings: Settings = DEFAULT_SETTINGS) -> GammaPresentation:
    """
    Blurs an exponential configuration by H: Gamma becomes the lattice of the
    original pairs plus pairs (0, h) for generators h of H, each divisible up
    to the denominator bound.

    Keyword arguments:
    P -- a presentation whose declared pairs are of the form (z, exp z).
    H -- the blurring group.

    Returns:
    A new presentation with `blur` set to H. Generators added for H are
    listed in `blur_labels`.
    """
    if P.blur.kind != TRIVIAL:
        raise PreconditionViolated(
            f"The presentation is already blurred by {P.blur.kind}.")
    if H.kind == TRIVIAL:
        return P
    d = Fraction(1, P.denominator_bound)
    if H.kind == FULL:
        units = tuple(tuple(d * q for q in P.unit(l)) for l in P.labels)
        return dataclasses.replace(P, declarations=P.declarations + units, blur=H)

    # (label, y-relation) for each new pair (0, h); None leaves y_h free.
    added = []
    taken = list(P.labels)
    if H.kind == LATTICE_EXP:
        for label in H.basis:
            eta = _fresh_label(taken)
            taken.append(eta)
            added.append((eta, label))
    else:
        for c in P.constants:
            eta = _fresh_label(taken)
            taken.append(eta)
            added.append((eta, c))
        if not added:
            log.warning("No constant generators to blur by; only the "
                        "presented constants Q(i) lie in H.")

    labels = P.labels + tuple(eta for eta, _ in added)
    ring = poly_ring(coordinates(labels))
    gens = dict(zip(coordinates(labels), ring.gens))
    relations = [transfer(f, ring) for f in P.relations.generators]
    group_relations = [tuple(m) + (0,) * len(added) for m in P.group_relations]
    declarations = [tuple(v) + (Fraction(0),) * len(added) for v in P.declarations]
    for i, (eta, source) in enumerate(added):
        relations.append(gens[x_name(eta)])
        if H.kind == CONSTANTS_FIELD:
            relations.append(gens[y_name(eta)] - gens[y_name(source)])
        elif source == TWO_PI_I:
            # (0, 1) is the identity of G; its divisions are the roots of unity.
            relations.append(gens[y_name(eta)] - 1)
            group_relations.append(tuple(int(k == P.g + i) for k in range(len(labels))))
        # Otherwise y_eta = e^q for a rational label q != 0. Such values are
        # transcendental over Q(i), so y_eta stays free in the ideal; label_value
        # gives q itself.
        declarations.append(tuple(d if k == P.g + i else Fraction(0)
                                  for k in range(len(labels))))
    blurred = make_presentation(
        labels, relations, declarations, constants=P.constants, blur=H,
        denominator_bound=P.denominator_bound, group_relations=group_relations,
        blur_labels=tuple(eta for eta, _ in added), settings=settings)
    log.info(f"Blurred by {H.kind}: added {list(blurred.blur_labels)}.")
    return blurred


@dataclass(frozen=True)
class AxSchanuelWitness:
    """
    A proper subgroup J = {y^M = 1} with a in TJ + G^n(C): each row m of M
    has sum m_i x_i in the Q-span of the constants and prod y_i^m_i equal to
    exp of that constant.
    """
    subgroup: SubgroupSpec
    constants: Tuple[complex, ...]
    residuals: Tuple[float, ...]

    def to_json(self) -> dict:
        return {'J': self.subgroup.to_json(),
                'constants': [[repr(c.real), repr(c.imag)] for c in self.constants],
                'residuals': list(self.residuals)}


def _constant_values(c_basis: Sequence) -> list:
    """
    Exact labels become mpmath constants at the current precision; decimal
    strings and floats keep the digits they carry.
    """
    values = []
    for c in c_basis:
        if isinstance(c, str):
            try:
                c = label_value(c)
            except UnsupportedHSpec:
                pass
        values.append(c)
    return values


def ax_schanuel_witness(points: Sequence[Tuple], c_basis: Sequence,
                        bound: int, tol: float,
                        settings: Settings = DEFAULT_SETTINGS) \
        -> Optional[AxSchanuelWitness]:
    """
    Searches for integer vectors m, |m_i| <= bound, with sum m_i x_i in the
    Q-span of c_basis and prod y_i^m_i = exp(sum m_i x_i) within tol.

    Keyword arguments:
    points -- n pairs (x_i, y_i) of numbers or decimal strings.
    c_basis -- constants spanning C; labels such as '2*pi*i' are accepted.

    Returns:
    The witness with M assembled from independent relations (the identity
    when they span everything), or None when nothing is found at this bound.
    """
    if tol <= 0:
        raise PreconditionViolated(f"Tolerance must be positive, got {tol}.")
    n = len(points)
    if n == 0:
        return None
    try:
        with mpmath.workdps(settings.precision):
            constants = _constant_values(c_basis)
        rows = relation_rows([p[0] for p in points] + constants, bound, tol,
                             settings)
    except PrecisionTooLow as e:
        raise ToleranceUnachievable(str(e)) from e
    chosen = []
    with mpmath.workdps(settings.precision):
        xs = [to_mp(p[0]) for p in points]
        ys = [to_mp(p[1]) for p in points]

        def check(m):
            additive = mpmath.fsum(m_i * x for m_i, x in zip(m, xs))
            multiplicative = mpmath.mpc(1)
            for m_i, y in zip(m, ys):
                multiplicative *= y ** m_i
            expected = mpmath.exp(additive)
            residual = abs(multiplicative - expected) / max(1, abs(expected))
            return complex(additive), float(residual)

        for row in rows:
            m = row[:n]
            if not any(m) or rational_rank(chosen + [m]) == len(chosen):
                continue
            _, residual = check(m)
            if residual < tol:
                chosen.append(m)
        if not chosen:
            log.debug(f"No additive relation with |m| <= {bound} closes "
                      f"multiplicatively.")
            return None
        M = IntMat.identity(n) if len(chosen) == n else IntMat(tuple(chosen))
        checks = [check(row) for row in M.rows]
    return AxSchanuelWitness(subgroup=SubgroupSpec(M),
                             constants=tuple(c for c, _ in checks),
                             residuals=tuple(r for _, r in checks))


def _locus(P: GammaPresentation, vectors: Sequence[Vector],
           settings: Settings) -> GSubvariety:
    """
    loc(a/C) as a subvariety of G^len(a), via the combination coordinates.
    """
    if P.constants:
        over_c = _td(P, P.constants, vectors, settings)
        over_q = _td(P, (), vectors, settings)
        if over_c != over_q:
            raise PreconditionViolated(
                "The locus of a depends on the constants; only loci "
                "independent of C are supported.")
    J, new_x, new_y = _combination_ideal(P, vectors, settings)
    image = eliminate(J, new_x + new_y, settings)
    k = len(vectors)
    rename = dict(zip(new_x + new_y, x_names(k) + y_names(k)))
    target = g_ring(k)
    gens = [transfer(f, target, rename) for f in image.generators]
    return make_variety(k, gens, irreducible=True, settings=settings)


def locus_strong_rotund(P: GammaPresentation, a: Sequence, V: GSubvariety,
                        bound: int, settings: Settings = DEFAULT_SETTINGS) \
        -> RotundityVerdict:
    """
    The Ax-Schanuel pair check: strong rotundity of W = loc(a/C) x V.

    Keyword arguments:
    P -- the presentation holding a.
    a -- declared Gamma-points, Q-linearly independent over Gamma(C).
    V -- a variety over the constants.
    bound -- matrix entry bound for the strong rotundity check.
    """
    vectors = [_as_vector(P, v) for v in a]
    _check_declared(P, vectors)
    if not vectors:
        return is_strongly_rotund(V, bound, settings)
    base = _lattice_rows(P, P.constants)
    if _rank(base + vectors) - _rank(base) < len(vectors):
        raise PreconditionViolated(
            "The points of a are Q-linearly dependent over Gamma(C).")
    W = product_variety(_locus(P, vectors, settings), V, settings)
    return is_strongly_rotund(W, bound, settings)


def variety_over_constants(P: GammaPresentation, data: Mapping,
                           settings: Settings = DEFAULT_SETTINGS) -> GSubvariety:
    """
    Reads the V of an Ax-Schanuel pair. Polynomials that use coordinates of P
    make V depend on P; only varieties with Gaussian rational coefficients
    are supported.
    """
    own = set(coordinates(P.labels))
    constant = set(coordinates(P.constants))
    for p in (data.get('ideal') or []) if isinstance(data, Mapping) else []:
        used = set()
        for term in (p.get('terms') or []) if isinstance(p, Mapping) else []:
            used.update((term.get('exps') or {}) if isinstance(term, Mapping) else {})
        foreign = sorted(used & own)
        if any(name not in constant for name in foreign):
            raise VNotOverConstants(
                f"V uses {foreign}, which are not coordinates of constants.")
        if foreign:
            raise PreconditionViolated(
                f"V uses the constant coordinates {foreign}; varieties with "
                f"coefficients in C(a) or C are not supported.")
    return variety_from_json(data, settings)
