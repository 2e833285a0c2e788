"""
Subvarieties of G^n = (Ga x Gm)^n and the action of integer matrices on them.
"""
import logging
from dataclasses import dataclass
from functools import cached_property
from typing import List, Mapping, Optional, Sequence, Tuple

from sympy.polys.orderings import grevlex
from sympy.polys.rings import PolyElement, PolyRing

from gwb.config import DEFAULT_SETTINGS, Settings
from gwb.errors import (MalformedVariety, ParseError, PointNotOnVariety,
                        PreconditionViolated)
from gwb.groebner import (IdealBasis, contains, eliminate, ideal,
                          ideal_dimension, is_unit_ideal, saturate_units)
from gwb.lattice import rational_rank
from gwb.numbers import as_gauss, format_gauss, parse_gauss
from gwb.polynomials import (evaluate_exact, poly_from_json, poly_ring,
                             poly_to_json, transfer, var_names)

log = logging.getLogger(__name__)


def x_names(n: int, prefix: str = 'x') -> Tuple[str, ...]:
    return tuple(f'{prefix}{i}' for i in range(1, n + 1))


def y_names(n: int, prefix: str = 'y') -> Tuple[str, ...]:
    return tuple(f'{prefix}{i}' for i in range(1, n + 1))


def g_ring(n: int) -> PolyRing:
    """
    The coordinate ring of G^n: variables x1..xn, y1..yn, grevlex order.
    """
    return poly_ring(x_names(n) + y_names(n), grevlex)


@dataclass(frozen=True)
class IntMat:
    """
    An integer matrix, k x n, acting on G^n by (x, y) -> (Mx, y^M).
    """
    rows: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(int(v) for v in row) for row in self.rows)
        if rows and len({len(r) for r in rows}) != 1:
            raise ParseError(f"Matrix rows have different lengths: {rows}.")
        object.__setattr__(self, 'rows', rows)

    @classmethod
    def identity(cls, n: int) -> 'IntMat':
        return cls(tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @classmethod
    def zero(cls, n: int) -> 'IntMat':
        return cls(tuple(tuple(0 for _ in range(n)) for _ in range(n)))

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def ncols(self) -> int:
        return len(self.rows[0]) if self.rows else 0

    @cached_property
    def rank(self) -> int:
        return rational_rank(self.rows)

    @property
    def is_zero(self) -> bool:
        return not any(any(row) for row in self.rows)

    def to_json(self) -> List[List[int]]:
        return [list(row) for row in self.rows]

    @classmethod
    def from_json(cls, data) -> 'IntMat':
        if not isinstance(data, list) or not all(isinstance(r, list) for r in data):
            raise ParseError(
                f"A matrix is a row-major list of integer lists, got {data!r}.")
        for row in data:
            for v in row:
                if not isinstance(v, int) or isinstance(v, bool):
                    raise ParseError(f"Matrix entry {v!r} is not an integer.")
        return cls(tuple(tuple(row) for row in data))


@dataclass(frozen=True)
class SubgroupSpec:
    """
    The connected subgroup J of Gm^n cut out by y^M = 1, and its tangent
    picture TJ = {Mx = 0, y^M = 1} in G^n.
    """
    matrix: IntMat

    @property
    def n(self) -> int:
        return self.matrix.ncols

    @property
    def dim_J(self) -> int:
        return self.n - self.matrix.rank

    def to_json(self) -> dict:
        return {'M': self.matrix.to_json(), 'dim_J': self.dim_J}


@dataclass(frozen=True)
class GSubvariety:
    """
    A subvariety V of G^n given by an ideal in x1..xn, y1..yn that is
    saturated at y1...yn. Irreducibility is asserted by the caller, never
    computed.
    """
    n: int
    ideal: IdealBasis
    irreducible_asserted: bool = True

    @property
    def ring(self) -> PolyRing:
        return self.ideal.ring

    @property
    def x(self) -> Tuple[PolyElement, ...]:
        return self.ring.gens[:self.n]

    @property
    def y(self) -> Tuple[PolyElement, ...]:
        return self.ring.gens[self.n:]

    def to_json(self) -> dict:
        return {
            'n': self.n,
            'ideal': [poly_to_json(g) for g in self.ideal.generators],
            'irreducible': self.irreducible_asserted,
        }


def make_variety(n: int, generators: Sequence[PolyElement],
                 irreducible: bool = True,
                 settings: Settings = DEFAULT_SETTINGS) -> GSubvariety:
    """
    Builds a GSubvariety from defining polynomials, saturating at the
    multiplicative coordinates.

    Keyword arguments:
    n -- number of G-factors.
    generators -- polynomials in (a subset of) x1..xn, y1..yn.
    irreducible -- the caller's irreducibility assertion.

    Returns:
    The variety, with a saturated ideal in the ring g_ring(n).
    """
    ring = g_ring(n)
    try:
        gens = [transfer(g, ring) for g in generators]
    except ValueError as e:
        raise MalformedVariety(
            f"Defining polynomials must use only {var_names(ring)}.") from e
    saturated = saturate_units(ideal(gens, ring=ring), y_names(n), settings)
    if is_unit_ideal(saturated, settings):
        raise MalformedVariety("The variety is empty: its ideal is the unit ideal.")
    return GSubvariety(n=n, ideal=saturated, irreducible_asserted=irreducible)


def variety_from_json(data: Mapping, settings: Settings = DEFAULT_SETTINGS) \
        -> GSubvariety:
    if not isinstance(data, Mapping) or 'n' not in data or 'ideal' not in data:
        raise ParseError("A variety needs the fields 'n' and 'ideal'.")
    n = data['n']
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ParseError(f"'n' must be a positive integer, got {n!r}.")
    ring = g_ring(n)
    try:
        gens = [poly_from_json(p, ring) for p in data['ideal']]
    except ValueError as e:
        raise ParseError(str(e)) from e
    return make_variety(n, gens, bool(data.get('irreducible', False)), settings)


def dimension(V: GSubvariety, settings: Settings = DEFAULT_SETTINGS) -> int:
    return ideal_dimension(V.ideal, settings)


def act(M: IntMat, V: GSubvariety, settings: Settings = DEFAULT_SETTINGS) \
        -> GSubvariety:
    """
    Computes the Zariski closure of M.V in G^k for a k x n integer matrix M:
    u = Mx and v = y^M are adjoined (v y^{M-} - y^{M+} for the Laurent part),
    the graph is saturated at y1..yn so that only points of G^n contribute,
    then the original coordinates are eliminated.
    """
    n, k = V.n, M.nrows
    if M.ncols != n:
        raise PreconditionViolated(
            f"A {M.nrows}x{M.ncols} matrix cannot act on G^{n}.")
    us, vs = x_names(k, 'u'), y_names(k, 'v')
    big = poly_ring(x_names(n) + y_names(n) + us + vs, grevlex)
    gens = big.gens
    xs, ys = gens[:n], gens[n:2 * n]
    u, v = gens[2 * n:2 * n + k], gens[2 * n + k:]
    graph = [transfer(g, big) for g in V.ideal.generators]
    for j, row in enumerate(M.rows):
        linear = big.zero
        positive, negative = big.one, big.one
        for i, m in enumerate(row):
            linear += m * xs[i]
            if m > 0:
                positive *= ys[i] ** m
            elif m < 0:
                negative *= ys[i] ** (-m)
        graph.append(u[j] - linear)
        graph.append(v[j] * negative - positive)
    graph = saturate_units(ideal(graph, ring=big), y_names(n), settings)
    image = eliminate(graph, us + vs, settings)
    target = g_ring(k)
    rename = dict(zip(us + vs, x_names(k) + y_names(k)))
    generators = tuple(transfer(g, target, rename) for g in image.generators)
    log.debug(f"Image of V under {M.rows} has {len(generators)} generators.")
    return GSubvariety(n=k, ideal=IdealBasis(ring=target, generators=generators),
                       irreducible_asserted=V.irreducible_asserted)


def dim_image(M: IntMat, V: GSubvariety, settings: Settings = DEFAULT_SETTINGS) -> int:
    return ideal_dimension(act(M, V, settings).ideal, settings)


def parse_point(V: GSubvariety, point) -> Tuple:
    """
    Reads a point of G^n given as 2n Gaussian rationals (x's then y's), either
    as a sequence or as a map from coordinate name.
    """
    names = var_names(V.ring)
    if isinstance(point, Mapping):
        missing = [n for n in names if n not in point]
        if missing:
            raise PreconditionViolated(f"Point does not assign {missing}.")
        values = [point[n] for n in names]
    else:
        values = list(point)
    if len(values) != len(names):
        raise PreconditionViolated(
            f"A point of G^{V.n} has {len(names)} coordinates, got {len(values)}.")
    parsed = []
    for value in values:
        if isinstance(value, str) or (isinstance(value, list) and
                                      value and isinstance(value[0], str)):
            parsed.append(parse_gauss(value))
        else:
            parsed.append(as_gauss(value))
    return tuple(parsed)


def on_variety(V: GSubvariety, point: Sequence) -> bool:
    values = dict(zip(var_names(V.ring), point))
    if any(not values[name] for name in var_names(V.ring)[V.n:]):
        return False
    return all(not evaluate_exact(g, values) for g in V.ideal.generators)


@dataclass(frozen=True)
class FibreReport:
    fiber_dim: int
    dim_J: int
    satisfies_lemma: bool

    def to_json(self) -> dict:
        return {'fiber_dim': self.fiber_dim, 'dim_J': self.dim_J,
                'satisfies_lemma': self.satisfies_lemma}


def fibre_dim_check(V: GSubvariety, M: IntMat, gamma,
                    settings: Settings = DEFAULT_SETTINGS) -> FibreReport:
    """
    Dimension of the fibre V meet (gamma + TJ) for J given by y^M = 1.

    Keyword arguments:
    V -- a variety of dimension n.
    M -- integer matrix with n columns.
    gamma -- a point of V with Gaussian rational coordinates.

    Returns:
    A FibreReport; satisfies_lemma is False when the fibre is larger than J,
    which places gamma outside the open set where fibres are small.
    """
    point = parse_point(V, gamma)
    if not on_variety(V, point):
        raise PointNotOnVariety(f"The point {[format_gauss(c) for c in point]} "
                                f"is not on V.")
    if M.ncols != V.n:
        raise PreconditionViolated(f"M must have {V.n} columns.")
    dim_V = ideal_dimension(V.ideal, settings)
    if dim_V != V.n:
        raise PreconditionViolated(
            f"The fibre check needs dim V = n = {V.n}, got {dim_V}.")
    ring = V.ring
    xs, ys = ring.gens[:V.n], ring.gens[V.n:]
    gx, gy = point[:V.n], point[V.n:]
    coset = list(V.ideal.generators)
    for row in M.rows:
        linear = ring.zero
        value = ring.domain.zero
        positive, negative = ring.one, ring.one
        c_pos, c_neg = ring.domain.one, ring.domain.one
        for i, m in enumerate(row):
            linear += m * xs[i]
            value += m * gx[i]
            if m > 0:
                positive *= ys[i] ** m
                c_pos *= gy[i] ** m
            elif m < 0:
                negative *= ys[i] ** (-m)
                c_neg *= gy[i] ** (-m)
        coset.append(linear - value)
        # y^{M+} / y^{M-} = c_pos / c_neg, cleared of denominators.
        coset.append(positive * c_neg - negative * c_pos)
    fibre = saturate_units(ideal(coset, ring=ring), y_names(V.n), settings)
    fiber_dim = ideal_dimension(fibre, settings)
    dim_J = SubgroupSpec(M).dim_J
    return FibreReport(fiber_dim=fiber_dim, dim_J=dim_J,
                       satisfies_lemma=fiber_dim <= dim_J)


def product_variety(first: GSubvariety, second: GSubvariety,
                    settings: Settings = DEFAULT_SETTINGS) -> GSubvariety:
    """
    The product V x W inside G^(n+m), with V on the first n factors.
    """
    n, m = first.n, second.n
    ring = g_ring(n + m)
    left = dict(zip(x_names(n) + y_names(n), x_names(n) + y_names(n)))
    right = dict(zip(x_names(m) + y_names(m),
                     tuple(f'x{i}' for i in range(n + 1, n + m + 1)) +
                     tuple(f'y{i}' for i in range(n + 1, n + m + 1))))
    gens = [transfer(g, ring, left) for g in first.ideal.generators]
    gens += [transfer(g, ring, right) for g in second.ideal.generators]
    return GSubvariety(
        n=n + m, ideal=ideal(gens, ring=ring),
        irreducible_asserted=first.irreducible_asserted and
        second.irreducible_asserted)


def contains_relation(V: GSubvariety, f: PolyElement,
                      settings: Settings = DEFAULT_SETTINGS) -> bool:
    return contains(V.ideal, f, settings)
