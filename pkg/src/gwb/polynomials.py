import logging
from functools import lru_cache
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import mpmath
import numpy as np
from sympy import QQ_I
from sympy.polys.orderings import MonomialOrder, grevlex, lex
from sympy.polys.rings import PolyElement, PolyRing

from gwb.errors import ParseError
from gwb.numbers import (as_gauss, format_gauss, parse_gauss, to_complex,
                         to_mpc)

log = logging.getLogger(__name__)

Polynomial = PolyElement
Monomial = Tuple[int, ...]


class EliminationOrder(MonomialOrder):
    """
    Block order with the first `block` variables largest. Each block is
    compared by graded reverse lexicographic order, so a Groebner basis for
    this order contains a basis of the elimination ideal of the first block.
    """
    alias = 'elim'
    is_global = True
    is_default = False

    def __init__(self, block: int):
        self.block = block

    def __call__(self, monomial):
        head, tail = monomial[:self.block], monomial[self.block:]
        return (sum(head), tuple(reversed([-m for m in head])),
                sum(tail), tuple(reversed([-m for m in tail])))

    def __repr__(self):
        return f"EliminationOrder({self.block})"

    def __eq__(self, other):
        return isinstance(other, EliminationOrder) and \
            other.block == self.block

    def __hash__(self):
        return hash((self.__class__.__name__, self.block))

    def __reduce__(self):
        return (EliminationOrder, (self.block,))


ORDERS = {
    'lex': lex,
    'grevlex': grevlex,
}


def order_from_tag(tag):
    if isinstance(tag, MonomialOrder):
        return tag
    try:
        return ORDERS[tag]
    except KeyError as e:
        raise ParseError(
            f"Unknown monomial order '{tag}'; expecting one of "
            f"{sorted(ORDERS)}.") from e


def order_tag(order) -> str:
    if isinstance(order, EliminationOrder):
        return repr(order)
    return order.alias


@lru_cache(maxsize=None)
def poly_ring(names: Tuple[str, ...], order=grevlex) -> PolyRing:
    """
    Returns the polynomial ring over QQ_I in the given variables, ordered by
    `order` (a MonomialOrder or one of the tags 'lex', 'grevlex').
    """
    return PolyRing(tuple(names), QQ_I, order_from_tag(order))


def var_names(ring: PolyRing) -> Tuple[str, ...]:
    return tuple(str(s) for s in ring.symbols)


def gens_by_name(ring: PolyRing) -> Dict[str, PolyElement]:
    return dict(zip(var_names(ring), ring.gens))


def transfer(p: PolyElement, ring: PolyRing,
             rename: Optional[Mapping[str, str]] = None) -> PolyElement:
    """
    Moves a polynomial into another ring, matching variables by name.

    Keyword arguments:
    p -- the polynomial.
    ring -- the target ring; every variable occurring in p must exist there.
    rename -- optional map from p's variable names to target names.

    Returns:
    The same polynomial as an element of `ring`.
    """
    source = var_names(p.ring)
    target = {name: i for i, name in enumerate(var_names(ring))}
    rename = rename or {}
    positions = []
    for name in source:
        positions.append(target.get(rename.get(name, name)))
    terms = {}
    for monom, coeff in p.items():
        new_monom = [0] * ring.ngens
        for i, e in enumerate(monom):
            if e == 0:
                continue
            j = positions[i]
            if j is None:
                raise ValueError(
                    f"Variable {source[i]} does not exist in the target ring "
                    f"{var_names(ring)}.")
            new_monom[j] += e
        key = tuple(new_monom)
        terms[key] = terms.get(key, ring.domain.zero) + ring.domain.convert(coeff)
    return ring.from_dict({m: c for m, c in terms.items() if c})


def used_variables(polys: Iterable[PolyElement]) -> List[str]:
    used = set()
    names = None
    for p in polys:
        names = var_names(p.ring)
        for monom in p.keys():
            used.update(i for i, e in enumerate(monom) if e)
    if names is None:
        return []
    return [names[i] for i in sorted(used)]


def poly_to_json(p: PolyElement) -> dict:
    names = var_names(p.ring)
    terms = []
    for monom, coeff in p.terms():
        terms.append({
            'coef': format_gauss(coeff),
            'exps': {names[i]: e for i, e in enumerate(monom) if e},
        })
    return {'vars': list(names), 'terms': terms}


def poly_from_json(data: Mapping, ring: Optional[PolyRing] = None) -> PolyElement:
    """
    Reads a polynomial from its JSON form:
    {"vars": [...], "terms": [{"coef": ["a/b", "c/d"], "exps": {"x1": 2}}]}.
    When `ring` is given, the polynomial is placed in it by variable name.
    """
    if not isinstance(data, Mapping) or 'terms' not in data:
        raise ParseError(f"A polynomial needs a 'terms' list, got {data!r}.")
    names = tuple(data.get('vars') or (var_names(ring) if ring else ()))
    if len(set(names)) != len(names):
        raise ParseError(f"Duplicate variable names in {list(names)}.")
    own = poly_ring(names)
    index = {name: i for i, name in enumerate(names)}
    terms = {}
    for term in data['terms']:
        if not isinstance(term, Mapping) or 'coef' not in term:
            raise ParseError(f"Malformed term {term!r}.")
        coeff = parse_gauss(term['coef'])
        monom = [0] * len(names)
        for name, e in (term.get('exps') or {}).items():
            if name not in index:
                raise ParseError(
                    f"Term uses variable '{name}' missing from vars "
                    f"{list(names)}.")
            if not isinstance(e, int) or isinstance(e, bool) or e < 0:
                raise ParseError(
                    f"Exponent of '{name}' must be a non-negative integer, "
                    f"got {e!r}.")
            monom[index[name]] += e
        key = tuple(monom)
        terms[key] = terms.get(key, QQ_I.zero) + coeff
    p = own.from_dict({m: c for m, c in terms.items() if c})
    return transfer(p, ring) if ring is not None else p


def evaluate_exact(p: PolyElement, point: Mapping[str, object]):
    """
    Evaluates p exactly at a point given as a map from variable name to a
    QQ_I-convertible scalar. Variables missing from the map must not occur.
    """
    names = var_names(p.ring)
    domain = p.ring.domain
    values = [as_gauss(point[n]) if n in point else None for n in names]
    total = domain.zero
    for monom, coeff in p.items():
        term = coeff
        for v, e in zip(values, monom):
            if e:
                if v is None:
                    raise ValueError("Point does not assign every variable.")
                term = term * v ** e
        total += term
    return total


class CompiledSystem:
    """
    A list of polynomials in a fixed ring, compiled for repeated numeric
    evaluation with numpy and exact-coefficient evaluation with mpmath.
    """

    def __init__(self, polys: Sequence[PolyElement], ring: PolyRing):
        self.ring = ring
        self.polys = [transfer(p, ring) for p in polys]
        self.nvars = ring.ngens
        self._compiled = [self._compile(p) for p in self.polys]
        self._jacobian = [[self._compile(p.diff(g)) for g in ring.gens]
                          for p in self.polys]

    def _compile(self, p: PolyElement):
        if not p:
            return (np.zeros((0, self.nvars), dtype=np.int64),
                    np.zeros(0, dtype=np.complex128))
        monoms, coeffs = zip(*p.items())
        return (np.array(monoms, dtype=np.int64).reshape(len(monoms), self.nvars),
                np.array([to_complex(c) for c in coeffs], dtype=np.complex128))

    @staticmethod
    def _eval(compiled, z: np.ndarray) -> complex:
        exps, coeffs = compiled
        if len(coeffs) == 0:
            return 0j
        return complex(np.prod(z[None, :] ** exps, axis=1) @ coeffs)

    def __len__(self):
        return len(self.polys)

    def __call__(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=np.complex128)
        return np.array([self._eval(c, z) for c in self._compiled],
                        dtype=np.complex128)

    def jacobian(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=np.complex128)
        jac = np.zeros((len(self.polys), self.nvars), dtype=np.complex128)
        for i, row in enumerate(self._jacobian):
            for j, compiled in enumerate(row):
                jac[i, j] = self._eval(compiled, z)
        return jac

    def evaluate_mp(self, z: Sequence) -> List[mpmath.mpc]:
        """
        Evaluates with exact coefficients in mpmath at the current precision.
        """
        values = [mpmath.mpc(v) for v in z]
        results = []
        for p in self.polys:
            total = mpmath.mpc(0)
            for monom, coeff in p.items():
                term = to_mpc(coeff)
                for v, e in zip(values, monom):
                    if e:
                        term *= v ** e
                total += term
            results.append(total)
        return results
