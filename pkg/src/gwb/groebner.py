"""
Ideal theory over QQ_I: reduced Groebner bases by Buchberger's algorithm,
elimination, saturation at units and Krull dimension.
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Optional, Sequence, Tuple

from sympy.polys.orderings import grevlex, lex
from sympy.polys.rings import PolyElement, PolyRing

from gwb.config import DEFAULT_SETTINGS, Settings
from gwb.errors import ResourceExhausted
from gwb.numbers import gauss, gauss_parts
from gwb.picklers import MemoryPickler, ObjectNotFoundError, Pickler
from gwb.polynomials import (EliminationOrder, order_from_tag, order_tag,
                             poly_ring, poly_to_json, transfer, var_names)
from gwb.serialization import object_id

log = logging.getLogger(__name__)

# Reduced bases kept in memory per process; older ones are recomputed on demand.
CACHE_SIZE = 2048


def default_cache() -> Pickler:
    return MemoryPickler(capacity=CACHE_SIZE)


_cache: Pickler = default_cache()


def set_cache(pickler: Pickler):
    """
    Replaces the pickler used to memoize Groebner bases.
    """
    global _cache
    _cache = pickler


@dataclass(frozen=True)
class IdealBasis:
    """
    Generators of an ideal of `ring`. The reduced Groebner basis for the
    ring's order is computed on demand and cached on the instance.
    """
    ring: PolyRing
    generators: Tuple[PolyElement, ...]
    groebner: Optional[Tuple[PolyElement, ...]] = field(
        default=None, compare=False, repr=False)

    @property
    def order(self):
        return self.ring.order

    @property
    def names(self) -> Tuple[str, ...]:
        return var_names(self.ring)

    @property
    def has_groebner(self) -> bool:
        return self.groebner is not None

    def __len__(self):
        return len(self.generators)


def ideal(generators: Iterable[PolyElement], ring: Optional[PolyRing] = None,
          order=None) -> IdealBasis:
    """
    Builds an IdealBasis. Without `ring`, the ring of the first generator is
    used; `order` re-homes the generators into the same variables under
    another monomial order.
    """
    generators = list(generators)
    if ring is None:
        if not generators:
            raise ValueError("Cannot infer the ring of an empty generator list.")
        ring = generators[0].ring
    if order is not None:
        ring = poly_ring(var_names(ring), order_from_tag(order))
    gens = tuple(transfer(g, ring) for g in generators)
    return IdealBasis(ring=ring, generators=tuple(g for g in gens if g))


def _cache_key(I: IdealBasis) -> str:
    gens = sorted(str(poly_to_json(g)) for g in I.generators)
    return object_id(I, list(I.names), order_tag(I.order), gens)


def _to_plain(polys: Sequence[PolyElement]):
    plain = []
    for p in polys:
        terms = []
        for monom, coeff in p.terms():
            re_part, im_part = gauss_parts(coeff)
            terms.append((tuple(monom), (re_part.numerator, re_part.denominator,
                                         im_part.numerator, im_part.denominator)))
        plain.append(tuple(terms))
    return tuple(plain)


def _from_plain(plain, ring: PolyRing) -> Tuple[PolyElement, ...]:
    polys = []
    for terms in plain:
        polys.append(ring.from_dict({
            monom: gauss(Fraction(a, b), Fraction(c, d))
            for monom, (a, b, c, d) in terms}))
    return tuple(polys)


def _spoly(p1: PolyElement, p2: PolyElement, ring: PolyRing) -> PolyElement:
    lcm = ring.monomial_lcm(p1.LM, p2.LM)
    s1 = p1.mul_monom(ring.monomial_div(lcm, p1.LM))
    s2 = p2.mul_monom(ring.monomial_div(lcm, p2.LM))
    return s1 - s2


def _buchberger(polys: Sequence[PolyElement], ring: PolyRing,
                budget: int) -> Tuple[PolyElement, ...]:
    order = ring.order
    monomial_mul = ring.monomial_mul
    monomial_div = ring.monomial_div
    monomial_lcm = ring.monomial_lcm

    # Inter-reduce the input until it is stable.
    f1 = [p.monic() for p in polys if p]
    while True:
        f = f1[:]
        f1 = []
        for i, p in enumerate(f):
            r = p.rem(f[:i]) if i else p
            if r:
                f1.append(r.monic())
        if f == f1:
            break
    if not f:
        return ()

    index = {}
    for i, h in enumerate(f):
        index[h] = i
    steps = 0

    def normal(g, basis):
        nonlocal steps
        steps += 1
        if steps > budget:
            raise ResourceExhausted(
                f"Groebner basis computation exceeded {budget} reductions.",
                steps=steps)
        h = g.rem([f[j] for j in basis])
        if not h:
            return None
        h = h.monic()
        if h not in index:
            index[h] = len(f)
            f.append(h)
        return index[h]

    def update(G, B, ih):
        mh = f[ih].LM
        C = sorted(G)
        D = []
        while C:
            ig = C.pop()
            mg = f[ig].LM
            lcm_hg = monomial_lcm(mh, mg)

            def lcm_divides(ip):
                return monomial_div(lcm_hg, monomial_lcm(mh, f[ip].LM))

            # Product criterion, then chain criterion against pending pairs.
            if monomial_mul(mh, mg) == lcm_hg or (
                    not any(lcm_divides(ip) for ip in C) and
                    not any(lcm_divides(pair[1]) for pair in D)):
                D.append((ih, ig))
        E = {(a, b) for a, b in D
             if monomial_mul(mh, f[b].LM) != monomial_lcm(mh, f[b].LM)}

        B_new = set()
        for ig1, ig2 in B:
            m1, m2 = f[ig1].LM, f[ig2].LM
            lcm12 = monomial_lcm(m1, m2)
            if not monomial_div(lcm12, mh) or \
                    monomial_lcm(m1, mh) == lcm12 or \
                    monomial_lcm(m2, mh) == lcm12:
                B_new.add((ig1, ig2))
        B_new |= E

        G_new = {ig for ig in G if not monomial_div(f[ig].LM, mh)}
        G_new.add(ih)
        return G_new, B_new

    G, pairs = set(), set()
    for ih in sorted(range(len(f)), key=lambda i: order(f[i].LM)):
        G, pairs = update(G, pairs, ih)

    zero_reductions = 0
    while pairs:
        pair = min(pairs, key=lambda pr: (
            order(monomial_lcm(f[pr[0]].LM, f[pr[1]].LM)), pr))
        pairs.remove(pair)
        s = _spoly(f[pair[0]], f[pair[1]], ring)
        divisors = sorted(G, key=lambda g: order(f[g].LM))
        ih = normal(s, divisors)
        if ih is None:
            zero_reductions += 1
        else:
            G, pairs = update(G, pairs, ih)
    log.debug(f"Buchberger finished after {steps} reductions "
              f"({zero_reductions} to zero), basis size {len(G)}.")

    reduced = []
    for ig in sorted(G):
        r = f[ig].rem([f[j] for j in sorted(G - {ig})])
        if r:
            reduced.append(r.monic())
    return tuple(sorted(reduced, key=lambda p: order(p.LM), reverse=True))


def buchberger(I: IdealBasis, settings: Settings = DEFAULT_SETTINGS) -> IdealBasis:
    """
    Computes the reduced Groebner basis of I for its ring's order.

    Keyword arguments:
    I -- the ideal.
    settings -- `step_budget` bounds the number of S-polynomial reductions.

    Returns:
    I with its reduced Groebner basis cached. The zero ideal has an empty
    basis; the unit ideal has basis (1,).
    """
    if I.groebner is not None:
        return I
    key = _cache_key(I)
    try:
        basis = _from_plain(_cache.load(key), I.ring)
        log.debug(f"Groebner cache hit for {key[:12]}.")
    except ObjectNotFoundError:
        basis = _buchberger(I.generators, I.ring, settings.step_budget)
        _cache.dump(key, _to_plain(basis))
    result = IdealBasis(ring=I.ring, generators=I.generators)
    object.__setattr__(result, 'groebner', basis)
    return result


def groebner_basis(I: IdealBasis, settings: Settings = DEFAULT_SETTINGS) \
        -> Tuple[PolyElement, ...]:
    return buchberger(I, settings).groebner


def normal_form(f: PolyElement, I: IdealBasis,
                settings: Settings = DEFAULT_SETTINGS) -> PolyElement:
    basis = groebner_basis(I, settings)
    f = transfer(f, I.ring)
    if not basis:
        return f
    return f.rem(list(basis))


def contains(I: IdealBasis, f: PolyElement,
             settings: Settings = DEFAULT_SETTINGS) -> bool:
    return not normal_form(f, I, settings)


def is_unit_ideal(I: IdealBasis, settings: Settings = DEFAULT_SETTINGS) -> bool:
    basis = groebner_basis(I, settings)
    return len(basis) == 1 and basis[0].is_ground and bool(basis[0])


def same_ideal(I: IdealBasis, J: IdealBasis,
               settings: Settings = DEFAULT_SETTINGS) -> bool:
    """
    Tests equality of two ideals in the same variables by mutual reduction.
    """
    J_here = ideal(J.generators, ring=I.ring)
    I_there = ideal(I.generators, ring=J.ring)
    return all(contains(I, g, settings) for g in J_here.generators) and \
        all(contains(J, g, settings) for g in I_there.generators)


def eliminate(I: IdealBasis, keep: Sequence[str],
              settings: Settings = DEFAULT_SETTINGS,
              order: str = 'elim') -> IdealBasis:
    """
    Computes the elimination ideal I intersected with the polynomial ring in
    the `keep` variables.

    Keyword arguments:
    I -- the ideal.
    keep -- names of the variables to keep; the result lives in the grevlex
            ring over them, in the order they appear in I's ring.
    order -- 'elim' for a grevlex block order with the eliminated variables
             largest, 'lex' for pure lexicographic order.
    """
    names = I.names
    keep_set = set(keep)
    unknown = keep_set - set(names)
    if unknown:
        raise ValueError(f"Cannot keep unknown variables {sorted(unknown)}.")
    kept = tuple(n for n in names if n in keep_set)
    dropped = tuple(n for n in names if n not in keep_set)
    target = poly_ring(kept, grevlex)
    if not dropped:
        return ideal(I.generators, ring=target)
    block_order = lex if order == 'lex' else EliminationOrder(len(dropped))
    big = poly_ring(dropped + kept, block_order)
    J = buchberger(ideal(I.generators, ring=big), settings)
    width = len(dropped)
    survivors = [g for g in J.groebner
                 if all(e == 0 for m in g.keys() for e in m[:width])]
    log.debug(f"Eliminated {list(dropped)}: {len(survivors)} of "
              f"{len(J.groebner)} basis elements survive.")
    return IdealBasis(ring=target,
                      generators=tuple(transfer(g, target) for g in survivors))


def ideal_dimension(I: IdealBasis, settings: Settings = DEFAULT_SETTINGS) -> int:
    """
    Krull dimension of V(I): the size of a largest set of variables containing
    the support of no leading monomial of a Groebner basis. Returns -1 for the
    unit ideal.
    """
    if I.ring.ngens == 0:
        return -1 if I.generators else 0
    J = I if I.order == grevlex else ideal(I.generators, ring=I.ring,
                                           order='grevlex')
    basis = groebner_basis(J, settings)
    if is_unit_ideal(J, settings):
        return -1
    n = J.ring.ngens
    supports = [frozenset(i for i, e in enumerate(g.LM) if e) for g in basis]
    for size in range(n, -1, -1):
        for subset in combinations(range(n), size):
            chosen = set(subset)
            if not any(s <= chosen for s in supports):
                return size
    return 0


def fresh_name(names: Iterable[str], stem: str = '_t') -> str:
    taken = set(names)
    candidate, k = stem, 0
    while candidate in taken:
        k += 1
        candidate = f"{stem}{k}"
    return candidate


def saturate_units(I: IdealBasis, unit_vars: Sequence[str],
                   settings: Settings = DEFAULT_SETTINGS) -> IdealBasis:
    """
    Saturates I at the product of `unit_vars`: adds t*prod(unit_vars) - 1 for a
    fresh variable t and eliminates t.
    """
    if not unit_vars:
        return I
    names = I.names
    t = fresh_name(names)
    big = poly_ring((t,) + names, grevlex)
    gens = dict(zip(var_names(big), big.gens))
    product = big.one
    for name in unit_vars:
        product *= gens[name]
    extended = ideal(list(I.generators) + [gens[t] * product - 1], ring=big)
    saturated = eliminate(extended, names, settings)
    target = I.ring
    return IdealBasis(ring=target, generators=tuple(
        transfer(g, target) for g in saturated.generators))
