"""
Bounded rotundity checks: dim M.V >= rk M (strictly, for strong rotundity)
over all integer matrices up to an entry bound, one matrix per rational row
space.
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import combinations, product
from typing import Iterator, List, Optional, Tuple

from more_itertools import chunked, unique_everseen

from gwb.config import DEFAULT_SETTINGS, Settings
from gwb.errors import MalformedVariety, PreconditionViolated
from gwb.geometry import GSubvariety, IntMat, dim_image
from gwb.groebner import is_unit_ideal
from gwb.lattice import canonical_row_space

log = logging.getLogger(__name__)

ROTUND_UP_TO = 'RotundUpTo'
NOT_ROTUND = 'NotRotund'
STRONGLY_ROTUND_UP_TO = 'StronglyRotundUpTo'
NOT_STRONGLY_ROTUND = 'NotStronglyRotund'

BOUNDED_STATUSES = {ROTUND_UP_TO, STRONGLY_ROTUND_UP_TO}


@dataclass(frozen=True)
class RotundityVerdict:
    """
    Outcome of a bounded rotundity check. A failing verdict carries a witness
    matrix M with dim M.V < rk M (or <= for strong rotundity), which holds
    unconditionally; a passing verdict is evidence up to `bound` only.
    """
    status: str
    bound: int
    witness: Optional[IntMat] = None
    witness_dim: Optional[int] = None
    checked: int = 0
    irreducible_asserted: bool = True

    @property
    def is_bounded_evidence(self) -> bool:
        return self.status in BOUNDED_STATUSES

    def to_json(self) -> dict:
        data = {'status': self.status, 'bound': self.bound,
                'checked': self.checked,
                'irreducible_asserted': self.irreducible_asserted}
        if self.witness is not None:
            data['witness'] = self.witness.to_json()
            data['witness_dim'] = self.witness_dim
            data['witness_rank'] = self.witness.rank
        return data


def _vectors(n: int, bound: int) -> List[Tuple[int, ...]]:
    """
    Nonzero integer vectors with entries in [-bound, bound] and first nonzero
    entry positive.
    """
    vectors = []
    for v in product(range(-bound, bound + 1), repeat=n):
        lead = next((e for e in v if e != 0), 0)
        if lead > 0:
            vectors.append(v)
    return vectors


def row_space_representatives(n: int, bound: int) -> Iterator[IntMat]:
    """
    Yields one matrix per rational row space spanned by rows with entries
    bounded by `bound`, ordered by rank descending and then by canonical rows.
    The full space is represented by the identity.
    """
    yield IntMat.identity(n)
    vectors = _vectors(n, bound)
    for rank in range(n - 1, 0, -1):
        spaces = set()
        for rows in combinations(vectors, rank):
            canonical = canonical_row_space(rows)
            if len(canonical) == rank:
                spaces.add(canonical)
        for canonical in sorted(spaces):
            yield IntMat(canonical)


def _witness_key(M: IntMat):
    return (-M.rank, M.rows)


def _check(V: GSubvariety, candidates: List[IntMat], strict: bool,
           settings: Settings) -> Optional[Tuple[IntMat, int]]:
    for M in candidates:
        dim = dim_image(M, V, settings)
        failing = dim <= M.rank if strict else dim < M.rank
        if failing:
            return M, dim
    return None


def _search(V: GSubvariety, bound: int, strict: bool,
            settings: Settings) -> Tuple[Optional[Tuple[IntMat, int]], int]:
    candidates = unique_everseen(row_space_representatives(V.n, bound),
                                 key=lambda M: M.rows)
    batches = chunked(candidates, 8)
    checked = 0
    threads = max(1, settings.threads)
    if threads == 1:
        for batch in batches:
            found = _check(V, batch, strict, settings)
            if found is not None:
                return found, checked + batch.index(found[0]) + 1
            checked += len(batch)
        return None, checked
    with ThreadPoolExecutor(max_workers=threads) as pool:
        for group in chunked(batches, threads):
            results = list(pool.map(
                lambda batch: _check(V, batch, strict, settings), group))
            failures = [r for r in results if r is not None]
            checked += sum(len(batch) for batch in group)
            if failures:
                return min(failures, key=lambda r: _witness_key(r[0])), checked
    return None, checked


def _verdict(V: GSubvariety, bound: int, strict: bool,
             settings: Settings) -> RotundityVerdict:
    if bound < 1:
        raise PreconditionViolated(f"The matrix bound must be positive, got {bound}.")
    if is_unit_ideal(V.ideal, settings):
        raise MalformedVariety("The variety is empty.")
    if not V.irreducible_asserted:
        log.warning("Irreducibility of V is not asserted; the rotundity "
                    "verdict is conditional on it.")
    found, checked = _search(V, bound, strict, settings)
    passed = STRONGLY_ROTUND_UP_TO if strict else ROTUND_UP_TO
    failed = NOT_STRONGLY_ROTUND if strict else NOT_ROTUND
    if found is None:
        log.info(f"No failing matrix among {checked} row spaces at bound {bound}.")
        return RotundityVerdict(status=passed, bound=bound, checked=checked,
                                irreducible_asserted=V.irreducible_asserted)
    M, dim = found
    log.info(f"Matrix {M.rows} has dim M.V = {dim} against rank {M.rank}.")
    return RotundityVerdict(status=failed, bound=bound, witness=M,
                            witness_dim=dim, checked=checked,
                            irreducible_asserted=V.irreducible_asserted)


def is_rotund(V: GSubvariety, bound: int,
              settings: Settings = DEFAULT_SETTINGS) -> RotundityVerdict:
    """
    Checks dim M.V >= rk M for one matrix per rational row space with entries
    bounded by `bound` (and all ranks 1..n).

    Returns:
    NotRotund with a failing matrix, or RotundUpTo(bound).
    """
    return _verdict(V, bound, False, settings)


def is_strongly_rotund(V: GSubvariety, bound: int,
                       settings: Settings = DEFAULT_SETTINGS) -> RotundityVerdict:
    """
    As is_rotund with the strict inequality dim M.V > rk M for M != 0.
    """
    return _verdict(V, bound, True, settings)
