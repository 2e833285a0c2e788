"""
Schema checks for the workbench's input files. Nothing here runs a checker:
files are inspected structurally and every violation found is listed.
"""
import json
import logging
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Any, List, Mapping, Sequence, Tuple

from gwb.errors import GwbError, ParseError
from gwb.gamma import (GammaPresentation, HSpec, combination_from_json,
                       coordinates, purity_violations)
from gwb.groebner import ideal
from gwb.numbers import parse_rat
from gwb.polynomials import poly_ring
from gwb.witness import WitnessReport

log = logging.getLogger(__name__)

VARIETY = 'variety'
GAMMA = 'gamma'
SERIES = 'series'
POINTS = 'points'
WITNESS = 'witness'
VALUES = 'values'
UNKNOWN_KIND = 'unknown'

_LABEL_PATTERN = re.compile(r'^[A-Za-z][A-Za-z0-9]*$')


@dataclass(frozen=True)
class SchemaVerdict:
    kind: str
    violations: Tuple[str, ...] = ()

    @property
    def valid(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {'kind': self.kind, 'valid': self.valid,
                'violations': list(self.violations)}


def load_json(path) -> Any:
    """
    Reads a JSON document, turning decoder errors into a ParseError that
    carries the line and column.
    """
    path = Path(path)
    try:
        text = path.read_text(encoding='utf-8')
    except OSError as e:
        raise ParseError(f"Cannot read {path}: {e.strerror}.") from e
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"{path}: {e.msg} at line {e.lineno}, column {e.colno}.",
                         line=e.lineno, column=e.colno) from e


def detect_kind(data) -> str:
    if isinstance(data, Mapping):
        if 'n' in data and 'ideal' in data:
            return VARIETY
        if 'generators' in data:
            return GAMMA
        if 'coeffs' in data:
            return SERIES
        if 'point' in data and 'h_exponents' in data:
            return WITNESS
        if 'points' in data:
            return POINTS
        if 'values' in data:
            return VALUES
    return UNKNOWN_KIND


def _is_int(v) -> bool:
    return isinstance(v, int) and not isinstance(v, bool)


def _exact(value, where: str, out: List[str]):
    parts = value if isinstance(value, list) else [value]
    if isinstance(value, list) and len(value) != 2:
        out.append(f"{where}: a Gaussian rational is [re, im], got {value!r}.")
        return
    for part in parts:
        try:
            parse_rat(part)
        except ParseError:
            out.append(f"{where}: exact rationals required, got {part!r}.")


def _polynomial(p, names: Sequence[str], where: str, out: List[str]):
    if not isinstance(p, Mapping) or not isinstance(p.get('terms'), list):
        out.append(f"{where}: a polynomial needs a 'terms' list.")
        return
    allowed = set(p.get('vars') or names)
    unknown = allowed - set(names)
    if unknown:
        out.append(f"{where}: unknown variables {sorted(unknown)}.")
    for j, term in enumerate(p['terms']):
        here = f"{where}.terms[{j}]"
        if not isinstance(term, Mapping) or 'coef' not in term:
            out.append(f"{here}: a term needs a 'coef'.")
            continue
        _exact(term['coef'], f"{here}.coef", out)
        exps = term.get('exps') or {}
        if not isinstance(exps, Mapping):
            out.append(f"{here}.exps: expecting a map from variable to exponent.")
            continue
        for name, e in exps.items():
            if name not in allowed or name not in names:
                out.append(f"{here}: variable '{name}' is not one of {list(names)}.")
            if not _is_int(e) or e < 0:
                out.append(f"{here}: exponent of '{name}' must be a non-negative "
                           f"integer, got {e!r}.")


def _variety(data: Mapping, out: List[str]):
    n = data.get('n')
    if not _is_int(n) or n < 1:
        out.append(f"n: must be a positive integer, got {n!r}.")
        return
    if not isinstance(data.get('ideal'), list):
        out.append("ideal: expecting a list of polynomials.")
        return
    names = [f'x{i}' for i in range(1, n + 1)] + [f'y{i}' for i in range(1, n + 1)]
    for i, p in enumerate(data['ideal']):
        _polynomial(p, names, f"ideal[{i}]", out)


def _combination(record, g: int, where: str, out: List[str]):
    def is_term(t):
        return isinstance(t, list) and len(t) == 2 and _is_int(t[0]) and \
            isinstance(t[1], list) and len(t[1]) == 2 and all(map(_is_int, t[1]))
    terms = [record] if is_term(record) else record
    if not isinstance(terms, list) or not terms:
        out.append(f"{where}: expecting [pair_index, [num, den]] terms.")
        return
    for term in terms:
        if not is_term(term):
            out.append(f"{where}: malformed term {term!r}.")
        elif not 0 <= term[0] < g:
            out.append(f"{where}: declared pair {term[0]} references a missing "
                       f"generator; there are {g}.")
        elif term[1][1] == 0:
            out.append(f"{where}: zero denominator in {term!r}.")


def _gamma(data: Mapping, out: List[str]):
    labels = data.get('generators')
    if not isinstance(labels, list) or not all(isinstance(l, str) for l in labels):
        out.append("generators: expecting a list of labels.")
        return
    if len(set(labels)) != len(labels):
        out.append(f"generators: repeated labels in {labels}.")
    bad = [l for l in labels if not _LABEL_PATTERN.match(l)]
    if bad:
        out.append(f"generators: labels must be alphanumeric and start with a "
                   f"letter: {bad}.")
    missing = [c for c in data.get('constants') or [] if c not in labels]
    if missing:
        out.append(f"constants: {missing} are not generators.")
    names = list(coordinates(labels))
    for i, p in enumerate(data.get('relations') or []):
        _polynomial(p, names, f"relations[{i}]", out)
    for i, record in enumerate(data.get('gamma') or []):
        _combination(record, len(labels), f"gamma[{i}]", out)
    for i, m in enumerate(data.get('group_relations') or []):
        if not isinstance(m, list) or len(m) != len(labels) or \
                not all(map(_is_int, m)) or not any(m):
            out.append(f"group_relations[{i}]: expecting {len(labels)} integers, "
                       f"not all zero.")
    bound = data.get('denominator_bound', 1)
    if not _is_int(bound) or bound < 1:
        out.append(f"denominator_bound: must be a positive integer, got {bound!r}.")
    try:
        HSpec.from_json(data.get('blur') or {'kind': 'Trivial'})
    except GwbError as e:
        out.append(f"blur: {e}")
    if not out:
        out.extend(_purity(data))


def _purity(data: Mapping) -> List[str]:
    """
    Purity only depends on the declared lattice, so the relations are not
    saturated here.
    """
    labels = tuple(data['generators'])
    P = GammaPresentation(
        labels=labels, relations=ideal([], ring=poly_ring(coordinates(labels))),
        declarations=tuple(combination_from_json(r, len(labels))
                           for r in data.get('gamma') or []),
        denominator_bound=data.get('denominator_bound', 1),
        group_relations=tuple(tuple(m) for m in data.get('group_relations') or []))
    return [f"gamma: not pure: {v}" for v in purity_violations(P)]


def _series(data: Mapping, where: str, out: List[str]):
    coeffs = data.get('coeffs')
    if not isinstance(coeffs, list) or not coeffs:
        out.append(f"{where}coeffs: expecting a nonempty list.")
        return
    N = data.get('N', len(coeffs) - 1)
    if not _is_int(N) or N != len(coeffs) - 1:
        out.append(f"{where}N: is {N!r} but {len(coeffs)} coefficients were given.")
    if data.get('mode', 'exact') == 'exact':
        for k, c in enumerate(coeffs):
            _exact(c, f"{where}coeffs[{k}]", out)


def _points(data: Mapping, out: List[str]):
    points = data.get('points')
    if not isinstance(points, list) or not points:
        out.append("points: expecting a nonempty list.")
        return
    for i, p in enumerate(points):
        if isinstance(p, Mapping) and 'x' in p and 'y' in p:
            if isinstance(p['x'], Mapping):
                _series(p['x'], f"points[{i}].x.", out)
                _series(p['y'], f"points[{i}].y.", out)
        elif not (isinstance(p, list) and len(p) == 2):
            out.append(f"points[{i}]: expecting an (x, y) pair.")


def _witness(data: Mapping, out: List[str]):
    try:
        WitnessReport.from_json(data)
    except GwbError as e:
        out.append(str(e))


def _values(data: Mapping, out: List[str]):
    if not isinstance(data.get('values'), list) or not data['values']:
        out.append("values: expecting a nonempty list of numbers.")


_CHECKS = {
    VARIETY: _variety,
    GAMMA: _gamma,
    SERIES: lambda data, out: _series(data, '', out),
    POINTS: _points,
    WITNESS: _witness,
    VALUES: _values,
}


def validate_data(data) -> SchemaVerdict:
    kind = detect_kind(data)
    if kind == UNKNOWN_KIND:
        return SchemaVerdict(kind=kind, violations=(
            "Unrecognized document: expecting a variety, gamma presentation, "
            "series, point list, witness report or value list.",))
    violations: List[str] = []
    _CHECKS[kind](data, violations)
    log.debug(f"{kind} document has {len(violations)} violations.")
    return SchemaVerdict(kind=kind, violations=tuple(violations))


def validate(path) -> SchemaVerdict:
    """
    Schema-checks a file without running any checker.

    Returns:
    The detected document kind and the list of violations; a file that
    cannot be read or decoded yields a single violation.
    """
    try:
        data = load_json(path)
    except ParseError as e:
        return SchemaVerdict(kind=UNKNOWN_KIND, violations=(str(e),))
    return validate_data(data)
