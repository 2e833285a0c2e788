"""
Command-line front door: `gwb <verb> <inputs> [options]`. Every invocation
writes exactly one JSON report to standard output; diagnostics go to
standard error.

Exit codes: 0 for definite verdicts, 2 for bounded-evidence verdicts when
--strict is given, 1 for errors.
"""
import argparse
import json
import logging
import os
import sys
import time
from typing import Callable, Dict, List, Optional, Tuple

import mpmath
import numpy
import sympy

from gwb import __version__
from gwb.config import Settings
from gwb.errors import GwbError, ParseError, UnknownVerb
from gwb.freeness import is_free
from gwb.gamma import (CONSTANTS_FIELD, FULL, HSpec, ax_schanuel_witness, blur,
                       is_rel_gamma_closed, locus_strong_rotund, predimension,
                       presentation_from_json, variety_over_constants)
from gwb.geometry import IntMat, act, dimension, fibre_dim_check, variety_from_json
from gwb.groebner import set_cache
from gwb.numbers import format_rat, parse_rat
from gwb.picklers import FilePickler
from gwb.relations import (decompose_over_basis, integer_relation,
                           multiplicative_relation)
from gwb.rotundity import is_rotund, is_strongly_rotund
from gwb.schema import load_json, validate
from gwb.serialization import canonical_json, digest_bytes, object_id
from gwb.series import DiffPoint, empirical_ax_schanuel, in_gamma_de
from gwb.witness import WitnessReport, find_witness, verify_witness

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_BOUNDED = 2

H_CHOICES = {
    'lattice': lambda: HSpec.lattice(),
    'constants': lambda: HSpec(kind=CONSTANTS_FIELD, tag='C'),
    'full': lambda: HSpec(kind=FULL),
    'trivial': lambda: HSpec(),
}

# A handler returns the JSON payload and whether it is bounded evidence only.
Outcome = Tuple[dict, bool]


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ParseError(f"{self.prog}: {message}")


def _json_option(text: Optional[str], name: str, default=None):
    if text is None:
        return default
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"--{name}: {e.msg} at column {e.colno}.",
                         line=e.lineno, column=e.colno) from e


def _labels(text: Optional[str]) -> List[str]:
    return [l.strip() for l in (text or '').split(',') if l.strip()]


def _variety(path: str, settings: Settings):
    return variety_from_json(load_json(path), settings)


def _presentation(path: str, settings: Settings):
    return presentation_from_json(load_json(path), settings)


def _points(path: str) -> list:
    data = load_json(path)
    if not isinstance(data, dict) or not isinstance(data.get('points'), list):
        raise ParseError(f"{path}: expecting an object with a 'points' list.")
    return data['points']


def _values(path: str) -> list:
    data = load_json(path)
    if not isinstance(data, dict) or not isinstance(data.get('values'), list):
        raise ParseError(f"{path}: expecting an object with a 'values' list.")
    return data['values']


def run_rotund(args, settings: Settings) -> Outcome:
    verdict = is_rotund(_variety(args.inputs[0], settings),
                        args.bound or settings.matrix_bound, settings)
    return verdict.to_json(), verdict.is_bounded_evidence


def run_strong_rotund(args, settings: Settings) -> Outcome:
    verdict = is_strongly_rotund(_variety(args.inputs[0], settings),
                                 args.bound or settings.matrix_bound, settings)
    return verdict.to_json(), verdict.is_bounded_evidence


def run_free(args, settings: Settings) -> Outcome:
    report = is_free(_variety(args.inputs[0], settings), args.bound or 3,
                     args.seed, settings)
    return report.to_json(), report.is_bounded_evidence


def run_act(args, settings: Settings) -> Outcome:
    M = IntMat.from_json(_json_option(args.M, 'M'))
    image = act(M, _variety(args.inputs[0], settings), settings)
    return {'image': image.to_json(), 'dim': dimension(image, settings)}, False


def run_fibre(args, settings: Settings) -> Outcome:
    M = IntMat.from_json(_json_option(args.M, 'M'))
    point = _json_option(args.point, 'point')
    report = fibre_dim_check(_variety(args.inputs[0], settings), M, point, settings)
    return report.to_json(), False


def run_predim(args, settings: Settings) -> Outcome:
    P = _presentation(args.inputs[0], settings)
    report = predimension(P, _labels(args.A), _json_option(args.b, 'b', []), settings)
    return report.to_json(), False


def run_closed(args, settings: Settings) -> Outcome:
    P = _presentation(args.inputs[0], settings)
    verdict = is_rel_gamma_closed(P, _labels(args.A), args.rank_bound,
                                  args.comb_bound, settings)
    return verdict.to_json(), verdict.is_bounded_evidence


def run_blur(args, settings: Settings) -> Outcome:
    P = _presentation(args.inputs[0], settings)
    return blur(P, H_CHOICES[args.H](), settings).to_json(), False


def run_axs(args, settings: Settings) -> Outcome:
    data = load_json(args.inputs[0])
    if not isinstance(data, dict) or not isinstance(data.get('points'), list):
        raise ParseError(f"{args.inputs[0]}: expecting an object with a 'points' list.")
    witness = ax_schanuel_witness(data['points'], data.get('constants') or [],
                                  args.bound or 3, args.tol or settings.tol, settings)
    if witness is None:
        return {'status': 'NoWitnessAtBound', 'bound': args.bound or 3}, True
    return dict(witness.to_json(), status='WitnessFound'), False


def run_pair(args, settings: Settings) -> Outcome:
    if len(args.inputs) != 2:
        raise ParseError("pair needs a presentation and a variety file.")
    P = _presentation(args.inputs[0], settings)
    V = variety_over_constants(P, load_json(args.inputs[1]), settings)
    verdict = locus_strong_rotund(P, _json_option(args.a, 'a', []), V,
                                  args.bound or settings.matrix_bound, settings)
    return verdict.to_json(), verdict.is_bounded_evidence


def run_witness(args, settings: Settings) -> Outcome:
    fixed = _json_option(args.h, 'h')
    if fixed is not None:
        fixed = [(parse_rat(a), parse_rat(b)) for a, b in fixed]
    checkpoints = FilePickler(os.path.join(args.cache_dir, 'witness')) \
        if args.cache_dir else None
    report = find_witness(_variety(args.inputs[0], settings), H_CHOICES[args.H](),
                          args.seed, tol=args.tol, qmax=args.qmax, eps=args.eps,
                          fixed_h=fixed, settings=settings, checkpoints=checkpoints)
    return report.to_json(), False


def run_verify(args, settings: Settings) -> Outcome:
    if len(args.inputs) != 2:
        raise ParseError("verify needs a witness report and a variety file.")
    data = load_json(args.inputs[0])
    report = WitnessReport.from_json(data.get('payload', data))
    ok = verify_witness(report, _variety(args.inputs[1], settings),
                        H_CHOICES[args.H](), settings)
    return {'verified': ok, 'precision': settings.precision}, False


def run_relations(args, settings: Settings) -> Outcome:
    values = _values(args.inputs[0])
    find = multiplicative_relation if args.multiplicative else integer_relation
    candidate = find(values, args.bound or 10, args.tol or settings.tol, settings)
    if candidate is None:
        return {'status': 'NoRelationAtBound', 'bound': args.bound or 10}, True
    return dict(candidate.to_json(), status='RelationFound'), False


def run_decompose(args, settings: Settings) -> Outcome:
    qmax = args.qmax or settings.qmax
    found = []
    for value in _values(args.inputs[0]):
        pair = decompose_over_basis(value, qmax, args.tol or settings.tol, settings)
        found.append(None if pair is None else [format_rat(q) for q in pair])
    return {'qmax': qmax, 'decompositions': found}, any(p is None for p in found)


def _diff_points(path: str) -> List[DiffPoint]:
    return [DiffPoint.from_json(p) for p in _points(path)]


def run_ede_check(args, settings: Settings) -> Outcome:
    points = _diff_points(args.inputs[0])
    N = args.N or min(min(p.x.N, p.y.N) for p in points)
    members = [in_gamma_de(p, N) for p in points]
    return {'members': members, 'checked_order': N - 1}, False


def run_ede_axs(args, settings: Settings) -> Outcome:
    points = _diff_points(args.inputs[0])
    N = args.N or min(min(p.x.N, p.y.N) for p in points)
    verdict = empirical_ax_schanuel(points, args.degree, N, settings)
    return verdict.to_json(), verdict.is_bounded_evidence


def run_validate(args, settings: Settings) -> Outcome:
    verdicts = {path: validate(path).to_json() for path in args.inputs}
    return {'valid': all(v['valid'] for v in verdicts.values()),
            'files': verdicts}, False


VERBS: Dict[str, Callable] = {
    'rotund': run_rotund,
    'strong-rotund': run_strong_rotund,
    'free': run_free,
    'act': run_act,
    'fibre': run_fibre,
    'predim': run_predim,
    'closed': run_closed,
    'blur': run_blur,
    'axs': run_axs,
    'pair': run_pair,
    'witness': run_witness,
    'verify': run_verify,
    'relations': run_relations,
    'decompose': run_decompose,
    'ede-check': run_ede_check,
    'ede-axs': run_ede_axs,
    'validate': run_validate,
}

# Options each verb accepts on top of the global flags.
VERB_OPTIONS = {
    'rotund': ('bound',),
    'strong-rotund': ('bound',),
    'free': ('bound', 'seed'),
    'act': ('M',),
    'fibre': ('M', 'point'),
    'predim': ('A', 'b'),
    'closed': ('A', 'rank_bound', 'comb_bound'),
    'blur': ('H',),
    'axs': ('bound', 'tol'),
    'pair': ('a', 'bound'),
    'witness': ('H', 'seed', 'tol', 'qmax', 'eps', 'h'),
    'verify': ('H',),
    'relations': ('bound', 'tol', 'multiplicative'),
    'decompose': ('qmax', 'tol'),
    'ede-check': ('N',),
    'ede-axs': ('N', 'degree'),
    'validate': (),
}


def _add_option(parser: argparse.ArgumentParser, name: str):
    if name == 'bound':
        parser.add_argument('--bound', type=int, help='Entry or coefficient bound.')
    elif name == 'seed':
        parser.add_argument('--seed', type=int, default=0, help='Random seed.')
    elif name == 'tol':
        parser.add_argument('--tol', type=float, help='Numeric tolerance.')
    elif name == 'qmax':
        parser.add_argument('--qmax', type=int, help='Denominator bound.')
    elif name == 'eps':
        parser.add_argument('--eps', type=float, help='Rounding error allowed into H.')
    elif name == 'H':
        parser.add_argument('--H', choices=sorted(H_CHOICES), default='lattice',
                            help='The blurring group H.')
    elif name == 'h':
        parser.add_argument('--h', help='Fixed h exponents as JSON [[p/q, r/s], ...].')
    elif name == 'M':
        parser.add_argument('--M', required=True, help='Integer matrix as JSON.')
    elif name == 'point':
        parser.add_argument('--point', required=True,
                            help='Point of V as JSON, x coordinates then y.')
    elif name == 'A':
        parser.add_argument('--A', default='', help='Comma separated generator labels.')
    elif name == 'b':
        parser.add_argument('--b', help='Gamma-points as JSON combinations.')
    elif name == 'a':
        parser.add_argument('--a', help='Gamma-points as JSON combinations.')
    elif name == 'rank_bound':
        parser.add_argument('--rank-bound', type=int, default=1,
                            help='Largest tuple size searched.')
    elif name == 'comb_bound':
        parser.add_argument('--comb-bound', type=int, default=2,
                            help='Largest coefficient of a combination.')
    elif name == 'multiplicative':
        parser.add_argument('--multiplicative', action='store_true',
                            help='Search prod y_i^m_i = 1 instead of sum m_i x_i = 0.')
    elif name == 'N':
        parser.add_argument('--N', type=int, help='Truncation order.')
    elif name == 'degree':
        parser.add_argument('--degree', type=int, default=2,
                            help='Degree bound of polynomial relations.')


def make_parser(verb: str) -> argparse.ArgumentParser:
    parser = _Parser(prog=f'gwb {verb}')
    parser.add_argument('inputs', nargs='+', help='Input files.')
    parser.add_argument('--verbose', action='store_true', help='Log at DEBUG level.')
    parser.add_argument('--cache-dir',
                        help='Directory for the Groebner cache and witness checkpoints.')
    parser.add_argument('--threads', type=int, default=1, help='Worker threads.')
    parser.add_argument('--strict', action='store_true',
                        help='Exit with 2 on bounded-evidence verdicts.')
    for name in VERB_OPTIONS[verb]:
        _add_option(parser, name)
    return parser


def _inputs_digest(paths: List[str]) -> str:
    parts = []
    for path in paths:
        try:
            with open(path, 'rb') as f:
                parts.append(digest_bytes(f.read()))
        except OSError:
            parts.append('<unreadable>')
    return object_id('inputs', *parts)


def _versions() -> dict:
    return {'gwb': __version__, 'sympy': sympy.__version__,
            'mpmath': mpmath.__version__, 'numpy': numpy.__version__}


def _error_payload(e: Exception) -> dict:
    details = e.details() if isinstance(e, GwbError) else {}
    return {'error': type(e).__name__, 'message': str(e), 'details': details}


def _configure_logging(verbose: bool):
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        stream=sys.stderr,
        format='%(asctime)s %(levelname)s %(name)s: %(message)s')


def run(argv: List[str], stdout=None) -> int:
    """
    Runs one verb and writes its report.

    Keyword arguments:
    argv -- the verb followed by its inputs and options.
    stdout -- where the report goes; standard output by default.

    Returns:
    The exit code.
    """
    stdout = stdout or sys.stdout
    start = time.perf_counter()
    verb = argv[0] if argv else None
    report = {'verb': verb, 'versions': _versions()}
    settings = Settings.from_env()
    code = EXIT_OK
    try:
        if verb not in VERBS:
            raise UnknownVerb(
                f"Unknown verb {verb!r}; expecting one of {sorted(VERBS)}.")
        args = make_parser(verb).parse_args(argv[1:])
        _configure_logging(args.verbose)
        settings = Settings.from_env(threads=args.threads)
        if args.cache_dir:
            set_cache(FilePickler(args.cache_dir))
        options = {k: v for k, v in sorted(vars(args).items()) if k != 'inputs'}
        report.update(inputs=list(args.inputs), options=options,
                      digest=_inputs_digest(args.inputs))
        payload, bounded = VERBS[verb](args, settings)
        report['payload'] = payload
        report['evidence'] = 'bounded' if bounded else 'definite'
        if bounded and args.strict:
            code = EXIT_BOUNDED
    except GwbError as e:
        log.error(f"{type(e).__name__}: {e}")
        report['payload'] = _error_payload(e)
        report['evidence'] = 'error'
        code = EXIT_ERROR
    except Exception as e:
        log.exception(e)
        report['payload'] = _error_payload(e)
        report['evidence'] = 'error'
        code = EXIT_ERROR
    report['settings'] = settings.to_dict()
    report['wall_time'] = round(time.perf_counter() - start, 6)
    stdout.write(canonical_json(report))
    return code


def main():
    try:
        code = run(sys.argv[1:])
    except SystemExit as e:
        # --help
        code = e.code or 0
    sys.exit(code)
