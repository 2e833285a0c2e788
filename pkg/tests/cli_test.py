import io
import json
import os

import mpmath
import pytest

from gwb.cli import EXIT_BOUNDED, EXIT_ERROR, EXIT_OK, VERB_OPTIONS, VERBS, run
from gwb.groebner import default_cache, set_cache
from gwb.series import PowerSeries, make_gamma_point


def term(coef, **exps):
    return {'coef': coef, 'exps': exps}


V_A = {'n': 1, 'ideal': [{'terms': [term('1', x1=1), term('-5')]}]}
EXP_CURVE = {'n': 1, 'ideal': [{'terms': [term('1', y1=1), term('-1', x1=1)]}]}


@pytest.fixture
def write(tmp_path):
    def write(name, data):
        path = tmp_path / name
        path.write_text(data if isinstance(data, str) else json.dumps(data))
        return str(path)
    return write


def call(*argv):
    out = io.StringIO()
    code = run(list(argv), stdout=out)
    return code, json.loads(out.getvalue())


def test_every_verb_has_options():
    assert set(VERBS) == set(VERB_OPTIONS)


class Test_rotund:
    def test_bounded(self, write):
        code, report = call('rotund', write('v.json', V_A), '--bound', '3')
        assert code == EXIT_OK
        assert report['verb'] == 'rotund'
        assert report['payload']['status'] == 'RotundUpTo'
        assert report['evidence'] == 'bounded'
        assert report['options']['bound'] == 3

    def test_strict(self, write):
        code, report = call('rotund', write('v.json', V_A), '--bound', '2', '--strict')
        assert code == EXIT_BOUNDED
        assert report['payload']['status'] == 'RotundUpTo'

    def test_definite_with_strict(self, write):
        point = {'n': 1, 'ideal': [{'terms': [term('1', x1=1), term('-1')]},
                                   {'terms': [term('1', y1=1), term('-2')]}]}
        code, report = call('rotund', write('p.json', point), '--strict')
        assert code == EXIT_OK
        assert report['payload']['status'] == 'NotRotund'
        assert report['evidence'] == 'definite'

    def test_deterministic(self, write):
        path = write('v.json', V_A)
        _, first = call('rotund', path, '--bound', '2')
        _, second = call('rotund', path, '--bound', '2')
        assert first['payload'] == second['payload']
        assert first['digest'] == second['digest']


class Test_errors:
    def test_unknown_verb(self):
        code, report = call('frobnicate')
        assert code == EXIT_ERROR
        assert report['payload']['error'] == 'UnknownVerb'
        assert report['evidence'] == 'error'

    def test_no_verb(self):
        code, report = call()
        assert code == EXIT_ERROR
        assert report['payload']['error'] == 'UnknownVerb'

    def test_unknown_option(self, write):
        code, report = call('rotund', write('v.json', V_A), '--frobnicate')
        assert code == EXIT_ERROR
        assert report['payload']['error'] == 'ParseError'

    def test_malformed_json(self, write):
        code, report = call('rotund', write('v.json', '{"n": 1,\n "ideal": [}'))
        assert code == EXIT_ERROR
        assert report['payload']['error'] == 'ParseError'
        assert report['payload']['details']['line'] == 2

    def test_missing_required_option(self, write):
        code, report = call('act', write('v.json', V_A))
        assert code == EXIT_ERROR
        assert report['payload']['error'] == 'ParseError'


def test_act(write):
    code, report = call('act', write('v.json', EXP_CURVE), '--M', '[[0]]')
    assert code == EXIT_OK
    assert report['payload']['dim'] == 0


def test_free(write):
    code, report = call('free', write('v.json', V_A), '--bound', '2')
    assert code == EXIT_OK
    assert report['payload']['status'] == 'NotFree'
    assert report['payload']['additive']['m'] == [1]


def test_predim(write):
    presentation = {'generators': ['a'], 'gamma': [[0, [1, 1]]]}
    code, report = call('predim', write('g.json', presentation), '--b', '[[0, [1, 1]]]')
    assert code == EXIT_OK
    assert report['payload'] == {'td': 2, 'ldim': 1, 'delta': 1, 'mode': 'symbolic'}


def test_relations(write):
    with mpmath.workdps(40):
        values = [mpmath.nstr(mpmath.log(k), 30) for k in (2, 3, 6)]
    code, report = call('relations', write('r.json', {'values': values}), '--bound', '5')
    assert code == EXIT_OK
    assert report['payload']['status'] == 'RelationFound'
    assert report['payload']['coefficients'] == [1, 1, -1]


def test_ede_check(write):
    N = 6
    p = make_gamma_point(PowerSeries.monomial(1, N), 2)
    bad = {'x': p.x.to_json(), 'y': PowerSeries.constant(1, N).to_json()}
    code, report = call('ede-check', write('e.json', {'points': [p.to_json(), bad]}))
    assert code == EXIT_OK
    assert report['payload'] == {'members': [True, False], 'checked_order': N - 1}


def test_validate(write):
    good = write('good.json', V_A)
    bad = write('bad.json', {'n': 1, 'ideal': [{'terms': [term('0.5', x1=1)]}]})
    code, report = call('validate', good, bad)
    assert code == EXIT_OK
    assert not report['payload']['valid']
    assert report['payload']['files'][good]['valid']
    assert not report['payload']['files'][bad]['valid']


def test_witness_and_verify(write):
    variety = write('v.json', EXP_CURVE)
    code, report = call('witness', variety, '--h', '[["0", "0"]]')
    assert code == EXIT_OK
    assert report['payload']['status'] == 'success'
    witness = write('w.json', report)
    code, report = call('verify', witness, variety)
    assert code == EXIT_OK
    assert report['payload']['verified']


def test_witness_checkpoints_in_cache_dir(write, tmp_path):
    cache = tmp_path / 'cache'
    try:
        code, report = call('witness', write('v.json', EXP_CURVE), '--h', '[["0", "0"]]',
                            '--cache-dir', str(cache))
    finally:
        set_cache(default_cache())
    assert code == EXIT_OK
    assert report['payload']['status'] == 'success'
    assert report['options']['cache_dir'] == str(cache)
    # Finished pipelines remove their checkpoints.
    assert os.listdir(cache / 'witness') == []
