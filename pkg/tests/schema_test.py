import json

import pytest

from gwb.errors import ParseError
from gwb.schema import (GAMMA, SERIES, UNKNOWN_KIND, VARIETY, detect_kind,
                        load_json, validate, validate_data)


def term(coef, **exps):
    return {'coef': coef, 'exps': exps}


V_A = {'n': 1, 'ideal': [{'terms': [term('1', x1=1), term('-5')]}]}


class Test_validate_data:
    def test_variety(self):
        verdict = validate_data(V_A)
        assert verdict.kind == VARIETY
        assert verdict.valid

    def test_decimal_coefficient(self):
        data = {'n': 1, 'ideal': [{'terms': [term('0.5', x1=1)]}]}
        verdict = validate_data(data)
        assert not verdict.valid
        assert verdict.violations == (
            "ideal[0].terms[0].coef: exact rationals required, got '0.5'.",)

    def test_unknown_variable(self):
        data = {'n': 1, 'ideal': [{'terms': [term('1', x2=1)]}]}
        assert not validate_data(data).valid

    def test_negative_exponent(self):
        data = {'n': 1, 'ideal': [{'terms': [term('1', y1=-1)]}]}
        assert not validate_data(data).valid

    def test_gamma(self):
        data = {'generators': ['a', 'b'], 'gamma': [[0, [1, 1]], [[0, [1, 2]], [1, [1, 1]]]]}
        verdict = validate_data(data)
        assert verdict.kind == GAMMA
        assert verdict.valid

    def test_missing_generator(self):
        data = {'generators': ['a'], 'gamma': [[1, [1, 1]]]}
        verdict = validate_data(data)
        assert len(verdict.violations) == 1
        assert 'declared pair 1 references a missing generator' in verdict.violations[0]

    def test_not_pure(self):
        data = {'generators': ['a'], 'gamma': [[0, [2, 1]]], 'denominator_bound': 2}
        verdict = validate_data(data)
        assert verdict.violations == ('gamma: not pure: 2*a is declared but a is not.',)

    def test_bad_blur(self):
        data = {'generators': ['a'], 'blur': {'kind': 'Torus'}}
        assert validate_data(data).violations[0].startswith('blur:')

    def test_series(self):
        assert validate_data({'N': 1, 'coeffs': ['1', ['0', '1/2']]}).kind == SERIES
        verdict = validate_data({'N': 2, 'coeffs': ['1', '1']})
        assert verdict.violations == ("N: is 2 but 2 coefficients were given.",)

    def test_points(self):
        series = {'coeffs': ['0', '1']}
        assert validate_data({'points': [{'x': series, 'y': series}]}).valid
        assert not validate_data({'points': [[1]]}).valid

    def test_unknown(self):
        verdict = validate_data([1, 2])
        assert verdict.kind == UNKNOWN_KIND
        assert not verdict.valid


@pytest.mark.parametrize('data, kind', [
    (V_A, 'variety'),
    ({'generators': []}, 'gamma'),
    ({'coeffs': []}, 'series'),
    ({'points': []}, 'points'),
    ({'values': [1]}, 'values'),
    ({'point': {}, 'h_exponents': []}, 'witness'),
    ({}, 'unknown'),
])
def test_detect_kind(data, kind):
    assert detect_kind(data) == kind


class Test_files:
    def test_valid_file(self, tmp_path):
        path = tmp_path / 'v.json'
        path.write_text(json.dumps(V_A))
        assert validate(path).valid

    def test_invalid_json(self, tmp_path):
        path = tmp_path / 'v.json'
        path.write_text('{"n": 1,\n "ideal": [}')
        with pytest.raises(ParseError) as e:
            load_json(path)
        assert e.value.line == 2
        verdict = validate(path)
        assert verdict.kind == UNKNOWN_KIND
        assert not verdict.valid

    def test_missing_file(self, tmp_path):
        verdict = validate(tmp_path / 'absent.json')
        assert 'Cannot read' in verdict.violations[0]
