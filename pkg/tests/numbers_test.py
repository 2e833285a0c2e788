from fractions import Fraction

import pytest

from gwb.errors import ParseError
from gwb.numbers import (format_gauss, format_rat, gauss, gauss_parts,
                         parse_complex, parse_gauss, parse_rat,
                         primitive_integer_vector, to_complex)


class Test_parse_rat:
    @pytest.mark.parametrize('text,expected', [
        ('3/4', Fraction(3, 4)),
        ('-2', Fraction(-2)),
        (' 6 / 8 ', Fraction(3, 4)),
        (5, Fraction(5)),
    ])
    def test_valid(self, text, expected):
        assert parse_rat(text) == expected

    @pytest.mark.parametrize('text', ['0.5', '1e3', '1/0', 'x', True, 0.5])
    def test_invalid(self, text):
        with pytest.raises(ParseError):
            parse_rat(text)


@pytest.mark.parametrize('q,expected', [
    (Fraction(3), '3'),
    (Fraction(-1, 2), '-1/2'),
    (Fraction(0), '0'),
])
def test_format_rat(q, expected):
    assert format_rat(q) == expected


class Test_gauss:
    def test_parts(self):
        assert gauss_parts(gauss(Fraction(1, 2), -3)) == (Fraction(1, 2), Fraction(-3))

    def test_parse_pair(self):
        assert parse_gauss(['1/2', '-3']) == gauss(Fraction(1, 2), -3)

    def test_parse_single(self):
        assert parse_gauss('7') == gauss(7)

    def test_format(self):
        assert format_gauss(gauss(Fraction(2, 6), 1)) == ['1/3', '1']

    def test_wrong_arity(self):
        with pytest.raises(ParseError):
            parse_gauss(['1', '2', '3'])

    def test_to_complex(self):
        assert to_complex(gauss(1, 2)) == 1 + 2j


@pytest.mark.parametrize('values,expected', [
    ([Fraction(1, 2), Fraction(-1, 3)], (3, -2)),
    ([-2, 4], (1, -2)),
    ([0, 0], (0, 0)),
    ([0, -6, 9], (0, 2, -3)),
])
def test_primitive_integer_vector(values, expected):
    assert primitive_integer_vector(values) == expected


def test_parse_complex():
    assert parse_complex(['1.5', '-2']) == 1.5 - 2j
    with pytest.raises(ParseError):
        parse_complex(['a', 'b'])
