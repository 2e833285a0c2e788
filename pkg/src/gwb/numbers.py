"""
Exact scalars. Rationals are `fractions.Fraction`; Gaussian rationals are
elements of sympy's QQ_I domain, the coefficient field of every polynomial in
the workbench.
"""
import re
from math import gcd
from fractions import Fraction
from typing import Sequence, Tuple, Union

import mpmath
from sympy import QQ, QQ_I

from gwb.errors import ParseError

Rat = Fraction
GaussRat = type(QQ_I.one)

_RAT_PATTERN = re.compile(r'^\s*([+-]?\d+)\s*(?:/\s*(\d+)\s*)?$')


def parse_rat(text: Union[str, int]) -> Fraction:
    """
    Parses an exact rational written as "n" or "n/d". Decimal and exponent
    notation is rejected, since such literals are not exact in this context.
    """
    if isinstance(text, bool):
        raise ParseError(f"Expecting an exact rational, got {text!r}.")
    if isinstance(text, int):
        return Fraction(text)
    if not isinstance(text, str):
        raise ParseError(
            f"Expecting an exact rational string, got {type(text).__name__} "
            f"{text!r}.")
    match = _RAT_PATTERN.match(text)
    if match is None:
        raise ParseError(
            f"'{text}' is not an exact rational; use the form n or n/d.")
    num, den = match.group(1), match.group(2)
    if den is not None and int(den) == 0:
        raise ParseError(f"'{text}' has a zero denominator.")
    return Fraction(int(num), int(den) if den is not None else 1)


def format_rat(q: Fraction) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def qq(q: Fraction):
    q = Fraction(q)
    return QQ(q.numerator, q.denominator)


def from_qq(q) -> Fraction:
    return Fraction(int(q.numerator), int(q.denominator))


def gauss(re_part=0, im_part=0) -> GaussRat:
    return QQ_I(qq(re_part), qq(im_part))


def gauss_parts(c: GaussRat) -> Tuple[Fraction, Fraction]:
    c = QQ_I.convert(c)
    return from_qq(c.x), from_qq(c.y)


def parse_gauss(value) -> GaussRat:
    """
    Parses a Gaussian rational written as a pair ["a/b", "c/d"] (real and
    imaginary parts) or as a single rational string.
    """
    if isinstance(value, (list, tuple)):
        if len(value) != 2:
            raise ParseError(
                f"A Gaussian rational needs exactly two parts, got {value!r}.")
        return gauss(parse_rat(value[0]), parse_rat(value[1]))
    return gauss(parse_rat(value))


def format_gauss(c: GaussRat) -> list:
    re_part, im_part = gauss_parts(c)
    return [format_rat(re_part), format_rat(im_part)]


def to_complex(c) -> complex:
    if isinstance(c, (int, Fraction)):
        return complex(float(c))
    if isinstance(c, (float, complex)):
        return complex(c)
    re_part, im_part = gauss_parts(c)
    return complex(float(re_part), float(im_part))


def to_mpc(c) -> mpmath.mpc:
    """
    Converts an exact scalar to an mpmath complex at the current mpmath
    precision.
    """
    if isinstance(c, (float, complex)):
        return mpmath.mpc(c)
    if isinstance(c, (int, Fraction)):
        c = Fraction(c)
        return mpmath.mpc(mpmath.mpf(c.numerator) / c.denominator)
    re_part, im_part = gauss_parts(c)
    return mpmath.mpc(mpmath.mpf(re_part.numerator) / re_part.denominator,
                      mpmath.mpf(im_part.numerator) / im_part.denominator)


def format_complex(z, digits: int = 17) -> list:
    """
    Serializes a complex number as ["re", "im"] decimal strings.
    """
    if isinstance(z, mpmath.mpc):
        return [mpmath.nstr(z.real, digits), mpmath.nstr(z.imag, digits)]
    z = complex(z)
    return [repr(z.real), repr(z.imag)]


def parse_complex(value) -> complex:
    try:
        if isinstance(value, (list, tuple)):
            return complex(float(value[0]), float(value[1]))
        return complex(value)
    except (TypeError, ValueError, IndexError) as e:
        raise ParseError(f"Cannot read a complex number from {value!r}.") from e


def primitive_integer_vector(values: Sequence[Fraction]) -> Tuple[int, ...]:
    """
    Scales a rational vector to the primitive integer vector on the same ray
    whose first nonzero entry is positive.
    """
    values = [Fraction(v) for v in values]
    lcm = 1
    for v in values:
        lcm = lcm * v.denominator // gcd(lcm, v.denominator)
    ints = [int(v * lcm) for v in values]
    g = 0
    for i in ints:
        g = gcd(g, abs(i))
    if g == 0:
        return tuple(ints)
    ints = [i // g for i in ints]
    lead = next((i for i in ints if i != 0), 0)
    if lead < 0:
        ints = [-i for i in ints]
    return tuple(ints)


def from_sympy_rational(r) -> Fraction:
    """
    Converts a sympy Rational (or Integer) to a Fraction.
    """
    return Fraction(int(r.p), int(r.q))


def as_gauss(value) -> GaussRat:
    """
    Coerces an int, Fraction, (re, im) pair or QQ_I element to QQ_I.
    """
    if isinstance(value, (int, Fraction)):
        return gauss(value)
    if isinstance(value, (list, tuple)):
        return gauss(value[0], value[1])
    return QQ_I.convert(value)
