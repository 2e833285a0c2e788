import cmath
import random
from fractions import Fraction
from math import factorial

import pytest

from gwb.errors import (LengthMismatch, NonzeroConstantTerm,
                        PreconditionViolated, ResolutionTooLow, ZeroConstant)
from gwb.geometry import IntMat, g_ring
from gwb.numbers import as_gauss, gauss
from gwb.series import (NO_RELATION_AT_BOUND, NUMERIC, SUBGROUP_FOUND,
                        DiffPoint, PowerSeries, d, empirical_ax_schanuel,
                        exp_series, gamma_add, in_gamma_de, make_gamma_point)


def t(N, k=1, c=1):
    return PowerSeries.monomial(k, N, c)


def q(num, den=1):
    return as_gauss(Fraction(num, den))


class Test_PowerSeries:
    def test_arithmetic(self):
        a = PowerSeries((1, 2, 3))
        b = PowerSeries((0, 1, 0))
        assert (a + b).coeffs == (q(1), q(3), q(3))
        assert (a - a).coeffs == PowerSeries.zero(2).coeffs
        assert (a * b).coeffs == (q(0), q(1), q(2))
        assert (2 * a).coeffs == (q(2), q(4), q(6))

    def test_gaussian_coefficients(self):
        i = PowerSeries.constant(gauss(0, 1), 2)
        assert (i * i).coeffs == (q(-1), q(0), q(0))

    def test_length_mismatch(self):
        with pytest.raises(LengthMismatch):
            PowerSeries((1, 2)) + PowerSeries((1, 2, 3))

    def test_mixed_modes(self):
        with pytest.raises(PreconditionViolated):
            PowerSeries((1, 2)) * PowerSeries((1, 2), NUMERIC)

    def test_truncate(self):
        assert PowerSeries((1, 2, 3)).truncate(1).coeffs == (q(1), q(2))
        with pytest.raises(LengthMismatch):
            PowerSeries((1, 2)).truncate(3)

    def test_from_terms(self):
        s = PowerSeries.from_terms({0: 1, 2: Fraction(1, 2), 9: 7}, 3)
        assert s.coeffs == (q(1), q(0), q(1, 2), q(0))

    def test_json(self):
        s = PowerSeries((1, Fraction(-1, 3), gauss(0, 2)))
        assert s.to_json() == {'N': 2, 'coeffs': [['1', '0'], ['-1/3', '0'], ['0', '2']]}
        assert PowerSeries.from_json(s.to_json()) == s

    def test_json_length(self):
        with pytest.raises(LengthMismatch):
            PowerSeries.from_json({'N': 3, 'coeffs': ['1', '2']})


class Test_d:
    def test_polynomial(self):
        s = PowerSeries.from_terms({1: 2, 3: 1}, 4)
        assert d(s).coeffs == (q(2), q(0), q(3), q(0), q(0))

    def test_constant(self):
        assert d(PowerSeries.constant(5, 3)) == PowerSeries.zero(3)

    @pytest.mark.parametrize('seed', range(5))
    def test_leibniz(self, seed):
        rng = random.Random(seed)
        N = 8
        a = PowerSeries(tuple(Fraction(rng.randint(-9, 9), rng.randint(1, 5))
                              for _ in range(N + 1)))
        b = PowerSeries(tuple(Fraction(rng.randint(-9, 9), rng.randint(1, 5))
                              for _ in range(N + 1)))
        left = d(a * b)
        right = d(a) * b + a * d(b)
        assert left.truncate(N - 1) == right.truncate(N - 1)


class Test_exp_series:
    def test_exp_t(self):
        s = exp_series(t(8))
        assert s.coeffs == tuple(q(1, factorial(k)) for k in range(9))

    def test_exp_t_squared(self):
        s = exp_series(t(8, 2))
        expected = [q(0)] * 9
        for k in range(5):
            expected[2 * k] = q(1, factorial(k))
        assert s.coeffs == tuple(expected)

    def test_numeric(self):
        s = exp_series(PowerSeries.monomial(1, 6, 1j, NUMERIC))
        for k in range(7):
            assert abs(s[k] - 1j ** k / factorial(k)) < 1e-15

    def test_nonzero_constant(self):
        with pytest.raises(NonzeroConstantTerm):
            exp_series(PowerSeries((1, 1, 0)))


class Test_in_gamma_de:
    def test_exp(self):
        assert in_gamma_de(DiffPoint(t(6), exp_series(t(6))), 6)

    def test_not_a_solution(self):
        assert not in_gamma_de(DiffPoint(t(4), PowerSeries((1, 1, 0, 0, 0))), 4)

    def test_constants(self):
        assert in_gamma_de(DiffPoint(PowerSeries.constant(3, 4),
                                     PowerSeries.constant(5, 4)), 4)

    def test_zero_y(self):
        assert not in_gamma_de(DiffPoint(PowerSeries.zero(3), PowerSeries.zero(3)), 3)

    def test_short(self):
        with pytest.raises(LengthMismatch):
            in_gamma_de(DiffPoint(t(3), exp_series(t(3))), 5)

    def test_numeric(self):
        x = PowerSeries((0, 1, 0, 0), NUMERIC)
        y = PowerSeries(tuple(cmath.exp(0) / factorial(k) for k in range(4)), NUMERIC)
        assert in_gamma_de(DiffPoint(x, y), 3)


class Test_make_gamma_point:
    def test_scaled(self):
        p = make_gamma_point(t(5), 5)
        assert p.y[0] == q(5)
        assert p.y[3] == q(5, 6)
        assert in_gamma_de(p, 5)

    def test_zero_constant(self):
        with pytest.raises(ZeroConstant):
            make_gamma_point(t(5), 0)


@pytest.mark.parametrize('seed', range(10))
def test_gamma_add_closure(seed):
    rng = random.Random(seed)
    N = 7

    def random_point():
        x = PowerSeries((0,) + tuple(Fraction(rng.randint(-5, 5), rng.randint(1, 3))
                                     for _ in range(N)))
        return make_gamma_point(x, gauss(rng.randint(1, 4), rng.randint(-2, 2)))

    assert in_gamma_de(gamma_add(random_point(), random_point()), N)


class Test_empirical_ax_schanuel:
    def test_single_exponential(self):
        N = 16
        verdict = empirical_ax_schanuel([make_gamma_point(t(N), 1)], 3, N)
        assert verdict.status == NO_RELATION_AT_BOUND
        assert verdict.rank == verdict.hilbert_bound == 10
        assert verdict.relations == verdict.kernel == ()
        assert verdict.checked_order == N - 1
        assert verdict.is_bounded_evidence

    def test_linear_subgroup(self):
        N = 12
        points = [make_gamma_point(t(N), 1), make_gamma_point(t(N, c=2), 1)]
        verdict = empirical_ax_schanuel(points, 1, N)
        assert verdict.status == SUBGROUP_FOUND
        assert verdict.subgroup == IntMat(((2, -1),))
        assert not verdict.is_bounded_evidence

    def test_algebraic_x(self):
        N = 24
        points = [make_gamma_point(t(N), 1), make_gamma_point(t(N, 2), 1)]
        verdict = empirical_ax_schanuel(points, 2, N)
        assert verdict.status == NO_RELATION_AT_BOUND
        x1, x2, y1, y2 = g_ring(2).gens
        assert verdict.kernel == (x1 ** 2 - x2,)
        assert verdict.relations == ()
        assert verdict.rank == 14

    def test_resolution(self):
        with pytest.raises(ResolutionTooLow) as e:
            empirical_ax_schanuel([make_gamma_point(t(10), 1)], 3, 10)
        assert e.value.details() == {'required': 12}

    def test_not_a_solution(self):
        p = DiffPoint(t(12), PowerSeries.constant(1, 12))
        with pytest.raises(PreconditionViolated):
            empirical_ax_schanuel([p], 1, 12)

    def test_numeric(self):
        x = PowerSeries.monomial(1, 6, 1, NUMERIC)
        with pytest.raises(PreconditionViolated):
            empirical_ax_schanuel([DiffPoint(x, exp_series(x))], 1, 6)

    def test_to_json(self):
        N = 16
        data = empirical_ax_schanuel([make_gamma_point(t(N), 1)], 3, N).to_json()
        assert data['status'] == NO_RELATION_AT_BOUND
        assert data['hilbert_bound'] == 10
        assert data['evaluation_kernel'] == []
        assert 'relations' not in data

    def test_kernel_without_relation_to_json(self):
        N = 24
        points = [make_gamma_point(t(N), 1), make_gamma_point(t(N, 2), 1)]
        data = empirical_ax_schanuel(points, 2, N).to_json()
        assert data['status'] == NO_RELATION_AT_BOUND
        assert len(data['evaluation_kernel']) == 1
        assert 'relations' not in data


def _random_x(rng, N, degree=3):
    coeffs = {1: Fraction(rng.choice([-3, -2, -1, 1, 2, 3]), rng.randint(1, 4))}
    for k in range(2, degree + 1):
        coeffs[k] = Fraction(rng.randint(-4, 4), rng.randint(1, 4))
    return PowerSeries.from_terms(coeffs, N)


def _constant(rng):
    return gauss(rng.randint(1, 5), rng.randint(-2, 2))


@pytest.mark.slow
@pytest.mark.parametrize('seed', range(20))
def test_planted_linear_relations(seed):
    rng = random.Random(seed)
    N = 24
    if seed % 2:
        points = [make_gamma_point(PowerSeries.zero(N), _constant(rng))]
        verdict = empirical_ax_schanuel(points, 3, N)
        assert verdict.subgroup == IntMat(((1,),))
    else:
        r = Fraction(rng.choice([-3, -2, -1, 1, 2, 3]), rng.randint(1, 3))
        x = _random_x(rng, N)
        points = [make_gamma_point(x, _constant(rng)),
                  make_gamma_point(x.scale(r), _constant(rng))]
        verdict = empirical_ax_schanuel(points, 2, N)
        (m1, m2), = verdict.subgroup.rows
        assert m1 + m2 * r == 0
    assert verdict.status == SUBGROUP_FOUND


@pytest.mark.slow
@pytest.mark.parametrize('seed', range(20))
def test_planted_free(seed):
    rng = random.Random(1000 + seed)
    N = 24
    if seed % 2:
        points = [make_gamma_point(_random_x(rng, N), _constant(rng))]
        verdict = empirical_ax_schanuel(points, 3, N)
    else:
        x1 = _random_x(rng, N)
        x2 = x1 * x1 + _random_x(rng, N, 1)
        points = [make_gamma_point(x1, _constant(rng)),
                  make_gamma_point(x2, _constant(rng))]
        verdict = empirical_ax_schanuel(points, 2, N)
    assert verdict.status == NO_RELATION_AT_BOUND
