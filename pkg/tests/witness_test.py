import cmath
from fractions import Fraction

import numpy as np
import pytest

from gwb.config import DEFAULT_SETTINGS
from gwb.errors import (NewtonDiverged, NoTransversalPoint, PointNotOnVariety,
                        PrecisionUnreachable, PreconditionViolated,
                        UnsupportedHSpec)
from gwb.gamma import HSpec
from gwb.geometry import g_ring, make_variety
from gwb.numbers import gauss
from gwb.picklers import MemoryPickler
from gwb.witness import (CPoint, WitnessPipeline, WitnessReport, approximate_in_H,
                         ax_check, check_fiber_transversality,
                         conjugate_witness, find_regular_point, find_witness,
                         numerical_rank, sample_points, verify_witness)

# The solution of exp(z) = z in the upper half plane closest to 0.
EXP_FIXED_POINT = 0.3181315052047641 + 1.3372357014306895j


def exp_curve():
    x1, y1 = g_ring(1).gens
    return make_variety(1, [y1 - x1])


def g2(*build):
    x1, x2, y1, y2 = g_ring(2).gens
    return make_variety(2, [f(x1, x2, y1, y2) for f in build])


class Test_CPoint:
    def test_zero_y(self):
        with pytest.raises(PreconditionViolated):
            CPoint((1,), (0,))

    def test_lengths(self):
        with pytest.raises(PreconditionViolated):
            CPoint((1, 2), (1,))

    def test_theta(self):
        a = CPoint((1j,), (2 * cmath.exp(1j),))
        assert abs(a.theta()[0] - 2) < 1e-12

    def test_json(self):
        a = CPoint((0.1 + 0.2j,), (3 - 1j,))
        assert CPoint.from_json(a.to_json()) == a


def test_numerical_rank():
    assert numerical_rank(np.array([[1, 2], [2, 4]], dtype=complex), 1e-8) == 1
    assert numerical_rank(np.eye(3), 1e-8) == 3
    assert numerical_rank(np.zeros((0, 2)), 1e-8) == 0


class Test_find_regular_point:
    def test_on_curve(self):
        a = find_regular_point(exp_curve(), 0)
        assert abs(a.y[0] - a.x[0]) < 1e-10

    def test_deterministic(self):
        assert find_regular_point(exp_curve(), 7) == find_regular_point(exp_curve(), 7)

    def test_streams_differ(self):
        first, second = sample_points(exp_curve(), 2, 0)
        assert first != second

    def test_negative_seed(self):
        with pytest.raises(PreconditionViolated):
            find_regular_point(exp_curve(), -1)

    def test_surface(self):
        a = find_regular_point(g2(lambda x1, x2, y1, y2: y1 - x1 - x2 - 1), 3)
        assert abs(a.y[0] - a.x[0] - a.x[1] - 1) < 1e-10


class Test_check_fiber_transversality:
    def test_transversal(self):
        assert check_fiber_transversality(exp_curve(), CPoint((2,), (2,)))

    def test_tangent(self):
        # At y = 1 the fibre direction (1, y) is tangent to y = x.
        assert not check_fiber_transversality(exp_curve(), CPoint((1,), (1,)))

    def test_off_variety(self):
        with pytest.raises(PointNotOnVariety):
            check_fiber_transversality(exp_curve(), CPoint((1,), (2,)))


class Test_ax_check:
    def test_transversal(self):
        check = ax_check(exp_curve(), CPoint((2,), (2,)))
        assert check.fibre_dim == 0
        assert check.holds

    def test_tangency(self):
        check = ax_check(exp_curve(), CPoint((1,), (1,)))
        assert (check.fibre_dim, check.local_dim, check.x_rank) == (1, 1, 1)
        assert not check.holds
        assert check.to_json()['holds'] is False

    def test_fibre_family(self):
        # x1 = x2, y1 = y2 contains the whole line x1 = x2 = s, y1 = y2 = 2 e^(s - 1/2).
        V = g2(lambda x1, x2, y1, y2: x1 - x2, lambda x1, x2, y1, y2: y1 - y2)
        check = ax_check(V, CPoint((0.5, 0.5), (2.0, 2.0)))
        assert (check.fibre_dim, check.local_dim, check.x_rank) == (1, 2, 1)
        assert check.holds

    def test_off_variety(self):
        with pytest.raises(PointNotOnVariety):
            ax_check(exp_curve(), CPoint((1,), (2,)))


class Test_approximate_in_H:
    def test_rational_exponents(self):
        t = [cmath.exp(Fraction(1, 3) + 2j * cmath.pi / 5)]
        exponents = approximate_in_H(t, HSpec.lattice(), 10, 1e-9)
        assert exponents == ((Fraction(1, 3), Fraction(1, 5)),)

    def test_not_dense(self):
        with pytest.raises(UnsupportedHSpec):
            approximate_in_H([2], HSpec.lattice(['1']), 10, 0.5)

    def test_unreachable(self):
        with pytest.raises(PrecisionUnreachable) as e:
            approximate_in_H([cmath.exp(0.123456789)], HSpec.lattice(), 3, 1e-9)
        assert e.value.details()['best_eps'] > 1e-9


class Test_find_witness:
    def test_exp_fixed_point(self):
        V = exp_curve()
        H = HSpec.lattice()
        start = CPoint((0.3 + 1.3j,), (0.3 + 1.3j,))
        report = find_witness(V, H, 0, fixed_h=[(0, 0)], start=start)
        assert abs(report.point.x[0] - EXP_FIXED_POINT) < 1e-9
        assert report.residual_gamma < 1e-10
        assert verify_witness(report, V, H)

    def test_any_solution(self):
        V = exp_curve()
        report = find_witness(V, HSpec.lattice(), 1, fixed_h=[(0, 0)])
        x = report.point.x[0]
        assert abs(cmath.exp(x) - x) < 1e-9

    def test_rounded_h(self):
        V = exp_curve()
        H = HSpec(kind='Full')
        report = find_witness(V, H, 2)
        (a, b), = report.h_exponents
        assert a.denominator <= report.qmax and b.denominator <= report.qmax
        assert verify_witness(report, V, H)

    def test_not_dense(self):
        with pytest.raises(UnsupportedHSpec):
            find_witness(exp_curve(), HSpec(), 0)

    def test_dimension(self):
        x1, y1 = g_ring(1).gens
        with pytest.raises(PreconditionViolated):
            find_witness(make_variety(1, [x1 - 1, y1 - 2]), HSpec.lattice(), 0)

    def test_fixed_h_denominators(self):
        with pytest.raises(PreconditionViolated):
            find_witness(exp_curve(), HSpec.lattice(), 0, qmax=5,
                         fixed_h=[(Fraction(1, 7), 0)])

    def test_verify_rejects(self):
        V = exp_curve()
        report = find_witness(V, HSpec.lattice(), 0, fixed_h=[(0, 0)])
        assert not verify_witness(report, V, HSpec())
        bad = WitnessReport.from_json(dict(report.to_json(), h_exponents=[['1', '0']]))
        assert not verify_witness(bad, V, HSpec.lattice())

    def test_json(self):
        report = find_witness(exp_curve(), HSpec.lattice(), 0, fixed_h=[(0, 0)])
        assert WitnessReport.from_json(report.to_json()) == report

    def test_deterministic(self):
        H = HSpec(kind='Full')
        first = find_witness(exp_curve(), H, 2)
        second = find_witness(exp_curve(), H, 2)
        assert first.to_json() == second.to_json()

    def test_stable_under_smaller_tol(self):
        V = exp_curve()
        start = CPoint((0.3 + 1.3j,), (0.3 + 1.3j,))
        coarse = find_witness(V, HSpec.lattice(), 0, tol=1e-9, fixed_h=[(0, 0)],
                              start=start)
        fine = find_witness(V, HSpec.lattice(), 0, tol=1e-12, fixed_h=[(0, 0)],
                            start=start)
        assert abs(coarse.point.x[0] - fine.point.x[0]) < 1e-8
        assert abs(coarse.point.y[0] - fine.point.y[0]) < 1e-8

    def test_fibre_family_never_transversal(self):
        # x1 - x2 is constant on V, so every theta-fibre through V runs inside it.
        V = g2(lambda x1, x2, y1, y2: x1 - x2, lambda x1, x2, y1, y2: y1 - 2 * y2)
        with pytest.raises((NoTransversalPoint, NewtonDiverged)):
            find_witness(V, HSpec.lattice(), 0)

    def test_diagonal_has_too_small_dimension(self):
        V = g2(lambda x1, x2, y1, y2: x1 - x2, lambda x1, x2, y1, y2: y1 - y2)
        with pytest.raises(PreconditionViolated):
            find_witness(V, HSpec.lattice(), 0)


class Test_conjugate_branches:
    @pytest.mark.parametrize('seed', range(8))
    def test_seeds_land_on_fixed_point_or_conjugate(self, seed):
        x = find_witness(exp_curve(), HSpec.lattice(), seed, fixed_h=[(0, 0)]).point.x[0]
        assert min(abs(x - EXP_FIXED_POINT), abs(x - EXP_FIXED_POINT.conjugate())) < 1e-9

    def test_seed_zero_is_principal(self):
        report = find_witness(exp_curve(), HSpec.lattice(), 0, fixed_h=[(0, 0)])
        assert abs(report.point.x[0] - EXP_FIXED_POINT) < 1e-9

    def test_conjugate_witness(self):
        V = exp_curve()
        H = HSpec.lattice()
        report = find_witness(V, H, 0, fixed_h=[(0, 0)])
        other = conjugate_witness(report, V)
        assert abs(other.point.x[0] - EXP_FIXED_POINT.conjugate()) < 1e-9
        assert other.h_exponents == report.h_exponents
        assert verify_witness(other, V, H)

    def test_conjugate_flips_exponents(self):
        V = exp_curve()
        H = HSpec(kind='Full')
        report = find_witness(V, H, 2)
        other = conjugate_witness(report, V)
        assert other.h_exponents == tuple((a, -b) for a, b in report.h_exponents)
        assert verify_witness(other, V, H)

    def test_complex_coefficients(self):
        report = find_witness(exp_curve(), HSpec.lattice(), 0, fixed_h=[(0, 0)])
        x1, y1 = g_ring(1).gens
        V = make_variety(1, [y1 - gauss(0, 1) * x1])
        with pytest.raises(PreconditionViolated):
            conjugate_witness(report, V)


class Test_checkpoints:
    def _pipeline(self, pickler):
        start = CPoint((0.3 + 1.3j,), (0.3 + 1.3j,))
        return WitnessPipeline(exp_curve(), HSpec.lattice(), 0, DEFAULT_SETTINGS.tol,
                               DEFAULT_SETTINGS.qmax, DEFAULT_SETTINGS.eps,
                               ((Fraction(0), Fraction(0)),), start, DEFAULT_SETTINGS,
                               pickler)

    def test_resume(self):
        pickler = MemoryPickler()
        interrupted = self._pipeline(pickler)
        assert interrupted.run_next()
        assert interrupted.run_next()
        assert len(pickler) == 1

        resumed = self._pipeline(pickler)
        assert resumed.next_state == 'round_into_h'
        assert resumed.data['point'] == interrupted.data['point']
        report = resumed.run()['report']
        assert len(pickler) == 0

        start = CPoint((0.3 + 1.3j,), (0.3 + 1.3j,))
        assert report == find_witness(exp_curve(), HSpec.lattice(), 0,
                                      fixed_h=[(0, 0)], start=start)

    def test_fresh_pickler_starts_over(self):
        pipeline = self._pipeline(MemoryPickler())
        assert pipeline.next_state is None
        assert pipeline.data == {'attempt': 0, 'transversal': 0, 'iterations': 0}


CORPUS_G2 = [
    [lambda x1, x2, y1, y2: y1 - x1 - x2 - 1, lambda x1, x2, y1, y2: y2 - x1 + x2 - 2],
    [lambda x1, x2, y1, y2: y1 - x2, lambda x1, x2, y1, y2: y2 - x1],
    [lambda x1, x2, y1, y2: y1 - x1 ** 2 - x2, lambda x1, x2, y1, y2: y2 - x1 - 3],
    [lambda x1, x2, y1, y2: y1 * y2 - x1 - 2, lambda x1, x2, y1, y2: y2 - x2 - 1],
    [lambda x1, x2, y1, y2: y1 - 2 * x1 - x2, lambda x1, x2, y1, y2: y2 + x1 - 3 * x2],
]


@pytest.mark.slow
@pytest.mark.parametrize('build', CORPUS_G2)
def test_corpus(build):
    V = g2(*build)
    H = HSpec.lattice()
    report = find_witness(V, H, 0)
    assert verify_witness(report, V, H)
