import math
from fractions import Fraction

import pytest

from gwb.errors import (MalformedPresentation, NotPure, PreconditionViolated,
                        ToleranceUnachievable, UnsupportedHSpec,
                        VNotOverConstants)
from gwb.gamma import (CLOSED_UP_TO, NOT_CLOSED, TWO_PI_I, HSpec, blur,
                       ax_schanuel_witness, combination_from_json,
                       combination_to_json, coordinates, is_declared,
                       is_rel_gamma_closed, locus_strong_rotund,
                       make_presentation, predimension, presentation_from_json,
                       purity_violations, variety_over_constants)
from gwb.geometry import IntMat, g_ring, make_variety
from gwb.groebner import contains
from gwb.polynomials import poly_ring
from gwb.rotundity import NOT_STRONGLY_ROTUND, STRONGLY_ROTUND_UP_TO


def gens(labels):
    ring = poly_ring(coordinates(labels))
    return dict(zip(coordinates(labels), ring.gens))


def free_pair():
    return make_presentation(['a'], [], [(1,)])


def exp_fixed_pair():
    """
    A single pair with y_a = x_a, the shape of a solution of exp(z) = z.
    """
    c = gens(['a'])
    return make_presentation(['a'], [c['y_a'] - c['x_a']], [(1,)])


class Test_HSpec:
    @pytest.mark.parametrize('spec, dense', [
        (HSpec(), False),
        (HSpec.lattice(), True),
        (HSpec.lattice(['1']), False),
        (HSpec.lattice([TWO_PI_I]), False),
        (HSpec(kind='ConstantsField', tag='C'), True),
        (HSpec(kind='Full'), True),
    ])
    def test_is_dense(self, spec, dense):
        assert spec.is_dense() == dense

    def test_from_json_string(self):
        assert HSpec.from_json('Full') == HSpec(kind='Full')

    def test_json(self):
        spec = HSpec.lattice(['1/2', TWO_PI_I])
        assert HSpec.from_json(spec.to_json()) == spec

    def test_unknown_kind(self):
        with pytest.raises(UnsupportedHSpec):
            HSpec(kind='Torus')

    def test_bad_basis(self):
        with pytest.raises(UnsupportedHSpec):
            HSpec.lattice(['pi'])
        with pytest.raises(UnsupportedHSpec):
            HSpec.lattice(['0'])
        with pytest.raises(UnsupportedHSpec):
            HSpec.lattice([])


class Test_presentation:
    def test_combination_json(self):
        v = combination_from_json([[0, [1, 2]], [1, [-3, 1]]], 2)
        assert v == (Fraction(1, 2), Fraction(-3))
        assert combination_to_json(v) == [[0, [1, 2]], [1, [-3, 1]]]
        assert combination_to_json((Fraction(0), Fraction(2))) == [1, [2, 1]]

    def test_missing_generator(self):
        with pytest.raises(MalformedPresentation):
            combination_from_json([2, [1, 1]], 2)

    def test_repeated_labels(self):
        with pytest.raises(MalformedPresentation):
            make_presentation(['a', 'a'], [])

    def test_unit_ideal(self):
        c = gens(['a'])
        with pytest.raises(MalformedPresentation):
            make_presentation(['a'], [c['y_a']])

    def test_unchecked_group_relation(self):
        with pytest.raises(MalformedPresentation):
            make_presentation(['a'], [], group_relations=[(1,)])

    def test_is_declared(self):
        P = make_presentation(['a', 'b'], [], [(2, 0), (0, 1)])
        assert is_declared(P, {'a': 4, 'b': -1})
        assert not is_declared(P, {'a': 1})

    def test_json_round_trip(self):
        P = exp_fixed_pair()
        Q = presentation_from_json(P.to_json())
        assert Q.labels == P.labels
        assert Q.declarations == P.declarations


class Test_predimension:
    def test_free_pair(self):
        report = predimension(free_pair(), [], [(1,)])
        assert (report.td, report.ldim, report.delta) == (2, 1, 1)

    def test_exp_fixed_pair(self):
        report = predimension(exp_fixed_pair(), [], [[0, [1, 1]]])
        assert (report.td, report.ldim, report.delta) == (1, 1, 0)

    def test_over_itself(self):
        report = predimension(free_pair(), ['a'], [{'a': 1}])
        assert (report.td, report.ldim, report.delta) == (0, 0, 0)

    def test_undeclared(self):
        with pytest.raises(MalformedPresentation):
            predimension(free_pair(), [], [(Fraction(1, 2),)])

    def test_not_pure(self):
        P = presentation_from_json({
            'generators': ['a', 'b'],
            'gamma': [[0, [2, 1]], [[0, [1, 1]], [1, [1, 1]]], [1, [1, 1]]],
            'denominator_bound': 2,
        })
        with pytest.raises(NotPure):
            predimension(P, ['a'], [[0, [1, 1]]])


def test_purity_violations():
    data = {'generators': ['a'], 'gamma': [[0, [2, 1]]]}
    assert purity_violations(presentation_from_json(data)) == []
    violations = purity_violations(
        presentation_from_json(dict(data, denominator_bound=2)))
    assert violations == ['2*a is declared but a is not.']


class Test_is_rel_gamma_closed:
    def test_not_closed(self):
        verdict = is_rel_gamma_closed(exp_fixed_pair(), [], 1, 1)
        assert verdict.status == NOT_CLOSED
        assert verdict.witness == ((Fraction(1),),)
        assert verdict.report.delta == 0
        assert not verdict.is_bounded_evidence

    def test_closed_up_to(self):
        verdict = is_rel_gamma_closed(free_pair(), [], 1, 2)
        assert verdict.status == CLOSED_UP_TO
        assert verdict.checked == 2
        assert verdict.is_bounded_evidence

    def test_bounds(self):
        with pytest.raises(PreconditionViolated):
            is_rel_gamma_closed(free_pair(), [], 0, 1)


class Test_blur:
    def test_trivial(self):
        P = free_pair()
        assert blur(P, HSpec()) is P

    def test_lattice(self):
        B = blur(exp_fixed_pair(), HSpec.lattice())
        assert B.labels == ('a', 'eta1', 'eta2')
        assert B.blur_labels == ('eta1', 'eta2')
        assert B.group_relations == ((0, 0, 1),)
        c = dict(zip(coordinates(B.labels), B.ring.gens))
        assert contains(B.relations, c['x_eta1'])
        assert contains(B.relations, c['x_eta2'])
        assert contains(B.relations, c['y_eta2'] - 1)
        assert not contains(B.relations, c['y_eta1'] - 1)

    def test_predimension_preserved(self):
        P = exp_fixed_pair()
        B = blur(P, HSpec.lattice())
        assert predimension(B, [], [{'a': 1}]) == predimension(P, [], [{'a': 1}])

    def test_blurred_constants(self):
        B = blur(exp_fixed_pair(), HSpec.lattice())
        e = predimension(B, [], [{'eta1': 1}])
        assert (e.td, e.ldim, e.delta) == (1, 1, 0)
        roots_of_unity = predimension(B, [], [{'eta2': 1}])
        assert (roots_of_unity.td, roots_of_unity.ldim) == (0, 0)

    def test_full(self):
        B = blur(free_pair(), HSpec(kind='Full'))
        assert B.labels == ('a',)
        assert B.blur.kind == 'Full'

    def test_twice(self):
        B = blur(free_pair(), HSpec.lattice())
        with pytest.raises(PreconditionViolated):
            blur(B, HSpec.lattice())


class Test_ax_schanuel_witness:
    def test_double(self):
        points = [(0.5, math.exp(0.5)), (1.0, math.e)]
        witness = ax_schanuel_witness(points, [TWO_PI_I], 3, 1e-10)
        assert witness.subgroup.matrix == IntMat(((2, -1),))
        assert witness.subgroup.dim_J == 1
        assert all(r < 1e-10 for r in witness.residuals)
        assert abs(witness.constants[0]) < 1e-10

    def test_logarithms(self):
        points = [(math.log(2), 2.0), (math.log(3), 3.0)]
        assert ax_schanuel_witness(points, [TWO_PI_I], 3, 1e-10) is None

    def test_tolerance(self):
        with pytest.raises(PreconditionViolated):
            ax_schanuel_witness([(0.5, 1.6)], [], 3, 0)

    def test_unachievable(self):
        with pytest.raises(ToleranceUnachievable):
            ax_schanuel_witness([('0.5', '1.6')], [], 3, 1e-10)


class Test_locus_strong_rotund:
    def test_empty_a(self):
        verdict = locus_strong_rotund(free_pair(), [], make_variety(1, []), 2)
        assert verdict.status == STRONGLY_ROTUND_UP_TO

    def test_free_locus(self):
        verdict = locus_strong_rotund(free_pair(), [{'a': 1}], make_variety(1, []), 1)
        assert verdict.status == STRONGLY_ROTUND_UP_TO

    def test_exp_fixed_locus(self):
        verdict = locus_strong_rotund(exp_fixed_pair(), [{'a': 1}],
                                      make_variety(1, []), 1)
        assert verdict.status == NOT_STRONGLY_ROTUND

    def test_dependent(self):
        with pytest.raises(PreconditionViolated):
            locus_strong_rotund(free_pair(), [{'a': 1}, {'a': 2}],
                                make_variety(1, []), 1)


class Test_variety_over_constants:
    def test_foreign_coordinates(self):
        data = {'n': 1, 'ideal': [{'terms': [{'coef': '1', 'exps': {'x_a': 1}}]}]}
        with pytest.raises(VNotOverConstants):
            variety_over_constants(free_pair(), data)

    def test_rational(self):
        data = {'n': 1, 'ideal': [{'terms': [{'coef': '1', 'exps': {'x1': 1}},
                                             {'coef': '-3', 'exps': {}}]}]}
        V = variety_over_constants(free_pair(), data)
        x1, _ = g_ring(1).gens
        assert contains(V.ideal, x1 - 3)


def _handcrafted():
    a = gens(['a'])
    ab = gens(['a', 'b'])
    return [
        (['a'], [a['y_a'] - a['x_a']], [(1,)], [{'a': 1}]),
        (['a'], [], [(1,)], [{'a': 1}]),
        (['a'], [a['y_a'] - 2], [(1,)], [{'a': 1}]),
        (['a', 'b'], [ab['y_a'] - ab['x_b']], [(1, 0), (0, 1)],
         [{'a': 1}, {'b': 1}]),
        (['a', 'b'], [ab['x_b'] - 2 * ab['x_a'], ab['y_b'] - ab['y_a'] ** 2],
         [(1, 0), (0, 1)], [{'a': 1}, {'b': 1}]),
        (['a', 'b'], [ab['x_a'] * ab['y_b'] - 1], [(1, 0), (0, 1)],
         [{'a': 1}, {'b': 1}]),
        (['a', 'b'], [ab['y_a'] - ab['x_a'], ab['y_b'] - ab['x_b']],
         [(1, 0), (0, 1)], [{'a': 1, 'b': 1}]),
        (['a', 'b'], [], [(1, 0), (0, 1)], [{'a': 1, 'b': -1}]),
        (['a', 'b'], [ab['x_a'] - ab['x_b']], [(1, 0), (0, 1)], [{'a': 1}]),
        (['a', 'b'], [ab['y_a'] * ab['y_b'] - ab['x_a']], [(1, 0), (0, 1)],
         [{'a': 1}, {'b': 1}]),
    ]


@pytest.mark.parametrize('case', range(10))
@pytest.mark.parametrize('H', [HSpec.lattice(), HSpec(kind='Full')])
def test_blur_preserves_predimension(case, H):
    labels, relations, declarations, b = _handcrafted()[case]
    P = make_presentation(labels, relations, declarations)
    assert predimension(blur(P, H), [], b).delta == predimension(P, [], b).delta
