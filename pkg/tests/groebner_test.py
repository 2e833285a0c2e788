import pytest

from gwb.config import Settings
from gwb.errors import ResourceExhausted
from gwb.groebner import (CACHE_SIZE, buchberger, contains, default_cache,
                          eliminate, fresh_name, groebner_basis, ideal,
                          ideal_dimension, is_unit_ideal, normal_form,
                          same_ideal, saturate_units, set_cache)
from gwb.picklers import FilePickler, MemoryPickler
from gwb.polynomials import poly_ring


@pytest.fixture(autouse=True)
def fresh_cache():
    set_cache(default_cache())
    yield
    set_cache(default_cache())


@pytest.fixture
def xy():
    return poly_ring(('x', 'y'))


class Test_buchberger:
    def test_membership(self, xy):
        x, y = xy.gens
        I = ideal([x ** 2 - y, x * y - 1])
        assert contains(I, x ** 3 - 1)
        assert not contains(I, x - 1)

    def test_reduced_basis_is_monic(self, xy):
        x, y = xy.gens
        basis = groebner_basis(ideal([2 * x ** 2 - 2 * y, 3 * x * y - 3]))
        assert all(g.LC == xy.domain.one for g in basis)

    def test_zero_ideal(self, xy):
        assert groebner_basis(ideal([], ring=xy)) == ()

    def test_unit_ideal(self, xy):
        x, _ = xy.gens
        assert is_unit_ideal(ideal([x, x - 1]))
        assert not is_unit_ideal(ideal([x]))

    def test_step_budget(self, xy):
        x, y = xy.gens
        with pytest.raises(ResourceExhausted) as e:
            buchberger(ideal([x ** 3 - y ** 2, x * y - 1]), Settings(step_budget=0))
        assert e.value.details()['steps'] == 1

    def test_file_cache(self, xy, tmp_path):
        x, y = xy.gens
        set_cache(FilePickler(str(tmp_path)))
        first = groebner_basis(ideal([x ** 2 - y, x * y - 1]))
        assert list(tmp_path.glob('*.state'))
        assert groebner_basis(ideal([x ** 2 - y, x * y - 1])) == first

    def test_bounded_memory_cache(self, xy):
        x, y = xy.gens
        cache = MemoryPickler(capacity=2)
        set_cache(cache)
        ideals = [[x - k, y ** 2 - k] for k in range(1, 5)]
        first = [groebner_basis(ideal(gens)) for gens in ideals]
        assert len(cache) == 2
        assert [groebner_basis(ideal(gens)) for gens in ideals] == first

    def test_default_cache_is_bounded(self):
        assert default_cache().capacity == CACHE_SIZE


def test_normal_form(xy):
    x, y = xy.gens
    I = ideal([x - 2])
    assert normal_form(x ** 2 + y, I) == y + 4


def test_same_ideal(xy):
    x, y = xy.gens
    assert same_ideal(ideal([x, y]), ideal([x + y, x - y]))
    assert not same_ideal(ideal([x]), ideal([x * y]))


class Test_ideal_dimension:
    def test_hypersurface(self, xy):
        x, y = xy.gens
        assert ideal_dimension(ideal([x * y - 1])) == 1

    def test_zero_ideal(self, xy):
        assert ideal_dimension(ideal([], ring=xy)) == 2

    def test_points(self, xy):
        x, y = xy.gens
        assert ideal_dimension(ideal([x ** 2 - 1, y - x])) == 0

    def test_unit(self, xy):
        assert ideal_dimension(ideal([xy.one])) == -1

    def test_lex_ring(self):
        R = poly_ring(('x', 'y'), 'lex')
        x, y = R.gens
        assert ideal_dimension(ideal([y - x ** 2])) == 1


class Test_eliminate:
    @pytest.mark.parametrize('order', ['elim', 'lex'])
    def test_twisted_cubic(self, order):
        R = poly_ring(('t', 'x', 'y', 'z'))
        t, x, y, z = R.gens
        I = ideal([x - t, y - t ** 2, z - t ** 3])
        J = eliminate(I, ['x', 'y', 'z'], order=order)
        S = J.ring
        X, Y, Z = S.gens
        assert same_ideal(J, ideal([Y - X ** 2, Z - X * Y], ring=S))

    def test_unknown_variable(self, xy):
        x, _ = xy.gens
        with pytest.raises(ValueError):
            eliminate(ideal([x]), ['w'])


def test_saturate_units(xy):
    x, y = xy.gens
    saturated = saturate_units(ideal([x * y]), ['y'])
    assert contains(saturated, x)
    assert saturated.ring == xy


def test_fresh_name():
    assert fresh_name(['x', 'y']) == '_t'
    assert fresh_name(['_t', '_t1']) == '_t2'
