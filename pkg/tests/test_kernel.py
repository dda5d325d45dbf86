from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from jetplex import (
    DiffPoly, EliminationFailure, JetCoordinate, JetSpace, MultiIndex, RecursiveSubstitution,
    Term, UnboundParameter, jet_partial, poly_eval, solve_linear, substitute_field,
    total_derivative, total_derivative_multi,
)

from strategies import SMALL, SPACE, polys, sections


def test_multi_index_is_sorted():
    assert MultiIndex.of(1, 0, 1).entries == (0, 1, 1)
    assert MultiIndex.of(1, 0) == MultiIndex.of(0, 1)
    assert MultiIndex.of(0, 1).add(0) == MultiIndex.of(0, 0, 1)
    assert MultiIndex.of(0, 1, 1).remove(1) == MultiIndex.of(0, 1)
    assert MultiIndex.of(0, 1, 1).count(1) == 2


def test_multi_index_rejects_negative():
    with pytest.raises(ValueError):
        MultiIndex.of(-1)


def test_multi_index_enumeration():
    assert len(list(MultiIndex.all_of_length(3, 2))) == 6
    assert len(list(MultiIndex.up_to(2, 2))) == 1 + 2 + 3


@pytest.mark.parametrize('base, fields, params', [
    ((), ('v',), ()),
    (('t',), (), ()),
    (('t', 'x'), ('x',), ()),
    (('tt',), ('v',), ()),
    (('t',), ('v_1',), ()),
])
def test_space_validation(base, fields, params):
    with pytest.raises(ValueError):
        JetSpace(base, fields, params)


def test_space_symbols(boussinesq_space):
    space = boussinesq_space
    assert space.n == 3 and space.m == 2
    assert space.coordinate('v', MultiIndex.of(1, 0)).name == 'v_tx'
    assert space.jet(space.coordinate('w', (0, 2))) == JetCoordinate('w', MultiIndex.of(0, 2))
    assert space.decode(space.param_symbol('beta')) == 'beta'
    with pytest.raises(ValueError):
        space.coordinate('u')
    assert space.with_order(1) is space
    assert space.with_order(4).order == 4


def test_poly_order_grows_with_jets(boussinesq_space, poly):
    f = poly("a*v_ttxx", boussinesq_space)
    assert f.order == 4
    assert f.space.order == 4
    assert f.free_fields() == {'v'}
    assert f.free_params() == {'a'}


def test_terms_are_canonical(boussinesq_space, poly):
    f = poly("1/2*a*v_x^2 - w", boussinesq_space)
    v_x = JetCoordinate('v', MultiIndex.of(1))
    w = JetCoordinate('w', MultiIndex())
    assert f.terms() == {
        Term(((v_x, 2),), (('a', 1),)): Fraction(1, 2),
        Term(((w, 1),)): Fraction(-1),
    }


def test_jet_partial(boussinesq_space, poly):
    space = boussinesq_space
    assert jet_partial(poly("1/2*b*v_xx^2", space), 'v', 'xx') == poly("b*v_xx", space)
    assert jet_partial(poly("a*w_t*v_xx", space), 'w', 't') == poly("a*v_xx", space)
    assert jet_partial(poly("a*w_t*v_xx", space), 'w').is_zero


def test_total_derivative(boussinesq_space, poly):
    space = boussinesq_space
    assert total_derivative(poly("v_x^2", space), 'x') == poly("2*v_x*v_xx", space)
    assert total_derivative(poly("x*v", space), 'x') == poly("v + x*v_x", space)
    assert total_derivative_multi(poly("v", space), 'txx') == poly("v_txx", space)


@settings(max_examples=50, deadline=None)
@given(polys(max_order=2))
def test_total_derivatives_commute(f):
    assert total_derivative(total_derivative(f, 0), 1) == total_derivative(total_derivative(f, 1), 0)


@settings(max_examples=50, deadline=None)
@given(polys(), polys(), st.sampled_from([0, 1]))
def test_total_derivative_leibniz(f, g, i):
    assert total_derivative(f * g, i) == total_derivative(f, i) * g + f * total_derivative(g, i)


@settings(max_examples=50, deadline=None)
@given(polys(), polys(with_params=False).map(lambda g: substitute_field(g, 'u', DiffPoly.zero(SPACE))),
       st.sampled_from([0, 1]))
def test_substitution_commutes_with_total_derivative(f, g, i):
    assert substitute_field(total_derivative(f, i), 'u', g) == total_derivative(substitute_field(f, 'u', g), i)


def test_substitute_field(boussinesq_space, poly):
    space = boussinesq_space
    assert substitute_field(poly("2*w_t", space), 'w', poly("v_t", space)) == poly("2*v_tt", space)
    result = substitute_field(poly("a*w_txx", space), 'w', poly("1/2*a*v_txx", space))
    assert result == poly("1/2*a^2*v_ttxxxx", space)
    assert substitute_field(poly("v_x", space), 'w', poly("v", space)) == poly("v_x", space)


def test_substitute_field_rejects_self_reference(boussinesq_space, poly):
    with pytest.raises(RecursiveSubstitution):
        substitute_field(poly("w", boussinesq_space), 'w', poly("w_t", boussinesq_space))


def test_solve_linear(boussinesq_space, poly):
    space = boussinesq_space
    assert solve_linear(poly("2*w - a*v_txx", space), 'w') == poly("1/2*a*v_txx", space)
    assert solve_linear(poly("a*w - v_t", space), 'w') == poly("v_t/a", space)

    constrained = JetSpace(space.base_names, space.field_names + ('gamma',), space.param_names, 2)
    assert solve_linear(poly("2*w - a*v_txx + gamma", constrained), 'gamma') == \
        poly("-2*w + a*v_txx", constrained)


@pytest.mark.parametrize('src', ["w^2", "v_x*w", "w + w_t", "v_t"])
def test_solve_linear_failures(boussinesq_space, poly, src):
    with pytest.raises(EliminationFailure):
        solve_linear(poly(src, boussinesq_space), 'w')


def test_specialize_and_ratio(boussinesq_space, poly):
    space = boussinesq_space
    f = poly("v_xx + a*v_ttxx - 1/2*a^2*v_ttxxxx", space)
    assert f.specialize({'a': 0}) == poly("v_xx", space)
    assert f.specialize({'a': Fraction(1, 2)}) == poly("v_xx + 1/2*v_ttxx - 1/8*v_ttxxxx", space)
    assert (f * -3).ratio_to(f) == -3
    assert f.ratio_to(poly("v_xx", space)) is None
    assert DiffPoly.zero(space).ratio_to(DiffPoly.zero(space)) == 1


def test_specialize_rejects_division_by_zero(boussinesq_space, poly):
    with pytest.raises(ZeroDivisionError):
        poly("v/a", boussinesq_space).specialize({'a': 0})


def test_poly_eval(scalar_space, poly):
    space = scalar_space
    x = DiffPoly.base(space, 'x')
    assert poly_eval(poly("v_x", space), {'v': x ** 2}, (0, 1, 0)) == 2
    assert poly_eval(poly("v_x*v_xx", space), {'v': x ** 3}, (0, 1, 0)) == 18
    assert poly_eval(poly("t*v", space), {'v': 3}, (Fraction(1, 2), 0, 0)) == Fraction(3, 2)


def test_poly_eval_errors(boussinesq_space, poly):
    f = poly("a*v_x", boussinesq_space)
    with pytest.raises(UnboundParameter):
        poly_eval(f, {'v': 1}, (0, 0, 0))
    with pytest.raises(ValueError):
        poly_eval(f, {'v': 1}, (0, 0), {'a': 1})
    with pytest.raises(ValueError):
        poly_eval(f, {'w': 1}, (0, 0, 0), {'a': 1})


@settings(max_examples=100, deadline=None)
@given(polys(), polys(), polys())
def test_ring_laws(f, g, h):
    zero, one = DiffPoly.zero(SPACE), DiffPoly.constant(SPACE, 1)
    assert f + g == g + f
    assert f * g == g * f
    assert (f + g) + h == f + (g + h)
    assert (f * g) * h == f * (g * h)
    assert f * (g + h) == f * g + f * h
    assert f + zero == f
    assert f * one == f
    assert (f - f).is_zero
    assert -f + f == zero


@settings(max_examples=100, deadline=None)
@given(polys(max_order=2, with_base=True), polys(max_order=2, with_base=True), sections(),
       st.tuples(SMALL, SMALL), SMALL)
def test_poly_eval_is_a_homomorphism(f, g, section, point, a):
    params = {'a': a}
    at_f, at_g = poly_eval(f, section, point, params), poly_eval(g, section, point, params)
    assert poly_eval(f + g, section, point, params) == at_f + at_g
    assert poly_eval(f * g, section, point, params) == at_f * at_g
    assert poly_eval(DiffPoly.constant(SPACE, 3), section, point, params) == 3


def test_decode_cache_is_bounded():
    from jetplex.kernel.jets import _decode, _symbol

    for k in range(50):
        space = JetSpace(('t', 'x'), (f'u{k}',), (), 2)
        assert space.decode(space.coordinate(f'u{k}', space.parse_suffix('tx'))) == \
            JetCoordinate(f'u{k}', space.parse_suffix('tx'))
    for cached in (_decode, _symbol):
        info = cached.cache_info()
        assert info.maxsize is not None
        assert info.currsize <= info.maxsize
