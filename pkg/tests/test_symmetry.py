import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from jetplex import (
    CASES, DiffPoly, JetCoordinate, JetForm, LagrangianProblem, MultiIndex, NotExact, NotNull,
    OrderMismatch, ProjVectorField, ReconstructionFailure, UnsupportedOrder, contact_component, density_of,
    divergence_potential, ds, dx, euler_lagrange, exterior_d, field_shift, first_variation,
    horizontal, horizontal_d, improved_current, lepage_excess_contraction,
    lie_derivative, noether_bessel_hagen_residual, omega, prolong, scaling, total_derivative,
    as_multi_index, translation, volume, wedge,
)

from strategies import SPACE, forms, polys, vector_fields


def _canonical_fields(space):
    return [
        translation(space, 't'),
        translation(space, 'x'),
        translation(space, 'y'),
        field_shift(space, 'v'),
        field_shift(space, 'w'),
        scaling(space),
    ]


def test_vector_field_validation(boussinesq_space, poly):
    space = boussinesq_space
    with pytest.raises(ValueError):
        ProjVectorField(space, {'t': poly("v", space)})
    with pytest.raises(ValueError):
        ProjVectorField(space, Xi={'v': poly("v_x", space)})
    with pytest.raises(ValueError):
        ProjVectorField(space, Xi={'u': poly("1", space)})
    assert ProjVectorField(space).is_zero
    assert field_shift(space, 'v').is_vertical


def test_prolong_field_shift(scalar_space):
    prolonged = prolong(field_shift(scalar_space, 'v'), 2)
    assert prolonged.component('v') == 1
    for index in MultiIndex.up_to(3, 2):
        if len(index):
            assert prolonged.component('v', index).is_zero


def test_prolong_translation_characteristic(scalar_space, poly):
    vertical = prolong(translation(scalar_space, 'x'), 2).vertical_part()
    assert vertical[JetCoordinate('v', MultiIndex())] == poly("-v_x", scalar_space)
    assert vertical[JetCoordinate('v', MultiIndex.of(0))] == poly("-v_tx", scalar_space)
    assert vertical[JetCoordinate('v', MultiIndex.of(1, 1))] == poly("-v_xxx", scalar_space)


def test_prolong_by_hand(scalar_space, poly):
    space = scalar_space
    vector = ProjVectorField(space, {'t': poly("t", space)}, {'v': poly("v", space)})
    prolonged = prolong(vector, 1)
    assert prolonged.component('v', MultiIndex.of(0)).is_zero
    assert prolonged.component('v', MultiIndex.of(1)) == poly("v_x", space)


def test_prolong_rejects_negative_order(scalar_space):
    with pytest.raises(ValueError):
        prolong(field_shift(scalar_space, 'v'), -1)


@settings(max_examples=30, deadline=None)
@given(vector_fields())
def test_prolongation_recursion(vector):
    prolonged = prolong(vector, 2)
    vertical = prolonged.vertical_part()
    for key, value in prolonged.components.items():
        for i in range(SPACE.n):
            child = JetCoordinate(key.field, key.index.add(i))
            if child not in prolonged.components:
                continue
            expected = total_derivative(value, i)
            for k, xi in vector.xi.items():
                expected = expected - DiffPoly.coordinate(SPACE, key.field, key.index.add(k)) * total_derivative(xi, i)
            assert prolonged.components[child] == expected
            assert vertical[child] == total_derivative(vertical[key], i)


@settings(max_examples=30, deadline=None)
@given(vector_fields())
def test_lie_derivative_of_volume(vector):
    divergence = DiffPoly.zero(SPACE)
    for i, xi in vector.xi.items():
        divergence = divergence + total_derivative(xi, i)
    assert lie_derivative(volume(SPACE), vector) == volume(SPACE) * divergence


def test_lie_derivative_of_volume_under_scaling(boussinesq_space):
    assert lie_derivative(volume(boussinesq_space), scaling(boussinesq_space)) == volume(boussinesq_space) * 3


@settings(max_examples=100, deadline=None)
@given(st.integers(min_value=0, max_value=2).flatmap(forms), vector_fields(), st.integers(min_value=0, max_value=2))
def test_lie_derivative_preserves_contact_components(rho, vector, k):
    assert contact_component(lie_derivative(rho, vector), k) == lie_derivative(contact_component(rho, k), vector)


@settings(max_examples=30, deadline=None)
@given(st.integers(min_value=0, max_value=1).flatmap(forms), vector_fields())
def test_lie_derivative_commutes_with_d(rho, vector):
    assert exterior_d(lie_derivative(rho, vector)) == lie_derivative(exterior_d(rho), vector)


def test_lie_derivative_order_guard(scalar_space):
    with pytest.raises(OrderMismatch):
        lie_derivative(omega(scalar_space, 'v', 'x'), translation(scalar_space, 't'), 1)


@pytest.mark.parametrize('case_id', list(CASES))
@pytest.mark.parametrize('index', range(6))
def test_first_variation_identity(case_id, index):
    problem = CASES[case_id].problem
    vector = _canonical_fields(problem.space)[index]
    variation = first_variation(problem, vector)
    recombined = density_of(horizontal(horizontal_d(variation.current)))
    assert variation.lhs == variation.source + recombined


def test_first_variation_of_field_shift(scalar_space, problem, poly):
    space = scalar_space
    variation = first_variation(problem("1/2*v_x^2", space), field_shift(space, 'v'))
    assert variation.lhs.is_zero
    assert variation.source == poly("-v_xx", space)
    assert variation.current == ds(space, 'x') * poly("v_x", space)


def test_lie_derivative_of_l4_under_time_translation(l4):
    lam = l4.problem.form
    assert horizontal(lie_derivative(lam, translation(l4.space, 't'))).is_zero


def test_improved_current_of_y_translation(l4):
    vector = translation(l4.space, 'y')
    record = improved_current(l4.problem, vector)
    assert record.obstruction.is_zero
    assert record.is_exact
    assert record.current == record.candidate
    assert record.potential.is_zero


def test_improved_current_of_zero_field(l4):
    record = improved_current(l4.problem, ProjVectorField(l4.space))
    assert record.candidate.is_zero
    assert record.obstruction.is_zero
    assert record.current.is_zero


def test_improved_current_not_exact(l4, poly):
    with pytest.raises(NotExact) as info:
        improved_current(l4.problem, field_shift(l4.space, 'w'))
    assert density_of(info.value.obstruction) == poly("2*w", l4.space)

    record = improved_current(l4.problem, field_shift(l4.space, 'w'), strict=False)
    assert not record.is_exact
    assert record.potential is None


def test_improved_current_with_potential(plane, problem, poly):
    space = plane
    record = improved_current(problem("v*v_x", space), field_shift(space, 'v'))
    assert density_of(record.obstruction) == poly("v_x", space)
    assert record.potential == ds(space, 'x') * poly("v", space)
    assert record.current.is_zero


def test_divergence_potential_examples(scalar_space, poly):
    space = scalar_space
    assert divergence_potential(poly("2*v_x*v_xx", space)) == ds(space, 'x') * poly("v_x^2", space)
    assert divergence_potential(poly("v_t*v_xx + v_x*v_tx", space)) == ds(space, 'x') * poly("v_t*v_x", space)
    assert divergence_potential(DiffPoly.zero(space)).is_zero


def test_divergence_potential_of_constant(scalar_space, poly):
    psi = divergence_potential(volume(scalar_space) * 3)
    assert density_of(horizontal_d(psi)) == 3


def test_divergence_potential_errors(scalar_space, poly):
    with pytest.raises(NotNull):
        divergence_potential(poly("v_x^2", scalar_space))
    with pytest.raises(ReconstructionFailure):
        divergence_potential(poly("x*v_x", scalar_space))


@settings(max_examples=30, deadline=None)
@given(st.data())
def test_divergence_potential_recombines(data):
    g = data.draw(polys(max_order=1, with_params=False))
    h = data.draw(polys(max_order=1, with_params=False))
    density = total_derivative(g, 't') + total_derivative(h, 'x')
    psi = divergence_potential(density)
    assert density_of(horizontal_d(psi)) == density


def test_noether_bessel_hagen_field_shift(scalar_space, problem, poly):
    space = scalar_space
    current = noether_bessel_hagen_residual(problem("1/2*v_x^2", space), field_shift(space, 'v'))
    assert current == ds(space, 'x') * poly("v_x", space)


def test_noether_bessel_hagen_time_translation(l4):
    current = noether_bessel_hagen_residual(l4.problem, translation(l4.space, 't'))
    assert current.degree == l4.space.n - 1
    assert not current.is_zero


def test_noether_bessel_hagen_zero_field(l4):
    assert noether_bessel_hagen_residual(l4.problem, ProjVectorField(l4.space)).is_zero


def test_strict_noether_case(l4):
    vector = translation(l4.space, 'x')
    assert horizontal(lie_derivative(l4.problem.form, vector)).is_zero
    record = improved_current(l4.problem, vector)
    equations = euler_lagrange(l4.problem)
    # Ξ_V ⌟ p_1 dρ = Σ (-y^σ_x) ε_σ ds
    source = DiffPoly.zero(l4.space)
    for name, value in equations.items():
        source = source - DiffPoly.coordinate(l4.space, name, 'x') * value
    assert density_of(horizontal(horizontal_d(record.current))) == -source


def test_lepage_excess_contraction(l4, poly):
    space = l4.space
    contraction = lepage_excess_contraction(l4.problem, translation(space, 'y'))
    half_a = poly("1/2*a", space)
    expected = (
        wedge(omega(space, 'v', 'x'), dx(space, 'y')) * poly("-w_y", space)
        + wedge(omega(space, 'w'), dx(space, 'y')) * poly("v_xy", space)
        + wedge(omega(space, 'w'), omega(space, 'v', 'x'))
    ) * half_a
    assert contraction == expected


def test_lepage_excess_contraction_of_field_shift(l4, poly):
    space = l4.space
    contraction = lepage_excess_contraction(l4.problem, field_shift(space, 'w'))
    assert contraction == wedge(omega(space, 'v', 'x'), dx(space, 'y')) * poly("1/2*a", space)


def test_first_variation_rejects_high_order(plane, poly):
    problem = LagrangianProblem(plane, poly("v_xxx^2", plane), 3)
    with pytest.raises(UnsupportedOrder):
        first_variation(problem, translation(plane, 't'))


def _general_field(space, poly):
    return ProjVectorField(
        space,
        {'t': poly("x", space), 'x': poly("t*y + x", space), 'y': poly("1 + t + y", space)},
        {'v': poly("v + x*w", space), 'w': poly("w*y + t", space)},
    )


def test_lie_derivative_of_l4_under_general_field(l4, poly):
    space = l4.space
    vector = _general_field(space, poly)
    prolonged = prolong(vector, 2)

    def component(name, index=''):
        return prolonged.component(name, as_multi_index(space, index) if index else MultiIndex())

    divergence = DiffPoly.zero(space)
    for i, xi in vector.xi.items():
        divergence = divergence + total_derivative(xi, i)
    assert divergence == 2

    expected = divergence * l4.problem.lagrangian \
        + poly("2*w", space) * component('w') \
        + poly("v_x + v_x^2", space) * component('v', 'x') \
        + poly("beta*v_y", space) * component('v', 'y') \
        + poly("a*v_xx", space) * component('w', 't') \
        + poly("a*w_t - 1/2*a*v_tt - b*v_xx", space) * component('v', 'xx') \
        - poly("1/2*a*v_xx", space) * component('v', 'tt')
    assert density_of(horizontal(lie_derivative(l4.problem.form, vector))) == expected


def test_lepage_excess_contraction_of_general_field(l4, poly):
    space = l4.space
    vector = _general_field(space, poly)
    xi = {space.base_names[i]: value for i, value in vector.xi.items()}
    # V = Ξ - y_j ξ^j on w and on v_x, with Ξ^v_x = d_x Ξ^v - v_j d_x ξ^j
    vertical_w = vector.Xi['w']
    vertical_v_x = total_derivative(vector.Xi['v'], 'x')
    for name, value in xi.items():
        v_j = DiffPoly.coordinate(space, 'v', name)
        vertical_w = vertical_w - DiffPoly.coordinate(space, 'w', name) * value
        vertical_v_x = vertical_v_x - v_j * total_derivative(value, 'x') - total_derivative(v_j, 'x') * value

    expected = (
        wedge(omega(space, 'w'), omega(space, 'v', 'x')) * xi['y']
        + wedge(omega(space, 'v', 'x'), ds(space, 't', 'x')) * vertical_w
        - wedge(omega(space, 'w'), ds(space, 't', 'x')) * vertical_v_x
    ) * poly("1/2*a", space)
    assert lepage_excess_contraction(l4.problem, vector) == expected


@pytest.mark.parametrize('case_id', list(CASES))
def test_first_variation_of_general_field(case_id, poly):
    problem = CASES[case_id].problem
    variation = first_variation(problem, _general_field(problem.space, poly))
    assert variation.lhs == variation.source + density_of(horizontal(horizontal_d(variation.current)))


def test_lie_derivative_of_functions(plane, poly):
    space = plane
    f = JetForm.function(poly("v^2 + x*v_x", space))
    assert lie_derivative(f, field_shift(space, 'v')) == JetForm.function(poly("2*v", space))
    assert lie_derivative(JetForm.function(poly("x*v", space)), translation(space, 'x')) == \
        JetForm.function(poly("v", space))
    assert lie_derivative(JetForm.function(poly("v*v_x", space)), scaling(space)) == \
        JetForm.function(poly("v*v_x", space))
    assert lie_derivative(JetForm.zero(space, 0), scaling(space)).is_zero
