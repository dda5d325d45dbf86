from hypothesis import strategies as st

import sympy as sp

from jetplex import BasisOneForm, DiffPoly, JetForm, JetSpace, ProjVectorField

SPACE = JetSpace(('t', 'x'), ('u', 'v'), ('a',), 2)
SMALL = st.integers(min_value=-3, max_value=3)


def _symbols(space: JetSpace, max_order: int):
    return [space.coordinate(c.field, c.index) for c in space.jets(max_order)]


@st.composite
def polys(draw, space: JetSpace = SPACE, max_order: int = 1, max_degree: int = 2, max_terms: int = 3,
          with_params: bool = True, with_base: bool = False):
    symbols = _symbols(space, max_order)
    if with_params:
        symbols += [space.param_symbol(name) for name in space.param_names]
    if with_base:
        symbols += [space.base_symbol(i) for i in range(space.n)]
    expr = sp.Integer(0)
    for _ in range(draw(st.integers(min_value=0, max_value=max_terms))):
        factors = draw(st.lists(st.sampled_from(symbols), max_size=max_degree))
        expr += draw(SMALL) * sp.Mul(*factors)
    return DiffPoly(space, expr)


def one_forms(space: JetSpace = SPACE, max_order: int = 1):
    return st.sampled_from(
        [BasisOneForm.dx(space, i) for i in range(space.n)]
        + [BasisOneForm.omega(space, c.field, c.index) for c in space.jets(max_order)]
    )


@st.composite
def forms(draw, degree: int, space: JetSpace = SPACE, max_order: int = 1, max_terms: int = 3):
    items = []
    for _ in range(draw(st.integers(min_value=0, max_value=max_terms))):
        word = draw(st.lists(one_forms(space, max_order), min_size=degree, max_size=degree, unique=True))
        items.append((word, draw(polys(space, max_order, max_degree=2, max_terms=2))))
    return JetForm.collect(space, degree, items)


@st.composite
def vector_fields(draw, space: JetSpace = SPACE):
    """ Projectable fields with polynomial components of degree <= 2. """
    base = [space.base_symbol(i) for i in range(space.n)]
    fibre = base + [space.coordinate(name) for name in space.field_names]

    def component(symbols):
        expr = sp.Integer(0)
        for _ in range(draw(st.integers(min_value=0, max_value=2))):
            expr += draw(SMALL) * sp.Mul(*draw(st.lists(st.sampled_from(symbols), max_size=2)))
        return DiffPoly(space, expr)

    xi = {i: component(base) for i in range(space.n)}
    Xi = {name: component(fibre) for name in space.field_names}
    return ProjVectorField(space, xi, Xi)


@st.composite
def sections(draw, space: JetSpace = SPACE, max_degree: int = 3):
    """ Polynomial sections x -> y^σ(x), as sympy expressions in the base symbols. """
    base = [space.base_symbol(i) for i in range(space.n)]

    def component():
        expr = sp.Integer(0)
        for _ in range(draw(st.integers(min_value=1, max_value=3))):
            expr += draw(SMALL) * sp.Mul(*draw(st.lists(st.sampled_from(base), max_size=max_degree)))
        return expr

    return {name: component() for name in space.field_names}
