""" Two-field (2+1)-dimensional Boussinesq fixtures.

    Every case is stored in ``cases.yaml`` as DSL strings: the density, the
    constraint, the elimination steps, and golden values for the momenta, the
    Lepage excess, the printed Euler-Lagrange equations and the PDEs.
"""
import os
import re
from collections.abc import Mapping
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any, Dict, Iterator, List, Optional, Tuple

from loguru import logger

from ..constants import MULTIPLIER_FIELD
from ..dsl import parse_constraint, parse_expression
from ..exceptions import ConfigError, EliminationFailure
from ..forms import JetForm, classify_source, contact_component, ds, exterior_d, omega, wedge
from ..kernel import DiffPoly, JetSpace, Scalar, solve_linear, substitute_field
from ..variational import LagrangianProblem, Momenta, euler_lagrange, lepage_full, poincare_cartan
from ..yaml import load_file, require_keys

__all__ = [
    'BoussinesqCase', 'FixtureReport', 'ReportItem', 'CASES',
    'get_case', 'derive_pde', 'derive_pde_specialized', 'verify_lepage_fixture',
]

CASES_FILE = os.path.join(os.path.dirname(__file__), 'cases.yaml')

_MOMENTUM_RE = re.compile(r'^(?P<kind>[fp])\^(?P<bases>[A-Za-z]{1,2})_(?P<field>[A-Za-z][A-Za-z0-9]*)$')
_STEP_RE = re.compile(r'^(?P<target>[A-Za-z][A-Za-z0-9]*) from (?P<equation>[A-Za-z][A-Za-z0-9]*)$')

CASES_KEYS = ('base', 'params', 'order', 'cases')
CASE_KEYS = ('fields', 'lagrangian', 'elimination', 'printed_equations', 'printed_pde', 'expected_pde')


@dataclass(frozen=True)
class BoussinesqCase:
    id: str
    title: str
    problem: LagrangianProblem
    elimination: Tuple[str, ...]
    printed_equations: Dict[str, DiffPoly]
    printed_pde: DiffPoly
    expected_pde: DiffPoly
    constraint: Optional[Tuple[str, DiffPoly]] = None
    momenta: Dict[str, DiffPoly] = field(default_factory=dict)
    lepage_excess: Optional[JetForm] = None

    @property
    def space(self) -> JetSpace:
        return self.problem.space


def _text(value: Any) -> str:
    return " ".join(str(value).split())


def _excess_form(space: JetSpace, entries: List[Dict[str, Any]], max_order: int) -> JetForm:
    form = JetForm.zero(space, space.n)
    for entry in entries:
        term = ds(space, *entry['ds']) * parse_expression(_text(entry['coeff']), space, max_order)
        for label in reversed(entry['omega']):
            name, _, suffix = str(label).partition('_')
            term = wedge(omega(space, name, suffix), term)
        form = form + term
    return form


def _build_case(case_id: str, data: Mapping, base: List[str], params: List[str], order: int) -> BoussinesqCase:
    require_keys(data, CASE_KEYS, f"Case `{case_id}`")
    space = JetSpace(tuple(base), tuple(data['fields']), tuple(params), order)
    # derived expressions reach twice the density order plus the substituted constraint
    golden_order = 2 * order + 2

    def parse(value: Any) -> DiffPoly:
        return parse_expression(_text(value), space, golden_order)

    constraint = data.get('constraint')
    if (constraint is None) == (MULTIPLIER_FIELD in space.field_names):
        raise ConfigError(f"Case `{case_id}`: a constraint is required exactly when `{MULTIPLIER_FIELD}` is a field")
    return BoussinesqCase(
        id=case_id,
        title=str(data.get('title', case_id)),
        problem=LagrangianProblem(space, parse_expression(_text(data['lagrangian']), space), order, case_id),
        elimination=tuple(str(step) for step in data['elimination']),
        printed_equations={name: parse(value) for name, value in data['printed_equations'].items()},
        printed_pde=parse(data['printed_pde']),
        expected_pde=parse(data['expected_pde']),
        constraint=parse_constraint(_text(constraint), space) if constraint is not None else None,
        momenta={key: parse(value) for key, value in (data.get('momenta') or {}).items()},
        lepage_excess=_excess_form(space, data['lepage_excess'], golden_order)
        if data.get('lepage_excess') else None,
    )


@lru_cache(maxsize=None)
def load_cases(path: str = CASES_FILE) -> Dict[str, BoussinesqCase]:
    data = load_file(path, CASES_KEYS)
    base, params, order = list(data['base']), list(data['params']), int(data['order'])
    cases = {case_id: _build_case(case_id, value, base, params, order)
             for case_id, value in data['cases'].items()}
    logger.debug("loaded {} fixture cases from {}", len(cases), path)
    return cases


class _CaseRegistry(Mapping):
    """ Fixture cases by id, read on first access. """
    def __getitem__(self, case_id: str) -> BoussinesqCase:
        return load_cases()[case_id]

    def __iter__(self) -> Iterator[str]:
        return iter(load_cases())

    def __len__(self) -> int:
        return len(load_cases())


CASES = _CaseRegistry()


def get_case(case_id: str) -> BoussinesqCase:
    try:
        return CASES[case_id]
    except KeyError:
        raise ConfigError(f"Unknown case `{case_id}`, expected one of: {', '.join(CASES)}") from None


def _orient(f: DiffPoly) -> DiffPoly:
    """ Sign convention of the printed equations: the leading parameter-free term is positive. """
    for term, value in f.coefficients():
        if not term.params:
            return -f if value.rational < 0 else f
    return f


def derive_pde(case: BoussinesqCase) -> DiffPoly:
    """ Run the stored elimination chain on the Euler-Lagrange system and
        return the remaining equation for the first field.
    """
    equations = euler_lagrange(case.problem)
    target = case.space.field_names[0]
    result = equations[target]
    for step in case.elimination:
        if step == 'constraint':
            if case.constraint is None:
                raise EliminationFailure(f"Case `{case.id}` has no constraint to substitute")
            name, value = case.constraint
            logger.debug("{}: substituting constraint {} = {}", case.id, name, value)
            result = substitute_field(result, name, value)
            continue
        match = _STEP_RE.match(step)
        if match is None:
            raise EliminationFailure(f"Unrecognized elimination step `{step}`")
        name = match.group('target')
        value = solve_linear(equations[match.group('equation')], name)
        logger.debug("{}: {} = {}", case.id, name, value)
        equations = {key: substitute_field(eq, name, value)
                     for key, eq in equations.items() if key != match.group('equation')}
        result = substitute_field(result, name, value)
    if result.free_fields() - {target}:
        raise EliminationFailure(f"Elimination left fields {sorted(result.free_fields() - {target})}")
    return _orient(result)


def derive_pde_specialized(case: BoussinesqCase, params: Mapping[str, Scalar]) -> DiffPoly:
    return _orient(derive_pde(case).specialize(params))


@dataclass
class ReportItem:
    name: str
    expected: Any
    actual: Any
    passed: bool
    # informational items are reported but never fail the fixture
    strict: bool = True


@dataclass
class FixtureReport:
    case: str
    items: List[ReportItem] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(item.passed for item in self.items if item.strict)

    @property
    def failures(self) -> List[ReportItem]:
        return [item for item in self.items if item.strict and not item.passed]


def _momentum(momenta: Momenta, key: str) -> DiffPoly:
    match = _MOMENTUM_RE.match(key)
    if match is None:
        raise ConfigError(f"Unrecognized momentum `{key}`")
    space = momenta.space
    indices = [space.base_index(c) for c in match.group('bases')]
    name = match.group('field')
    if match.group('kind') == 'f':
        return momenta.f(name, *indices)
    return momenta.second(name, *indices)


def verify_lepage_fixture(case: BoussinesqCase) -> FixtureReport:
    report = FixtureReport(case.id)
    add = report.items.append

    momenta = Momenta.of(case.problem)
    for key, expected in case.momenta.items():
        actual = _momentum(momenta, key)
        add(ReportItem(key, expected, actual, actual == expected))

    rho = lepage_full(case.problem)
    excess = rho - poincare_cartan(case.problem)
    if case.lepage_excess is not None:
        add(ReportItem('lepage_excess', case.lepage_excess, excess, excess == case.lepage_excess))

    source = classify_source(contact_component(exterior_d(rho), 1))
    add(ReportItem('source_form', True, source.is_source, source.is_source))
    equations = euler_lagrange(case.problem)
    for name, expected in case.printed_equations.items():
        actual = source.components.get(name, DiffPoly.zero(case.space))
        add(ReportItem(f"equation:{name}", expected, actual, actual.ratio_to(expected) is not None))
    for name, value in equations.items():
        actual = source.components.get(name, DiffPoly.zero(case.space))
        add(ReportItem(f"euler_lagrange:{name}", value, actual, actual == value))

    pde = derive_pde(case)
    add(ReportItem('pde', case.expected_pde, pde, pde.ratio_to(case.expected_pde) is not None))
    printed = pde.ratio_to(case.printed_pde) is not None
    if not printed:
        logger.warning("{}: derived PDE differs from the printed display", case.id)
    add(ReportItem('printed_pde', case.printed_pde, pde, printed, strict=False))
    return report
