import logging

import pytest
from _pytest.logging import LogCaptureFixture
from loguru import logger

from jetplex import CASES, DiffPoly, JetSpace, LagrangianProblem, parse_expression


@pytest.fixture
def caplog(caplog: LogCaptureFixture):
    handler_id = logger.add(caplog.handler, format="{message}", level=logging.DEBUG)
    yield caplog
    logger.remove(handler_id)


@pytest.fixture(scope='session')
def plane() -> JetSpace:
    """ (t, x) with a single field. """
    return JetSpace(('t', 'x'), ('v',), (), 2)


@pytest.fixture(scope='session')
def boussinesq_space() -> JetSpace:
    return JetSpace(('t', 'x', 'y'), ('v', 'w'), ('a', 'b', 'beta'), 2)


@pytest.fixture(scope='session')
def scalar_space() -> JetSpace:
    return JetSpace(('t', 'x', 'y'), ('v',), (), 2)


@pytest.fixture(scope='session')
def l4():
    return CASES['L4_unconstrained']


@pytest.fixture(scope='session')
def l1():
    return CASES['L1_constrained']


@pytest.fixture
def poly():
    def _poly(src: str, space: JetSpace, max_order: int = 6) -> DiffPoly:
        return parse_expression(src, space, max_order)
    return _poly


@pytest.fixture
def problem():
    def _problem(src: str, space: JetSpace, order=None) -> LagrangianProblem:
        return LagrangianProblem(space, parse_expression(src, space), order)
    return _problem
