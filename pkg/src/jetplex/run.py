#!/usr/bin/env python
import argparse
import os
import re
import sys
from typing import Any, Callable, Dict, List, Mapping, Optional

from loguru import logger
from rich.console import Console
from rich.text import Text
from ruamel.yaml import YAMLError

from .constants import (
    DEFAULT_SPEC_NAME, EXIT_ENGINE_ERROR, EXIT_GOLDEN_MISMATCH, EXIT_OK, EXIT_PARSE_ERROR,
)
from .core import ProblemTree, load_problem
from .emit import FORMATS, render
from .exceptions import ConfigError, DegreeError, DSLError, DSLSyntaxError, GoldenMismatch, JetplexError
from .forms import JetForm, classify_source, contact_component, exterior_d, horizontal_d, vertical_d
from .kernel import DiffPoly
from .models import CASES, derive_pde, derive_pde_specialized, get_case
from .symmetry import ProjVectorField, field_shift, improved_current, scaling, translation
from .utils import parse_params
from .variational import euler_lagrange, is_lepage, lepage_full, lower_residual_k1, poincare_cartan
from .yaml import Include, dump, load_file

TEMPLATE_PATH = os.path.join(os.path.dirname(__file__), 'problem.yaml')
VECTOR_FIELDS_NAME = 'vector_fields.yaml'

BASE_FORMS: Dict[str, Callable] = {
    'lambda': lambda problem: problem.form,
    'pc': poincare_cartan,
    'kb': lepage_full,
}
FORM_OPERATORS: Dict[str, Callable[[JetForm], JetForm]] = {
    'd': exterior_d,
    'dh': horizontal_d,
    'dv': vertical_d,
}
_OPERATOR_RE = re.compile(r'^(?P<op>[a-z]+)\((?P<inner>.*)\)$')


def _get_common_args_parse() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(add_help=False)
    parser.add_argument('--spec', '-s', help=f"problem spec file (default: ./{DEFAULT_SPEC_NAME})")
    parser.add_argument('--case', help="built-in fixture instead of a spec file")
    parser.add_argument('--format', '-f', choices=FORMATS, default='plain', help="output format")
    parser.add_argument('--params', help="parameter values, e.g. a=1,b=-1/2")
    parser.add_argument('--field-order', help="comma separated field names for the output order")
    parser.add_argument('--out', '-o', help="write the output to a file")
    return parser


def process_args(argv: Optional[List[str]] = None) -> argparse.Namespace:
    common = _get_common_args_parse()
    parser = argparse.ArgumentParser(prog='jetplex', description="Variational calculus on jet spaces")
    parser.add_argument('--verbose', '-v', action='store_true', help="debug logging")
    actions = parser.add_subparsers(title="jetplex actions", dest='command', required=True)

    el = actions.add_parser('el', parents=[common], description="Euler-Lagrange expressions")
    el.set_defaults(func=el_cmd)

    pc = actions.add_parser('pc', parents=[common], description="Poincare-Cartan equivalent")
    pc.set_defaults(func=pc_cmd)

    kb = actions.add_parser('kb', parents=[common], description="Full Lepage equivalent")
    kb.set_defaults(func=kb_cmd)

    check = actions.add_parser('lepage-check', parents=[common], description="Check that a form is Lepage")
    check.add_argument('--form', default='kb', help="form expression, e.g. `pc` or `kb`")
    check.set_defaults(func=lepage_check_cmd)

    noether = actions.add_parser('noether', parents=[common], description="Noether current of a vector field")
    noether.add_argument('--field', required=True,
                         help="vector field from the spec, or one of translate:<x>, shift:<field>, scale")
    noether.set_defaults(func=noether_cmd)

    derive = actions.add_parser('derive', parents=[common], description="Fixture PDE derivation")
    derive.set_defaults(func=derive_cmd)

    decompose = actions.add_parser('decompose', parents=[common], description="Source form decomposition")
    decompose.add_argument('--form', default='d(kb)', help="form expression built from lambda, pc, kb, d, dh, dv")
    decompose.add_argument('--k', type=int, default=1, help="contact degree")
    decompose.set_defaults(func=decompose_cmd)

    init = actions.add_parser('init', description="Write a template problem spec")
    init.add_argument('path', nargs='?', default=DEFAULT_SPEC_NAME)
    init.set_defaults(func=init_cmd)

    return parser.parse_args(argv)


# helpers

def load_tree(args) -> ProblemTree:
    if args.case:
        case = get_case(args.case)
        return ProblemTree.from_problem(case.problem, [case.constraint] if case.constraint else [])
    path = args.spec or DEFAULT_SPEC_NAME
    if not args.spec and not os.path.exists(path):
        raise ConfigError(f"No `--spec` or `--case` given and no ./{DEFAULT_SPEC_NAME} found")
    try:
        return load_problem(path)
    except YAMLError as e:
        raise ConfigError(f"Malformed problem spec `{path}`: {e}") from e


def get_params(args, tree: ProblemTree) -> Dict:
    if not args.params:
        return {}
    try:
        params = parse_params(args.params)
    except (ValueError, ZeroDivisionError) as e:
        raise ConfigError(f"Invalid --params: {e}") from e
    unknown = set(params) - set(tree.space.param_names)
    if unknown:
        raise ConfigError(f"Unknown parameters: {', '.join(sorted(unknown))}")
    return params


def _specialize(value: Any, params: Mapping) -> Any:
    if not params:
        return value
    if isinstance(value, (DiffPoly, JetForm)):
        return value.specialize(params)
    if isinstance(value, Mapping):
        return {key: _specialize(item, params) for key, item in value.items()}
    return value


def _ordered(values: Mapping[str, Any], args, tree: ProblemTree) -> Dict[str, Any]:
    if not args.field_order:
        return dict(values)
    order = [name.strip() for name in args.field_order.split(',') if name.strip()]
    unknown = set(order) - set(tree.space.field_names)
    if unknown:
        raise ConfigError(f"Unknown fields in --field-order: {', '.join(sorted(unknown))}")
    rest = [key for key in values if key not in order]
    return {key: values[key] for key in order + rest if key in values}


def emit(args, document: Mapping[str, Any], params: Optional[Mapping] = None) -> None:
    text = render(_specialize(document, params or {}), args.format)
    if args.out:
        with open(args.out, 'w') as fw:
            fw.write(text + "\n")
        return
    Console(soft_wrap=True, highlight=False, markup=False, emoji=False).print(text)


def evaluate_form(expression: str, tree: ProblemTree) -> JetForm:
    """ ``kb``, ``d(kb)``, ``dh(dv(lambda))``... """
    expression = expression.strip()
    if expression in BASE_FORMS:
        return BASE_FORMS[expression](tree.problem)
    match = _OPERATOR_RE.match(expression)
    if match is None or match.group('op') not in FORM_OPERATORS:
        raise DSLSyntaxError(f"Unknown form expression `{expression}`")
    return FORM_OPERATORS[match.group('op')](evaluate_form(match.group('inner'), tree))


def resolve_vector_field(name: str, tree: ProblemTree) -> ProjVectorField:
    fields = tree.get_vector_fields()
    if name in fields:
        return fields[name]
    space = tree.space
    kind, _, target = name.partition(':')
    try:
        if kind == 'translate' and target:
            return translation(space, target)
        if kind == 'shift' and target:
            return field_shift(space, target)
        if name == 'scale':
            return scaling(space)
    except ValueError as e:
        raise ConfigError(f"Vector field `{name}`: {e}") from e
    raise ConfigError(f"Unknown vector field `{name}`")


# commands

def el_cmd(args) -> int:
    tree = load_tree(args)
    equations = euler_lagrange(tree.problem)
    emit(args, {'euler_lagrange': _ordered(equations, args, tree)}, get_params(args, tree))
    return EXIT_OK


def pc_cmd(args) -> int:
    tree = load_tree(args)
    emit(args, {'poincare_cartan': poincare_cartan(tree.problem)}, get_params(args, tree))
    return EXIT_OK


def kb_cmd(args) -> int:
    tree = load_tree(args)
    emit(args, {'lepage': lepage_full(tree.problem)}, get_params(args, tree))
    return EXIT_OK


def lepage_check_cmd(args) -> int:
    tree = load_tree(args)
    ok, report = is_lepage(evaluate_form(args.form, tree))
    emit(args, {
        'lepage': ok,
        'source': _ordered(report.components, args, tree),
        'residue': report.residue,
    }, get_params(args, tree))
    return EXIT_OK


def noether_cmd(args) -> int:
    tree = load_tree(args)
    vector = resolve_vector_field(args.field, tree)
    record = improved_current(tree.problem, vector, strict=False)
    document = {
        'vector_field': vector.name or args.field,
        'exact': record.is_exact,
        'candidate': record.candidate,
        'obstruction': record.obstruction,
    }
    if record.is_exact:
        document['potential'] = record.potential
        document['current'] = record.current
    emit(args, document, get_params(args, tree))
    return EXIT_OK


def derive_cmd(args) -> int:
    if not args.case:
        raise ConfigError(f"`derive` needs --case, one of: {', '.join(CASES)}")
    case = get_case(args.case)
    params = get_params(args, ProblemTree.from_problem(case.problem))
    if params:
        pde = derive_pde_specialized(case, params)
        expected = case.expected_pde.specialize(params)
        printed = case.printed_pde.specialize(params)
    else:
        pde, expected, printed = derive_pde(case), case.expected_pde, case.printed_pde
    printed_matches = pde.ratio_to(printed) is not None
    emit(args, {
        'case': case.id,
        'pde': pde,
        'expected': expected,
        'printed_matches': printed_matches,
    })
    if pde.ratio_to(expected) is None:
        raise GoldenMismatch(f"{case.id}: derived PDE `{pde}` differs from the golden `{expected}`")
    return EXIT_OK


def decompose_cmd(args) -> int:
    tree = load_tree(args)
    rho = evaluate_form(args.form, tree)
    document: Dict[str, Any] = {'contact_degree': args.k}
    n = tree.space.n
    report = classify_source(contact_component(rho, args.k)) if rho.degree - n == args.k else None
    if args.k == 1 and (report is None or not report.is_source):
        source, boundary = lower_residual_k1(rho)
        document['source'] = source
        document['boundary'] = boundary
    elif report is None:
        raise DegreeError(f"A {rho.degree}-form has no {args.k}-contact source part on a base of dimension {n}")
    else:
        document['source'] = _ordered(report.components, args, tree) if args.k == 1 else {
            ",".join(key): value for key, value in report.components.items()
        }
        document['residue'] = report.residue
    emit(args, document, get_params(args, tree))
    return EXIT_OK


def init_cmd(args) -> int:
    cfg = load_file(TEMPLATE_PATH)

    vector_fields = cfg.get('vector_fields')
    cfg['vector_fields'] = Include(VECTOR_FIELDS_NAME)

    fields_path = os.path.join(os.path.dirname(args.path), VECTOR_FIELDS_NAME)
    if not os.path.exists(fields_path):
        with open(fields_path, 'w') as fw:
            dump(vector_fields, fw)
    with open(args.path, 'w') as fw:
        dump(cfg, fw)
    Console(highlight=False).print(Text(f"Problem spec written to {args.path}", "green"))
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    args = process_args(argv)

    logger.remove()
    logger.add(sys.stderr, level="DEBUG" if args.verbose else "WARNING")

    errors = Console(stderr=True, highlight=False, soft_wrap=True)
    try:
        return args.func(args)
    except GoldenMismatch as e:
        errors.print(Text(str(e), "red"))
        return EXIT_GOLDEN_MISMATCH
    except (DSLError, ConfigError) as e:
        errors.print(Text(str(e), "red"))
        return EXIT_PARSE_ERROR
    except JetplexError as e:
        errors.print(Text(f"{type(e).__name__}: {e}", "red"))
        return EXIT_ENGINE_ERROR


if __name__ == '__main__':
    sys.exit(main())
