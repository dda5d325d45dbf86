""" Plain text, LaTeX and JSON renderings of polynomials, forms and result documents.

    Output is fully deterministic: polynomial terms follow ``Term.sort_key``
    and form terms follow the canonical word order, so identical inputs give
    byte-identical text.
"""
import json
from fractions import Fraction
from typing import Any, Dict, List, Mapping, Tuple

import sympy as sp

from .constants import JSON_SCHEMA_VERSION
from .dsl import format_poly
from .forms import BasisOneForm, JetForm, ds
from .kernel import BaseCoordinate, DiffPoly, JetSpace, Term

__all__ = [
    'FORMATS', 'format_form', 'latex_poly', 'latex_form',
    'poly_json', 'form_json', 'document_json', 'render',
]

FORMATS = ('plain', 'latex', 'json')

WEDGE = ' ∧ '


def _split_word(space: JetSpace, word: Tuple[BasisOneForm, ...]) -> Tuple[int, List[BasisOneForm], Tuple[int, ...]]:
    """ dx^D ∧ ω's = sign · ω's ∧ ds_I, with I the base indices missing from D. """
    horizontal = [one.base for one in word if one.is_dx]
    omegas = [one for one in word if one.is_omega]
    missing = tuple(i for i in range(space.n) if i not in horizontal)
    (_, value), = ds(space, *missing).terms.items()
    sign = int(value.expr)
    if (len(horizontal) * len(omegas)) % 2:
        sign = -sign
    return sign, omegas, missing


def _ds_label(space: JetSpace, missing: Tuple[int, ...]) -> str:
    return "ds_" + "".join(space.base_names[i] for i in missing) if missing else "ds"


def _word_plain(space: JetSpace, word) -> Tuple[int, str]:
    if not any(one.is_dx for one in word):
        return 1, WEDGE.join(one.label(space) for one in word)
    sign, omegas, missing = _split_word(space, word)
    return sign, WEDGE.join([one.label(space) for one in omegas] + [_ds_label(space, missing)])


def _join(pieces: List[str]) -> str:
    if not pieces:
        return "0"
    out = pieces[0]
    for piece in pieces[1:]:
        out += f" - {piece[1:]}" if piece.startswith('-') else f" + {piece}"
    return out


def format_form(form: JetForm) -> str:
    """ Plain text: ``1/2*a omega^w ∧ omega^v_x ∧ ds_tx``. """
    pieces = []
    for word, coeff in form:
        sign, label = _word_plain(form.space, word) if word else (1, "")
        coeff = coeff * sign
        text = format_poly(coeff)
        if len(coeff.terms()) > 1:
            text = f"({text})"
        if not label:
            pieces.append(text)
        elif text in ("1", "-1"):
            pieces.append(label if text == "1" else f"-{label}")
        else:
            pieces.append(f"{text} {label}")
    return _join(pieces)


# LaTeX

def _latex_name(space: JetSpace, coordinate) -> str:
    if isinstance(coordinate, BaseCoordinate):
        return space.base_names[coordinate.index]
    return sp.latex(space.coordinate(coordinate.field, coordinate.index))


def _latex_term(space: JetSpace, term: Term, value: Fraction) -> str:
    magnitude = abs(value)
    factors = []
    for name, power in term.params:
        symbol = sp.latex(sp.Symbol(name))
        factors.append(symbol if power == 1 else f"{symbol}^{{{power}}}")
    for coordinate, power in term.coordinates:
        name = _latex_name(space, coordinate)
        factors.append(name if power == 1 else f"{name}^{{{power}}}")
    if magnitude != 1 or not factors:
        factors.insert(0, sp.latex(sp.Rational(magnitude.numerator, magnitude.denominator)))
    return ("-" if value < 0 else "") + " ".join(factors)


def latex_poly(f: DiffPoly) -> str:
    items = sorted(f.terms().items(), key=lambda item: item[0].sort_key())
    return _join([_latex_term(f.space, term, value) for term, value in items])


def _latex_one(space: JetSpace, one: BasisOneForm) -> str:
    if one.is_dx:
        return f"d{space.base_names[one.base]}"
    index = space.label(one.index)
    return f"\\omega^{{{sp.latex(sp.Symbol(one.field))}}}" + (f"_{{{index}}}" if index else "")


def latex_form(form: JetForm) -> str:
    space = form.space
    pieces = []
    for word, coeff in form:
        if not word:
            pieces.append(latex_poly(coeff))
            continue
        if not any(one.is_dx for one in word):
            sign, factors = 1, [_latex_one(space, one) for one in word]
        else:
            sign, omegas, missing = _split_word(space, word)
            volume = "ds" + (f"_{{{''.join(space.base_names[i] for i in missing)}}}" if missing else "")
            factors = [_latex_one(space, one) for one in omegas] + [volume]
        coeff = coeff * sign
        text = latex_poly(coeff)
        if len(coeff.terms()) > 1:
            text = f"\\left({text}\\right)"
        label = " \\wedge ".join(factors)
        if text in ("1", "-1"):
            pieces.append(label if text == "1" else f"-{label}")
        else:
            pieces.append(f"{text} \\, {label}")
    return _join(pieces)


# JSON

def poly_json(f: DiffPoly) -> Dict[str, Any]:
    space = f.space
    terms = []
    for term, value in sorted(f.terms().items(), key=lambda item: item[0].sort_key()):
        monomial = []
        for coordinate, power in term.coordinates:
            if isinstance(coordinate, BaseCoordinate):
                monomial.append({'base': space.base_names[coordinate.index], 'power': power})
            else:
                monomial.append({'field': coordinate.field,
                                 'index': space.label(coordinate.index), 'power': power})
        terms.append({
            'coeff': str(value),
            'params': {name: power for name, power in term.params},
            'monomial': monomial,
        })
    return {'terms': terms}


def form_json(form: JetForm) -> Dict[str, Any]:
    return {
        'degree': form.degree,
        'form': [
            {'word': [one.label(form.space) for one in word], 'coeff': poly_json(coeff)}
            for word, coeff in form
        ],
    }


def _to_json(value: Any) -> Any:
    if isinstance(value, DiffPoly):
        return poly_json(value)
    if isinstance(value, JetForm):
        return form_json(value)
    if isinstance(value, Mapping):
        return {str(key): _to_json(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_to_json(item) for item in value]
    if isinstance(value, Fraction):
        return str(value)
    return value


def document_json(document: Mapping[str, Any]) -> str:
    payload = {'schema': JSON_SCHEMA_VERSION}
    payload.update(_to_json(document))
    return json.dumps(payload, indent=2, ensure_ascii=False)


def _lines(document: Mapping[str, Any], fmt: str, prefix: str = "") -> List[str]:
    lines = []
    for key, value in document.items():
        name = f"{prefix}{key}"
        if isinstance(value, Mapping):
            lines.extend(_lines(value, fmt, f"{name}."))
        elif isinstance(value, DiffPoly):
            lines.append(f"% {name}\n{latex_poly(value)}" if fmt == 'latex' else f"{name}: {value}")
        elif isinstance(value, JetForm):
            lines.append(f"% {name}\n{latex_form(value)}" if fmt == 'latex' else f"{name}: {value}")
        elif fmt == 'latex':
            lines.append(f"% {name}: {value}")
        else:
            lines.append(f"{name}: {value}")
    return lines


def render(document: Mapping[str, Any], fmt: str = 'plain') -> str:
    """ Render a result document (a mapping of polynomials, forms and plain values). """
    if fmt not in FORMATS:
        raise ValueError(f"Unknown format `{fmt}`, expected one of {', '.join(FORMATS)}")
    if fmt == 'json':
        return document_json(document)
    return "\n".join(_lines(document, fmt))
