from dataclasses import dataclass, field
from typing import Dict, Tuple, Union

from ..exceptions import DegreeError
from ..kernel import DiffPoly
from .basis import BasisOneForm
from .jetform import JetForm, contact_component

__all__ = ['SourceFormReport', 'classify_source', 'is_strongly_contact', 'source_form']

ComponentKey = Union[str, Tuple[str, ...]]


@dataclass
class SourceFormReport:
    """ Split of p_k ρ into its ω^σ-generated part and the rest.

        ``components`` is keyed by field name for k = 1 (ε_σ of
        Σ ε_σ ω^σ ∧ ds) and by the tuple of field names for k > 1.
    """
    contact_degree: int
    components: Dict[ComponentKey, DiffPoly] = field(default_factory=dict)
    residue: JetForm = None

    @property
    def is_source(self) -> bool:
        return self.residue is None or self.residue.is_zero


def _volume_word(space):
    return tuple(BasisOneForm.dx(space, i) for i in range(space.n))


def source_form(space, components: Dict[ComponentKey, DiffPoly]) -> JetForm:
    """ Σ ε_σ ω^σ ∧ ds (or ω^{σ_1} ∧ ... ∧ ω^{σ_k} ∧ ds for tuple keys). """
    degree = None
    items = []
    for key, value in components.items():
        names = (key,) if isinstance(key, str) else key
        word = tuple(BasisOneForm.omega(space, name) for name in names) + _volume_word(space)
        degree = len(word)
        items.append((word, value))
    return JetForm.collect(space, degree or space.n + 1, items)


def classify_source(rho: JetForm) -> SourceFormReport:
    space = rho.space
    k = rho.degree - space.n
    if k < 1:
        raise DegreeError(f"A {rho.degree}-form on a base of dimension {space.n} is not a source candidate")
    part = contact_component(rho, k)
    volume = _volume_word(space)
    # ω's ∧ ds = (-1)^{kn} ds ∧ ω's, and canonical words put dx first
    sign = -1 if (k * space.n) % 2 else 1
    components: Dict[ComponentKey, DiffPoly] = {}
    residue = {}
    for word, coeff in part.terms.items():
        head, tail = word[:space.n], word[space.n:]
        if head == volume and all(one.depth == 0 for one in tail):
            key = tail[0].field if k == 1 else tuple(one.field for one in tail)
            components[key] = coeff * sign
        else:
            residue[word] = coeff
    return SourceFormReport(k, components, JetForm(space, rho.degree, residue))


def is_strongly_contact(rho: JetForm) -> bool:
    """ p_{q-n} ρ = 0 for a q-form with q > n. """
    k = rho.degree - rho.space.n
    return k >= 1 and contact_component(rho, k).is_zero
