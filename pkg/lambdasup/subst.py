"""Substitutions over type and term variables.

Bindings are keyed by variable name.  Term bindings are closed with respect
to bound variables except for the ones produced by λ-aware matching, whose
loose indices refer to binders outside the whole term; ``apply`` shifts
them under the binders it crosses, which also makes application
capture-avoiding.  Results are renormalised by the smart constructors.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, Mapping, Optional

from .terms import App, Bound, Const, Lam, Term, Var, mk_app, mk_bound, mk_const, mk_lam, mk_var, shift
from .types import Type, subst_all


@dataclass(frozen=True)
class Substitution:
    types: Mapping[str, Type] = field(default_factory=dict)
    terms: Mapping[str, Term] = field(default_factory=dict)

    @classmethod
    def identity(cls) -> "Substitution":
        return _IDENTITY

    @property
    def is_identity(self) -> bool:
        return not self.types and not self.terms

    def touches(self, t: Term) -> bool:
        return bool((self.terms and (t.fnames & self.terms.keys())) or (self.types and (t.tyvars & self.types.keys())))

    # -- application ---------------------------------------------------------

    def apply_type(self, ty: Type) -> Type:
        if not self.types:
            return ty
        return ty.subst(self.types)

    def apply(self, t: Term) -> Term:
        if not self.touches(t):
            return t
        return self._apply(t, 0)

    def _apply(self, t: Term, depth: int) -> Term:
        if not self.touches(t):
            return t
        if isinstance(t, Var):
            bound = self.terms.get(t.name)
            if bound is not None:
                return shift(bound, depth)
            return mk_var(t.name, self.apply_type(t.ty))
        if isinstance(t, Bound):
            return mk_bound(t.index, self.apply_type(t.ty))
        if isinstance(t, Const):
            return mk_const(t.name, subst_all(t.tyargs, self.types), self.apply_type(t.ty))
        if isinstance(t, Lam):
            return mk_lam(self.apply_type(t.binder), self._apply(t.body, depth + 1))
        if isinstance(t, App):
            return mk_app(self._apply(t.head, depth), [self._apply(a, depth) for a in t.args])
        return t

    __call__ = apply

    # -- construction --------------------------------------------------------

    def compose(self, other: "Substitution") -> "Substitution":
        """The substitution that applies ``self`` first, then ``other``."""
        if other.is_identity:
            return self
        if self.is_identity:
            return other
        types: Dict[str, Type] = {a: other.apply_type(ty) for a, ty in self.types.items()}
        for a, ty in other.types.items():
            types.setdefault(a, ty)
        terms: Dict[str, Term] = {x: other.apply(t) for x, t in self.terms.items()}
        for x, t in other.terms.items():
            terms.setdefault(x, t)
        return Substitution(types, terms)

    def bind_type(self, name: str, ty: Type) -> "Substitution":
        return self.compose(Substitution({name: ty}, {}))

    def bind(self, var: Var, t: Term) -> "Substitution":
        return self.compose(Substitution({}, {var.name: t}))

    def restrict(self, term_names: Iterable[str], type_names: Optional[Iterable[str]] = None) -> "Substitution":
        keep = set(term_names)
        terms = {x: t for x, t in self.terms.items() if x in keep}
        if type_names is None:
            types = dict(self.types)
        else:
            tkeep = set(type_names)
            types = {a: ty for a, ty in self.types.items() if a in tkeep}
        return Substitution(types, terms)

    def is_renaming(self) -> bool:
        seen = set()
        for t in self.terms.values():
            if not isinstance(t, Var) or t.name in seen:
                return False
            seen.add(t.name)
        return True

    def __str__(self) -> str:
        parts = [f"{a} := {ty!r}" for a, ty in sorted(self.types.items())]
        parts += [f"{x} := {t}" for x, t in sorted(self.terms.items())]
        return "{" + ", ".join(parts) + "}"

    def __hash__(self) -> int:
        return hash((frozenset(self.types.items()), frozenset(self.terms.items())))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Substitution) and dict(self.types) == dict(other.types) and dict(self.terms) == dict(other.terms)


_IDENTITY = Substitution({}, {})


def apply_subst(obj, sigma: Substitution):
    """Apply to a term, a literal or a clause (anything with ``apply_subst``)."""
    if isinstance(obj, Term):
        return sigma.apply(obj)
    return obj.apply_subst(sigma)
