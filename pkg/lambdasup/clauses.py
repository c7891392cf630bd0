"""Literals and clauses.

A literal is an unordered pair with a polarity, and a clause is a multiset
of literals kept as a tuple.  Clauses carry an id, an age and the
derivation record used to print proofs.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple

from .errors import TermTypeError
from .subst import Substitution
from .terms import App, Bound, Const, Lam, Term, Var, fresh_name, mk_var
from .types import TyCon, TyVar, Type


@dataclass(frozen=True, eq=False)
class Literal:
    lhs: Term
    rhs: Term
    positive: bool = True

    def __post_init__(self):
        if self.lhs.ty is not self.rhs.ty:
            raise TermTypeError(f"literal sides {self.lhs} : {self.lhs.ty!r} and {self.rhs} : {self.rhs.ty!r} differ in type")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Literal) or self.positive != other.positive:
            return False
        return (self.lhs is other.lhs and self.rhs is other.rhs) or (self.lhs is other.rhs and self.rhs is other.lhs)

    def __hash__(self) -> int:
        return hash((self.positive, frozenset((self.lhs, self.rhs))))

    @property
    def negative(self) -> bool:
        return not self.positive

    @property
    def sides(self) -> Tuple[Term, Term]:
        return self.lhs, self.rhs

    def orientations(self) -> Iterator[Tuple[Term, Term]]:
        yield self.lhs, self.rhs
        if self.rhs is not self.lhs:
            yield self.rhs, self.lhs

    @property
    def ty(self) -> Type:
        return self.lhs.ty

    @property
    def is_trivial_negative(self) -> bool:
        return not self.positive and self.lhs is self.rhs

    @property
    def is_trivial_positive(self) -> bool:
        return self.positive and self.lhs is self.rhs

    def apply_subst(self, sigma: Substitution) -> "Literal":
        return Literal(sigma.apply(self.lhs), sigma.apply(self.rhs), self.positive)

    def map(self, fn) -> "Literal":
        return Literal(fn(self.lhs), fn(self.rhs), self.positive)

    def terms(self) -> Tuple[Term, Term]:
        return self.lhs, self.rhs

    @property
    def fnames(self) -> FrozenSet[str]:
        return self.lhs.fnames | self.rhs.fnames

    @property
    def fvars(self) -> FrozenSet[Var]:
        return self.lhs.fvars | self.rhs.fvars

    @property
    def tyvars(self) -> FrozenSet[str]:
        return self.lhs.tyvars | self.rhs.tyvars

    @property
    def size(self) -> int:
        return self.lhs.size + self.rhs.size

    def __str__(self) -> str:
        op = "=" if self.positive else "!="
        return f"{self.lhs} {op} {self.rhs}"

    __repr__ = __str__


def eq(lhs: Term, rhs: Term) -> Literal:
    return Literal(lhs, rhs, True)


def neq(lhs: Term, rhs: Term) -> Literal:
    return Literal(lhs, rhs, False)


@dataclass(frozen=True)
class Derivation:
    """How a clause came about: rule name, premise ids, substitution text."""

    rule: str
    premises: Tuple[int, ...] = ()
    subst: str = ""
    note: str = ""

    @property
    def is_input(self) -> bool:
        return self.rule in ("input", "axiom", "negated_conjecture")


INPUT = Derivation("input")


@dataclass(frozen=True, eq=False)
class Clause:
    literals: Tuple[Literal, ...]
    id: int = -1
    age: int = 0
    derivation: Derivation = field(default=INPUT)

    @property
    def is_empty(self) -> bool:
        return not self.literals

    def __len__(self) -> int:
        return len(self.literals)

    def __iter__(self) -> Iterator[Literal]:
        return iter(self.literals)

    @property
    def fnames(self) -> FrozenSet[str]:
        out: FrozenSet[str] = frozenset()
        for lit in self.literals:
            out |= lit.fnames
        return out

    @property
    def fvars(self) -> FrozenSet[Var]:
        out: FrozenSet[Var] = frozenset()
        for lit in self.literals:
            out |= lit.fvars
        return out

    @property
    def tyvars(self) -> FrozenSet[str]:
        out: FrozenSet[str] = frozenset()
        for lit in self.literals:
            out |= lit.tyvars
        return out

    @property
    def ground(self) -> bool:
        return not self.fnames and not self.tyvars

    @property
    def size(self) -> int:
        return sum(lit.size for lit in self.literals)

    @property
    def weight(self) -> int:
        return self.size + sum(1 for lit in self.literals if lit.negative)

    def terms(self) -> Iterator[Term]:
        for lit in self.literals:
            yield lit.lhs
            yield lit.rhs

    def literal_multiset(self) -> Counter:
        return Counter(self.literals)

    def same_literals(self, other: "Clause") -> bool:
        return self.literal_multiset() == other.literal_multiset()

    def apply_subst(self, sigma: Substitution) -> "Clause":
        return Clause(tuple(lit.apply_subst(sigma) for lit in self.literals), self.id, self.age, self.derivation)

    def with_literals(self, literals: Iterable[Literal]) -> "Clause":
        return Clause(tuple(literals), self.id, self.age, self.derivation)

    def without(self, *indices: int) -> Tuple[Literal, ...]:
        drop = set(indices)
        return tuple(lit for i, lit in enumerate(self.literals) if i not in drop)

    def __str__(self) -> str:
        if not self.literals:
            return "$false"
        return " | ".join(f"({lit})" for lit in self.literals)

    def __repr__(self) -> str:
        return f"c{self.id}: {self}"


def renaming_for(names: Iterable[Var], tynames: Iterable[str]) -> Substitution:
    types = {a: TyVar(fresh_name("T")) for a in sorted(tynames)}
    sub_types = Substitution(types, {})
    terms = {}
    for v in sorted(names, key=lambda v: v.name):
        terms[v.name] = mk_var(fresh_name("V"), sub_types.apply_type(v.ty))
    return Substitution(types, terms)


def rename_apart(clause: Clause) -> Clause:
    """Copy of ``clause`` over globally fresh type and term variables."""
    if clause.ground:
        return clause
    return clause.apply_subst(renaming_for(clause.fvars, clause.tyvars))


def apart_from(D: Clause, C: Clause) -> Clause:
    """``D``, renamed apart when it shares a term or type variable name with ``C``."""
    if D is C or (D.fnames & C.fnames) or (D.tyvars & C.tyvars):
        return rename_apart(D)
    return D


def variant_key(literals: Sequence[Literal]) -> str:
    """Text key shared by literal multisets that are renamings of each other.

    Literals and sides are put in a variable-blind order first, then
    variables are numbered by first occurrence.  Ties in that order can make
    two variants get different keys, never the reverse.
    """
    return canonical_names(literals)[0]


def canonical_names(literals: Sequence[Literal]) -> Tuple[str, List[str]]:
    """Variant key plus the type and term variable names in canonical order."""
    shaped = []
    for lit in literals:
        a, b = sorted((lit.lhs, lit.rhs), key=lambda t: _shape(t, None))
        shaped.append((("+" if lit.positive else "-") + _shape(a, None) + "=" + _shape(b, None), lit.positive, a, b))
    shaped.sort(key=lambda item: item[0])
    names: Dict[str, str] = {}
    out = []
    for _, positive, a, b in shaped:
        op = "=" if positive else "!="
        out.append(f"{_shape(a, names)} {op} {_shape(b, names)}")
    return " | ".join(out), list(names)


def _shape(t: Term, names: Optional[Dict[str, str]]) -> str:
    if isinstance(t, Var):
        return _name(t.name, names) + ":" + _type_shape(t.ty, names)
    if isinstance(t, Bound):
        return f"#{t.index}"
    if isinstance(t, Const):
        if t.tyargs:
            return t.name + "{" + ",".join(_type_shape(a, names) for a in t.tyargs) + "}"
        return t.name
    if isinstance(t, Lam):
        return "^" + _type_shape(t.binder, names) + "." + _shape(t.body, names)
    return "(" + " ".join([_shape(t.head, names)] + [_shape(a, names) for a in t.args]) + ")"


def _type_shape(ty: Type, names: Optional[Dict[str, str]]) -> str:
    if isinstance(ty, TyVar):
        return "'" + _name(ty.name, names)
    assert isinstance(ty, TyCon)
    if not ty.args:
        return ty.name
    return ty.name + "(" + ",".join(_type_shape(a, names) for a in ty.args) + ")"


def _name(name: str, names: Optional[Dict[str, str]]) -> str:
    if names is None:
        return "?"
    if name not in names:
        names[name] = f"_{len(names)}"
    return names[name]
