"""Boolean proxies.

Formulas nested inside terms are encoded with proxy symbols of type ``$o``
and a fixed set of unit and two-literal axioms pins their meaning down.
The outer formula skeleton never goes through here; the clausifier handles
it the first-order way.
"""

from __future__ import annotations

import logging
from typing import Dict, List, Sequence, Tuple

from .clauses import Clause, Derivation, Literal, eq, neq
from .signature import Signature
from .terms import Term, consts_of, fresh_var, mk_app, mk_bound, mk_lam
from .types import TyVar, Type, TypeDecl, arrow, arrows, bool_type

logger = logging.getLogger("lambdasup.booleans")

TRUE = "$true"
FALSE = "$false"
NOT = "$not"
AND = "$and"
OR = "$or"
IMPL = "$impl"
EQUIV = "$equiv"
FORALL = "$forall"
EXISTS = "$exists"
EQ = "$eq"
CHOICE = "$choice"

BINARY = {"&": AND, "|": OR, "=>": IMPL, "<=>": EQUIV}


def _decls() -> Dict[str, TypeDecl]:
    o = bool_type()
    a = TyVar("A")
    pred = arrow(a, o)
    return {
        TRUE: TypeDecl((), o),
        FALSE: TypeDecl((), o),
        NOT: TypeDecl((), arrow(o, o)),
        AND: TypeDecl((), arrows([o, o], o)),
        OR: TypeDecl((), arrows([o, o], o)),
        IMPL: TypeDecl((), arrows([o, o], o)),
        EQUIV: TypeDecl((), arrows([o, o], o)),
        FORALL: TypeDecl(("A",), arrow(pred, o)),
        EXISTS: TypeDecl(("A",), arrow(pred, o)),
        EQ: TypeDecl(("A",), arrows([a, a], o)),
        CHOICE: TypeDecl(("A",), arrow(pred, a)),
    }


PROXIES = tuple(_decls())


def declare_proxies(sig: Signature) -> None:
    for name, decl in _decls().items():
        sig.declare(name, decl)


def is_proxy(name: str) -> bool:
    return name in PROXIES


# -- term builders ------------------------------------------------------------------

def true(sig: Signature) -> Term:
    return sig.const(TRUE)


def false(sig: Signature) -> Term:
    return sig.const(FALSE)


def negate(sig: Signature, t: Term) -> Term:
    return sig.apply(NOT, t)


def connective(sig: Signature, op: str, a: Term, b: Term) -> Term:
    """``a op b`` for a binary connective; ``<~>``, ``~&``, ``~|`` and ``<=`` are rewritten."""
    if op == "<=":
        return sig.apply(IMPL, b, a)
    if op == "<~>":
        return negate(sig, sig.apply(EQUIV, a, b))
    if op == "~&":
        return negate(sig, sig.apply(AND, a, b))
    if op == "~|":
        return negate(sig, sig.apply(OR, a, b))
    return sig.apply(BINARY[op], a, b)


def quantifier(sig: Signature, existential: bool, binder: Type, body: Term) -> Term:
    """``forall⟨τ⟩ (λx. body)``; ``body`` has the bound variable at index 0."""
    return sig.apply(EXISTS if existential else FORALL, mk_lam(binder, body), tyargs=(binder,))


def equality(sig: Signature, a: Term, b: Term) -> Term:
    return sig.apply(EQ, a, b, tyargs=(a.ty,))


def choice(sig: Signature, binder: Type, body: Term) -> Term:
    return sig.apply(CHOICE, mk_lam(binder, body), tyargs=(binder,))


# -- axioms ---------------------------------------------------------------------------

def proxy_axioms(sig: Signature, with_choice: bool = False) -> List[Clause]:
    """The defining clauses of the proxies, one ``bool_axiom`` derivation each."""
    declare_proxies(sig)
    o = bool_type()
    a = TyVar("A")
    t, f = true(sig), false(sig)
    x, y = fresh_var(o, "X"), fresh_var(o, "X")
    u, v = fresh_var(a, "X"), fresh_var(a, "X")
    p = fresh_var(arrow(a, o), "X")
    ap = lambda name, *args, tyargs=(): sig.apply(name, *args, tyargs=tyargs)
    lam_true = mk_lam(a, t)
    not_p = mk_lam(a, negate(sig, mk_app(p, [mk_bound(0, a)])))

    table: List[Tuple[str, Sequence[Literal]]] = [
        ("true_false", [neq(t, f)]),
        ("bool_cases", [eq(x, t), eq(x, f)]),
        ("not_true", [eq(ap(NOT, t), f)]),
        ("not_false", [eq(ap(NOT, f), t)]),
        ("and_true", [eq(ap(AND, t, x), x)]),
        ("and_false", [eq(ap(AND, f, x), f)]),
        ("or_true", [eq(ap(OR, t, x), t)]),
        ("or_false", [eq(ap(OR, f, x), x)]),
        ("impl_true", [eq(ap(IMPL, t, x), x)]),
        ("impl_false", [eq(ap(IMPL, f, x), t)]),
        ("eq_true", [neq(u, v), eq(ap(EQ, u, v, tyargs=(a,)), t)]),
        ("eq_false", [eq(u, v), eq(ap(EQ, u, v, tyargs=(a,)), f)]),
        ("equiv", [eq(ap(EQUIV, x, y), ap(AND, ap(IMPL, x, y), ap(IMPL, y, x)))]),
        ("forall_true", [eq(ap(FORALL, lam_true, tyargs=(a,)), t)]),
        ("forall_false", [eq(p, lam_true), eq(ap(FORALL, p, tyargs=(a,)), f)]),
        ("exists", [eq(ap(EXISTS, p, tyargs=(a,)), negate(sig, ap(FORALL, not_p, tyargs=(a,))))]),
    ]
    if with_choice:
        picked = ap(CHOICE, p, tyargs=(a,))
        table.append(("choice", [eq(mk_app(p, [u]), f), eq(mk_app(p, [picked]), t)]))
    return [Clause(tuple(lits), derivation=Derivation("bool_axiom", note=name)) for name, lits in table]


def boolean_proxy_encode(clauses: Sequence[Clause], sig: Signature, uses_booleans: bool,
                         with_choice: bool = False) -> List[Clause]:
    """Input clauses plus the proxy axioms when formulas occur inside terms.

    Args:
        clauses: clausified problem; nested formulas are already proxy terms
        uses_booleans: whether the clausifier built any proxy term
        with_choice: add the choice axiom as well
    Returns:
        the clause list to saturate; unchanged when ``uses_booleans`` is false
    """
    if not uses_booleans:
        return list(clauses)
    axioms = proxy_axioms(sig, with_choice)
    logger.debug("adding %d Boolean axioms", len(axioms))
    return list(clauses) + axioms


def mentions_proxies(C: Clause) -> bool:
    return any(c.name in PROXIES for t in C.terms() for c in consts_of(t))
