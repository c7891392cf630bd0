"""Core generating inferences.

Each ``infer_*`` function returns a lazy stream.  Elements are
``Inference`` records or ``None``; a ``None`` is handed through from the
unifier stream and means "nothing yet, ask again later".  Side conditions
that do not depend on the unifier are checked before unifying.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from typing import Any, Iterator, Optional, Tuple

from .clauses import Clause, Derivation, Literal, apart_from, eq, neq
from .order import EQUAL, GREATER, LESS, TermOrder
from .positions import green_subterms, occurs_deeply, replace_green
from .signature import DIFF, Signature
from .subst import Substitution
from .terms import Const, Term, Var, fresh_tyvar, fresh_var, is_fluid, mk_app, mk_var
from .types import TyVar, arrow, arrows
from .unification import BoundMonitor, UnifConfig, csu

logger = logging.getLogger("lambdasup.calculus")

Stream = Iterator[Optional["Inference"]]


@dataclass(frozen=True)
class Inference:
    rule: str
    premises: Tuple[int, ...]
    literals: Tuple[Literal, ...]
    unifier: Substitution = field(default_factory=Substitution.identity)
    position: tuple = ()

    def derivation(self) -> Derivation:
        shown = self.unifier.restrict(
            [x for x in self.unifier.terms if not x.startswith("U")],
        )
        return Derivation(self.rule, self.premises, "" if shown.is_identity else str(shown))

    def to_clause(self, id: int = -1, age: int = 0) -> Clause:
        return Clause(self.literals, id, age, self.derivation())


@dataclass
class InferenceContext:
    """What every rule needs: the order, the signature and the unifier knobs."""

    order: TermOrder
    sig: Signature
    unif: UnifConfig = field(default_factory=UnifConfig)
    monitor: BoundMonitor = field(default_factory=BoundMonitor)
    skolems: Any = None
    counts: dict = field(default_factory=dict)

    def unifiers(self, s: Term, t: Term):
        return csu(s, t, self.unif, monitor=self.monitor)

    def count(self, rule: str) -> None:
        self.counts[rule] = self.counts.get(rule, 0) + 1


def _cannot_be_greater(order: TermOrder, s: Term, t: Term) -> bool:
    return order.compare_terms(s, t) in (LESS, EQUAL)


def _rigid_clash(t: Term, u: Term) -> bool:
    a, b = t.head, u.head
    return isinstance(a, Const) and isinstance(b, Const) and a.name != b.name


def _positive_orientations(ctx: InferenceContext, D: Clause):
    """``(index, t, t')`` for positive literals of ``D`` that may be strictly eligible."""
    order = ctx.order
    if order.select(D):
        return
    for i, lit in enumerate(D.literals):
        if lit.negative or not order.is_maximal(i, D.literals, strict=True):
            continue
        for t, t2 in lit.orientations():
            if not _cannot_be_greater(order, t, t2):
                yield i, t, t2


def _target_orientations(ctx: InferenceContext, C: Clause):
    """``(index, literal, s, s')`` for literals of ``C`` that may be eligible."""
    order = ctx.order
    selected = order.select(C)
    for j, lit in enumerate(C.literals):
        if selected:
            if j not in selected:
                continue
        elif not order.is_maximal(j, C.literals, strict=lit.positive):
            continue
        for s, s2 in lit.orientations():
            if not _cannot_be_greater(order, s, s2):
                yield j, lit, s, s2


def _post_conditions(ctx: InferenceContext, D: Clause, i: int, C: Clause, j: int, lit: Literal,
                     t: Term, t2: Term, s: Term, s2: Term, sigma: Substitution) -> bool:
    order = ctx.order
    if _cannot_be_greater(order, sigma(t), sigma(t2)):
        return False
    if _cannot_be_greater(order, sigma(s), sigma(s2)):
        return False
    if not order.eligible(i, D, sigma, strict=True):
        return False
    return order.eligible(j, C, sigma, strict=lit.positive)


def _sup_conclusion(D: Clause, i: int, C: Clause, j: int, lit: Literal, s: Term, s2: Term,
                    p: tuple, replacement: Term, sigma: Substitution) -> Tuple[Literal, ...]:
    rewritten = replace_green(sigma(s), p, replacement)
    side = Literal(rewritten, sigma(s2), lit.positive)
    rest = tuple(l.apply_subst(sigma) for l in D.without(i)) + tuple(l.apply_subst(sigma) for l in C.without(j))
    return rest + (side,)


def _variable_condition(ctx: InferenceContext, C: Clause, y: Var, t2: Term, sigma: Substitution) -> bool:
    """False when no grounding can make ``C{y := t'}`` smaller than ``C``."""
    # single pass: y may have a type variable that only sigma instantiates
    swapped = Substitution(sigma.types, {**sigma.terms, y.name: sigma(t2)})
    replaced = C.apply_subst(swapped)
    return ctx.order.compare_clauses(replaced, C.apply_subst(sigma)) not in (GREATER, EQUAL)


def infer_sup(ctx: InferenceContext, D: Clause, C: Clause) -> Stream:
    """Superposition of a positive literal of ``D`` into a green subterm of ``C``."""
    D = apart_from(D, C)
    c_terms = list(C.terms())
    for i, t, t2 in _positive_orientations(ctx, D):
        for j, lit, s, s2 in _target_orientations(ctx, C):
            for p, u in green_subterms(s):
                if is_fluid(u) or _rigid_clash(t, u):
                    continue
                if isinstance(u, Var) and occurs_deeply(u, c_terms):
                    continue
                for sigma in ctx.unifiers(t, u):
                    if sigma is None:
                        yield None
                        continue
                    if not _post_conditions(ctx, D, i, C, j, lit, t, t2, s, s2, sigma):
                        continue
                    if isinstance(u, Var) and not _variable_condition(ctx, C, u, t2, sigma):
                        continue
                    ctx.count("sup")
                    lits = _sup_conclusion(D, i, C, j, lit, s, s2, p, sigma(t2), sigma)
                    yield Inference("sup", (D.id, C.id), lits, sigma, (i, j, p))


def infer_fluidsup(ctx: InferenceContext, D: Clause, C: Clause) -> Stream:
    """Superposition into fluid subterms through a fresh higher-order variable."""
    D = apart_from(D, C)
    c_terms = list(C.terms())
    for i, t, t2 in _positive_orientations(ctx, D):
        for j, lit, s, s2 in _target_orientations(ctx, C):
            for p, u in green_subterms(s):
                deep_var = isinstance(u, Var) and occurs_deeply(u, c_terms)
                if not (is_fluid(u) or deep_var):
                    continue
                z = fresh_var(arrow(t.ty, u.ty), "Z")
                zt, zt2 = mk_app(z, [t]), mk_app(z, [t2])
                for sigma in ctx.unifiers(zt, u):
                    if sigma is None:
                        yield None
                        continue
                    if sigma(zt) is sigma(zt2):
                        continue
                    if not _post_conditions(ctx, D, i, C, j, lit, t, t2, s, s2, sigma):
                        continue
                    ctx.count("fluid_sup")
                    lits = _sup_conclusion(D, i, C, j, lit, s, s2, p, sigma(zt2), sigma)
                    yield Inference("fluid_sup", (D.id, C.id), lits, sigma, (i, j, p))


def infer_eres(ctx: InferenceContext, C: Clause) -> Stream:
    order = ctx.order
    selected = order.select(C)
    for j, lit in enumerate(C.literals):
        if lit.positive:
            continue
        if selected and j not in selected:
            continue
        if not selected and not order.is_maximal(j, C.literals):
            continue
        if _rigid_clash(lit.lhs, lit.rhs):
            continue
        for sigma in ctx.unifiers(lit.lhs, lit.rhs):
            if sigma is None:
                yield None
                continue
            if not order.eligible(j, C, sigma):
                continue
            ctx.count("eres")
            yield Inference("eres", (C.id,), tuple(l.apply_subst(sigma) for l in C.without(j)), sigma, (j,))


def infer_efact(ctx: InferenceContext, C: Clause) -> Stream:
    order = ctx.order
    if order.select(C):
        return
    lits = C.literals
    for i, lit in enumerate(lits):
        if lit.negative or not order.is_maximal(i, lits):
            continue
        for k, other in enumerate(lits):
            if k == i or other.negative:
                continue
            for u, v in lit.orientations():
                if _cannot_be_greater(order, u, v):
                    continue
                for u2, v2 in other.orientations():
                    if _rigid_clash(u, u2):
                        continue
                    for sigma in ctx.unifiers(u, u2):
                        if sigma is None:
                            yield None
                            continue
                        if _cannot_be_greater(order, sigma(u), sigma(v)):
                            continue
                        if not order.eligible(i, C, sigma):
                            continue
                        ctx.count("efact")
                        rest = tuple(l.apply_subst(sigma) for l in C.without(i, k))
                        new = (neq(sigma(v), sigma(v2)), eq(sigma(u), sigma(v2)))
                        yield Inference("efact", (C.id,), rest + new, sigma, (i, k))


def infer_argcong(ctx: InferenceContext, C: Clause) -> Stream:
    """Apply both sides of a functional positive literal to fresh variables.

    When the result type is a type variable the stream is infinite: one
    conclusion per number of extra arguments.
    """
    order = ctx.order
    if order.select(C):
        return
    for i, lit in enumerate(C.literals):
        if lit.negative:
            continue
        doms, res = lit.ty.split()
        if not doms and not isinstance(res, TyVar):
            continue
        if not order.is_maximal(i, C.literals, strict=True):
            continue
        for n in range(1, len(doms) + 1):
            inf = _argcong_one(ctx, C, i, lit, Substitution.identity(), doms[:n])
            if inf is not None:
                yield inf
    open_ended = []
    for i, lit in enumerate(C.literals):
        doms, res = lit.ty.split()
        if lit.positive and isinstance(res, TyVar) and order.is_maximal(i, C.literals, strict=True):
            open_ended.append((i, lit, doms, res))
    if not open_ended:
        return
    for m in itertools.count(1):
        for i, lit, doms, res in open_ended:
            alphas = [fresh_tyvar() for _ in range(m)]
            sigma = Substitution({res.name: arrows(alphas, fresh_tyvar())}, {})
            yield _argcong_one(ctx, C, i, lit, sigma, [sigma.apply_type(d) for d in doms] + alphas)


def _argcong_one(ctx: InferenceContext, C: Clause, i: int, lit: Literal, sigma: Substitution, doms) -> Optional[Inference]:
    if not ctx.order.eligible(i, C, sigma, strict=True):
        return None
    xs = [fresh_var(sigma.apply_type(d), "X") for d in doms]
    lhs = mk_app(sigma(lit.lhs), xs)
    rhs = mk_app(sigma(lit.rhs), xs)
    rest = tuple(l.apply_subst(sigma) for l in C.without(i))
    ctx.count("arg_cong")
    return Inference("arg_cong", (C.id,), rest + (eq(lhs, rhs),), sigma, (i, len(doms)))


def ext_axiom(sig: Signature) -> Clause:
    """``y (diff y z) != z (diff y z) | y = z`` over fresh type variables."""
    a, b = TyVar("A"), TyVar("B")
    fab = arrow(a, b)
    y, z = mk_var("Y", fab), mk_var("Z", fab)
    d = sig.apply(DIFF, y, z, tyargs=(a, b))
    lits = (neq(mk_app(y, [d]), mk_app(z, [d])), eq(y, z))
    return Clause(lits, derivation=Derivation("ext_axiom"))
