"""Optional rules: extensionality shortcuts, argument pruning and the
superposition variants that reach below λs or into applied variables."""

from __future__ import annotations

import itertools
import logging
import threading
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterator, List, Optional, Sequence, Tuple

from .calculus import (
    Inference,
    InferenceContext,
    Stream,
    _cannot_be_greater,
    _positive_orientations,
    _post_conditions,
    _rigid_clash,
    _sup_conclusion,
    _target_orientations,
)
from .clauses import Clause, Derivation, Literal, apart_from, canonical_names, eq, neq
from .errors import PositionError, TermTypeError
from .matching import match
from .order import GREATER
from .positions import BODY, green_subterms, occurs_deeply, orange_subterm_at, orange_subterms, replace_green, replace_orange
from .signature import DIFF, Signature
from .subst import Substitution
from .terms import (
    App,
    Bound,
    Const,
    Lam,
    Term,
    Var,
    fresh_var,
    is_fluid,
    loose_indices,
    mk_app,
    mk_bound,
    mk_lam,
    mk_lams,
    mk_var,
    term_key,
)
from .types import TyVar, Type, TypeDecl, arrows
from .unification import unify_types

logger = logging.getLogger("lambdasup.calculus")

PRUNE_CANDIDATES = 16


# -- Skolems ----------------------------------------------------------------------

class SkolemRegistry:
    """Skolem symbols introduced while proving.

    NegExt Skolems are shared between literals that are variants of each
    other. A λSup Skolem stands for the point where the rewritten
    λ-expression and its replacement differ, so it is shared only by
    inferences that rewrite the same expression into the same result at
    every enclosing binder; each one counts against a budget.
    """

    def __init__(self, sig: Signature, lambda_budget: int = 1024):
        self.sig = sig
        self.lambda_budget = lambda_budget
        self.lambda_used = 0
        self.table: Dict[tuple, str] = {}
        self.created: List[str] = []
        self._lock = threading.Lock()

    def _symbol(self, key: tuple, tyvars: Sequence[str], body: Type) -> Tuple[str, bool]:
        with self._lock:
            name = self.table.get(key)
            if name is not None:
                return name, False
        decl = TypeDecl(tuple(tyvars), body)
        name = self.sig.fresh_symbol("sk", decl)
        with self._lock:
            self.table[key] = name
            self.created.append(name)
        logger.debug("skolem %s : %s", name, decl)
        return name, True

    def term(self, key: tuple, tyvars: Sequence[str], args: Sequence[Var], result: Type) -> Term:
        """``sk<tyvars> args`` of type ``result``, reused for equal keys."""
        missing = sorted((result.tyvars | frozenset(a for v in args for a in v.ty.tyvars)) - set(tyvars))
        tyvars = list(tyvars) + missing
        body = arrows([v.ty for v in args], result)
        name, _ = self._symbol(key, tyvars, body)
        try:
            head = self.sig.const(name, [TyVar(a) for a in tyvars])
            return mk_app(head, list(args))
        except TermTypeError:
            name, _ = self._symbol(key + ("retry", len(self.created)), tyvars, body)
            return mk_app(self.sig.const(name, [TyVar(a) for a in tyvars]), list(args))

    def take_lambda_budget(self, n: int) -> bool:
        with self._lock:
            if self.lambda_used + n > self.lambda_budget:
                return False
            self.lambda_used += n
            return True


def _registry(ctx: InferenceContext) -> SkolemRegistry:
    if ctx.skolems is None:
        ctx.skolems = SkolemRegistry(ctx.sig)
    return ctx.skolems


def _ordered_vars(lits: Sequence[Literal]) -> Tuple[str, List[str], List[Var]]:
    key, names = canonical_names(lits)
    tyvars: FrozenSet[str] = frozenset()
    by_name: Dict[str, Var] = {}
    for lit in lits:
        tyvars |= lit.tyvars
        for v in lit.fvars:
            by_name[v.name] = v
    return key, [n for n in names if n in tyvars and n not in by_name], [by_name[n] for n in names if n in by_name]


# -- NegExt -------------------------------------------------------------------------

def infer_negext(ctx: InferenceContext, C: Clause) -> Stream:
    """``C' | s sk != s' sk`` for an eligible negative functional literal."""
    order = ctx.order
    reg = _registry(ctx)
    for j, lit in enumerate(C.literals):
        if lit.positive or not lit.ty.is_fun:
            continue
        if not order.eligible(j, C):
            continue
        key, tyvars, ys = _ordered_vars([lit])
        dom = lit.ty.args[0]  # type: ignore[attr-defined]
        sk = reg.term(("negext", key), tyvars, ys, dom)
        new = neq(mk_app(lit.lhs, [sk]), mk_app(lit.rhs, [sk]))
        ctx.count("neg_ext")
        yield Inference("neg_ext", (C.id,), C.without(j) + (new,))


# -- PruneArg -----------------------------------------------------------------------

@dataclass
class PruneCandidateMap:
    """Candidate terms per (variable, 1-based argument index), over placeholders ``?x1 … ?xk``."""

    slots: Dict[Tuple[str, int], FrozenSet[Term]] = field(default_factory=dict)

    def prunable(self) -> List[Tuple[str, int]]:
        return [k for k, v in self.slots.items() if v]

    def as_text(self) -> Dict[Tuple[str, int], List[str]]:
        return {k: sorted(str(t) for t in v) for k, v in self.slots.items()}


def _placeholder(j: int, ty: Type) -> Var:
    return mk_var(f"?x{j + 1}", ty)


def _occurrences(C: Clause) -> Dict[str, List[Tuple[Term, ...]]]:
    occ: Dict[str, List[Tuple[Term, ...]]] = {}

    def walk(t: Term) -> None:
        if isinstance(t, Var):
            occ.setdefault(t.name, []).append(())
        elif isinstance(t, Lam):
            walk(t.body)
        elif isinstance(t, App):
            if isinstance(t.head, Var):
                occ.setdefault(t.head.name, []).append(t.args)
            for a in t.args:
                walk(a)

    for t in C.terms():
        walk(t)
    return occ


def _variants(t: Term, others: Dict[int, Term]) -> List[Term]:
    out: List[Term] = []
    for j, a in others.items():
        if t is a:
            out.append(_placeholder(j, a.ty))
    if isinstance(t, App):
        pools = [_variants(a, others) for a in t.args]
        for combo in itertools.islice(itertools.product(*pools), PRUNE_CANDIDATES):
            out.append(mk_app(t.head, list(combo)))
    else:
        out.append(t)
    seen: Dict[Term, None] = dict.fromkeys(out)
    return list(seen)[:PRUNE_CANDIDATES]


def _candidates(args: Tuple[Term, ...], i: int, y: str) -> FrozenSet[Term]:
    others = {j: a for j, a in enumerate(args) if j != i}
    return frozenset(c for c in _variants(args[i], others) if not c.loose and y not in c.fnames)


def prune_candidates(C: Clause) -> PruneCandidateMap:
    """The candidate map, intersected over all occurrences of each variable."""
    out = PruneCandidateMap()
    for y, occs in sorted(_occurrences(C).items()):
        k = min(len(a) for a in occs)
        for i in range(k):
            cands: Optional[FrozenSet[Term]] = None
            for args in occs:
                here = _candidates(args, i, y)
                cands = here if cands is None else cands & here
                if not cands:
                    break
            out.slots[(y, i + 1)] = cands or frozenset()
    return out


def _placeholder_index(v: Var) -> int:
    return int(v.name[2:])


def _fill(t: Term, where: Dict[int, int], depth: int = 0) -> Term:
    """Replace placeholder ``?xk`` by the bound variable ``where[k]``."""
    if isinstance(t, Var) and t.name.startswith("?x"):
        return mk_bound(where[_placeholder_index(t)] + depth, t.ty)
    if not any(v.name.startswith("?x") for v in t.fvars):
        return t
    if isinstance(t, Lam):
        return mk_lam(t.binder, _fill(t.body, where, depth + 1))
    assert isinstance(t, App)
    return mk_app(_fill(t.head, where, depth), [_fill(a, where, depth) for a in t.args])


def prune_arg(ctx: Optional[InferenceContext], C: Clause) -> Optional[Tuple[Tuple[Literal, ...], Substitution]]:
    """One pruning step: drop an argument of an applied variable that the others determine."""
    cmap = prune_candidates(C)
    occ = _occurrences(C)
    vars_by_name = {v.name: v for v in C.fvars}
    for y_name, idx in sorted(cmap.prunable(), key=lambda k: (k[0], -k[1])):
        y = vars_by_name[y_name]
        t = sorted(cmap.slots[(y_name, idx)], key=str)[0]
        used = [_placeholder_index(v) for v in t.fvars if v.name.startswith("?x")]
        m = max([idx] + used)
        if min(len(a) for a in occ[y_name]) < m:
            continue
        doms, _ = y.ty.split(m)
        rest_ty = y.ty.split(idx)[1]
        keep = list(range(1, idx))
        y2 = fresh_var(arrows([doms[k - 1] for k in keep], rest_ty), "V")
        sigma_body = mk_app(y2, [mk_bound(idx - k, doms[k - 1]) for k in keep])
        sigma = Substitution({}, {y_name: mk_lams(doms[:idx], sigma_body)})
        rho_binders = [k for k in range(1, m + 1) if k != idx]
        L = len(rho_binders)
        where = {k: L - 1 - pos for pos, k in enumerate(rho_binders)}
        rho_args = [mk_bound(where[k], doms[k - 1]) if k != idx else _fill(t, where) for k in range(1, m + 1)]
        rho = Substitution({}, {y2.name: mk_lams([doms[k - 1] for k in rho_binders], mk_app(y, rho_args))})
        pruned = tuple(lit.apply_subst(sigma) for lit in C.literals)
        back = Clause(tuple(lit.apply_subst(rho) for lit in pruned))
        if not back.same_literals(C):
            logger.debug("prune witness failed for %s at %d in %s", y_name, idx, C)
            continue
        smaller = Clause(pruned)
        if smaller.size > C.size or (smaller.size == C.size and len(smaller.fvars) <= len(C.fvars)):
            continue
        if ctx is not None:
            ctx.count("prune_arg")
        return pruned, sigma
    return None


# -- λDemod -------------------------------------------------------------------------

def lambda_demod(ctx: InferenceContext, unit: Clause, C: Clause, ext: bool = True) -> Optional[List[Tuple[Literal, ...]]]:
    """Rewrite below a λ or inside an applied variable's argument.

    Returns the clauses replacing ``C``: the rewritten clause and, with
    ``ext``, the equation between the old and the new green subterm.
    """
    if len(unit.literals) != 1 or unit.literals[0].negative:
        return None
    order = ctx.order
    for t, t2 in unit.literals[0].orientations():
        if not t2.fvars <= t.fvars or isinstance(t, Var):
            continue
        for j, lit in enumerate(C.literals):
            for s_side, other in ((lit.lhs, lit.rhs), (lit.rhs, lit.lhs)):
                for p, s in green_subterms(s_side):
                    if not (isinstance(s, Lam) or (isinstance(s, App) and isinstance(s.head, Var))):
                        continue
                    for _, u, q in orange_subterms(s):
                        if not q:
                            continue
                        sigma = match(t, u, allow_loose=True)
                        if sigma is None:
                            continue
                        s_new = replace_orange(s, q, sigma(t2))
                        if order.compare_terms(s, s_new) is not GREATER:
                            continue
                        bridge = eq(s, s_new)
                        if order.compare_clauses(C, (bridge,)) is not GREATER:
                            continue
                        new_lit = Literal(replace_green(s_side, p, s_new), other, lit.positive)
                        rewritten = C.without(j) + (new_lit,)
                        ctx.count("lambda_demod")
                        return [rewritten, (bridge,)] if ext else [rewritten]
    return None


# -- λSup ---------------------------------------------------------------------------

def _lambda_paths(s: Term) -> Iterator[Tuple[Tuple[int, ...], Term, int]]:
    """Orange positions through symbol arguments and λ-bodies, with the number of binders crossed."""

    def go(t: Term, pos: Tuple[int, ...], n: int):
        yield pos, t, n
        if isinstance(t, Lam):
            yield from go(t.body, pos + (BODY,), n + 1)
        elif isinstance(t, App) and isinstance(t.head, Const):
            for i, a in enumerate(t.args, start=1):
                yield from go(a, pos + (i,), n)

    yield from go(s, (), 0)


def _binder_types(s: Term, pos: Tuple[int, ...]) -> List[Type]:
    out = []
    t = s
    for step in pos:
        if step == BODY:
            out.append(t.binder)  # type: ignore[attr-defined]
            t = t.body  # type: ignore[attr-defined]
        else:
            t = t.args[step - 1]
    return out


def _open(u: Term, xs: Sequence[Var]) -> Term:
    """Replace the loose indices of ``u`` by ``xs`` (outermost binder first)."""
    n = len(xs)

    def go(t: Term, depth: int) -> Term:
        if t.loose <= depth:
            return t
        if isinstance(t, Bound):
            return xs[n - 1 - (t.index - depth)]
        if isinstance(t, Lam):
            return mk_lam(t.binder, go(t.body, depth + 1))
        return mk_app(go(t.head, depth), [go(a, depth) for a in t.args])

    return go(u, 0)


def _close(t: Term, xs: Sequence[Var]) -> Term:
    """Inverse of ``_open``."""
    n = len(xs)
    index = {x: n - 1 - i for i, x in enumerate(xs)}

    def go(s: Term, depth: int) -> Term:
        if not (s.fvars & index.keys()):
            return s
        if isinstance(s, Var):
            return mk_bound(index[s] + depth, s.ty)
        if isinstance(s, Lam):
            return mk_lam(s.binder, go(s.body, depth + 1))
        assert isinstance(s, App)
        return mk_app(go(s.head, depth), [go(a, depth) for a in s.args])

    return go(t, 0)


def _binder_prefixes(pos: Tuple[int, ...]) -> List[Tuple[int, ...]]:
    return [pos[:k] for k, step in enumerate(pos) if step == BODY]


def infer_lambda_sup(ctx: InferenceContext, D: Clause, C: Clause) -> Stream:
    """Superposition below λ-binders; escaping bound variables become Skolem terms."""
    D = apart_from(D, C)
    reg = _registry(ctx)
    c_terms = list(C.terms())
    for i, t, t2 in _positive_orientations(ctx, D):
        for j, lit, s, s2 in _target_orientations(ctx, C):
            for p, u, n in _lambda_paths(s):
                if n == 0 or is_fluid(u) or isinstance(u, Bound) or _rigid_clash(t, u):
                    continue
                if isinstance(u, Var) and occurs_deeply(u, c_terms):
                    continue
                binders = _binder_types(s, p)
                xs = [fresh_var(b, "X") for b in binders]
                opened = _open(u, xs)
                x_names = {x.name for x in xs}
                for sigma in ctx.unifiers(t, opened):
                    if sigma is None:
                        yield None
                        continue
                    if any(x in sigma.terms for x in x_names):
                        continue
                    if any(sigma(y).fnames & x_names for y in u.fvars):
                        continue
                    if not _post_conditions(ctx, D, i, C, j, lit, t, t2, s, s2, sigma):
                        continue
                    inf = _lambda_sup_conclusion(ctx, reg, D, i, C, j, lit, s, s2, p, xs, sigma(t2), sigma)
                    if inf is not None:
                        yield inf


def _lambda_sup_conclusion(ctx, reg: SkolemRegistry, D: Clause, i: int, C: Clause, j: int, lit: Literal,
                           s: Term, s2: Term, p, xs: Sequence[Var], t2s: Term, sigma: Substitution) -> Optional[Inference]:
    s_sigma = sigma(s)
    try:
        s_new = replace_orange(s_sigma, p, _close(t2s, xs))
        prefixes = _binder_prefixes(p)
        olds = [orange_subterm_at(s_sigma, q) for q in prefixes]
        news = [orange_subterm_at(s_new, q) for q in prefixes]
    except (PositionError, AttributeError):
        return None
    rest = tuple(l.apply_subst(sigma) for l in D.without(i)) + tuple(l.apply_subst(sigma) for l in C.without(j))
    escaping = set()
    for l in rest:
        escaping |= {v.name for v in l.fvars} & {x.name for x in xs}
    if not escaping:
        ctx.count("lambda_sup")
        return Inference("lambda_sup", (D.id, C.id), rest + (Literal(s_new, sigma(s2), lit.positive),), sigma, (i, j, p))
    if not reg.take_lambda_budget(len(xs)):
        ctx.monitor.hit("lambda-sup")
        return None
    rho_terms: Dict[str, Term] = {}
    p_sets: List[Tuple[FrozenSet[str], FrozenSet[Var]]] = []
    chain: List[Tuple[str, str]] = []
    for k, (old, new) in enumerate(zip(olds, news)):
        tyvars = old.tyvars | new.tyvars
        fv = old.fvars | new.fvars
        for outer in range(k):
            if loose_indices(old) & {k - 1 - outer} or loose_indices(new) & {k - 1 - outer}:
                tyvars |= p_sets[outer][0]
                fv |= p_sets[outer][1]
        p_sets.append((tyvars, fv))
        ys = sorted(fv, key=lambda v: v.name)
        chain.append((term_key(old), term_key(new)))
        key = ("lambda_sup", tuple(chain))
        rho_terms[xs[k].name] = reg.term(key, sorted(tyvars), ys, xs[k].ty)
    rho = Substitution({}, rho_terms)
    lits = tuple(l.apply_subst(rho) for l in rest) + (Literal(s_new, sigma(s2), lit.positive),)
    ctx.count("lambda_sup")
    return Inference("lambda_sup", (D.id, C.id), lits, sigma.compose(rho), (i, j, p))


# -- DupSup and FlexSup ---------------------------------------------------------------

def _flex_targets(ctx: InferenceContext, C: Clause):
    for j, lit, s, s2 in _target_orientations(ctx, C):
        for p, u in green_subterms(s):
            if isinstance(u, App) and isinstance(u.head, Var):
                yield j, lit, s, s2, p, u


def infer_dupsup(ctx: InferenceContext, D: Clause, C: Clause) -> Stream:
    """Superposition into ``y ū`` through ``y := λx̄. z x̄ (w x̄)``."""
    D = apart_from(D, C)
    for i, t, t2 in _positive_orientations(ctx, D):
        for j, lit, s, s2, p, u in _flex_targets(ctx, C):
            y = u.head
            assert isinstance(y, Var)
            n = len(u.args)
            doms, res = y.ty.split(n)
            w = fresh_var(arrows(doms, t.ty), "W")
            z = fresh_var(arrows(list(doms) + [t.ty], res), "Z")
            xs = [mk_bound(n - 1 - k, d) for k, d in enumerate(doms)]
            rho = Substitution({}, {y.name: mk_lams(doms, mk_app(z, xs + [mk_app(w, xs)]))})
            C_rho = C.apply_subst(rho)
            s_rho, s2_rho = rho(s), rho(s2)
            args_rho = [rho(a) for a in u.args]
            target = mk_app(w, args_rho)
            for sigma in ctx.unifiers(t, target):
                if sigma is None:
                    yield None
                    continue
                if not _post_conditions(ctx, D, i, C_rho, j, lit, t, t2, s_rho, s2_rho, sigma):
                    continue
                replacement = sigma(mk_app(z, args_rho + [t2]))
                lits = _sup_conclusion(D, i, C_rho, j, C_rho.literals[j], s_rho, s2_rho, p, replacement, sigma)
                ctx.count("dup_sup")
                yield Inference("dup_sup", (D.id, C.id), lits, rho.compose(sigma), (i, j, p))


def infer_flexsup(ctx: InferenceContext, D: Clause, C: Clause) -> Stream:
    """Superposition into an applied variable by unifying with it directly."""
    D = apart_from(D, C)
    for i, t, t2 in _positive_orientations(ctx, D):
        for j, lit, s, s2, p, u in _flex_targets(ctx, C):
            for sigma in ctx.unifiers(t, u):
                if sigma is None:
                    yield None
                    continue
                if not _post_conditions(ctx, D, i, C, j, lit, t, t2, s, s2, sigma):
                    continue
                ctx.count("flex_sup")
                lits = _sup_conclusion(D, i, C, j, lit, s, s2, p, sigma(t2), sigma)
                yield Inference("flex_sup", (D.id, C.id), lits, sigma, (i, j, p))


# -- Abs ----------------------------------------------------------------------------

def disagreements(a: Term, b: Term) -> List[Tuple[Term, Term]]:
    """Pairs left after peeling the largest common green context of ``a`` and ``b``."""
    if a is b:
        return []
    ha, hb = a.head, b.head
    if (isinstance(ha, Const) and ha is hb and len(a.args) == len(b.args)):
        out: List[Tuple[Term, Term]] = []
        for x, y in zip(a.args, b.args):
            out.extend(disagreements(x, y))
        return out
    return [(a, b)]


def _type_unifier(a: Term, b: Term) -> Optional[Substitution]:
    tsub = unify_types(a.ty, b.ty)
    return None if tsub is None else Substitution(tsub, {})


def _abs_literals(a: Term, b: Term) -> Optional[Tuple[Literal, ...]]:
    pairs = disagreements(a, b)
    if not any(x.ty.is_fun for x, _ in pairs):
        return None
    return tuple(neq(x, y) for x, y in pairs)


def infer_abs_sup(ctx: InferenceContext, D: Clause, C: Clause) -> Stream:
    D = apart_from(D, C)
    for i, t, t2 in _positive_orientations(ctx, D):
        for j, lit, s, s2 in _target_orientations(ctx, C):
            for p, u in green_subterms(s):
                if isinstance(u, Var) or is_fluid(u) or _rigid_clash(t, u):
                    continue
                sigma = _type_unifier(t, u)
                if sigma is None:
                    continue
                extra = _abs_literals(sigma(t), sigma(u))
                if extra is None:
                    continue
                if not _post_conditions(ctx, D, i, C, j, lit, t, t2, s, s2, sigma):
                    continue
                lits = _sup_conclusion(D, i, C, j, lit, s, s2, p, sigma(t2), sigma)
                ctx.count("abs_sup")
                yield Inference("abs_sup", (D.id, C.id), lits + extra, sigma, (i, j, p))


def infer_abs_eres(ctx: InferenceContext, C: Clause) -> Stream:
    order = ctx.order
    for j, lit in enumerate(C.literals):
        if lit.positive or not order.eligible(j, C):
            continue
        sigma = _type_unifier(lit.lhs, lit.rhs)
        if sigma is None:
            continue
        extra = _abs_literals(sigma(lit.lhs), sigma(lit.rhs))
        if extra is None:
            continue
        ctx.count("abs_eres")
        yield Inference("abs_eres", (C.id,), tuple(l.apply_subst(sigma) for l in C.without(j)) + extra, sigma, (j,))


def infer_abs_efact(ctx: InferenceContext, C: Clause) -> Stream:
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
                for u2, v2 in other.orientations():
                    sigma = _type_unifier(u, u2)
                    if sigma is None:
                        continue
                    extra = _abs_literals(sigma(u), sigma(u2))
                    if extra is None or _cannot_be_greater(order, sigma(u), sigma(v)):
                        continue
                    if not order.eligible(i, C, sigma):
                        continue
                    rest = tuple(l.apply_subst(sigma) for l in C.without(i, k))
                    new = (neq(sigma(v), sigma(v2)), eq(sigma(u), sigma(v2)))
                    ctx.count("abs_efact")
                    yield Inference("abs_efact", (C.id,), rest + new + extra, sigma, (i, k))


# -- ExtInst --------------------------------------------------------------------------

def ext_inst(sig: Signature, s: Term, s2: Term) -> Clause:
    """``s (diff s s') != s' (diff s s') | s = s'``."""
    if s.ty is not s2.ty:
        raise TermTypeError(f"ext_inst needs equal types, got {s.ty!r} and {s2.ty!r}")
    if not s.ty.is_fun:
        raise TermTypeError(f"ext_inst needs a functional type, got {s.ty!r}")
    dom, cod = s.ty.args  # type: ignore[attr-defined]
    d = sig.apply(DIFF, s, s2, tyargs=(dom, cod))
    lits = (neq(mk_app(s, [d]), mk_app(s2, [d])), eq(s, s2))
    return Clause(lits, derivation=Derivation("ext_inst"))


def functional_green_subterms(C: Clause) -> List[Term]:
    seen: Dict[Term, None] = {}
    for t in C.terms():
        for _, u in green_subterms(t):
            if u.ty.is_fun and not u.loose:
                seen.setdefault(u, None)
    return list(seen)
