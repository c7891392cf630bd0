"""One-sided matching for simplification.

``match`` instantiates only the variables of the pattern; variables of the
target behave like constants.  By default it covers first-order structure
plus Miller patterns, and reports no match outside that fragment even when
one exists.  With ``extended=True`` an applied pattern variable whose
arguments contain no pattern variable is also solved by abstracting
occurrences of its arguments in the target; the candidates are checked by
applying them and are tried most general first.
"""

from __future__ import annotations

import itertools
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from .subst import Substitution
from .terms import App, Bound, Const, Lam, Term, Var, loose_indices, mk_app, mk_bound, mk_lams, shift
from .types import Type
from .unification import match_types, pattern_args, rename_bounds

MAX_ABSTRACTIONS = 16

Work = Tuple[Tuple[Term, Term, int], ...]


class _State:
    __slots__ = ("types", "terms")

    def __init__(self, types: Dict[str, Type], terms: Dict[str, Term]):
        self.types = types
        self.terms = terms

    def with_types(self, types: Dict[str, Type]) -> "_State":
        return _State(types, self.terms)

    def with_term(self, name: str, t: Term) -> "_State":
        terms = dict(self.terms)
        terms[name] = t
        return _State(self.types, terms)

    def subst(self) -> Substitution:
        return Substitution(dict(self.types), dict(self.terms))


def _lower(t: Term, depth: int, allow_loose: bool) -> Optional[Term]:
    """``t`` seen from outside ``depth`` binders, or None if it mentions them."""
    if t.loose == 0:
        return t
    if any(i < depth for i in loose_indices(t)):
        return None
    if not allow_loose:
        return None
    return shift(t, -depth)


def _eta_open(t: Term) -> Term:
    """Body of ``t`` under one extra binder."""
    if isinstance(t, Lam):
        return t.body
    dom = t.ty.args[0]  # type: ignore[attr-defined]
    return mk_app(shift(t, 1), [mk_bound(0, dom)])


def _abstractions(target: Term, args: Sequence[Term], arg_tys: Sequence[Type]) -> Iterator[Term]:
    """Closed ``λ x̄. u`` with ``u[x̄ := args] = target``, most general first."""
    n = len(args)
    occurrences: List[Tuple[int, Tuple[int, ...]]] = []

    def collect(t: Term, path: Tuple[int, ...]) -> None:
        for i, a in enumerate(args):
            if t is a:
                occurrences.append((i, path))
                return
        if isinstance(t, App):
            for k, b in enumerate(t.args):
                collect(b, path + (k,))

    collect(target, ())
    occurrences = occurrences[:MAX_ABSTRACTIONS]
    produced = 0
    for size in range(len(occurrences), -1, -1):
        for chosen in itertools.combinations(occurrences, size):
            if produced >= MAX_ABSTRACTIONS:
                return
            body = _replace_paths(shift(target, n), {path: i for i, path in chosen}, n, (), args)
            produced += 1
            yield mk_lams(arg_tys, body)


def _replace_paths(t: Term, where: Dict[Tuple[int, ...], int], n: int, path: Tuple[int, ...], args) -> Term:
    if path in where:
        i = where[path]
        return mk_bound(n - 1 - i, args[i].ty)
    if isinstance(t, App) and any(p[: len(path)] == path and len(p) > len(path) for p in where):
        return mk_app(t.head, [_replace_paths(a, where, n, path + (k,), args) for k, a in enumerate(t.args)])
    return t


def _run(work: Work, st: _State, extended: bool, allow_loose: bool) -> Iterator[_State]:
    if not work:
        yield st
        return
    (p, t, depth), rest = work[0], work[1:]
    if p.ty is not t.ty:
        types = match_types(p.ty, t.ty, st.types)
        if types is None:
            return
        st = st.with_types(types)
    if not p.fvars and not p.tyvars:
        if p is t:
            yield from _run(rest, st, extended, allow_loose)
        return
    if isinstance(p, Var):
        known = st.terms.get(p.name)
        if known is not None:
            if shift(known, depth) is t:
                yield from _run(rest, st, extended, allow_loose)
            return
        lowered = _lower(t, depth, allow_loose)
        if lowered is not None:
            yield from _run(rest, st.with_term(p.name, lowered), extended, allow_loose)
        return
    if isinstance(p, Lam):
        if not t.ty.is_fun:
            return
        yield from _run(((p.body, _eta_open(t), depth + 1),) + rest, st, extended, allow_loose)
        return
    if isinstance(p, (Bound, Const)):
        if type(t) is not type(p):
            return
        if isinstance(p, Bound):
            if p.index == t.index:  # type: ignore[attr-defined]
                yield from _run(rest, st, extended, allow_loose)
            return
        if p.name != t.name or len(p.tyargs) != len(t.tyargs):  # type: ignore[attr-defined]
            return
        types = st.types
        for a, b in zip(p.tyargs, t.tyargs):  # type: ignore[attr-defined]
            types = match_types(a, b, types)
            if types is None:
                return
        yield from _run(rest, st.with_types(types), extended, allow_loose)
        return
    assert isinstance(p, App)
    head = p.head
    if isinstance(head, Var):
        known = st.terms.get(head.name)
        if known is not None:
            inst = mk_app(shift(known, depth), list(p.args))
            yield from _run(((inst, t, depth),) + rest, st, extended, allow_loose)
            return
        yield from _flex(p, head, t, depth, rest, st, extended, allow_loose)
        return
    if not isinstance(t, App) or len(t.args) != len(p.args):
        return
    yield from _run(((head, t.head, depth),) + tuple((a, b, depth) for a, b in zip(p.args, t.args)) + rest, st, extended, allow_loose)


def _flex(p: App, y: Var, t: Term, depth: int, rest: Work, st: _State, extended: bool, allow_loose: bool) -> Iterator[_State]:
    ty_sub = Substitution(dict(st.types), {})
    arg_tys = [ty_sub.apply_type(a) for a in y.ty.split(len(p.args))[0]]
    bounds = pattern_args(p)
    if bounds is not None and all(b < depth for b in bounds):
        outer = loose_indices(t) - set(bounds)
        if any(i < depth for i in outer) or (outer and not allow_loose):
            return
        binding = _pattern_binding(t, bounds, arg_tys, depth)
        yield from _run(rest, st.with_term(y.name, binding), extended, allow_loose)
        return
    if not extended or any(a.fvars for a in p.args):
        return
    for candidate in _abstractions(t, p.args, arg_tys):
        lowered = _lower(candidate, depth, allow_loose)
        if lowered is None:
            continue
        if mk_app(shift(lowered, depth), list(p.args)) is not t:
            continue
        yield from _run(rest, st.with_term(y.name, lowered), extended, allow_loose)


def _pattern_binding(t: Term, bounds: Sequence[int], arg_tys: Sequence[Type], depth: int) -> Term:
    """Closed solution of ``y x̄ = t`` where loose indices outside ``bounds`` point past ``depth``."""
    mapping: Dict[int, int] = {b: len(bounds) - 1 - i for i, b in enumerate(bounds)}
    n = len(bounds)
    for i in loose_indices(t):
        if i not in mapping:
            mapping[i] = i - depth + n
    return mk_lams(arg_tys, rename_bounds(t, mapping))


def matchers(pattern: Term, target: Term, extended: bool = False, allow_loose: bool = False,
             start: Optional[Substitution] = None) -> Iterator[Substitution]:
    """All matchers this procedure finds, best candidates first."""
    st = _State(dict(start.types), dict(start.terms)) if start is not None else _State({}, {})
    for out in _run(((pattern, target, 0),), st, extended, allow_loose):
        yield out.subst()


def match_pairs(pairs: Sequence[Tuple[Term, Term]], extended: bool = False, allow_loose: bool = False,
                start: Optional[Substitution] = None) -> Iterator[Substitution]:
    st = _State(dict(start.types), dict(start.terms)) if start is not None else _State({}, {})
    work = tuple((p, t, 0) for p, t in pairs)
    for out in _run(work, st, extended, allow_loose):
        yield out.subst()


def match(pattern: Term, target: Term, extended: bool = False, allow_loose: bool = False) -> Optional[Substitution]:
    """A substitution σ with ``pattern σ = target``, or None."""
    return next(matchers(pattern, target, extended, allow_loose), None)
