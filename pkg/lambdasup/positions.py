"""Green and orange subterm navigation.

A green position is a tuple of 1-based argument indices that only passes
through symbol-headed applications.  An orange position may also pass
through λ-bodies (step ``0``) and through the arguments of applications
headed by a variable, free or bound.
"""

from __future__ import annotations

from typing import Iterator, List, Sequence, Tuple

from .errors import PositionError, TermTypeError
from .terms import App, Bound, Const, Lam, Term, Var, mk_app, mk_lam

GreenPosition = Tuple[int, ...]
OrangePosition = Tuple[int, ...]
BODY = 0


def green_positions(t: Term) -> Iterator[GreenPosition]:
    """Green positions of ``t``, leftmost-outermost first."""
    yield ()
    if isinstance(t, App) and isinstance(t.head, Const):
        for i, a in enumerate(t.args, start=1):
            for p in green_positions(a):
                yield (i,) + p


def green_subterms(t: Term) -> Iterator[Tuple[GreenPosition, Term]]:
    yield (), t
    if isinstance(t, App) and isinstance(t.head, Const):
        for i, a in enumerate(t.args, start=1):
            for p, s in green_subterms(a):
                yield (i,) + p, s


def green_subterm_at(t: Term, p: Sequence[int]) -> Term:
    for i in p:
        if not (isinstance(t, App) and isinstance(t.head, Const)) or not 1 <= i <= len(t.args):
            raise PositionError(f"{tuple(p)} is not a green position")
        t = t.args[i - 1]
    return t


def replace_green(t: Term, p: Sequence[int], u: Term) -> Term:
    if not p:
        if u.ty is not t.ty:
            raise TermTypeError(f"replacement {u} has type {u.ty!r}, expected {t.ty!r}")
        return u
    if not (isinstance(t, App) and isinstance(t.head, Const)) or not 1 <= p[0] <= len(t.args):
        raise PositionError(f"{tuple(p)} is not a green position")
    i = p[0] - 1
    args = list(t.args)
    args[i] = replace_green(args[i], p[1:], u)
    return mk_app(t.head, args)


def orange_subterms(t: Term) -> Iterator[Tuple[Tuple, Term, OrangePosition]]:
    """Yield ``(binder types outermost-first, subterm, position)``."""
    yield from _orange(t, (), ())


def _orange(t: Term, binders: Tuple, pos: OrangePosition):
    yield binders, t, pos
    if isinstance(t, Lam):
        yield from _orange(t.body, binders + (t.binder,), pos + (BODY,))
    elif isinstance(t, App):
        for i, a in enumerate(t.args, start=1):
            yield from _orange(a, binders, pos + (i,))


def orange_subterm_at(t: Term, p: Sequence[int]) -> Term:
    for step in p:
        if step == BODY:
            if not isinstance(t, Lam):
                raise PositionError(f"{tuple(p)} is not an orange position")
            t = t.body
        else:
            if not isinstance(t, App) or not 1 <= step <= len(t.args):
                raise PositionError(f"{tuple(p)} is not an orange position")
            t = t.args[step - 1]
    return t


def replace_orange(t: Term, p: Sequence[int], u: Term) -> Term:
    """Replace at an orange position; the result is renormalised."""
    if not p:
        if u.ty is not t.ty:
            raise TermTypeError(f"replacement {u} has type {u.ty!r}, expected {t.ty!r}")
        return u
    step = p[0]
    if step == BODY:
        if not isinstance(t, Lam):
            raise PositionError(f"{tuple(p)} is not an orange position")
        return mk_lam(t.binder, replace_orange(t.body, p[1:], u))
    if not isinstance(t, App) or not 1 <= step <= len(t.args):
        raise PositionError(f"{tuple(p)} is not an orange position")
    args = list(t.args)
    args[step - 1] = replace_orange(args[step - 1], p[1:], u)
    return mk_app(t.head, args)


def is_green_path(p: OrangePosition, t: Term) -> bool:
    """True when an orange position only crosses symbol arguments."""
    for step in p:
        if step == BODY or not (isinstance(t, App) and isinstance(t.head, Const)):
            return False
        t = t.args[step - 1]
    return True


def deep_vars(t: Term, deep: bool = False) -> set:
    """Names of variables with an occurrence under a λ or in an applied variable's argument."""
    out: set = set()
    _deep(t, deep, out)
    return out


def _deep(t: Term, deep: bool, out: set) -> None:
    if not t.fvars:
        return
    if isinstance(t, Var):
        if deep:
            out.add(t.name)
    elif isinstance(t, Lam):
        out.update(t.body.fnames)
    elif isinstance(t, App):
        if isinstance(t.head, Var) and deep:
            out.add(t.head.name)
        below = deep or isinstance(t.head, (Var, Bound))
        for a in t.args:
            _deep(a, below, out)


def occurs_deeply(x, terms: Sequence[Term]) -> bool:
    """Whether variable ``x`` (a Var or a name) occurs deeply in the given terms."""
    name = x.name if isinstance(x, Var) else x
    return any(name in deep_vars(t) for t in terms)


def path_binders(t: Term, p: OrangePosition) -> List:
    out = []
    for step in p:
        if step == BODY:
            out.append(t.binder)  # type: ignore[attr-defined]
            t = t.body  # type: ignore[attr-defined]
        else:
            t = t.args[step - 1]
    return out
