"""λ-terms in η-short β-normal form.

Bound variables are De Bruijn indices that carry their own type, free
variables are named.  Every node is interned, so structural equality is
object identity and α-equivalent terms are the same object.  The smart
constructors ``mk_app`` and ``mk_lam`` keep the canonical form: applying a
λ-abstraction β-reduces by hereditary substitution and building an
abstraction η-reduces when the body permits it.

Node kinds:

- ``Var(name, ty)``: free term variable
- ``Bound(index, ty)``: bound variable, ``index`` counts enclosing binders
- ``Const(name, tyargs, ty)``: symbol with its type arguments and instantiated type
- ``Lam(binder, body)``
- ``App(head, args)``: ``head`` is a Var, Const or Bound and ``args`` is non-empty
"""

from __future__ import annotations

import itertools
import threading
import weakref
from typing import Callable, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple

from .errors import TermTypeError
from .types import Type, TyVar, arrow, tyvars_of

_TABLE: "weakref.WeakValueDictionary[tuple, Term]" = weakref.WeakValueDictionary()
_LOCK = threading.Lock()


def _intern(cls, key: tuple, build: Callable) -> "Term":
    with _LOCK:
        found = _TABLE.get(key)
        if found is not None:
            return found
        obj = object.__new__(cls)
        build(obj)
        _TABLE[key] = obj
        return obj


class Term:
    __slots__ = ("ty", "fvars", "fnames", "tyvars", "loose", "size", "__weakref__")

    ty: Type
    fvars: FrozenSet["Var"]
    fnames: FrozenSet[str]
    tyvars: FrozenSet[str]
    loose: int
    size: int

    args: Tuple["Term", ...] = ()

    @property
    def head(self) -> "Term":
        return self

    @property
    def ground(self) -> bool:
        return not self.fvars and not self.tyvars

    @property
    def closed(self) -> bool:
        return self.loose == 0

    def __lt__(self, other: "Term") -> bool:
        return str(self) < str(other)

    def __str__(self) -> str:
        return render(self)

    __repr__ = __str__


class Var(Term):
    __slots__ = ("name",)
    name: str


class Bound(Term):
    __slots__ = ("index",)
    index: int


class Const(Term):
    __slots__ = ("name", "tyargs")
    name: str
    tyargs: Tuple[Type, ...]


class Lam(Term):
    __slots__ = ("binder", "body")
    binder: Type
    body: Term


class App(Term):
    __slots__ = ("head", "args")


def _leaf(obj, ty: Type, fvars=frozenset(), fnames=frozenset(), tyvars=None, loose=0):
    obj.ty = ty
    obj.fvars = fvars
    obj.fnames = fnames
    obj.tyvars = ty.tyvars if tyvars is None else tyvars
    obj.loose = loose
    obj.size = 1


def mk_var(name: str, ty: Type) -> Var:
    def build(obj):
        obj.name = name
        _leaf(obj, ty)
        obj.fvars = frozenset((obj,))
        obj.fnames = frozenset((name,))
    return _intern(Var, ("V", name, ty), build)  # type: ignore[return-value]


def mk_bound(index: int, ty: Type) -> Bound:
    def build(obj):
        obj.index = index
        _leaf(obj, ty, loose=index + 1)
    return _intern(Bound, ("B", index, ty), build)  # type: ignore[return-value]


def mk_const(name: str, tyargs: Sequence[Type], ty: Type) -> Const:
    tyargs = tuple(tyargs)

    def build(obj):
        obj.name = name
        obj.tyargs = tyargs
        _leaf(obj, ty, tyvars=ty.tyvars | tyvars_of(tyargs))
    return _intern(Const, ("C", name, tyargs, ty), build)  # type: ignore[return-value]


def _lam_raw(binder: Type, body: Term) -> Lam:
    def build(obj):
        obj.binder = binder
        obj.body = body
        obj.ty = arrow(binder, body.ty)
        obj.fvars = body.fvars
        obj.fnames = body.fnames
        obj.tyvars = body.tyvars | binder.tyvars
        obj.loose = max(body.loose - 1, 0)
        obj.size = body.size
    return _intern(Lam, ("L", binder, body), build)  # type: ignore[return-value]


def _app_raw(head: Term, args: Tuple[Term, ...], ty: Type) -> App:
    def build(obj):
        obj.head = head
        obj.args = args
        obj.ty = ty
        fv = head.fvars
        fn = head.fnames
        tv = head.tyvars
        loose = head.loose
        size = head.size
        for a in args:
            fv = fv | a.fvars
            fn = fn | a.fnames
            tv = tv | a.tyvars
            loose = max(loose, a.loose)
            size += a.size
        obj.fvars, obj.fnames, obj.tyvars, obj.loose, obj.size = fv, fn, tv, loose, size
    return _intern(App, ("A", head, args), build)  # type: ignore[return-value]


# -- De Bruijn plumbing -------------------------------------------------------

def shift(t: Term, d: int, cutoff: int = 0) -> Term:
    """Add ``d`` to every bound index >= ``cutoff``."""
    if d == 0 or t.loose <= cutoff:
        return t
    if isinstance(t, Bound):
        return mk_bound(t.index + d, t.ty)
    if isinstance(t, Lam):
        return _lam_raw(t.binder, shift(t.body, d, cutoff + 1))
    if isinstance(t, App):
        return _app_raw(shift(t.head, d, cutoff), tuple(shift(a, d, cutoff) for a in t.args), t.ty)
    return t


def occurs_loose(t: Term, index: int) -> bool:
    if t.loose <= index:
        return False
    if isinstance(t, Bound):
        return t.index == index
    if isinstance(t, Lam):
        return occurs_loose(t.body, index + 1)
    if isinstance(t, App):
        return occurs_loose(t.head, index) or any(occurs_loose(a, index) for a in t.args)
    return False


def loose_indices(t: Term, depth: int = 0) -> FrozenSet[int]:
    """Indices of loose bound variables, relative to the top of ``t``."""
    if t.loose <= depth:
        return frozenset()
    if isinstance(t, Bound):
        return frozenset((t.index - depth,))
    if isinstance(t, Lam):
        return loose_indices(t.body, depth + 1)
    out: FrozenSet[int] = loose_indices(t.head, depth)
    for a in t.args:
        out |= loose_indices(a, depth)
    return out


def instantiate(body: Term, arg: Term) -> Term:
    """β-contract ``(λ. body) arg``: replace loose index 0 in ``body``."""
    return _subst_bound(body, 0, arg)


def _subst_bound(t: Term, depth: int, arg: Term) -> Term:
    if t.loose <= depth:
        return t
    if isinstance(t, Bound):
        if t.index == depth:
            return shift(arg, depth)
        return mk_bound(t.index - 1, t.ty)
    if isinstance(t, Lam):
        return mk_lam(t.binder, _subst_bound(t.body, depth + 1, arg))
    return mk_app(_subst_bound(t.head, depth, arg), [_subst_bound(a, depth, arg) for a in t.args])


# -- smart constructors -------------------------------------------------------

def mk_app(head: Term, args: Sequence[Term]) -> Term:
    """Apply ``head`` to ``args`` and return the canonical result."""
    if not args:
        return head
    ty = head.ty
    for a in args:
        if not ty.is_fun:
            raise TermTypeError(f"cannot apply {head} of type {head.ty!r} to {len(args)} arguments")
        dom, ty = ty.args  # type: ignore[attr-defined]
        if dom is not a.ty:
            raise TermTypeError(f"argument {a} has type {a.ty!r}, expected {dom!r}")
    if isinstance(head, Lam):
        reduced = instantiate(head.body, args[0])
        return mk_app(reduced, args[1:])
    if isinstance(head, App):
        return _app_raw(head.head, head.args + tuple(args), ty)
    return _app_raw(head, tuple(args), ty)


def mk_lam(binder: Type, body: Term) -> Term:
    """Abstract loose index 0 of ``body``; η-reduces when possible."""
    if isinstance(body, App):
        last = body.args[-1]
        if isinstance(last, Bound) and last.index == 0:
            rest = body.args[:-1]
            if not occurs_loose(body.head, 0) and not any(occurs_loose(a, 0) for a in rest):
                if rest:
                    inner: Term = _app_raw(body.head, rest, arrow(last.ty, body.ty))
                else:
                    inner = body.head
                return shift(inner, -1)
    return _lam_raw(binder, body)


def mk_lams(binders: Sequence[Type], body: Term) -> Term:
    """``λ binders. body`` with binders listed outermost first."""
    for b in reversed(binders):
        body = mk_lam(b, body)
    return body


def strip_lams(t: Term) -> Tuple[List[Type], Term]:
    binders: List[Type] = []
    while isinstance(t, Lam):
        binders.append(t.binder)
        t = t.body
    return binders, t


def eta_expand_to(t: Term, n: int) -> Tuple[List[Type], Term]:
    """Return binders and body of ``t`` seen as an ``n``-fold abstraction."""
    binders, body = strip_lams(t)
    if len(binders) >= n:
        return binders, body
    extra, _ = body.ty.split(n - len(binders))
    body = shift(body, len(extra))
    k = len(extra)
    body = mk_app(body, [mk_bound(k - 1 - i, ty) for i, ty in enumerate(extra)])
    return binders + extra, body


def abstract_vars(t: Term, variables: Sequence[Var]) -> Term:
    """``λ x1 … xn. t`` where the free variables ``xi`` become bound."""
    n = len(variables)
    if n == 0:
        return t
    index = {v: n - 1 - i for i, v in enumerate(variables)}

    def go(s: Term, depth: int) -> Term:
        if not (s.fvars & index.keys()) and s.loose <= depth:
            return s
        if isinstance(s, Var):
            if s in index:
                return mk_bound(index[s] + depth, s.ty)
            return s
        if isinstance(s, Bound):
            return mk_bound(s.index + n, s.ty) if s.index >= depth else s
        if isinstance(s, Lam):
            return mk_lam(s.binder, go(s.body, depth + 1))
        if isinstance(s, App):
            return mk_app(go(s.head, depth), [go(a, depth) for a in s.args])
        return s

    return mk_lams([v.ty for v in variables], go(t, 0))


# -- fresh names ---------------------------------------------------------------

_COUNTER = itertools.count(1)
_COUNTER_LOCK = threading.Lock()


def fresh_name(prefix: str = "V") -> str:
    with _COUNTER_LOCK:
        return f"{prefix}{next(_COUNTER)}"


def fresh_var(ty: Type, prefix: str = "V") -> Var:
    return mk_var(fresh_name(prefix), ty)


def fresh_tyvar() -> TyVar:
    return TyVar(fresh_name("T"))


# -- traversal ----------------------------------------------------------------

def subterms(t: Term) -> Iterator[Term]:
    """All subterms, including ones with loose bound variables."""
    yield t
    if isinstance(t, Lam):
        yield from subterms(t.body)
    elif isinstance(t, App):
        yield from subterms(t.head)
        for a in t.args:
            yield from subterms(a)


def consts_of(t: Term) -> Iterator[Const]:
    for s in subterms(t):
        if isinstance(s, Const):
            yield s


def free_vars(t: Term) -> Tuple[FrozenSet[str], FrozenSet[Var]]:
    return t.tyvars, t.fvars


def is_var_headed(t: Term) -> bool:
    return isinstance(t.head, Var)


def is_fluid(t: Term) -> bool:
    """Non-ground λ-abstraction, or a variable applied to at least one argument."""
    if isinstance(t, Lam):
        return not t.ground
    return isinstance(t, App) and isinstance(t.head, Var)


# -- rendering ----------------------------------------------------------------

def render(t: Term, names: Optional[List[str]] = None) -> str:
    names = [] if names is None else names
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Bound):
        if t.index < len(names):
            return names[len(names) - 1 - t.index]
        return f"#{t.index}"
    if isinstance(t, Const):
        if t.tyargs:
            return f"{t.name}{{{', '.join(repr(a) for a in t.tyargs)}}}"
        return t.name
    if isinstance(t, Lam):
        binders: List[Type] = []
        body: Term = t
        while isinstance(body, Lam):
            binders.append(body.binder)
            body = body.body
        start = len(names)
        fresh = [f"Z{start + i}" for i in range(len(binders))]
        inner = render(body, names + fresh)
        decl = ", ".join(f"{n}: {b!r}" for n, b in zip(fresh, binders))
        return f"(^[{decl}]: {inner})"
    parts = [render(t.head, names)]
    for a in t.args:
        s = render(a, names)
        if isinstance(a, App):
            s = f"({s})"
        parts.append(s)
    return " @ ".join(parts)


def term_key(t: Term) -> str:
    """Deterministic textual key, stable across runs."""
    return render(t) + " : " + repr(t.ty)


def iter_terms(ts: Iterable[Term]) -> Iterator[Term]:
    for t in ts:
        yield from subterms(t)
