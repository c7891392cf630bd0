"""Rank-1 polymorphic types.

Types are interned: two structurally equal types are the same object, so
``is`` and ``==`` agree and hashing is by identity.  The function type is the
binary constructor ``FUN``; ``arrows`` builds right-associated chains.
"""

from __future__ import annotations

import threading
import weakref
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Mapping, Sequence, Tuple

FUN = ">"
IOTA = "$i"
BOOL = "$o"

_TABLE: "weakref.WeakValueDictionary[tuple, Type]" = weakref.WeakValueDictionary()
_LOCK = threading.Lock()


def _intern(cls, key: tuple, build):
    with _LOCK:
        found = _TABLE.get(key)
        if found is not None:
            return found
        obj = object.__new__(cls)
        build(obj)
        _TABLE[key] = obj
        return obj


class Type:
    __slots__ = ("tyvars", "__weakref__")

    tyvars: FrozenSet[str]

    @property
    def is_fun(self) -> bool:
        return False

    @property
    def ground(self) -> bool:
        return not self.tyvars

    def split(self, limit: int = -1) -> Tuple[List["Type"], "Type"]:
        """Return (argument types, result) peeling at most ``limit`` arrows."""
        args: List[Type] = []
        ty: Type = self
        while ty.is_fun and limit != 0:
            args.append(ty.args[0])  # type: ignore[attr-defined]
            ty = ty.args[1]  # type: ignore[attr-defined]
            limit -= 1
        return args, ty

    @property
    def arity(self) -> int:
        return len(self.split()[0])

    def subst(self, mapping: Mapping[str, "Type"]) -> "Type":
        raise NotImplementedError

    def __lt__(self, other: "Type") -> bool:
        return str(self) < str(other)


class TyVar(Type):
    __slots__ = ("name",)

    name: str

    def __new__(cls, name: str) -> "TyVar":
        def build(obj):
            obj.name = name
            obj.tyvars = frozenset((name,))
        return _intern(cls, ("v", name), build)

    def subst(self, mapping: Mapping[str, Type]) -> Type:
        return mapping.get(self.name, self)

    def __repr__(self) -> str:
        return self.name

    def __reduce__(self):
        return (TyVar, (self.name,))


class TyCon(Type):
    __slots__ = ("name", "args")

    name: str
    args: Tuple[Type, ...]

    def __new__(cls, name: str, args: Sequence[Type] = ()) -> "TyCon":
        args = tuple(args)

        def build(obj):
            obj.name = name
            obj.args = args
            tv: FrozenSet[str] = frozenset()
            for a in args:
                tv |= a.tyvars
            obj.tyvars = tv
        return _intern(cls, ("c", name, args), build)

    @property
    def is_fun(self) -> bool:
        return self.name == FUN and len(self.args) == 2

    def subst(self, mapping: Mapping[str, Type]) -> Type:
        if not mapping or not (self.tyvars & mapping.keys()):
            return self
        return TyCon(self.name, [a.subst(mapping) for a in self.args])

    def __repr__(self) -> str:
        if self.is_fun:
            dom, cod = self.args
            left = f"({dom!r})" if dom.is_fun else repr(dom)
            return f"{left} > {cod!r}"
        if not self.args:
            return self.name
        return f"{self.name}({', '.join(repr(a) for a in self.args)})"

    def __reduce__(self):
        return (TyCon, (self.name, self.args))


def base(name: str) -> TyCon:
    return TyCon(name, ())


def arrow(dom: Type, cod: Type) -> TyCon:
    return TyCon(FUN, (dom, cod))


def arrows(doms: Iterable[Type], cod: Type) -> Type:
    doms = list(doms)
    ty = cod
    for d in reversed(doms):
        ty = arrow(d, ty)
    return ty


def iota() -> TyCon:
    return base(IOTA)


def bool_type() -> TyCon:
    return base(BOOL)


@dataclass(frozen=True)
class TypeDecl:
    """``∀ vars. body`` for a symbol of the signature."""

    vars: Tuple[str, ...]
    body: Type

    def __post_init__(self):
        stray = self.body.tyvars - set(self.vars)
        if stray:
            from .errors import TermTypeError
            raise TermTypeError(f"type declaration leaves {sorted(stray)} unbound")

    @property
    def arity(self) -> int:
        return len(self.vars)

    def instantiate(self, tyargs: Sequence[Type]) -> Type:
        if len(tyargs) != len(self.vars):
            from .errors import TermTypeError
            raise TermTypeError(f"expected {len(self.vars)} type arguments, got {len(tyargs)}")
        if not self.vars:
            return self.body
        return self.body.subst(dict(zip(self.vars, tyargs)))

    def __str__(self) -> str:
        if not self.vars:
            return repr(self.body)
        return f"!>[{', '.join(f'{v}: $tType' for v in self.vars)}]: ({self.body!r})"


def subst_all(types: Iterable[Type], mapping: Mapping[str, Type]) -> Tuple[Type, ...]:
    return tuple(t.subst(mapping) for t in types)


def tyvars_of(types: Iterable[Type]) -> FrozenSet[str]:
    out: FrozenSet[str] = frozenset()
    for t in types:
        out |= t.tyvars
    return out


TypeSubst = Dict[str, Type]
