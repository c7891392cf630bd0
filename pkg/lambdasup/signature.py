"""Signatures: type constructors and symbol declarations."""

from __future__ import annotations

import threading
from typing import Dict, Iterable, Optional, Sequence

from .errors import TermTypeError
from .terms import Const, Term, mk_app, mk_const
from .types import BOOL, FUN, IOTA, TyCon, TyVar, Type, TypeDecl, arrow, arrows

DIFF = "diff"
WITNESS = "$witness"


class Signature:
    """Mutable symbol table.

    Holds the nullary ``$i``, the binary function constructor, ``diff`` and
    a witness symbol of type ``∀α. α``.  Skolem symbols are added while the
    prover runs, so declarations go through a lock.
    """

    def __init__(self) -> None:
        self.type_constructors: Dict[str, int] = {IOTA: 0, FUN: 2}
        self.symbols: Dict[str, TypeDecl] = {}
        self._lock = threading.Lock()
        a, b = TyVar("A"), TyVar("B")
        fab = arrow(a, b)
        self.declare(DIFF, TypeDecl(("A", "B"), arrows([fab, fab], a)))
        self.declare(WITNESS, TypeDecl(("A",), a))

    def declare_type(self, name: str, arity: int = 0) -> None:
        with self._lock:
            known = self.type_constructors.get(name)
            if known is not None and known != arity:
                raise TermTypeError(f"type constructor {name} redeclared with arity {arity}")
            self.type_constructors[name] = arity

    def declare(self, name: str, decl, tyvars: Sequence[str] = ()) -> TypeDecl:
        if isinstance(decl, Type):
            decl = TypeDecl(tuple(tyvars), decl)
        with self._lock:
            known = self.symbols.get(name)
            if known is not None and known != decl:
                raise TermTypeError(f"symbol {name} redeclared as {decl}, was {known}")
            self.symbols[name] = decl
        self._check_type(decl.body)
        return decl

    def _check_type(self, ty: Type) -> None:
        if isinstance(ty, TyCon):
            arity = self.type_constructors.get(ty.name)
            if arity is None:
                self.declare_type(ty.name, len(ty.args))
            elif arity != len(ty.args):
                raise TermTypeError(f"type constructor {ty.name} expects {arity} arguments")
            for a in ty.args:
                self._check_type(a)

    def __contains__(self, name: str) -> bool:
        return name in self.symbols

    def decl(self, name: str) -> TypeDecl:
        try:
            return self.symbols[name]
        except KeyError:
            raise TermTypeError(f"undeclared symbol {name}") from None

    def const(self, name: str, tyargs: Sequence[Type] = ()) -> Const:
        decl = self.decl(name)
        return mk_const(name, tyargs, decl.instantiate(tyargs))

    def apply(self, name: str, *args: Term, tyargs: Sequence[Type] = ()) -> Term:
        return mk_app(self.const(name, tyargs), list(args))

    def fresh_symbol(self, prefix: str, decl: TypeDecl) -> str:
        with self._lock:
            n = len(self.symbols)
            while f"{prefix}{n}" in self.symbols:
                n += 1
            name = f"{prefix}{n}"
            self.symbols[name] = decl
        return name

    def uses_bool(self) -> bool:
        return BOOL in self.type_constructors

    def copy(self) -> "Signature":
        other = Signature()
        other.type_constructors = dict(self.type_constructors)
        other.symbols = dict(self.symbols)
        return other

    def user_symbols(self) -> Iterable[str]:
        return (s for s in self.symbols if s not in (DIFF, WITNESS))
