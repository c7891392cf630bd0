"""First-order views of λ-terms.

``encode_F`` maps ground terms to ground first-order terms.  Each symbol
application becomes a symbol indexed by its type arguments and its argument
count, and every λ-expression is hidden behind a ``lam`` symbol keyed by the
expression itself.  Green positions of the term are exactly the positions
of the encoding.

``encode_O`` maps arbitrary terms to untyped first-order terms for the term
order.  Variables and fluid subterms become first-order variables keyed by
the subterm, ground λs become ``lam(type, body)`` and bound variables
become ``db`` symbols that carry their De Bruijn index and argument count.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Dict, Hashable, Iterator, List, Optional, Tuple

from .errors import EncodingError
from .signature import Signature
from .terms import App, Bound, Const, Lam, Term, Var, mk_app, strip_lams
from .types import TyCon, TyVar, Type


class FOTerm:
    __slots__ = ("_hash",)

    def subterm_positions(self) -> Iterator[Tuple[Tuple[int, ...], "FOTerm"]]:
        yield (), self
        if isinstance(self, FOApp):
            for i, a in enumerate(self.args, start=1):
                for p, s in a.subterm_positions():
                    yield (i,) + p, s


class FOVar(FOTerm):
    __slots__ = ("key",)

    def __init__(self, key: Hashable):
        self.key = key
        self._hash = hash(("v", key))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, FOVar) and other.key == self.key

    def __hash__(self) -> int:
        return self._hash

    @property
    def weight(self) -> int:
        return 1

    def vars(self) -> Dict["FOVar", int]:
        return {self: 1}

    def __repr__(self) -> str:
        kind, what = self.key if isinstance(self.key, tuple) and len(self.key) == 2 else ("", self.key)
        if kind == "z":
            return f"z<{what}>"
        return str(what)


class FOApp(FOTerm):
    """Application of ``sym`` to ``args``; ``sym`` is a hashable tuple whose first item is its kind."""

    __slots__ = ("sym", "args", "weight", "_vars")

    def __init__(self, sym: tuple, args: Tuple[FOTerm, ...] = ()):
        self.sym = sym
        self.args = args
        self._hash = hash((sym, args))
        self.weight = 1 + sum(a.weight for a in args)
        self._vars: Optional[Dict[FOVar, int]] = None

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        return isinstance(other, FOApp) and other._hash == self._hash and other.sym == self.sym and other.args == self.args

    def __hash__(self) -> int:
        return self._hash

    def vars(self) -> Dict[FOVar, int]:
        if self._vars is None:
            out: Dict[FOVar, int] = {}
            for a in self.args:
                for v, n in a.vars().items():
                    out[v] = out.get(v, 0) + n
            self._vars = out
        return self._vars

    @property
    def arity(self) -> int:
        return len(self.args)

    def __repr__(self) -> str:
        name = symbol_name(self.sym)
        if not self.args:
            return name
        return f"{name}({', '.join(repr(a) for a in self.args)})"


def symbol_name(sym: tuple) -> str:
    kind = sym[0]
    if kind == "f":
        return f"{sym[1]}{sym[2]}"
    if kind == "F":
        _, name, tyargs, j = sym
        tags = "^" + ",".join(repr(t) for t in tyargs) if tyargs else ""
        return f"{name}{tags}_{j}"
    if kind == "db":
        return f"db{sym[1]}_{sym[2]}"
    if kind == "lam":
        return "lam" if len(sym) == 1 else f"lam<{sym[1]}>"
    if kind == "ty":
        return sym[1]
    return str(sym)


# -- F ------------------------------------------------------------------------

def encode_F(t: Term) -> FOApp:
    """Encode a ground term; raises EncodingError on variables or loose bounds."""
    if not t.ground or t.loose:
        raise EncodingError(f"F-encoding needs a ground closed term, got {t}")
    return _encode_F(t)


def _encode_F(t: Term) -> FOApp:
    if isinstance(t, Lam):
        return FOApp(("lam", t))
    head = t.head
    if not isinstance(head, Const):
        raise EncodingError(f"unexpected head {head} in ground term")
    args = tuple(_encode_F(a) for a in t.args)
    return FOApp(("F", head.name, head.tyargs, len(args)), args)


def decode_F(s: FOTerm, sig: Signature) -> Term:
    if not isinstance(s, FOApp):
        raise EncodingError(f"F-encodings are ground, got variable {s!r}")
    kind = s.sym[0]
    if kind == "lam":
        if len(s.sym) != 2 or not isinstance(s.sym[1], Lam):
            raise EncodingError(f"unknown lam tag {s.sym!r}")
        return s.sym[1]
    if kind != "F":
        raise EncodingError(f"not an F-symbol: {s.sym!r}")
    _, name, tyargs, j = s.sym
    if j != len(s.args):
        raise EncodingError(f"symbol {name} indexed {j} applied to {len(s.args)} arguments")
    return mk_app(sig.const(name, tyargs), [decode_F(a, sig) for a in s.args])


def encode_F_clause(literals) -> List[Tuple[FOApp, FOApp, bool]]:
    return [(encode_F(lit.lhs), encode_F(lit.rhs), lit.positive) for lit in literals]


# -- O ------------------------------------------------------------------------

def encode_O_type(ty: Type) -> FOTerm:
    if isinstance(ty, TyVar):
        return FOVar(("tv", ty.name))
    assert isinstance(ty, TyCon)
    return FOApp(("ty", ty.name, len(ty.args)), tuple(encode_O_type(a) for a in ty.args))


def may_eta_reduce(t: Lam) -> bool:
    """Whether some instance of the abstraction could lose its outer binder."""
    if t.ground:
        return False
    _, body = strip_lams(t)
    if isinstance(body.head, Var):
        return bool(body.args)
    if not body.args:
        return False
    last = body.args[-1]
    if isinstance(last, Bound):
        return last.index == 0
    return not last.ground and (isinstance(last.head, Var) or isinstance(last, Lam))


@lru_cache(maxsize=1 << 16)
def encode_O(t: Term) -> FOTerm:
    if isinstance(t, Var) or (isinstance(t, App) and isinstance(t.head, Var)):
        return FOVar(("z", t))
    if isinstance(t, Lam) and may_eta_reduce(t):
        return FOVar(("z", t))
    if isinstance(t, Lam):
        return FOApp(("lam",), (encode_O_type(t.binder), encode_O(t.body)))
    head = t.head
    args = tuple(encode_O(a) for a in t.args)
    k = len(args)
    if isinstance(head, Bound):
        return FOApp(("db", head.index, k), args)
    assert isinstance(head, Const)
    tyargs = tuple(encode_O_type(a) for a in head.tyargs)
    return FOApp(("f", head.name, k), tyargs + args)


def clear_caches() -> None:
    encode_O.cache_clear()
