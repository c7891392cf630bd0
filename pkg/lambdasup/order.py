"""Term, literal and clause orders.

Terms are compared through their O-encoding with a first-order Knuth-Bendix
order (or an LPO).  Literals and clauses are compared with the multiset
extension.  Selection and eligibility live here too since both are phrased
in terms of the order.
"""

from __future__ import annotations

import enum
import logging
from collections import Counter
from dataclasses import dataclass
from typing import Callable, Dict, Hashable, Iterable, List, Optional, Sequence, Tuple

from .clauses import Clause, Literal
from .encodings import FOApp, FOTerm, FOVar, encode_O
from .subst import Substitution
from .terms import Term, Var

logger = logging.getLogger("lambdasup.order")

_KIND_RANK = {"ty": 0, "db": 1, "lam": 2, "f": 3}
_CACHE_LIMIT = 1 << 17


class Ordering(enum.Enum):
    GREATER = ">"
    LESS = "<"
    EQUAL = "="
    INCOMPARABLE = "?"

    def flip(self) -> "Ordering":
        if self is Ordering.GREATER:
            return Ordering.LESS
        if self is Ordering.LESS:
            return Ordering.GREATER
        return self


GREATER, LESS, EQUAL, INCOMPARABLE = Ordering.GREATER, Ordering.LESS, Ordering.EQUAL, Ordering.INCOMPARABLE


def default_precedence(sym: tuple, arity: int) -> tuple:
    """Arity first, then kind, then name; a later name is a larger symbol."""
    kind = sym[0]
    rest = tuple(str(x) for x in sym[1:])
    return (arity, _KIND_RANK.get(kind, 4), rest)


@dataclass(frozen=True)
class OrderParams:
    algorithm: str = "kbo"
    symbol_weight: Callable[[tuple], int] = lambda sym: 1
    variable_weight: int = 1
    precedence: Callable[[tuple, int], tuple] = default_precedence

    def __post_init__(self):
        if self.algorithm not in ("kbo", "lpo"):
            raise ValueError(f"unknown term order {self.algorithm!r}")
        if self.variable_weight <= 0:
            raise ValueError("variable weight must be positive")


DEFAULT_PARAMS = OrderParams()


# -- first-order orders --------------------------------------------------------

def _weight(t: FOTerm, p: OrderParams) -> int:
    if p is DEFAULT_PARAMS or (p.variable_weight == 1 and p.symbol_weight is DEFAULT_PARAMS.symbol_weight):
        return t.weight
    if isinstance(t, FOVar):
        return p.variable_weight
    assert isinstance(t, FOApp)
    return p.symbol_weight(t.sym) + sum(_weight(a, p) for a in t.args)


def _dominates(vs: Dict[FOVar, int], vt: Dict[FOVar, int]) -> bool:
    return all(vs.get(x, 0) >= n for x, n in vt.items())


def _head_key(t: FOApp, p: OrderParams) -> tuple:
    return p.precedence(t.sym, len(t.args))


def kbo_compare(s: FOTerm, t: FOTerm, p: OrderParams = DEFAULT_PARAMS) -> Ordering:
    if s == t:
        return EQUAL
    if isinstance(s, FOVar):
        return LESS if isinstance(t, FOApp) and s in t.vars() else INCOMPARABLE
    if isinstance(t, FOVar):
        return GREATER if t in s.vars() else INCOMPARABLE
    assert isinstance(s, FOApp) and isinstance(t, FOApp)
    vs, vt = s.vars(), t.vars()
    s_dom, t_dom = _dominates(vs, vt), _dominates(vt, vs)
    if not s_dom and not t_dom:
        return INCOMPARABLE
    ws, wt = _weight(s, p), _weight(t, p)
    if ws > wt:
        return GREATER if s_dom else INCOMPARABLE
    if ws < wt:
        return LESS if t_dom else INCOMPARABLE
    ks, kt = _head_key(s, p), _head_key(t, p)
    if ks != kt:
        if ks > kt:
            return GREATER if s_dom else INCOMPARABLE
        return LESS if t_dom else INCOMPARABLE
    if s.sym != t.sym or len(s.args) != len(t.args):
        # equal precedence keys on different symbols cannot be ordered
        return INCOMPARABLE
    for a, b in zip(s.args, t.args):
        r = kbo_compare(a, b, p)
        if r is EQUAL:
            continue
        if r is GREATER:
            return GREATER if s_dom else INCOMPARABLE
        if r is LESS:
            return LESS if t_dom else INCOMPARABLE
        return INCOMPARABLE
    return EQUAL


def _lpo_gt(s: FOTerm, t: FOTerm, p: OrderParams) -> bool:
    if s == t or isinstance(s, FOVar):
        return False
    assert isinstance(s, FOApp)
    if isinstance(t, FOVar):
        return t in s.vars()
    assert isinstance(t, FOApp)
    if any(a == t or _lpo_gt(a, t, p) for a in s.args):
        return True
    ks, kt = _head_key(s, p), _head_key(t, p)
    if ks > kt:
        return all(_lpo_gt(s, b, p) for b in t.args)
    if ks == kt and s.sym == t.sym and len(s.args) == len(t.args):
        for i, (a, b) in enumerate(zip(s.args, t.args)):
            if a == b:
                continue
            return _lpo_gt(a, b, p) and all(_lpo_gt(s, c, p) for c in t.args[i + 1:])
    return False


def lpo_compare(s: FOTerm, t: FOTerm, p: OrderParams = DEFAULT_PARAMS) -> Ordering:
    if s == t:
        return EQUAL
    if _lpo_gt(s, t, p):
        return GREATER
    if _lpo_gt(t, s, p):
        return LESS
    return INCOMPARABLE


def multiset_compare(xs: Iterable[Hashable], ys: Iterable[Hashable], cmp: Callable) -> Ordering:
    """Dershowitz-Manna extension of ``cmp`` to finite multisets."""
    m, n = Counter(xs), Counter(ys)
    only_m = list((m - n).elements())
    only_n = list((n - m).elements())
    if not only_m and not only_n:
        return EQUAL
    if only_m and all(any(cmp(x, y) is GREATER for x in only_m) for y in only_n):
        return GREATER
    if only_n and all(any(cmp(y, x) is GREATER for y in only_n) for x in only_m):
        return LESS
    return INCOMPARABLE


# -- λ-term order ---------------------------------------------------------------

class TermOrder:
    """The derived order on canonical terms, with its extensions.

    ``selection`` is ``"none"`` or ``"max-neg"``.  Results of term
    comparisons are memoised; the memo is dropped when it grows too large.
    """

    def __init__(self, params: OrderParams = DEFAULT_PARAMS, selection: str = "none"):
        if selection not in ("none", "max-neg"):
            raise ValueError(f"unknown selection function {selection!r}")
        self.params = params
        self.selection = selection
        self._fo = kbo_compare if params.algorithm == "kbo" else lpo_compare
        self._memo: Dict[Tuple[Term, Term], Ordering] = {}
        self._select_memo: Dict[Clause, Tuple[int, ...]] = {}
        self.comparisons = 0

    def compare_terms(self, s: Term, t: Term) -> Ordering:
        if s is t:
            return EQUAL
        key = (s, t)
        found = self._memo.get(key)
        if found is not None:
            return found
        self.comparisons += 1
        r = self._fo(encode_O(s), encode_O(t), self.params)
        if len(self._memo) > _CACHE_LIMIT:
            logger.debug("term order memo cleared at %d entries", len(self._memo))
            self._memo.clear()
        self._memo[key] = r
        self._memo[(t, s)] = r.flip()
        return r

    def greater(self, s: Term, t: Term) -> bool:
        return self.compare_terms(s, t) is GREATER

    def nonstrict_geq(self, s: Term, t: Term) -> bool:
        return s is t or self.compare_terms(s, t) is GREATER

    # -- literals and clauses -------------------------------------------------

    @staticmethod
    def literal_multiset(lit: Literal) -> List[Term]:
        if lit.positive:
            return [lit.lhs, lit.rhs]
        return [lit.lhs, lit.lhs, lit.rhs, lit.rhs]

    def compare_literals(self, a: Literal, b: Literal) -> Ordering:
        if a == b:
            return EQUAL
        return multiset_compare(self.literal_multiset(a), self.literal_multiset(b), self.compare_terms)

    def compare_clauses(self, c: Clause | Sequence[Literal], d: Clause | Sequence[Literal]) -> Ordering:
        lc = c.literals if isinstance(c, Clause) else tuple(c)
        ld = d.literals if isinstance(d, Clause) else tuple(d)
        return multiset_compare(lc, ld, self.compare_literals)

    def maximal_literals(self, literals: Clause | Sequence[Literal], strict: bool = False) -> List[int]:
        lits = literals.literals if isinstance(literals, Clause) else tuple(literals)
        out = []
        for i, lit in enumerate(lits):
            beaten = False
            for j, other in enumerate(lits):
                if i == j:
                    continue
                r = self.compare_literals(other, lit)
                if r is GREATER or (strict and r is EQUAL):
                    beaten = True
                    break
            if not beaten:
                out.append(i)
        return out

    def is_maximal(self, idx: int, literals: Sequence[Literal], strict: bool = False) -> bool:
        lit = literals[idx]
        for j, other in enumerate(literals):
            if j == idx:
                continue
            r = self.compare_literals(other, lit)
            if r is GREATER or (strict and r is EQUAL):
                return False
        return True

    def maximal_terms(self, terms: Sequence[Term]) -> List[Term]:
        return [t for t in terms if not any(self.compare_terms(s, t) is GREATER for s in terms if s is not t)]

    # -- selection and eligibility -------------------------------------------

    def select(self, clause: Clause) -> Tuple[int, ...]:
        """Indices of selected literals, all negative."""
        if self.selection == "none" or not any(lit.negative for lit in clause.literals):
            return ()
        found = self._select_memo.get(clause)
        if found is None:
            found = self._select_max_neg(clause)
            if len(self._select_memo) > _CACHE_LIMIT:
                self._select_memo.clear()
            self._select_memo[clause] = found
        return found

    def _select_max_neg(self, clause: Clause) -> Tuple[int, ...]:
        sides = list(clause.terms())
        blocked = set()
        for t in self.maximal_terms(sides):
            if t.args and isinstance(t.head, Var):
                blocked.add(t.head.name)
        for i, lit in enumerate(clause.literals):
            if lit.negative and not (lit.fnames & blocked):
                return (i,)
        return ()

    def eligible(self, idx: int, clause: Clause, sigma: Optional[Substitution] = None, strict: bool = False) -> bool:
        """Whether literal ``idx`` of ``clause`` is (strictly) eligible w.r.t. ``sigma``."""
        selected = self.select(clause)
        if selected:
            return idx in selected
        lits = clause.literals
        if sigma is not None and not sigma.is_identity:
            lits = tuple(lit.apply_subst(sigma) for lit in lits)
        return self.is_maximal(idx, lits, strict)
