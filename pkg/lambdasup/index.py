"""Retrieval indices for the active set.

Terms are filed under their top symbol.  Variable-headed terms and
λ-abstractions go to a wildcard bucket that every query also looks at.
Clause features (the set of symbol names) filter subsumption candidates.
The filter can drop a subsumer whose symbol only occurs as an argument of
an applied variable; subsumption is optional, so that only costs strength.
"""

from __future__ import annotations

from collections import defaultdict
from typing import Dict, FrozenSet, Generic, Hashable, Iterator, List, Set, TypeVar

from .clauses import Clause
from .positions import green_subterms
from .terms import Bound, Const, Term, consts_of

WILDCARD = "*"

V = TypeVar("V", bound=Hashable)


def top_symbol(t: Term) -> str:
    h = t.head
    if isinstance(h, Const):
        return h.name
    if isinstance(h, Bound):
        return f"#{h.index}"
    return WILDCARD


class TopSymbolIndex(Generic[V]):
    """Values filed under the top symbols of terms."""

    def __init__(self) -> None:
        self._buckets: Dict[str, Dict[V, None]] = defaultdict(dict)
        self._keys: Dict[V, Set[str]] = defaultdict(set)

    def insert(self, t: Term, value: V) -> None:
        key = top_symbol(t)
        self._buckets[key][value] = None
        self._keys[value].add(key)

    def remove(self, value: V) -> None:
        for key in self._keys.pop(value, ()):
            bucket = self._buckets.get(key)
            if bucket is not None:
                bucket.pop(value, None)
                if not bucket:
                    del self._buckets[key]

    def __contains__(self, value: object) -> bool:
        return value in self._keys

    def __len__(self) -> int:
        return len(self._keys)

    def values(self) -> List[V]:
        return list(self._keys)

    def _lookup(self, key: str) -> Iterator[V]:
        seen: Dict[V, None] = {}
        for k in (key, WILDCARD) if key != WILDCARD else (WILDCARD,):
            for v in self._buckets.get(k, ()):
                if v not in seen:
                    seen[v] = None
                    yield v

    def generalizations(self, t: Term) -> Iterator[V]:
        """Values whose term may match onto ``t``."""
        key = top_symbol(t)
        if key == WILDCARD:
            # only a variable-headed or λ pattern can match a flexible target
            yield from self._buckets.get(WILDCARD, ())
            return
        yield from self._lookup(key)

    def unifiable(self, t: Term) -> Iterator[V]:
        key = top_symbol(t)
        if key == WILDCARD:
            yield from self.values()
            return
        yield from self._lookup(key)

    instances = unifiable


def symbol_names(C: Clause) -> FrozenSet[str]:
    out: Set[str] = set()
    for t in C.terms():
        out.update(c.name for c in consts_of(t))
    return frozenset(out)


class FeatureIndex:
    """Clauses with their symbol sets and lengths, for subsumption candidates."""

    def __init__(self) -> None:
        self._features: Dict[Clause, FrozenSet[str]] = {}

    def insert(self, C: Clause) -> None:
        self._features[C] = symbol_names(C)

    def remove(self, C: Clause) -> None:
        self._features.pop(C, None)

    def __len__(self) -> int:
        return len(self._features)

    def __iter__(self) -> Iterator[Clause]:
        return iter(list(self._features))

    def subsuming_candidates(self, C: Clause) -> Iterator[Clause]:
        names = symbol_names(C)
        for D, feats in list(self._features.items()):
            if len(D) <= len(C) and feats <= names:
                yield D

    def subsumed_candidates(self, C: Clause) -> Iterator[Clause]:
        names = symbol_names(C)
        for D, feats in list(self._features.items()):
            if len(D) >= len(C) and names <= feats:
                yield D


def index_green(index: TopSymbolIndex, C: Clause, value) -> None:
    """File ``value`` under the top symbol of every green subterm of ``C``."""
    for t in C.terms():
        for _, u in green_subterms(t):
            index.insert(u, value)
