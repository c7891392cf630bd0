"""Redundancy elimination.

Subsumption goes through the matching fragment, so it may miss a
higher-order subsumption but never claims a false one.  Demodulation only
rewrites green subterms; rewriting under λs is λDemod's job and is off
unless asked for.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

from .calculus import InferenceContext
from .calculus_ext import lambda_demod, prune_arg
from .clauses import Clause, Derivation, Literal
from .index import FeatureIndex, TopSymbolIndex
from .matching import match, match_pairs
from .order import GREATER, LESS
from .positions import green_subterms, replace_green
from .subst import Substitution
from .terms import Term, Var

logger = logging.getLogger("lambdasup.simplify")

MAX_REWRITES = 256


# -- subsumption ----------------------------------------------------------------------

def _literal_matchers(a: Literal, b: Literal, sigma: Substitution) -> Iterator[Substitution]:
    if a.positive != b.positive:
        return
    yield from match_pairs(((a.lhs, b.lhs), (a.rhs, b.rhs)), extended=True, start=sigma)
    if a.lhs is not a.rhs and b.lhs is not b.rhs:
        yield from match_pairs(((a.lhs, b.rhs), (a.rhs, b.lhs)), extended=True, start=sigma)


def _subsume(cs: Sequence[Literal], ds: Sequence[Literal], used: Tuple[bool, ...], sigma: Substitution) -> bool:
    if not cs:
        return True
    first, rest = cs[0], cs[1:]
    for k, d in enumerate(ds):
        if used[k]:
            continue
        for tau in _literal_matchers(first, d, sigma):
            if _subsume(rest, ds, used[:k] + (True,) + used[k + 1:], tau):
                return True
    return False


def subsumes(C: Clause, D: Clause) -> bool:
    """Whether ``Cσ ⊆ D`` (as multisets) for some σ this matcher finds."""
    if len(C) > len(D):
        return False
    if C.ground and D.ground:
        return not (C.literal_multiset() - D.literal_multiset())
    # most constrained literals first
    cs = sorted(C.literals, key=lambda lit: -lit.size)
    return _subsume(cs, D.literals, (False,) * len(D), Substitution.identity())


def strictly_subsumes(C: Clause, D: Clause) -> bool:
    return subsumes(C, D) and not subsumes(D, C)


def deletion_order(C: Clause, D: Clause) -> bool:
    """``C ⊐ D``: D subsumes C and C is larger, or as large with fewer variables."""
    if not subsumes(D, C):
        return False
    if C.size != D.size:
        return C.size > D.size
    return len(C.fvars) < len(D.fvars)


def is_variant(C: Clause, D: Clause) -> bool:
    return len(C) == len(D) and C.size == D.size and subsumes(C, D) and subsumes(D, C)


def subsumption_deletes(D: Clause, C: Clause) -> bool:
    """Whether the kept clause ``D`` lets ``C`` go: ``C ⊐ D``, or ``C`` is a variant of ``D``."""
    if len(D) > len(C):
        return False
    return deletion_order(C, D) or is_variant(C, D)


# -- literal-level cleanup -------------------------------------------------------------

def is_tautology(C: Clause) -> bool:
    """``s = s`` or a complementary pair ``s = t``, ``s != t``."""
    positives = set()
    for lit in C.literals:
        if lit.is_trivial_positive:
            return True
        if lit.positive:
            positives.add(lit)
    return any(Literal(lit.lhs, lit.rhs, True) in positives for lit in C.literals if lit.negative)


def cleanup(literals: Sequence[Literal]) -> Tuple[Literal, ...]:
    """Drop ``s != s`` and duplicate literals."""
    out: List[Literal] = []
    for lit in literals:
        if lit.is_trivial_negative or lit in out:
            continue
        out.append(lit)
    return tuple(out)


# -- demodulation -------------------------------------------------------------------

Lookup = Callable[[Term], Iterable[Clause]]


def oriented(unit: Clause) -> Iterator[Tuple[Term, Term]]:
    """Sides of a positive unit usable left to right as a rewrite rule."""
    lit = unit.literals[0]
    for l, r in lit.orientations():
        if isinstance(l, Var) or not r.fvars <= l.fvars or not r.tyvars <= l.tyvars:
            continue
        yield l, r


def rewrite_once(ctx: InferenceContext, C: Clause, lookup: Lookup) -> Optional[Tuple[Tuple[Literal, ...], Clause]]:
    """One green demodulation step on ``C``, with the unit that did it.

    The instance ``lσ = rσ`` has to be smaller than ``C`` and ``lσ ≻ rσ``.
    """
    order = ctx.order
    for j, lit in enumerate(C.literals):
        for side, other in ((lit.lhs, lit.rhs), (lit.rhs, lit.lhs)):
            for p, u in green_subterms(side):
                for unit in lookup(u):
                    if unit is C or unit.id == C.id:
                        continue
                    for l, r in oriented(unit):
                        sigma = match(l, u)
                        if sigma is None:
                            continue
                        r_sigma = sigma(r)
                        if order.compare_terms(u, r_sigma) is not GREATER:
                            continue
                        if order.compare_clauses((Literal(u, r_sigma, True),), C) is not LESS:
                            continue
                        new = Literal(replace_green(side, p, r_sigma), other, lit.positive)
                        return C.literals[:j] + (new,) + C.literals[j + 1:], unit
    return None


def demodulate(ctx: InferenceContext, C: Clause, lookup: Lookup) -> Tuple[Clause, List[int]]:
    """Rewrite ``C`` with unit equations until nothing applies."""
    used: List[int] = []
    for _ in range(MAX_REWRITES):
        step = rewrite_once(ctx, C, lookup)
        if step is None:
            break
        lits, unit = step
        used.append(unit.id)
        C = C.with_literals(lits)
    else:
        logger.debug("demodulation stopped after %d rewrites on c%d", MAX_REWRITES, C.id)
    return C, used


def unit_lookup(units: Sequence[Clause]) -> Lookup:
    return lambda _u: units


# -- simplifier ---------------------------------------------------------------------

@dataclass
class SimplifyResult:
    clause: Optional[Clause]
    changed: bool = False
    premises: List[int] = field(default_factory=list)
    rules: List[str] = field(default_factory=list)
    side: List[Tuple[Literal, ...]] = field(default_factory=list)

    @property
    def deleted(self) -> bool:
        return self.clause is None


@dataclass
class Simplifier:
    """Forward and backward simplification against the active clauses.

    ``lambda_demod`` is ``"off"``, ``"plain"`` or ``"ext"``.
    """

    ctx: InferenceContext
    prune: bool = True
    lambda_demod: str = "off"

    def forward(self, C: Clause, units: TopSymbolIndex, kept: FeatureIndex) -> SimplifyResult:
        res = SimplifyResult(C)
        lits = cleanup(C.literals)
        if lits != C.literals:
            res.changed = True
            res.rules.append("simplify")
            C = C.with_literals(lits)
        if is_tautology(C):
            return SimplifyResult(None, True, rules=["tautology"])
        C, used = demodulate(self.ctx, C, units.generalizations)
        if used:
            res.changed = True
            res.premises.extend(used)
            res.rules.append("demod")
            C = C.with_literals(cleanup(C.literals))
            if is_tautology(C):
                return SimplifyResult(None, True, used, ["demod", "tautology"])
        if self.prune:
            C = self._prune(C, res)
        if self.lambda_demod != "off":
            C = self._lambda_demod(C, units.values(), res)
            if is_tautology(C):
                return SimplifyResult(None, True, res.premises, res.rules + ["tautology"], res.side)
        for D in kept.subsuming_candidates(C):
            if D.id != C.id and subsumption_deletes(D, C):
                logger.debug("c%d subsumed by c%d", C.id, D.id)
                return SimplifyResult(None, True, [D.id], ["subsumption"], res.side)
        res.clause = C
        return res

    def _prune(self, C: Clause, res: SimplifyResult) -> Clause:
        for _ in range(MAX_REWRITES):
            step = prune_arg(self.ctx, C)
            if step is None:
                break
            lits, _sigma = step
            C = C.with_literals(cleanup(lits))
            res.changed = True
            res.rules.append("prune_arg")
        return C

    def _lambda_demod(self, C: Clause, units: Sequence[Clause], res: SimplifyResult) -> Clause:
        ext = self.lambda_demod == "ext"
        for _ in range(MAX_REWRITES):
            step = None
            for unit in units:
                if unit.id == C.id:
                    continue
                step = lambda_demod(self.ctx, unit, C, ext)
                if step is not None:
                    res.premises.append(unit.id)
                    break
            if step is None:
                break
            C = C.with_literals(cleanup(step[0]))
            res.side.extend(step[1:])
            res.changed = True
            res.rules.append("lambda_demod_ext" if ext else "lambda_demod")
        return C

    def backward(self, C: Clause, kept: FeatureIndex, green: TopSymbolIndex) -> Tuple[List[Clause], List[Tuple[Clause, Clause]]]:
        """Kept clauses made redundant by ``C``: deleted ones and (old, rewritten) pairs."""
        deleted: List[Clause] = []
        for D in kept.subsumed_candidates(C):
            if D.id != C.id and subsumption_deletes(C, D):
                deleted.append(D)
        rewritten: List[Tuple[Clause, Clause]] = []
        if len(C) != 1 or C.literals[0].negative:
            return deleted, rewritten
        gone = {D.id for D in deleted}
        targets: Dict[int, Clause] = {}
        for l, _ in oriented(C):
            for D in green.instances(l):
                if D.id != C.id and D.id not in gone:
                    targets.setdefault(D.id, D)
        for D in targets.values():
            new, used = demodulate(self.ctx, D, unit_lookup([C]))
            if used:
                rewritten.append((D, new))
        return deleted, rewritten


def derivation_for(res: SimplifyResult, original: Clause) -> Derivation:
    rule = "+".join(dict.fromkeys(res.rules))
    return Derivation(rule, (original.id,) + tuple(p for p in dict.fromkeys(res.premises) if p != original.id))
