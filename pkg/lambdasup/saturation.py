"""Given-clause saturation.

A DISCOUNT loop over an active set, a passive queue and a set of scheduled
inference streams.  Generating rules never run to completion when a clause
is activated: each pairing becomes a lazy stream, and the loop takes a few
conclusions per iteration from the streams in round-robin order with a
per-visit step budget that grows every full cycle.  That way a stream with
infinitely many conclusions (or an unbounded unifier search) cannot starve
the rest.
"""

from __future__ import annotations

import enum
import heapq
import itertools
import logging
import time
from collections import deque
from dataclasses import asdict, dataclass, field
from typing import Deque, Dict, Iterable, Iterator, List, Optional, Sequence, Set

import psutil

from .calculus import Inference, InferenceContext, ext_axiom, infer_argcong, infer_efact, infer_eres, infer_fluidsup, infer_sup
from .calculus_ext import (
    SkolemRegistry,
    ext_inst,
    functional_green_subterms,
    infer_abs_efact,
    infer_abs_eres,
    infer_abs_sup,
    infer_dupsup,
    infer_flexsup,
    infer_lambda_sup,
    infer_negext,
)
from .clauses import Clause, Derivation, Literal
from .config import ProverConfig
from .errors import ResourceLimit, TermTypeError
from .index import FeatureIndex, TopSymbolIndex, index_green
from .order import TermOrder
from .signature import Signature
from .simplify import Simplifier, cleanup, derivation_for, is_tautology, oriented
from .terms import Lam, subterms
from .unification import BoundMonitor

logger = logging.getLogger("lambdasup.saturation")

MEMORY_CHECK_EVERY = 64


class Status(enum.Enum):
    UNSAT = "unsat"
    SATURATED = "saturated"
    RESOURCE_OUT = "resource_out"


@dataclass
class Stats:
    iterations: int = 0
    generated: int = 0
    simplified: int = 0
    deleted: int = 0
    inferences: Dict[str, int] = field(default_factory=dict)
    streams_created: int = 0
    streams_exhausted: int = 0
    unif_markers: int = 0
    passive_peak: int = 0
    elapsed: float = 0.0

    def as_dict(self) -> dict:
        return asdict(self)


@dataclass
class ProverResult:
    status: Status
    stats: Stats
    empty_clause: Optional[Clause] = None
    clauses: List[Clause] = field(default_factory=list)
    reason: str = ""
    complete: bool = False
    bounds_hit: Set[str] = field(default_factory=set)
    archive: Dict[int, Clause] = field(default_factory=dict)

    @property
    def is_unsat(self) -> bool:
        return self.status is Status.UNSAT

    @property
    def is_saturated(self) -> bool:
        return self.status is Status.SATURATED

    def derivation(self) -> List[Clause]:
        """Clauses the refutation depends on, in id order; empty unless unsat."""
        if self.empty_clause is None:
            return []
        seen: Dict[int, Clause] = {}
        todo = [self.empty_clause]
        while todo:
            C = todo.pop()
            if C.id in seen:
                continue
            seen[C.id] = C
            for p in C.derivation.premises:
                premise = self.archive.get(p)
                if premise is not None and p not in seen:
                    todo.append(premise)
        return [seen[i] for i in sorted(seen)]

    def rules_used(self) -> Set[str]:
        out: Set[str] = set()
        for C in self.derivation():
            out.update(C.derivation.rule.split("+"))
        return out


# -- passive set ----------------------------------------------------------------------

class PassiveQueue:
    """Clauses waiting for selection, by age and by weight.

    One pick in ``weight_ratio + 1`` takes the oldest clause, the rest the
    lightest, so every clause is eventually picked.
    """

    def __init__(self, weight_ratio: int = 4):
        self.weight_ratio = weight_ratio
        self._by_age: List[tuple] = []
        self._by_weight: List[tuple] = []
        self._live: Dict[int, Clause] = {}
        self._picks = 0

    def push(self, C: Clause) -> None:
        self._live[C.id] = C
        heapq.heappush(self._by_age, (C.id, C.id))
        heapq.heappush(self._by_weight, (C.weight, C.id))

    def discard(self, C: Clause) -> None:
        self._live.pop(C.id, None)

    def __len__(self) -> int:
        return len(self._live)

    def __contains__(self, C: Clause) -> bool:
        return C.id in self._live

    def pop(self) -> Optional[Clause]:
        if not self._live:
            return None
        use_age = self.weight_ratio == 0 or self._picks % (self.weight_ratio + 1) == 0
        self._picks += 1
        heap = self._by_age if use_age else self._by_weight
        while heap:
            _, cid = heapq.heappop(heap)
            C = self._live.pop(cid, None)
            if C is not None:
                return C
        return None


# -- scheduled inference streams ---------------------------------------------------------

@dataclass
class _Scheduled:
    stream: Iterator[Optional[Inference]]
    label: str


class StreamSet:
    """Round-robin over inference streams with a growing step budget."""

    def __init__(self, stats: Stats, eager_steps: int = 8, budget_cap: int = 256):
        self.stats = stats
        self.eager_steps = eager_steps
        self.budget_cap = budget_cap
        self.budget = 1
        self._queue: Deque[_Scheduled] = deque()
        self._cycle_left = 0

    def __len__(self) -> int:
        return len(self._queue)

    def add(self, stream: Iterator[Optional[Inference]], label: str = "") -> List[Inference]:
        """Schedule ``stream`` after running its first few steps."""
        self.stats.streams_created += 1
        entry = _Scheduled(stream, label)
        out: List[Inference] = []
        if not self._run(entry, self.eager_steps, out, first_only=False):
            self._queue.append(entry)
            if self._cycle_left <= 0:
                self._cycle_left = len(self._queue)
        return out

    def _run(self, entry: _Scheduled, steps: int, out: List[Inference], first_only: bool) -> bool:
        for _ in range(steps):
            try:
                item = next(entry.stream)
            except StopIteration:
                self.stats.streams_exhausted += 1
                return True
            if item is None:
                self.stats.unif_markers += 1
                continue
            out.append(item)
            if first_only:
                break
        return False

    def pull(self, limit: int) -> List[Inference]:
        """Up to ``limit`` conclusions, visiting each stream at most once."""
        out: List[Inference] = []
        visits = len(self._queue)
        while self._queue and visits > 0 and len(out) < limit:
            visits -= 1
            entry = self._queue.popleft()
            if not self._run(entry, self.budget, out, first_only=True):
                self._queue.append(entry)
            self._cycle_left -= 1
            if self._cycle_left <= 0:
                self.budget = min(self.budget * 2, self.budget_cap)
                self._cycle_left = len(self._queue)
        return out


# -- state -------------------------------------------------------------------------------

@dataclass
class SaturationState:
    config: ProverConfig
    ctx: InferenceContext
    simplifier: Simplifier
    stats: Stats
    passive: PassiveQueue
    streams: StreamSet
    active: Dict[int, Clause] = field(default_factory=dict)
    units: TopSymbolIndex = field(default_factory=TopSymbolIndex)
    features: FeatureIndex = field(default_factory=FeatureIndex)
    green: TopSymbolIndex = field(default_factory=TopSymbolIndex)
    archive: Dict[int, Clause] = field(default_factory=dict)
    functional_terms: List = field(default_factory=list)
    refutation: Optional[Clause] = None
    started: float = field(default_factory=time.monotonic)
    _ids: Iterator[int] = field(default_factory=lambda: itertools.count(1))

    def register(self, literals: Sequence[Literal], derivation: Derivation) -> Clause:
        C = Clause(tuple(literals), next(self._ids), self.stats.iterations, derivation)
        self.archive[C.id] = C
        self.stats.generated += 1
        if C.is_empty and self.refutation is None:
            self.refutation = C
        return C

    def activate(self, C: Clause) -> None:
        self.active[C.id] = C
        self.features.insert(C)
        index_green(self.green, C, C)
        if len(C) == 1 and C.literals[0].positive:
            for l, _ in oriented(C):
                self.units.insert(l, C)

    def deactivate(self, C: Clause) -> None:
        self.active.pop(C.id, None)
        self.features.remove(C)
        self.green.remove(C)
        self.units.remove(C)


def is_first_order(clauses: Iterable[Clause]) -> bool:
    """No λ, no functional-typed variable, literal or argument, no type variable."""
    for C in clauses:
        if C.tyvars:
            return False
        for lit in C.literals:
            if lit.ty.is_fun:
                return False
        for t in C.terms():
            for s in subterms(t):
                if isinstance(s, Lam) or (s.fvars and s.ty.is_fun):
                    return False
                for a in s.args:
                    if a.ty.is_fun:
                        return False
    return True


def new_state(clauses: Sequence[Clause], sig: Signature, config: Optional[ProverConfig] = None) -> SaturationState:
    config = config or ProverConfig()
    stats = Stats()
    order = TermOrder(config.order, config.selection)
    skolems = SkolemRegistry(sig, config.lambda_sup or 1024)
    ctx = InferenceContext(order, sig, config.unif, BoundMonitor(), skolems)
    state = SaturationState(
        config=config,
        ctx=ctx,
        simplifier=Simplifier(ctx, prune=config.prune_arg, lambda_demod=config.lambda_demod),
        stats=stats,
        passive=PassiveQueue(config.weight_ratio),
        streams=StreamSet(stats, config.eager_steps, config.stream_budget_cap),
    )
    for C in clauses:
        state.passive.push(state.register(C.literals, C.derivation))
    if config.ext_axiom:
        if is_first_order(clauses):
            logger.debug("first-order input, extensionality axiom left out")
        else:
            state.passive.push(state.register(ext_axiom(sig).literals, Derivation("ext_axiom")))
    return state


# -- the loop --------------------------------------------------------------------------

def _conclude(state: SaturationState, inf: Inference) -> None:
    lits = cleanup(inf.literals)
    if lits and is_tautology(Clause(lits)):
        state.stats.deleted += 1
        return
    C = state.register(lits, inf.derivation())
    state.passive.push(C)


def _conclude_all(state: SaturationState, infs: Iterable[Inference]) -> None:
    for inf in infs:
        _conclude(state, inf)


def _schedule(state: SaturationState, C: Clause) -> None:
    """Turn every generating inference with ``C`` as a premise into streams."""
    ctx, cfg, streams = state.ctx, state.config, state.streams
    unary = [infer_eres(ctx, C), infer_efact(ctx, C)]
    if cfg.neg_ext:
        unary.append(infer_negext(ctx, C))
    if cfg.abs_rules:
        unary += [infer_abs_eres(ctx, C), infer_abs_efact(ctx, C)]
    _conclude_all(state, streams.add(itertools.chain(*unary), f"c{C.id}"))
    _conclude_all(state, streams.add(infer_argcong(ctx, C), f"arg_cong c{C.id}"))
    for D in list(state.active.values()):
        pairs = [(D, C)] if D is C else [(D, C), (C, D)]
        for left, right in pairs:
            rules = [infer_sup(ctx, left, right)]
            if cfg.fluid_sup:
                rules.append(infer_fluidsup(ctx, left, right))
            if cfg.flex_sup:
                rules.append(infer_flexsup(ctx, left, right))
            if cfg.dup_sup:
                rules.append(infer_dupsup(ctx, left, right))
            if cfg.lambda_sup:
                rules.append(infer_lambda_sup(ctx, left, right))
            if cfg.abs_rules:
                rules.append(infer_abs_sup(ctx, left, right))
            _conclude_all(state, streams.add(itertools.chain(*rules), f"c{left.id}->c{right.id}"))
    if cfg.ext_inst:
        _ext_inst(state, C)


def _ext_inst(state: SaturationState, C: Clause) -> None:
    cap = state.config.ext_inst_per_clause
    made = 0
    mine = functional_green_subterms(C)
    for s in mine:
        for s2 in state.functional_terms:
            if made >= cap:
                break
            if s2 is s or s2.ty is not s.ty:
                continue
            try:
                inst = ext_inst(state.ctx.sig, s, s2)
            except TermTypeError:
                continue
            state.ctx.count("ext_inst")
            state.passive.push(state.register(inst.literals, Derivation("ext_inst", (C.id,))))
            made += 1
    known = set(state.functional_terms)
    state.functional_terms.extend(s for s in mine if s not in known)


def _select(state: SaturationState) -> Optional[Clause]:
    C = state.passive.pop()
    while C is None and len(state.streams):
        _conclude_all(state, state.streams.pull(state.config.pull_per_iteration))
        if state.refutation is not None:
            return state.refutation
        C = state.passive.pop()
    return C


def _result(state: SaturationState, status: Status, reason: str = "") -> ProverResult:
    state.stats.elapsed = time.monotonic() - state.started
    state.stats.inferences = dict(state.ctx.counts)
    bounds = set(state.ctx.monitor.reasons)
    complete = status is Status.SATURATED and state.config.claims_completeness and not bounds
    return ProverResult(
        status=status,
        stats=state.stats,
        empty_clause=state.refutation if status is Status.UNSAT else None,
        clauses=list(state.active.values()),
        reason=reason,
        complete=complete,
        bounds_hit=bounds,
        archive=state.archive,
    )


def given_clause_step(state: SaturationState) -> Optional[ProverResult]:
    """One iteration of the loop; a result once the run is decided."""
    if state.refutation is not None:
        return _result(state, Status.UNSAT)
    C = _select(state)
    if C is None:
        return _result(state, Status.SATURATED)
    if C.is_empty:
        state.refutation = C
        return _result(state, Status.UNSAT)
    state.stats.iterations += 1
    stats = state.stats

    res = state.simplifier.forward(C, state.units, state.features)
    for side in res.side:
        bridge = state.register(side, Derivation("lambda_demod_ext", (C.id,) + tuple(res.premises)))
        state.passive.push(bridge)
    if res.deleted:
        stats.deleted += 1
        return None
    if res.changed:
        C = state.register(res.clause.literals, derivation_for(res, C))
        stats.simplified += 1
        if C.is_empty:
            return _result(state, Status.UNSAT)

    deleted, rewritten = state.simplifier.backward(C, state.features, state.green)
    for D in deleted:
        state.deactivate(D)
        stats.deleted += 1
    for D, new in rewritten:
        if D.id not in state.active:
            continue
        state.deactivate(D)
        state.passive.push(state.register(new.literals, Derivation("demod", (D.id, C.id))))
        stats.simplified += 1

    state.activate(C)
    _schedule(state, C)
    _conclude_all(state, state.streams.pull(state.config.pull_per_iteration))
    stats.passive_peak = max(stats.passive_peak, len(state.passive))

    if state.config.log_every and stats.iterations % state.config.log_every == 0:
        logger.debug(
            "iteration %d: %d active, %d passive, %d streams",
            stats.iterations, len(state.active), len(state.passive), len(state.streams),
        )
    if state.refutation is not None:
        return _result(state, Status.UNSAT)
    return None


def check_limits(state: SaturationState) -> None:
    cfg = state.config
    if cfg.timeout and time.monotonic() - state.started > cfg.timeout:
        raise ResourceLimit("timeout")
    if cfg.max_clauses and len(state.archive) > cfg.max_clauses:
        raise ResourceLimit("clauses")
    if cfg.max_iterations and state.stats.iterations >= cfg.max_iterations:
        raise ResourceLimit("iterations")
    if cfg.memory_limit_mb and state.stats.iterations % MEMORY_CHECK_EVERY == 0:
        rss_mb = psutil.Process().memory_info().rss / (1024 * 1024)
        if rss_mb > cfg.memory_limit_mb:
            raise ResourceLimit("memory")


def saturate(clauses: Sequence[Clause], sig: Signature, config: Optional[ProverConfig] = None) -> ProverResult:
    """Run the loop on ``clauses`` until a refutation, saturation or a limit."""
    state = new_state(clauses, sig, config)
    return run(state)


def run(state: SaturationState) -> ProverResult:
    try:
        while True:
            result = given_clause_step(state)
            if result is not None:
                logger.info("%s after %d iterations", result.status.value, result.stats.iterations)
                return result
            check_limits(state)
    except ResourceLimit as e:
        logger.warning("resource limit hit: %s after %d iterations", e.reason, state.stats.iterations)
        return _result(state, Status.RESOURCE_OUT, e.reason)
