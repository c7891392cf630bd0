"""Higher-order unification modulo βη.

``csu`` enumerates a complete set of unifiers lazily.  The search is a
best-first exploration of unification problems ordered by the fuel they
have used; only bindings that introduce fresh variables cost fuel.  The
stream yields ``None`` every few expansions so that a caller can move on to
other work and come back later.

Deterministic steps are applied eagerly: deletion, η-expansion under
binders, rigid-rigid decomposition, binding of bare variables and solving
pairs in the pattern fragment.  The remaining pairs branch:

- flex-rigid: imitation of a symbol head and projections
- flex-flex with different heads: identification, projections, eliminations
  and a restricted iteration
- flex-flex with equal heads: decomposition, eliminations and iteration
"""

from __future__ import annotations

import heapq
import itertools
import logging
from dataclasses import dataclass
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

from .subst import Substitution
from .terms import (
    App,
    Bound,
    Const,
    Lam,
    Term,
    Var,
    eta_expand_to,
    fresh_var,
    loose_indices,
    mk_app,
    mk_bound,
    mk_lam,
    mk_lams,
    mk_var,
    subterms,
)
from .types import TyCon, TyVar, Type, arrows

logger = logging.getLogger("lambdasup.unify")

Pair = Tuple[Term, Term]


@dataclass(frozen=True)
class UnifConfig:
    """Knobs of the unification search.

    ``fuel`` bounds the number of costly bindings along one branch,
    ``max_unifiers`` the number of distinct unifiers emitted (0 for no
    bound) and ``max_nodes`` the number of problems expanded.
    """

    fuel: int = 6
    max_unifiers: int = 32
    pattern_fast_path: bool = True
    flex_flex: bool = True
    iteration: bool = True
    progress_every: int = 16
    max_nodes: int = 4000
    check_soundness: bool = False

    def __post_init__(self):
        if self.fuel < 0:
            raise ValueError("unification fuel must be non-negative")


PRAGMATIC = UnifConfig(fuel=3, max_unifiers=8, flex_flex=False, iteration=False)


class BoundMonitor:
    """Records which search bounds cut a stream short."""

    def __init__(self) -> None:
        self.reasons: set = set()

    def hit(self, reason: str) -> None:
        self.reasons.add(reason)

    def __bool__(self) -> bool:
        return bool(self.reasons)


# -- types ----------------------------------------------------------------------

def _walk(ty: Type, sub: Dict[str, Type]) -> Type:
    while isinstance(ty, TyVar) and ty.name in sub:
        ty = sub[ty.name]
    return ty


def _occurs(name: str, ty: Type, sub: Dict[str, Type]) -> bool:
    ty = _walk(ty, sub)
    if isinstance(ty, TyVar):
        return ty.name == name
    return any(_occurs(name, a, sub) for a in ty.args)  # type: ignore[attr-defined]


def _resolve(sub: Dict[str, Type]) -> Dict[str, Type]:
    out: Dict[str, Type] = {}
    for name in sub:
        ty: Type = TyVar(name)
        for _ in range(len(sub) + 1):
            nxt = ty.subst(sub)
            if nxt is ty:
                break
            ty = nxt
        out[name] = ty
    return out


def unify_types(a: Type, b: Type, sub: Optional[Dict[str, Type]] = None) -> Optional[Dict[str, Type]]:
    """Most general type unifier extending ``sub``, or None."""
    work = [(a, b)]
    sub = dict(sub or {})
    while work:
        x, y = work.pop()
        x, y = _walk(x, sub), _walk(y, sub)
        if x is y:
            continue
        if isinstance(x, TyVar):
            if _occurs(x.name, y, sub):
                return None
            sub[x.name] = y
        elif isinstance(y, TyVar):
            if _occurs(y.name, x, sub):
                return None
            sub[y.name] = x
        else:
            assert isinstance(x, TyCon) and isinstance(y, TyCon)
            if x.name != y.name or len(x.args) != len(y.args):
                return None
            work.extend(zip(x.args, y.args))
    return _resolve(sub)


def match_types(pattern: Type, target: Type, sub: Optional[Dict[str, Type]] = None) -> Optional[Dict[str, Type]]:
    """Extend ``sub`` so that ``pattern`` instantiates to ``target``."""
    sub = dict(sub or {})
    work = [(pattern, target)]
    while work:
        p, t = work.pop()
        if isinstance(p, TyVar):
            known = sub.get(p.name)
            if known is None:
                sub[p.name] = t
            elif known is not t:
                return None
            continue
        if p is t and not p.tyvars:
            continue
        if not isinstance(t, TyCon) or p.name != t.name or len(p.args) != len(t.args):  # type: ignore[attr-defined]
            return None
        work.extend(zip(p.args, t.args))  # type: ignore[attr-defined]
    return sub


# -- helpers --------------------------------------------------------------------

def pattern_args(t: Term) -> Optional[List[int]]:
    """Indices of the bound-variable arguments of a Miller pattern, else None."""
    seen: List[int] = []
    for a in t.args:
        if not isinstance(a, Bound) or a.index in seen:
            return None
        seen.append(a.index)
    return seen


def _xs(arg_tys: Sequence[Type]) -> List[Term]:
    n = len(arg_tys)
    return [mk_bound(n - 1 - i, ty) for i, ty in enumerate(arg_tys)]


def _fresh_applied(arg_tys: Sequence[Type], res: Type) -> Term:
    """``Z x1 … xn`` for a fresh ``Z`` over the bound variables of the binders."""
    z = fresh_var(arrows(arg_tys, res), "U")
    return mk_app(z, _xs(arg_tys))


def _head_types(y: Term, n: int) -> Tuple[List[Type], Type]:
    return y.ty.split(n)


def rename_bounds(t: Term, mapping: Dict[int, int], depth: int = 0) -> Term:
    """Rename loose bound indices of ``t`` (relative to its top) via ``mapping``."""
    if t.loose <= depth:
        return t
    if isinstance(t, Bound):
        return mk_bound(mapping[t.index - depth] + depth, t.ty)
    if isinstance(t, Lam):
        return mk_lam(t.binder, rename_bounds(t.body, mapping, depth + 1))
    assert isinstance(t, App)
    return mk_app(rename_bounds(t.head, mapping, depth), [rename_bounds(a, mapping, depth) for a in t.args])


def pattern_solution(y: Var, bound_args: Sequence[int], arg_tys: Sequence[Type], t: Term) -> Term:
    """``λ x̄. t`` where the bound argument ``bound_args[i]`` becomes ``x_i``."""
    n = len(bound_args)
    mapping = {b: n - 1 - i for i, b in enumerate(bound_args)}
    return mk_lams(arg_tys, rename_bounds(t, mapping))


def canonical_key(sigma: Substitution, names: Sequence[str]) -> str:
    """Rendering of ``sigma`` on ``names`` that is blind to fresh variable names."""
    fresh: Dict[str, Var] = {}
    for x in names:
        b = sigma.terms.get(x)
        if b is None:
            continue
        for s in subterms(b):
            if isinstance(s, Var) and s.name not in fresh:
                fresh[s.name] = mk_var(f"_{len(fresh)}", s.ty)
    ren = Substitution({}, fresh)
    parts = []
    for x in names:
        b = sigma.terms.get(x)
        parts.append(f"{x}:={ren.apply(b) if b is not None else '-'}")
    return ";".join(parts)


# -- search ---------------------------------------------------------------------

class _Problem:
    """One node of the search: open pairs, accumulated substitution, fuel used."""

    __slots__ = ("pairs", "sigma", "fuel")

    def __init__(self, pairs: List[Pair], sigma: Substitution, fuel: int):
        self.pairs = pairs
        self.sigma = sigma
        self.fuel = fuel


def _apply_pairs(pairs: Iterable[Pair], theta: Substitution) -> List[Pair]:
    return [(theta.apply(a), theta.apply(b)) for a, b in pairs]


def _normalize(prob: _Problem, cfg: UnifConfig) -> Optional[Tuple[_Problem, Optional[Pair]]]:
    """Run the deterministic rules; return the problem and its branching pair."""
    work = list(prob.pairs)
    stuck: List[Pair] = []
    sigma = prob.sigma

    def bind(theta: Substitution) -> None:
        nonlocal work, stuck, sigma
        work = _apply_pairs(work + stuck, theta)
        stuck = []
        sigma = sigma.compose(theta)

    while work:
        s, t = work.pop()
        if s is t:
            continue
        if s.ty is not t.ty:
            tsub = unify_types(s.ty, t.ty)
            if tsub is None:
                return None
            bind(Substitution(tsub, {}))
            work.append((Substitution(tsub, {}).apply(s), Substitution(tsub, {}).apply(t)))
            continue
        if s.ty.is_fun or isinstance(s, Lam) or isinstance(t, Lam):
            n = s.ty.arity
            binders, sb = eta_expand_to(s, n)
            _, tb = eta_expand_to(t, n)
            work.append((sb, tb))
            continue
        hs, ht = s.head, t.head
        flex_s, flex_t = isinstance(hs, Var), isinstance(ht, Var)
        if not flex_s and not flex_t:
            if isinstance(hs, Bound) and isinstance(ht, Bound):
                if hs.index != ht.index or len(s.args) != len(t.args):
                    return None
                work.extend(zip(s.args, t.args))
                continue
            if isinstance(hs, Const) and isinstance(ht, Const):
                if hs.name != ht.name or len(s.args) != len(t.args):
                    return None
                if hs.tyargs != ht.tyargs:
                    tsub: Optional[Dict[str, Type]] = {}
                    for a, b in zip(hs.tyargs, ht.tyargs):
                        tsub = unify_types(a, b, tsub)
                        if tsub is None:
                            return None
                    theta = Substitution(tsub, {})
                    bind(theta)
                    s, t = theta.apply(s), theta.apply(t)
                work.extend(zip(s.args, t.args))
                continue
            return None
        if not flex_s:
            s, t = t, s
            hs, ht = ht, hs
            flex_s, flex_t = flex_t, flex_s
        y = hs
        assert isinstance(y, Var)
        if not s.args and y.name not in t.fnames and not t.loose:
            bind(Substitution({}, {y.name: t}))
            continue
        if flex_t and not t.args and ht.name not in s.fnames and not s.loose:  # type: ignore[attr-defined]
            bind(Substitution({}, {ht.name: s}))  # type: ignore[attr-defined]
            continue
        if cfg.pattern_fast_path:
            ps = pattern_args(s)
            if ps is not None:
                if not flex_t:
                    if y.name not in t.fnames and loose_indices(t) <= set(ps):
                        arg_tys, _ = _head_types(y, len(ps))
                        bind(Substitution({}, {y.name: pattern_solution(y, ps, arg_tys, t)}))
                        continue
                else:
                    pt = pattern_args(t)
                    if pt is not None:
                        theta = _pattern_flex_flex(s, ps, t, pt)
                        if theta is not None:
                            bind(theta)
                            continue
        if not flex_t and isinstance(ht, Bound) and pattern_args(s) is not None and ht.index not in pattern_args(s):  # type: ignore[operator]
            # no projection can reach a bound head the pattern does not mention
            return None
        stuck.append((s, t))
    if not stuck:
        return _Problem([], sigma, prob.fuel), None
    flex_rigid = [p for p in stuck if not isinstance(p[1].head, Var)]
    chosen = flex_rigid[0] if flex_rigid else stuck[0]
    rest = [p for p in stuck if p is not chosen]
    return _Problem(rest, sigma, prob.fuel), chosen


def _pattern_flex_flex(s: Term, ps: List[int], t: Term, pt: List[int]) -> Optional[Substitution]:
    y, z = s.head, t.head
    assert isinstance(y, Var) and isinstance(z, Var)
    ys, res = _head_types(y, len(ps))
    if y is z:
        if len(ps) != len(pt):
            return None
        keep = [i for i in range(len(ps)) if ps[i] == pt[i]]
        xs = _xs(ys)
        h = fresh_var(arrows([ys[i] for i in keep], res), "U")
        return Substitution({}, {y.name: mk_lams(ys, mk_app(h, [xs[i] for i in keep]))})
    if y.name in t.fnames or z.name in s.fnames:
        return None
    zs, _ = _head_types(z, len(pt))
    common = [b for b in ps if b in pt]
    h = fresh_var(arrows([ys[ps.index(b)] for b in common], res), "U")
    xs_y, xs_z = _xs(ys), _xs(zs)
    by = mk_lams(ys, mk_app(h, [xs_y[ps.index(b)] for b in common]))
    bz = mk_lams(zs, mk_app(h, [xs_z[pt.index(b)] for b in common]))
    return Substitution({}, {y.name: by, z.name: bz})


def _projections(y: Var, n: int, res: Type) -> Iterator[Tuple[Substitution, int]]:
    arg_tys, _ = _head_types(y, n)
    xs = _xs(arg_tys)
    for i, xi in enumerate(xs):
        doms, target = xi.ty.split()
        tsub = unify_types(target, res)
        if tsub is None:
            continue
        theta_ty = Substitution(tsub, {})
        tys = [theta_ty.apply_type(a) for a in arg_tys]
        xs_i = _xs(tys)
        args = [_fresh_applied(tys, theta_ty.apply_type(d)) for d in doms]
        binding = mk_lams(tys, mk_app(xs_i[i], args))
        yield Substitution(tsub, {y.name: binding}), (1 if doms else 0)


def _imitation(y: Var, n: int, rigid: Term) -> Optional[Tuple[Substitution, int]]:
    head = rigid.head
    if not isinstance(head, Const):
        return None
    arg_tys, _ = _head_types(y, n)
    doms, _ = head.ty.split(len(rigid.args))
    args = [_fresh_applied(arg_tys, d) for d in doms]
    return Substitution({}, {y.name: mk_lams(arg_tys, mk_app(head, args))}), (1 if doms else 0)


def _eliminations(y: Var, n: int) -> Iterator[Tuple[Substitution, int]]:
    arg_tys, res = _head_types(y, n)
    xs = _xs(arg_tys)
    for j in range(n):
        keep = [i for i in range(n) if i != j]
        h = fresh_var(arrows([arg_tys[i] for i in keep], res), "U")
        yield Substitution({}, {y.name: mk_lams(arg_tys, mk_app(h, [xs[i] for i in keep]))}), 1


def _iterations(y: Var, n: int) -> Iterator[Tuple[Substitution, int]]:
    arg_tys, res = _head_types(y, n)
    xs = _xs(arg_tys)
    for i, xi in enumerate(xs):
        doms, target = xi.ty.split()
        if not doms:
            continue
        inner = mk_app(xi, [_fresh_applied(arg_tys, d) for d in doms])
        h = fresh_var(arrows(list(arg_tys) + [target], res), "U")
        yield Substitution({}, {y.name: mk_lams(arg_tys, mk_app(h, xs + [inner]))}), 1


def _identification(s: Term, t: Term) -> Tuple[Substitution, int]:
    y, z = s.head, t.head
    assert isinstance(y, Var) and isinstance(z, Var)
    ys, res = _head_types(y, len(s.args))
    zs, _ = _head_types(z, len(t.args))
    h = fresh_var(arrows(list(ys) + list(zs), res), "U")
    xs_y = _xs(ys)
    by = mk_lams(ys, mk_app(h, xs_y + [_fresh_applied(ys, b) for b in zs]))
    xs_z = _xs(zs)
    bz = mk_lams(zs, mk_app(h, [_fresh_applied(zs, a) for a in ys] + xs_z))
    return Substitution({}, {y.name: by, z.name: bz}), 1


def _branches(prob: _Problem, pair: Pair, cfg: UnifConfig, monitor: Optional[BoundMonitor]) -> Iterator[_Problem]:
    s, t = pair
    y = s.head
    assert isinstance(y, Var)
    steps: List[Tuple[Substitution, int]] = []
    if not isinstance(t.head, Var):
        imitation = _imitation(y, len(s.args), t)
        if imitation is not None:
            steps.append(imitation)
        steps.extend(_projections(y, len(s.args), s.ty))
    else:
        if not cfg.flex_flex:
            if monitor is not None:
                monitor.hit("flex-flex")
            return
        z = t.head
        if y is z:
            if len(s.args) == len(t.args):
                yield _Problem(prob.pairs + list(zip(s.args, t.args)), prob.sigma, prob.fuel)
            steps.extend(_eliminations(y, len(s.args)))
            if cfg.iteration:
                steps.extend(_iterations(y, len(s.args)))
        else:
            steps.append(_identification(s, t))
            steps.extend(_projections(y, len(s.args), s.ty))
            steps.extend(_projections(z, len(t.args), t.ty))  # type: ignore[arg-type]
            steps.extend(_eliminations(y, len(s.args)))
            steps.extend(_eliminations(z, len(t.args)))  # type: ignore[arg-type]
            if cfg.iteration:
                steps.extend(_iterations(y, len(s.args)))
                steps.extend(_iterations(z, len(t.args)))  # type: ignore[arg-type]
    for theta, cost in steps:
        if prob.fuel + cost > cfg.fuel:
            if monitor is not None:
                monitor.hit("fuel")
            continue
        pairs = _apply_pairs(prob.pairs + [pair], theta)
        yield _Problem(pairs, prob.sigma.compose(theta), prob.fuel + cost)


def csu_pairs(pairs: Sequence[Pair], cfg: UnifConfig = UnifConfig(), variables: Optional[Iterable[str]] = None,
              monitor: Optional[BoundMonitor] = None) -> Iterator[Optional[Substitution]]:
    """Lazily enumerate unifiers of all ``pairs``; ``None`` marks progress."""
    names = sorted(set(variables) if variables is not None else {x for p in pairs for t in p for x in t.fnames})
    counter = itertools.count()
    heap: List[Tuple[int, int, _Problem]] = [(0, next(counter), _Problem(list(pairs), Substitution.identity(), 0))]
    seen: set = set()
    expanded = 0
    emitted = 0
    while heap:
        _, _, prob = heapq.heappop(heap)
        expanded += 1
        if expanded % cfg.progress_every == 0:
            yield None
        if expanded > cfg.max_nodes:
            logger.debug("unification gave up after %d problems", cfg.max_nodes)
            if monitor is not None:
                monitor.hit("nodes")
            return
        normal = _normalize(prob, cfg)
        if normal is None:
            continue
        prob, pair = normal
        if pair is None:
            sigma = prob.sigma.restrict(names)
            key = canonical_key(sigma, names) + "|" + str(sorted((a, repr(ty)) for a, ty in sigma.types.items()))
            if key in seen:
                continue
            seen.add(key)
            if cfg.check_soundness:
                for a, b in pairs:
                    assert sigma.apply(a) is sigma.apply(b), f"unsound unifier {sigma} for {a} =? {b}"
            yield sigma
            emitted += 1
            if cfg.max_unifiers and emitted >= cfg.max_unifiers:
                if heap and monitor is not None:
                    monitor.hit("unifiers")
                return
            continue
        for child in _branches(prob, pair, cfg, monitor):
            heapq.heappush(heap, (child.fuel, next(counter), child))


def csu(s: Term, t: Term, cfg: UnifConfig = UnifConfig(), variables: Optional[Iterable[str]] = None,
        monitor: Optional[BoundMonitor] = None) -> Iterator[Optional[Substitution]]:
    """Complete set of unifiers of ``s`` and ``t`` up to the fuel bound."""
    if s.ty is not t.ty:
        tsub = unify_types(s.ty, t.ty)
        if tsub is None:
            return iter(())
    return csu_pairs([(s, t)], cfg, variables, monitor)


def unifiers(s: Term, t: Term, cfg: UnifConfig = UnifConfig()) -> List[Substitution]:
    """All unifiers the stream produces, progress markers dropped."""
    return [u for u in csu(s, t, cfg) if u is not None]


def unify(s: Term, t: Term, cfg: UnifConfig = UnifConfig()) -> Optional[Substitution]:
    for u in csu(s, t, cfg):
        if u is not None:
            return u
    return None
