import itertools
import logging
import random

import pytest

from lambdasup.matching import match_pairs
from lambdasup.signature import Signature
from lambdasup.subst import Substitution
from lambdasup.terms import App, Var, abstract_vars, mk_app, mk_bound, mk_lam, mk_lams, mk_var, subterms
from lambdasup.types import TyVar, arrow, arrows, iota
from lambdasup.unification import PRAGMATIC, BoundMonitor, UnifConfig, csu, unifiers, unify

from conftest import II

I = iota()
III = arrows([I, I], I)


class SmallProblems:
    """Random unification problems over a, b : $i, f : $i > $i, g : $i > $i > $i.

    Variables are X, Y : $i and F : $i > $i; F occurs at most once per problem.
    """

    def __init__(self, seed):
        self.rng = random.Random(seed)
        self.sig = Signature()
        for name in ("a", "b"):
            self.sig.declare(name, I)
        self.sig.declare("f", II)
        self.sig.declare("g", III)
        self.X, self.Y, self.F = mk_var("X", I), mk_var("Y", I), mk_var("F", II)

    def c(self, name):
        return self.sig.const(name)

    def side(self, depth, allow_F):
        rng = self.rng
        roll = rng.random()
        if depth <= 0 or roll < 0.3:
            return rng.choice([self.X, self.Y, self.c("a"), self.c("b")])
        if allow_F and roll < 0.45:
            return mk_app(self.F, [self.side(depth - 1, False)])
        if roll < 0.7:
            return mk_app(self.c("f"), [self.side(depth - 1, allow_F)])
        left = self.side(depth - 1, allow_F)
        return mk_app(self.c("g"), [left, self.side(depth - 1, allow_F and self.F not in left.fvars)])

    def problem(self):
        s = self.side(2, True)
        t = self.side(2, self.F not in s.fvars)
        return s, t

    def ground_values(self):
        a, b = self.c("a"), self.c("b")
        f, g = self.c("f"), self.c("g")
        return [a, b, mk_app(f, [a]), mk_app(f, [b]), mk_app(g, [a, b]), mk_app(g, [b, a])]

    def closed_functions(self):
        a, b = self.c("a"), self.c("b")
        f, g = self.c("f"), self.c("g")
        x = mk_var("_x", I)
        return [
            f,
            mk_app(g, [a]),
            mk_app(g, [b]),
            abstract_vars(mk_app(g, [x, x]), [x]),
            abstract_vars(mk_app(g, [x, a]), [x]),
            abstract_vars(a, [x]),
            mk_lam(I, mk_bound(0, I)),
        ]

    def groundings(self, names):
        pools = []
        for name in names:
            pools.append(self.closed_functions() if name == "F" else self.ground_values())
        for combo in itertools.product(*pools):
            yield Substitution({}, dict(zip(names, combo)))


def _occurrences(var, t):
    return sum(1 for u in subterms(t) if u is var)


def test_problem_generator_respects_single_F():
    gen = SmallProblems(seed=3)
    for _ in range(200):
        s, t = gen.problem()
        assert _occurrences(gen.F, s) + _occurrences(gen.F, t) <= 1


def test_unifiers_are_sound():
    gen = SmallProblems(seed=5)
    cfg = UnifConfig(check_soundness=True)
    for _ in range(500):
        s, t = gen.problem()
        for sigma in unifiers(s, t, cfg):
            assert sigma(s) is sigma(t), (s, t, sigma)


def test_every_ground_solution_is_covered():
    gen = SmallProblems(seed=20240521)
    solved = 0
    attempts = 0
    while solved < 500 and attempts < 20_000:
        attempts += 1
        s, t = gen.problem()
        names = sorted({v.name for v in s.fvars | t.fvars})
        solutions = [theta for theta in gen.groundings(names) if theta(s) is theta(t)]
        if not solutions:
            continue
        solved += 1
        found = unifiers(s, t)
        assert found, (s, t)
        for theta in solutions:
            covered = any(
                next(match_pairs([(sigma(mk_var(n, theta.terms[n].ty)), theta.terms[n]) for n in names], extended=True), None)
                is not None
                for sigma in found
            )
            assert covered, (s, t, theta, [str(u) for u in found])
    assert solved >= 500


def test_identical_terms_have_the_identity_unifier(sig, term):
    t = term("p @ X @ (f @ Y)", X=I, Y=I)
    first = next(u for u in csu(t, t) if u is not None)
    assert first.is_identity


def test_clash_and_occurs_check(sig, term):
    assert unifiers(term("f @ a"), term("g @ a")) == []
    X = mk_var("X", I)
    assert unifiers(X, sig.apply("f", X)) == []


def test_first_order_mgu(sig, term):
    X, Y = mk_var("X", I), mk_var("Y", I)
    s = sig.apply("p", X, sig.apply("f", Y))
    t = sig.apply("p", sig.apply("g", Y), sig.apply("f", sig.const("a")))
    found = unifiers(s, t)
    assert len(found) == 1
    sigma = found[0]
    assert sigma(X) is sig.apply("g", sig.const("a"))
    assert sigma(Y) is sig.const("a")


def test_pattern_fragment_is_solved_directly(sig):
    F = mk_var("F", II)
    # λx. F x = λx. p x a  gives F := λx. p x a
    s = mk_lam(I, mk_app(F, [mk_bound(0, I)]))
    t = mk_lam(I, sig.apply("p", mk_bound(0, I), sig.const("a")))
    found = unifiers(s, t)
    assert len(found) == 1
    assert found[0](F) is t


def test_flex_flex_pair_has_its_most_general_unifier(sig):
    y, z = mk_var("Yv", III), mk_var("Zv", III)
    a, b, c, d = (sig.const(n) for n in "abcd")
    s = mk_app(y, [a, b])
    t = mk_app(z, [c, d])
    found = unifiers(s, t, UnifConfig(fuel=2, max_unifiers=0, iteration=False))
    assert all(u(s) is u(t) for u in found)

    def is_mgu(sigma):
        zb = sigma(z)
        if not isinstance(zb, App) or not isinstance(zb.head, Var) or zb.args != (a, b):
            return False
        h = zb.head
        return sigma(y) is mk_lams([I, I], mk_app(h, [mk_bound(1, I), mk_bound(0, I), c, d]))

    assert any(is_mgu(u) for u in found), [str(u) for u in found]


def test_flex_rigid_enumerates_iterates(sig):
    Y = mk_var("Y", II)
    f = sig.const("f")
    s = sig.apply("f", mk_app(Y, [sig.const("a")]))
    t = mk_app(Y, [sig.apply("f", sig.const("a"))])
    found = [u(Y) for u in unifiers(s, t)]
    twice = mk_lam(I, sig.apply("f", sig.apply("f", mk_bound(0, I))))
    assert f in found
    assert twice in found
    assert mk_lam(I, mk_bound(0, I)) in found


def test_pragmatic_config_skips_flex_flex(sig):
    y, z = mk_var("Yv", III), mk_var("Zv", III)
    s = mk_app(y, [sig.const("a"), sig.const("b")])
    t = mk_app(z, [sig.const("c"), sig.const("d")])
    monitor = BoundMonitor()
    found = [u for u in csu(s, t, PRAGMATIC, monitor=monitor) if u is not None]
    assert all(u(s) is u(t) for u in found)
    assert "flex-flex" in monitor.reasons


def test_stream_reports_progress_and_fuel(sig):
    Y = mk_var("Y", II)
    s = sig.apply("f", mk_app(Y, [sig.const("a")]))
    t = mk_app(Y, [sig.apply("f", sig.const("a"))])
    monitor = BoundMonitor()
    items = list(csu(s, t, UnifConfig(fuel=2, progress_every=1), monitor=monitor))
    assert None in items
    assert monitor


def test_node_cap_is_logged_on_the_unify_logger(sig, caplog):
    Y = mk_var("Y", II)
    s = sig.apply("f", mk_app(Y, [sig.const("a")]))
    t = mk_app(Y, [sig.apply("f", sig.const("a"))])
    monitor = BoundMonitor()
    cfg = UnifConfig(fuel=50, max_unifiers=0, max_nodes=3, progress_every=1000)
    with caplog.at_level(logging.DEBUG, logger="lambdasup.unify"):
        list(csu(s, t, cfg, monitor=monitor))
    assert "nodes" in monitor.reasons
    assert any(r.name == "lambdasup.unify" and "gave up" in r.getMessage() for r in caplog.records)


def test_type_variables_are_unified(sig):
    A = TyVar("A")
    sig2 = Signature()
    sig2.declare("id", arrow(A, A), ["A"])
    sig2.declare("a", I)
    X = mk_var("X", A)
    s = mk_app(sig2.const("id", [A]), [X])
    t = mk_app(sig2.const("id", [I]), [sig2.const("a")])
    sigma = unify(s, t)
    assert sigma is not None
    assert sigma.types["A"] is I
    assert sigma(s) is t


def test_negative_fuel_is_rejected():
    with pytest.raises(ValueError):
        UnifConfig(fuel=-1)
