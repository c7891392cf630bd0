import pytest

from lambdasup.calculus import InferenceContext
from lambdasup.clauses import Clause, eq, neq
from lambdasup.index import FeatureIndex, TopSymbolIndex, index_green
from lambdasup.order import TermOrder
from lambdasup.simplify import (
    Simplifier,
    cleanup,
    deletion_order,
    demodulate,
    derivation_for,
    is_tautology,
    is_variant,
    oriented,
    strictly_subsumes,
    subsumes,
    subsumption_deletes,
    unit_lookup,
)
from lambdasup.terms import mk_app, mk_bound, mk_lam, mk_var
from lambdasup.types import arrows, iota

I = iota()


@pytest.fixture
def ctx(sig):
    return InferenceContext(TermOrder(), sig)


def _units(*clauses):
    index = TopSymbolIndex()
    for unit in clauses:
        for l, _ in oriented(unit):
            index.insert(l, unit)
    return index


def _kept(*clauses):
    index = FeatureIndex()
    for C in clauses:
        index.insert(C)
    return index


def test_subsumption_instantiates_the_smaller_clause(sig):
    X = mk_var("X", I)
    a, b, c, d = (sig.const(n) for n in "abcd")
    C = Clause((eq(sig.apply("f", X), a),))
    D = Clause((eq(a, sig.apply("f", b)), neq(c, d)))
    assert subsumes(C, D)
    assert not subsumes(D, C)
    assert strictly_subsumes(C, D)


def test_subsumption_is_multiset_based(sig):
    X, Y = mk_var("X", I), mk_var("Y", I)
    a, b = sig.const("a"), sig.const("b")
    C = Clause((eq(sig.apply("f", X), a), eq(sig.apply("f", Y), a)))
    D = Clause((eq(sig.apply("f", b), a),))
    assert not subsumes(C, D)
    assert subsumes(Clause((eq(a, b), eq(a, b))), Clause((eq(a, b), eq(b, a), neq(a, a))))
    assert not subsumes(Clause((eq(a, b), eq(a, b))), Clause((eq(a, b),)))


def test_subsumption_through_higher_order_patterns(sig, term):
    F = mk_var("F", arrows([I], I))
    pattern = Clause((eq(mk_app(sig.const("k"), [mk_lam(I, mk_app(F, [mk_bound(0, I)]))]), sig.const("a")),))
    target = Clause((eq(term("k @ (^[X: $i]: p @ X @ X)"), sig.const("a")),))
    assert subsumes(pattern, target)


def test_deletion_order_breaks_ties_by_variable_count(sig):
    X, Y = mk_var("X", I), mk_var("Y", I)
    a = sig.const("a")
    fewer = Clause((eq(sig.apply("p", X, X), a),))
    more = Clause((eq(sig.apply("p", X, Y), a),))
    assert deletion_order(fewer, more)
    assert not deletion_order(more, fewer)
    longer = Clause((eq(sig.apply("p", X, Y), a), neq(a, sig.const("b"))))
    assert deletion_order(longer, more)


def test_variants_are_deleted_but_not_strictly_subsumed(sig):
    X, Y = mk_var("X", I), mk_var("Y", I)
    C = Clause((eq(sig.apply("f", X), sig.const("a")),), id=1)
    D = Clause((eq(sig.apply("f", Y), sig.const("a")),), id=2)
    assert is_variant(C, D)
    assert not deletion_order(C, D)
    assert subsumption_deletes(D, C)
    assert not strictly_subsumes(C, D)


def test_tautologies(sig):
    a, b = sig.const("a"), sig.const("b")
    assert is_tautology(Clause((eq(a, a),)))
    assert is_tautology(Clause((eq(a, b), neq(b, a))))
    assert not is_tautology(Clause((eq(a, b), neq(a, a))))


def test_cleanup_drops_trivial_and_duplicate_literals(sig):
    a, b = sig.const("a"), sig.const("b")
    assert cleanup((neq(a, a), eq(a, b), eq(b, a))) == (eq(a, b),)


def test_demodulation_rewrites_green_subterms(sig, ctx):
    X = mk_var("X", I)
    a, b, c, d = (sig.const(n) for n in "abcd")
    unit = Clause((eq(sig.apply("f", X), a),), id=1)
    C = Clause((eq(sig.apply("p", sig.apply("f", b), c), d),), id=2)
    new, used = demodulate(ctx, C, unit_lookup([unit]))
    assert used == [1]
    assert new.literals == (eq(sig.apply("p", a, c), d),)


def test_demodulation_never_uses_a_rule_right_to_left(sig, ctx):
    X = mk_var("X", I)
    unit = Clause((eq(sig.apply("f", X), sig.const("a")),), id=1)
    C = Clause((eq(sig.apply("g", sig.const("a")), sig.const("d")),), id=2)
    new, used = demodulate(ctx, C, unit_lookup([unit]))
    assert used == []
    assert new is C


def test_forward_simplification_deletes_tautologies_and_subsumed(sig, ctx):
    X = mk_var("X", I)
    a, b, c, d = (sig.const(n) for n in "abcd")
    simp = Simplifier(ctx)
    gone = simp.forward(Clause((eq(a, a), neq(b, c)), id=5), _units(), _kept())
    assert gone.deleted and gone.rules == ["tautology"]
    D = Clause((eq(sig.apply("f", X), a),), id=1)
    C = Clause((eq(sig.apply("f", b), a), neq(c, d)), id=2)
    res = simp.forward(C, _units(), _kept(D))
    assert res.deleted
    assert res.premises == [1]
    assert res.rules == ["subsumption"]


def test_forward_simplification_demodulates_and_records_premises(sig, ctx):
    X = mk_var("X", I)
    a, b, c, d = (sig.const(n) for n in "abcd")
    unit = Clause((eq(sig.apply("f", X), a),), id=1)
    C = Clause((eq(sig.apply("p", sig.apply("f", b), c), d), neq(a, a)), id=2)
    res = Simplifier(ctx).forward(C, _units(unit), _kept())
    assert not res.deleted and res.changed
    assert res.clause.literals == (eq(sig.apply("p", a, c), d),)
    assert res.rules == ["simplify", "demod"]
    derivation = derivation_for(res, C)
    assert derivation.rule == "simplify+demod"
    assert derivation.premises == (2, 1)


def test_forward_simplification_prunes_arguments(sig, ctx):
    Y = mk_var("Y", arrows([I, I, I], I))
    a, b, d = sig.const("a"), sig.const("b"), sig.const("d")
    C = Clause((eq(mk_app(Y, [a, b, sig.apply("p", b, a)]), mk_app(Y, [b, d, sig.apply("p", d, b)])),), id=3)
    res = Simplifier(ctx, prune=True).forward(C, _units(), _kept())
    assert "prune_arg" in res.rules
    assert res.clause.size < C.size
    assert Simplifier(ctx, prune=False).forward(C, _units(), _kept()).clause is C


def test_forward_lambda_demodulation_emits_the_bridge(sig, ctx):
    X = mk_var("X", I)
    unit = Clause((eq(sig.apply("p", X, X), sig.apply("g", X)),), id=1)
    inner = mk_lam(I, sig.apply("h", sig.apply("p", mk_bound(0, I), mk_bound(0, I))))
    C = Clause((eq(sig.apply("k", inner), sig.const("c")),), id=2)
    res = Simplifier(ctx, lambda_demod="ext").forward(C, _units(unit), _kept())
    assert "lambda_demod_ext" in res.rules
    assert len(res.side) == 1
    assert Simplifier(ctx).forward(C, _units(unit), _kept()).clause is C


def test_backward_simplification(sig, ctx):
    X = mk_var("X", I)
    a, b, c, d = (sig.const(n) for n in "abcd")
    unit = Clause((eq(sig.apply("f", X), a),), id=1)
    subsumed = Clause((eq(sig.apply("f", b), a), neq(c, d)), id=2)
    rewritable = Clause((eq(sig.apply("p", sig.apply("f", b), c), d),), id=3)
    green = TopSymbolIndex()
    index_green(green, rewritable, rewritable)
    deleted, rewritten = Simplifier(ctx).backward(unit, _kept(subsumed, rewritable), green)
    assert deleted == [subsumed]
    assert len(rewritten) == 1
    old, new = rewritten[0]
    assert old is rewritable
    assert new.literals == (eq(sig.apply("p", a, c), d),)
