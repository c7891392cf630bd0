import pytest

from lambdasup.errors import PositionError, TermTypeError
from lambdasup.positions import (
    BODY,
    deep_vars,
    green_positions,
    green_subterm_at,
    green_subterms,
    is_green_path,
    occurs_deeply,
    orange_subterm_at,
    orange_subterms,
    replace_green,
    replace_orange,
)
from lambdasup.terms import Lam, mk_app, mk_bound, mk_lam, mk_var
from lambdasup.types import iota

from conftest import II

I = iota()


def test_green_positions_stop_at_applied_variables(sig):
    F = mk_var("F", II)
    t = sig.apply("p", mk_app(F, [sig.const("a")]), sig.apply("f", sig.const("b")))
    positions = list(green_positions(t))
    assert positions == [(), (1,), (2,), (2, 1)]
    assert green_subterm_at(t, (2, 1)) is sig.const("b")
    with pytest.raises(PositionError):
        green_subterm_at(t, (1, 1))


def test_green_positions_stop_at_lambdas(sig, term):
    t = term("k @ (^[X: $i]: p @ X @ a)")
    assert [p for p, _ in green_subterms(t)] == [(), (1,)]
    assert isinstance(green_subterm_at(t, (1,)), Lam)


def test_replace_green_renormalises(sig, term):
    t = term("p @ (f @ a) @ b")
    assert replace_green(t, (1, 1), sig.const("c")) is term("p @ (f @ c) @ b")
    assert replace_green(t, (), sig.const("d")) is sig.const("d")
    with pytest.raises(TermTypeError):
        replace_green(t, (1,), sig.const("f"))
    with pytest.raises(PositionError):
        replace_green(t, (3,), sig.const("a"))


def test_orange_positions_cross_lambdas_and_variable_arguments(sig, term):
    F = mk_var("F", II)
    lam = term("^[X: $i]: p @ X @ (f @ a)")
    t = mk_app(sig.const("k"), [lam])
    found = {pos: (binders, sub) for binders, sub, pos in orange_subterms(t)}
    assert (1, BODY, 2, 1) in found
    binders, sub = found[(1, BODY, 2, 1)]
    assert binders == (I,)
    assert sub is sig.const("a")
    assert found[(1, BODY, 1)][1] is mk_bound(0, I)
    applied = mk_app(F, [sig.apply("f", sig.const("a"))])
    assert (1, 1) in {pos for _, _, pos in orange_subterms(applied)}


def test_replace_orange_under_binder(sig, term):
    t = term("k @ (^[X: $i]: p @ X @ (f @ a))")
    replaced = replace_orange(t, (1, BODY, 2, 1), sig.const("b"))
    assert replaced is term("k @ (^[X: $i]: p @ X @ (f @ b))")
    assert orange_subterm_at(replaced, (1, BODY, 2, 1)) is sig.const("b")
    with pytest.raises(PositionError):
        orange_subterm_at(t, (BODY,))


def test_replacing_the_bound_occurrence_can_eta_reduce(sig, term):
    t = term("k @ (^[X: $i]: p @ X @ X)")
    # p X X  →  p a X, and λX. p a X is η-reduced to p a
    assert replace_orange(t, (1, BODY, 1), sig.const("a")) is mk_app(sig.const("k"), [mk_app(sig.const("p"), [sig.const("a")])])


def test_green_path(sig, term):
    t = term("k @ (^[X: $i]: f @ (g @ X))")
    assert is_green_path((1,), t)
    assert not is_green_path((1, BODY), t)


def test_deep_occurrences(sig):
    X = mk_var("X", I)
    Y = mk_var("Y", I)
    F = mk_var("F", II)
    under_lambda = mk_app(sig.const("k"), [mk_app(sig.const("p"), [X])])
    assert "X" not in deep_vars(under_lambda)
    lam_body = mk_app(sig.const("p"), [mk_bound(0, I), Y])
    with_binder = mk_app(sig.const("k"), [mk_lam(I, lam_body)])
    assert "Y" in deep_vars(with_binder)
    in_argument = mk_app(F, [X])
    assert "X" in deep_vars(in_argument)
    assert occurs_deeply(X, [sig.apply("f", sig.const("a")), in_argument])
    assert not occurs_deeply("Y", [in_argument])
