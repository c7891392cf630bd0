from lambdasup.clauses import Clause, Literal, eq, neq, rename_apart, variant_key
from lambdasup.subst import Substitution
from lambdasup.terms import Lam, abstract_vars, mk_app, mk_bound, mk_lam, mk_var
from lambdasup.types import TyVar, arrow, iota

from conftest import II

I = iota()


def test_application_beta_reduces(sig):
    F = mk_var("F", II)
    X = mk_var("X", I)
    t = mk_app(F, [sig.const("a")])
    lam = abstract_vars(mk_app(sig.const("p"), [X, X]), [X])
    assert Substitution({}, {"F": lam})(t) is sig.apply("p", sig.const("a"), sig.const("a"))


def test_application_is_capture_avoiding(sig):
    # λy. p y X with X := a stays a λ over the same bound variable
    X = mk_var("X", I)
    t = mk_lam(I, mk_app(sig.const("p"), [mk_bound(0, I), X]))
    out = Substitution({}, {"X": sig.const("a")})(t)
    assert isinstance(out, Lam)
    assert out.body is mk_app(sig.const("p"), [mk_bound(0, I), sig.const("a")])


def test_application_can_eta_reduce(sig):
    X = mk_var("X", I)
    t = mk_lam(I, mk_app(sig.const("p"), [X, mk_bound(0, I)]))
    assert t is mk_app(sig.const("p"), [X])
    G = mk_var("G", II)
    lam = mk_lam(I, mk_app(G, [mk_app(sig.const("f"), [mk_bound(0, I)])]))
    assert Substitution({}, {"G": mk_lam(I, mk_bound(0, I))})(lam) is sig.const("f")


def test_type_substitution_reaches_variables_and_constants():
    from lambdasup.signature import DIFF, Signature

    sig = Signature()
    a, b = TyVar("A"), TyVar("B")
    Y = mk_var("Y", arrow(a, b))
    d = mk_app(sig.const(DIFF, [a, b]), [Y, Y])
    sigma = Substitution({"A": I, "B": I}, {})
    out = sigma(d)
    assert not out.tyvars
    assert out.ty is I
    assert mk_var("Y", II) in out.fvars


def test_compose_applies_left_then_right(sig):
    X = mk_var("X", I)
    Y = mk_var("Y", I)
    first = Substitution({}, {"X": mk_app(sig.const("f"), [Y])})
    second = Substitution({}, {"Y": sig.const("a")})
    both = first.compose(second)
    assert both(X) is sig.apply("f", sig.const("a"))
    assert both(Y) is sig.const("a")
    assert both(X) is second(first(X))


def test_restrict_and_identity(sig):
    sigma = Substitution({}, {"X": sig.const("a"), "Y": sig.const("b")})
    assert set(sigma.restrict(["X"]).terms) == {"X"}
    assert Substitution.identity().is_identity
    assert sigma.bind(mk_var("Z", I), sig.const("c")).terms["Z"] is sig.const("c")


def test_literals_are_unordered_pairs(sig):
    a, b = sig.const("a"), sig.const("b")
    assert eq(a, b) == eq(b, a)
    assert eq(a, b) != neq(a, b)
    assert hash(eq(a, b)) == hash(eq(b, a))


def test_clause_is_a_multiset(sig):
    a, b = sig.const("a"), sig.const("b")
    c = Clause((eq(a, b), eq(b, a)))
    assert len(c) == 2
    assert c.literal_multiset()[eq(a, b)] == 2
    assert str(Clause(())) == "$false"
    assert str(Clause((neq(a, b),))) == "(a != b)"


def test_rename_apart_gives_fresh_variants(sig):
    X = mk_var("X", I)
    c = Clause((eq(mk_app(sig.const("f"), [X]), X),), id=7)
    renamed = rename_apart(c)
    assert renamed.id == 7
    assert not (renamed.fnames & c.fnames)
    assert variant_key(renamed.literals) == variant_key(c.literals)


def test_variant_key_ignores_literal_order_and_names(sig):
    X, Y = mk_var("X", I), mk_var("Y", I)
    fX = mk_app(sig.const("f"), [X])
    fY = mk_app(sig.const("f"), [Y])
    one = (eq(fX, sig.const("a")), neq(X, sig.const("b")))
    two = (neq(Y, sig.const("b")), eq(sig.const("a"), fY))
    assert variant_key(one) == variant_key(two)
    assert variant_key(one) != variant_key((eq(fX, sig.const("b")), neq(X, sig.const("b"))))


def test_literal_type_mismatch_is_rejected(sig):
    import pytest

    from lambdasup.errors import TermTypeError

    with pytest.raises(TermTypeError):
        Literal(sig.const("a"), sig.const("f"))
