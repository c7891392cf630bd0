import pytest

from lambdasup.errors import TermTypeError
from lambdasup.terms import (
    App,
    Lam,
    Var,
    abstract_vars,
    eta_expand_to,
    is_fluid,
    mk_app,
    mk_bound,
    mk_lam,
    mk_var,
    strip_lams,
    subterms,
)
from lambdasup.types import arrow, arrows, iota

from conftest import II

I = iota()


def test_terms_are_hash_consed(sig):
    fa = mk_app(sig.const("f"), [sig.const("a")])
    assert fa is sig.apply("f", sig.const("a"))
    assert mk_var("X", I) is mk_var("X", I)
    assert mk_var("X", I) is not mk_var("X", II)


def test_application_is_type_checked(sig):
    with pytest.raises(TermTypeError):
        mk_app(sig.const("a"), [sig.const("b")])
    with pytest.raises(TermTypeError):
        mk_app(sig.const("k"), [sig.const("a")])


def test_application_flattens_spines(sig):
    ha = mk_app(sig.const("p"), [sig.const("a")])
    hab = mk_app(ha, [sig.const("b")])
    assert isinstance(hab, App)
    assert hab.head is sig.const("p")
    assert hab.args == (sig.const("a"), sig.const("b"))


def test_beta_reduction_on_construction(sig):
    # (λx. p x x) a  →  p a a
    body = mk_app(sig.const("p"), [mk_bound(0, I), mk_bound(0, I)])
    lam = mk_lam(I, body)
    assert mk_app(lam, [sig.const("a")]) is sig.apply("p", sig.const("a"), sig.const("a"))


def test_eta_reduction_on_construction(sig):
    # λx. f x  →  f
    assert mk_lam(I, mk_app(sig.const("f"), [mk_bound(0, I)])) is sig.const("f")
    # λx. p a x  →  p a
    assert mk_lam(I, mk_app(sig.const("p"), [sig.const("a"), mk_bound(0, I)])) is mk_app(sig.const("p"), [sig.const("a")])
    # λx. p x x stays
    assert isinstance(mk_lam(I, mk_app(sig.const("p"), [mk_bound(0, I), mk_bound(0, I)])), Lam)


def test_beta_reduction_through_nested_binders(sig):
    # (λx. k (λy. p x y)) a  →  k (p a)
    inner = mk_lam(I, mk_app(sig.const("p"), [mk_bound(1, I), mk_bound(0, I)]))
    outer = mk_lam(I, mk_app(sig.const("k"), [inner]))
    expected = sig.apply("k", mk_app(sig.const("p"), [sig.const("a")]))
    assert mk_app(outer, [sig.const("a")]) is expected


def test_cached_attributes(sig, term):
    t = term("p @ X @ (f @ Y)", X=I, Y=I)
    assert {v.name for v in t.fvars} == {"X", "Y"}
    assert t.size == 4
    assert not t.ground
    assert term("f @ a").ground
    assert t.ty is I


def test_fluid_terms(sig, term):
    F = mk_var("F", II)
    assert is_fluid(mk_app(F, [sig.const("a")]))
    assert not is_fluid(F)
    assert not is_fluid(term("f @ a"))
    open_lam = abstract_vars(mk_app(sig.const("p"), [mk_var("X", I), mk_var("Y", I)]), [mk_var("Y", I)])
    # λy. p X y η-reduces to p X, which is rigid
    assert not is_fluid(open_lam)
    body = mk_app(sig.const("p"), [mk_var("Y", I), mk_var("X", I)])
    assert is_fluid(abstract_vars(body, [mk_var("Y", I)]))


def test_abstract_vars_builds_closed_lambda(sig):
    x = mk_var("X", I)
    t = abstract_vars(mk_app(sig.const("p"), [x, x]), [x])
    assert isinstance(t, Lam)
    assert t.ground and t.loose == 0
    assert mk_app(t, [sig.const("b")]) is sig.apply("p", sig.const("b"), sig.const("b"))


def test_eta_expansion_view(sig):
    binders, body = eta_expand_to(sig.const("p"), 2)
    assert binders == [I, I]
    assert body is mk_app(sig.const("p"), [mk_bound(1, I), mk_bound(0, I)])


def test_strip_lams(sig):
    t = mk_lam(I, mk_lam(I, mk_app(sig.const("p"), [mk_bound(0, I), mk_bound(1, I)])))
    binders, body = strip_lams(t)
    assert binders == [I, I]
    assert body.loose == 2


def test_render_uses_thf_syntax(sig, term):
    assert str(term("f @ (g @ a)")) == "f @ (g @ a)"
    t = mk_lam(I, mk_app(sig.const("p"), [mk_bound(0, I), mk_bound(0, I)]))
    assert str(t) == "(^[Z0: $i]: p @ Z0 @ Z0)"


def test_parse_term_eta_reduces(sig, term):
    assert term("^[X: $i]: f @ X") is sig.const("f")
    assert term("^[X: $i]: p @ a @ X") is mk_app(sig.const("p"), [sig.const("a")])


def test_subterms_include_heads_and_bodies(sig, term):
    t = term("k @ (^[X: $i]: p @ X @ (f @ X))")
    found = list(subterms(t))
    assert sig.const("k") in found
    assert sig.const("f") in found
    assert any(isinstance(s, Lam) for s in found)


def test_polymorphic_constants(sig):
    from lambdasup.signature import DIFF

    d = sig.const(DIFF, [I, I])
    applied = mk_app(d, [sig.const("f"), sig.const("g")])
    assert applied.ty is I
    assert str(applied).startswith("diff{")
    assert not applied.tyvars
    assert isinstance(mk_var("Y", arrows([I], I)), Var)
