from lambdasup import booleans
from lambdasup.clauses import Clause, eq
from lambdasup.signature import Signature
from lambdasup.types import bool_type


def test_proxy_axiom_table():
    sig = Signature()
    axioms = booleans.proxy_axioms(sig)
    assert len(axioms) == 16
    assert {C.derivation.rule for C in axioms} == {"bool_axiom"}
    assert len({C.derivation.note for C in axioms}) == 16
    assert all(booleans.mentions_proxies(C) for C in axioms)
    with_choice = booleans.proxy_axioms(Signature(), with_choice=True)
    assert len(with_choice) == 17
    assert with_choice[-1].derivation.note == "choice"


def test_proxies_are_declared_once():
    sig = Signature()
    booleans.declare_proxies(sig)
    booleans.declare_proxies(sig)
    assert all(name in sig for name in booleans.PROXIES)
    assert booleans.is_proxy("$and")
    assert not booleans.is_proxy("and")


def test_connectives_are_normalised(sig):
    booleans.declare_proxies(sig)
    t, f = booleans.true(sig), booleans.false(sig)
    assert booleans.connective(sig, "<=", t, f) == sig.apply(booleans.IMPL, f, t)
    assert booleans.connective(sig, "~|", t, f) == booleans.negate(sig, sig.apply(booleans.OR, t, f))
    assert booleans.connective(sig, "&", t, f).ty is bool_type()


def test_quantifier_and_equality_builders(sig, term):
    booleans.declare_proxies(sig)
    body = booleans.equality(sig, term("f @ a"), term("a"))
    assert body.ty is bool_type()
    q = booleans.quantifier(sig, False, term("a").ty, body)
    assert q.ty is bool_type()
    assert q.head.name == booleans.FORALL


def test_axioms_only_when_formulas_occur_in_terms(sig):
    C = Clause((eq(sig.const("a"), sig.const("b")),))
    assert booleans.boolean_proxy_encode([C], sig, uses_booleans=False) == [C]
    encoded = booleans.boolean_proxy_encode([C], sig, uses_booleans=True)
    assert encoded[0] is C
    assert len(encoded) == 17
    assert not booleans.mentions_proxies(C)
