import pytest

from lambdasup.encodings import FOApp, FOVar, decode_F, encode_F, encode_O, may_eta_reduce
from lambdasup.errors import EncodingError
from lambdasup.positions import green_subterms
from lambdasup.terms import Lam, mk_app, mk_bound, mk_lam, mk_var
from lambdasup.types import iota

from conftest import II

I = iota()


def test_F_encoding_preserves_green_positions(ground_terms):
    for _ in range(2000):
        t = ground_terms.iota()
        encoded = encode_F(t)
        assert [p for p, _ in green_subterms(t)] == [p for p, _ in encoded.subterm_positions()]
        assert decode_F(encoded, ground_terms.sig) is t


def test_F_encoding_indexes_symbols_by_argument_count(sig):
    partial = encode_F(mk_app(sig.const("p"), [sig.const("a")]))
    full = encode_F(sig.apply("p", sig.const("a"), sig.const("b")))
    assert partial.sym != full.sym
    assert partial.sym[-1] == 1 and full.sym[-1] == 2


def test_F_encoding_turns_lambdas_into_constants(sig, term):
    lam = term("^[X: $i]: p @ X @ X")
    encoded = encode_F(sig.apply("k", lam))
    assert encoded.args[0].sym == ("lam", lam)
    assert encoded.args[0].args == ()


def test_F_encoding_rejects_open_terms(sig):
    with pytest.raises(EncodingError):
        encode_F(mk_app(sig.const("f"), [mk_var("X", I)]))
    with pytest.raises(EncodingError):
        decode_F(FOApp(("F", "f", (), 2), (encode_F(sig.const("a")),)), sig)


def test_O_encoding_hides_fluid_terms_behind_variables(sig):
    F = mk_var("F", II)
    Fa = mk_app(F, [sig.const("a")])
    encoded = encode_O(sig.apply("p", Fa, Fa))
    assert isinstance(encoded, FOApp)
    left, right = encoded.args
    assert isinstance(left, FOVar) and left == right
    assert encode_O(mk_app(F, [sig.const("b")])) != left


def test_O_encoding_keeps_bound_variables_as_symbols(sig):
    lam = mk_lam(I, mk_app(sig.const("p"), [mk_bound(0, I), mk_bound(0, I)]))
    encoded = encode_O(lam)
    assert encoded.sym == ("lam",)
    body = encoded.args[1]
    assert body.sym == ("f", "p", 2)
    assert body.args[0].sym == ("db", 0, 0)


def test_lambdas_that_may_eta_reduce_are_opaque(sig):
    F = mk_var("F", II)
    lam = mk_lam(I, mk_app(sig.const("p"), [sig.const("a"), mk_app(F, [mk_bound(0, I)])]))
    assert isinstance(lam, Lam)
    assert may_eta_reduce(lam)
    assert isinstance(encode_O(lam), FOVar)
    rigid = mk_lam(I, mk_app(sig.const("p"), [mk_var("X", I), mk_app(sig.const("f"), [mk_bound(0, I)])]))
    assert not may_eta_reduce(rigid)
    assert isinstance(encode_O(rigid), FOApp)
