import random
import sys
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parents[1]
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))

from lambdasup.signature import Signature
from lambdasup.terms import abstract_vars, fresh_var, mk_app, mk_var
from lambdasup.tptp import parse_term
from lambdasup.types import arrow, arrows, iota

I = iota()
II = arrow(I, I)

PROBLEMS = ROOT / "problems"


def make_signature() -> Signature:
    """a, b, c, d : $i; f, g, h : $i > $i; p : $i > $i > $i; k : ($i > $i) > $i."""
    sig = Signature()
    for name in ("a", "b", "c", "d"):
        sig.declare(name, I)
    for name in ("f", "g", "h"):
        sig.declare(name, II)
    sig.declare("p", arrows([I, I], I))
    sig.declare("k", arrow(II, I))
    return sig


@pytest.fixture
def sig():
    return make_signature()


@pytest.fixture
def term(sig):
    """``term("f @ X", X=I)`` parses against the shared signature."""

    def parse(text, **variables):
        return parse_term(text, sig, variables)

    return parse


class GroundTerms:
    """Random ground terms over a six-symbol signature, depth at most ``depth``.

    Symbols: a, b : $i; f : $i > $i; h : $i > $i > $i; k : ($i > $i) > $i;
    and the λ-abstractions the generator builds for ``k``'s argument.
    """

    def __init__(self, seed: int, depth: int = 5):
        self.rng = random.Random(seed)
        self.depth = depth
        self.sig = Signature()
        for name in ("a", "b"):
            self.sig.declare(name, I)
        self.sig.declare("f", II)
        self.sig.declare("g", II)
        self.sig.declare("h", arrows([I, I], I))
        self.sig.declare("k", arrow(II, I))
        self._x = mk_var("_lam_x", I)

    def const(self, name):
        return self.sig.const(name)

    def iota(self, depth=None, leaves=()):
        depth = self.depth if depth is None else depth
        rng = self.rng
        if depth <= 1 or rng.random() < 0.25:
            pool = ["a", "b"] + list(leaves)
            pick = rng.choice(pool)
            return self.const(pick) if isinstance(pick, str) else pick
        kind = rng.choice(("f", "g", "h", "k"))
        if kind in ("f", "g"):
            return mk_app(self.const(kind), [self.iota(depth - 1, leaves)])
        if kind == "h":
            return mk_app(self.const("h"), [self.iota(depth - 1, leaves), self.iota(depth - 1, leaves)])
        return mk_app(self.const("k"), [self.function(depth - 1, leaves)])

    def function(self, depth=None, leaves=()):
        """A closed term of type $i > $i."""
        depth = self.depth if depth is None else depth
        rng = self.rng
        roll = rng.random()
        if depth <= 1 or roll < 0.3:
            return self.const(rng.choice(("f", "g")))
        if roll < 0.5:
            return mk_app(self.const("h"), [self.iota(depth - 1, leaves)])
        body = self.iota(depth - 1, tuple(leaves) + (self._x,))
        return abstract_vars(body, [self._x])


class OpenTerms(GroundTerms):
    """Like ``GroundTerms`` but with variables X, Y : $i and F : $i > $i."""

    def __init__(self, seed: int, depth: int = 4):
        super().__init__(seed, depth)
        self.X = mk_var("X", I)
        self.Y = mk_var("Y", I)
        self.F = mk_var("F", II)

    def open_iota(self, depth=None):
        depth = self.depth if depth is None else depth
        rng = self.rng
        roll = rng.random()
        if depth <= 1 or roll < 0.2:
            return rng.choice([self.X, self.Y, self.const("a"), self.const("b")])
        if roll < 0.35:
            return mk_app(self.F, [self.open_iota(depth - 1)])
        kind = rng.choice(("f", "g", "h"))
        if kind == "h":
            return mk_app(self.const("h"), [self.open_iota(depth - 1), self.open_iota(depth - 1)])
        return mk_app(self.const(kind), [self.open_iota(depth - 1)])


@pytest.fixture
def ground_terms():
    return GroundTerms(seed=20240521)


def fresh_iota_var(prefix="X"):
    return fresh_var(I, prefix)
