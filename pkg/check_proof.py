#!/usr/bin/env python3
"""Check a derivation listing printed with ``--proof``.

Every premise has to be listed before it is used, every rule has to be one
the prover knows, and the last line has to derive ``$false``.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Tuple

import pyparsing as pp

from lambdasup.report import KNOWN_RULES

pp.ParserElement.enablePackrat()


@dataclass
class ProofLine:
    id: int
    role: str
    clause: str
    rule: str
    premises: Tuple[int, ...]
    comment: str


def _grammar():
    LPAR, RPAR, LBRACK, RBRACK, COMMA, DOT = map(pp.Suppress, "()[],.")
    ident = pp.Regex(r"c(\d+)").setParseAction(lambda t: int(t[0][1:]))
    word = pp.Regex(r"[a-z_]+")
    rule = pp.Regex(r"[a-z_]+(\+[a-z_]+)*")
    clause = pp.originalTextFor(pp.nestedExpr("(", ")"))
    parents = pp.Group(LBRACK + pp.Optional(pp.delimitedList(ident)) + RBRACK)
    inference = (pp.Suppress(pp.Keyword("inference")) + LPAR + rule + COMMA
                 + pp.Suppress(LBRACK + pp.Keyword("status") + LPAR + word + RPAR + RBRACK) + COMMA + parents + RPAR)
    introduced = pp.Suppress(pp.Keyword("introduced")) + LPAR + rule + RPAR + pp.Group(pp.Empty())
    comment = pp.QuotedString("'", escChar="\\")
    line = (pp.Suppress(pp.Keyword("cnf")) + LPAR + ident + COMMA + word + COMMA + clause + COMMA
            + (inference | introduced) + COMMA + comment + RPAR + DOT)
    line.setParseAction(lambda t: ProofLine(t[0], t[1], t[2][1:-1].strip(), t[3], tuple(t[4]), t[5]))
    return line


LINE = _grammar()


def parse_listing(text: str) -> List[ProofLine]:
    out: List[ProofLine] = []
    for n, raw in enumerate(text.splitlines(), start=1):
        raw = raw.strip()
        if not raw or raw.startswith("%"):
            continue
        try:
            out.append(LINE.parseString(raw, parseAll=True)[0])
        except pp.ParseBaseException as e:
            raise ValueError(f"line {n}: {e.msg}") from None
    return out


def check(lines: List[ProofLine]) -> Optional[str]:
    """First problem found in the listing, or None when it is valid."""
    if not lines:
        return "empty listing"
    seen = set()
    for line in lines:
        if line.id in seen:
            return f"c{line.id} listed twice"
        for rule in line.rule.split("+"):
            if rule not in KNOWN_RULES:
                return f"c{line.id}: unknown rule {rule}"
        for p in line.premises:
            if p not in seen:
                return f"c{line.id}: premise c{p} not listed before"
        seen.add(line.id)
    if lines[-1].clause != "$false":
        return f"last clause c{lines[-1].id} is not $false"
    return None


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description="Check a lambdasup proof listing")
    parser.add_argument("file", nargs="?", help="listing to check (default: stdin)")
    args = parser.parse_args(argv)
    text = Path(args.file).read_text(encoding="utf-8") if args.file else sys.stdin.read()
    try:
        problem = check(parse_listing(text))
    except ValueError as e:
        problem = str(e)
    if problem:
        print(f"❌ {problem}")
        return 1
    print("✅ proof listing is well formed")
    return 0


if __name__ == "__main__":
    sys.exit(main())
