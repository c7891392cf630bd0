"""TPTP reader: cnf, fof, tff and a thf subset.

The grammar builds a small syntax tree; typing, Booleans and clausal form
are handled in ``clausify``.  Arithmetic and tuples are rejected.
"""

from __future__ import annotations

import logging
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

import pyparsing as pp

from .config import tptp_root
from .errors import TptpSyntaxError, UnsupportedInputError

logger = logging.getLogger("lambdasup.tptp")

pp.ParserElement.enablePackrat()


# -- syntax tree -------------------------------------------------------------------

@dataclass(frozen=True)
class Name:
    text: str


@dataclass(frozen=True)
class Variable:
    name: str


@dataclass(frozen=True)
class Number:
    text: str


@dataclass(frozen=True)
class Application:
    head: "Node"
    args: Tuple["Node", ...]


@dataclass(frozen=True)
class Unary:
    op: str
    arg: "Node"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class TypedVar:
    name: str
    type: Optional["TypeNode"] = None


@dataclass(frozen=True)
class Quantified:
    """``! ? ^`` and friends; ``!>`` quantifies over types."""

    quantifier: str
    variables: Tuple[TypedVar, ...]
    body: "Node"


@dataclass(frozen=True)
class TypeName:
    name: str
    args: Tuple["TypeNode", ...] = ()


@dataclass(frozen=True)
class TypeVariable:
    name: str


@dataclass(frozen=True)
class ArrowType:
    args: Tuple["TypeNode", ...]
    result: "TypeNode"


@dataclass(frozen=True)
class ForallType:
    variables: Tuple[str, ...]
    body: "TypeNode"


Node = Union[Name, Variable, Number, Application, Unary, BinOp, Quantified]
TypeNode = Union[TypeName, TypeVariable, ArrowType, ForallType]

CONNECTIVES = ("&", "|", "=>", "<=", "<=>", "<~>", "~&", "~|")
FORMULA_ROLES = (
    "axiom", "hypothesis", "definition", "assumption", "lemma", "theorem",
    "corollary", "conjecture", "negated_conjecture", "plain", "unknown",
)


@dataclass(frozen=True)
class Statement:
    lang: str
    name: str
    role: str
    formula: Optional[Node] = None
    symbol: Optional[str] = None
    type: Optional[TypeNode] = None

    @property
    def is_type_decl(self) -> bool:
        return self.symbol is not None


@dataclass
class ProblemAST:
    statements: List[Statement] = field(default_factory=list)
    includes: List[str] = field(default_factory=list)
    source: str = ""

    @property
    def declarations(self) -> List[Statement]:
        return [s for s in self.statements if s.is_type_decl]

    @property
    def formulas(self) -> List[Statement]:
        return [s for s in self.statements if not s.is_type_decl]

    @property
    def has_conjecture(self) -> bool:
        return any(s.role == "conjecture" for s in self.statements)


# -- grammar -----------------------------------------------------------------------

def _fold_binary(tokens):
    items = tokens[0]
    node = items[0]
    for i in range(1, len(items), 2):
        op, rhs = items[i], items[i + 1]
        if op == "@":
            if isinstance(node, Application):
                node = Application(node.head, node.args + (rhs,))
            else:
                node = Application(node, (rhs,))
        else:
            node = BinOp(op, node, rhs)
    return node


def _fold_prefix(tokens):
    items = list(tokens[0])
    node = items[-1]
    for op in reversed(items[:-1]):
        if isinstance(op, str):
            node = Unary(op, node)
        else:
            quantifier, variables = op[0], tuple(op[1:])
            node = Quantified(quantifier, variables, node)
    return node


def _build_arrow(tokens):
    parts = list(tokens)
    if len(parts) == 1:
        return parts[0]
    result = parts[-1]
    for part in reversed(parts[:-1]):
        args = part.args if isinstance(part, _Product) else (part,)
        result = ArrowType(tuple(args), result)
    return result


@dataclass(frozen=True)
class _Product:
    args: Tuple[TypeNode, ...]


@dataclass(frozen=True)
class _Decl:
    symbol: str
    type: TypeNode


@dataclass(frozen=True)
class _Include:
    path: str


def _build_product(tokens):
    parts = tuple(tokens)
    return parts[0] if len(parts) == 1 else _Product(parts)


def _make_grammar():
    LPAR, RPAR, LBRACK, RBRACK, COMMA, COLON, DOT = map(pp.Suppress, "()[],:.")
    lower_word = pp.Regex(r"[a-z][A-Za-z0-9_]*")
    upper_word = pp.Regex(r"[A-Z][A-Za-z0-9_]*")
    dollar_word = pp.Regex(r"\$\$?[a-z][A-Za-z0-9_]*")
    single_quoted = pp.QuotedString("'", escChar="\\")
    distinct = pp.QuotedString('"', escChar="\\").setParseAction(lambda t: '"' + t[0] + '"')
    number = pp.Regex(r"[+-]?\d+(\.\d+)?([eE][+-]?\d+)?(/\d+)?")
    atomic_word = lower_word | single_quoted

    # types
    type_expr = pp.Forward()
    type_args = LPAR + pp.delimitedList(type_expr) + RPAR
    type_name = (dollar_word | atomic_word) + pp.Optional(type_args)
    type_name.setParseAction(lambda t: TypeName(t[0], tuple(t[1:])))
    type_var = upper_word.copy().setParseAction(lambda t: TypeVariable(t[0]))
    type_atom = type_name | type_var | (LPAR + type_expr + RPAR)
    product = (type_atom + pp.ZeroOrMore(pp.Suppress("*") + type_atom)).setParseAction(_build_product)
    arrow = (product + pp.ZeroOrMore(pp.Suppress(">") + product)).setParseAction(_build_arrow)
    type_binder = (pp.Suppress("!>") + LBRACK + pp.delimitedList(upper_word + pp.Suppress(pp.Optional(COLON + dollar_word)))
                   + RBRACK + COLON + type_expr)
    type_binder.setParseAction(lambda t: ForallType(tuple(t[:-1]), t[-1]))
    type_expr <<= type_binder | arrow

    # terms and formulas
    expr = pp.Forward()
    typed_var = (upper_word + pp.Optional(COLON + type_expr)).setParseAction(
        lambda t: TypedVar(t[0], t[1] if len(t) > 1 else None))
    var_list = LBRACK + pp.delimitedList(typed_var) + RBRACK
    binder_op = pp.Regex(r"!>|\?\*|@\+|@-|!(?!=)|\?|\^")
    binder = pp.Group(binder_op + var_list + COLON)

    fof_args = LPAR + pp.delimitedList(expr) + RPAR
    functor = (atomic_word | dollar_word | distinct) + pp.Optional(pp.Group(fof_args))

    def functor_action(t):
        head = Name(t[0])
        return Application(head, tuple(t[1])) if len(t) > 1 else head

    functor.setParseAction(functor_action)
    variable = upper_word.copy().setParseAction(lambda t: Variable(t[0]))
    numeral = number.copy().setParseAction(lambda t: Number(t[0]))
    # explicit type argument of arrow type, as in q @ ($i > $i) @ Y
    arrow_operand = (LPAR + product + pp.OneOrMore(pp.Suppress(">") + product) + RPAR).setParseAction(_build_arrow)
    operand = functor | variable | numeral | arrow_operand | (LPAR + expr + RPAR)

    left = pp.opAssoc.LEFT
    expr <<= pp.infixNotation(operand, [
        (pp.Regex(r"@(?![+-])"), 2, left, _fold_binary),
        (pp.Regex(r"=(?!>)|!="), 2, left, _fold_binary),
        (binder | pp.Regex(r"~(?![&|])"), 1, pp.opAssoc.RIGHT, _fold_prefix),
        (pp.Regex(r"~&|&"), 2, left, _fold_binary),
        (pp.Regex(r"~\||\|"), 2, left, _fold_binary),
        (pp.Regex(r"<=>|<~>|=>|<="), 2, left, _fold_binary),
    ])

    general = pp.Forward()
    general_atom = pp.Regex(r"[^()\[\],'\"]+") | single_quoted | distinct
    general <<= pp.OneOrMore(general_atom | (LPAR + pp.Optional(pp.delimitedList(general)) + RPAR)
                             | (LBRACK + pp.Optional(pp.delimitedList(general)) + RBRACK))
    annotations = pp.Suppress(COMMA + pp.delimitedList(general))

    decl_core = (atomic_word | dollar_word) + COLON + type_expr
    type_decl = decl_core | (LPAR + decl_core + RPAR)
    type_decl.setParseAction(lambda t: _Decl(t[0], t[1]))

    name = atomic_word | pp.Regex(r"\d+")
    lang = pp.oneOf("thf tff fof cnf")
    role = lower_word + pp.Optional(pp.Suppress(pp.Literal("-") + general))

    def statement_action(t):
        lang_, name_, role_, body = t[0], t[1], t[2], t[3]
        if isinstance(body, _Decl):
            return Statement(lang_, name_, role_, symbol=body.symbol, type=body.type)
        return Statement(lang_, name_, role_, formula=body)

    statement = (lang + LPAR + name + COMMA + role + COMMA + (type_decl | expr) + pp.Optional(annotations) + RPAR + DOT)
    statement.setParseAction(statement_action)

    include = (pp.Suppress(pp.Keyword("include")) + LPAR + single_quoted
               + pp.Suppress(pp.Optional(COMMA + LBRACK + pp.Optional(pp.delimitedList(name)) + RBRACK)) + RPAR + DOT)
    include.setParseAction(lambda t: _Include(t[0]))

    tptp_file = pp.ZeroOrMore(include | statement)
    comment = pp.Regex(r"%.*") | pp.cStyleComment
    tptp_file.ignore(comment)
    expr.ignore(comment)
    type_expr.ignore(comment)
    return tptp_file, expr, type_expr


_FILE, _EXPR, _TYPE = _make_grammar()


def _syntax_error(e: pp.ParseBaseException, what: str) -> TptpSyntaxError:
    return TptpSyntaxError(f"cannot parse {what}: {e.msg}", e.lineno, e.col)


def _reject_arithmetic(node) -> None:
    stack = [node]
    while stack:
        n = stack.pop()
        if isinstance(n, Number):
            raise UnsupportedInputError(f"arithmetic is not supported (number {n.text})")
        if isinstance(n, Application):
            stack.append(n.head)
            stack.extend(n.args)
        elif isinstance(n, Unary):
            stack.append(n.arg)
        elif isinstance(n, BinOp):
            stack.extend((n.left, n.right))
        elif isinstance(n, Quantified):
            stack.append(n.body)


def parse_tptp(text: str, base_dir: Optional[str] = None, _seen: Optional[set] = None) -> ProblemAST:
    """Parse a TPTP problem, following ``include`` directives.

    Args:
        text: problem text
        base_dir: directory tried first when resolving includes
    Returns:
        ProblemAST with the statements of all included files in order
    Raises:
        TptpSyntaxError on malformed input, UnsupportedInputError on arithmetic
    """
    try:
        items = _FILE.parseString(text, parseAll=True)
    except pp.ParseBaseException as e:
        raise _syntax_error(e, "problem") from None
    seen = _seen if _seen is not None else set()
    ast = ProblemAST(source=text)
    for item in items:
        if isinstance(item, _Include):
            path = resolve_include(item.path, base_dir)
            ast.includes.append(str(path))
            if str(path) in seen:
                continue
            seen.add(str(path))
            logger.debug("including %s", path)
            sub = parse_tptp(path.read_text(encoding="utf-8"), str(path.parent), seen)
            ast.statements.extend(sub.statements)
            ast.includes.extend(sub.includes)
            continue
        if item.role not in FORMULA_ROLES and item.role != "type":
            raise TptpSyntaxError(f"unknown role {item.role!r} in {item.name}")
        if item.formula is not None:
            _reject_arithmetic(item.formula)
        ast.statements.append(item)
    return ast


def parse_file(path: Union[str, Path]) -> ProblemAST:
    path = Path(path)
    return parse_tptp(path.read_text(encoding="utf-8"), str(path.parent))


def resolve_include(name: str, base_dir: Optional[str] = None) -> Path:
    candidates = []
    if base_dir:
        candidates.append(Path(base_dir) / name)
    root = tptp_root()
    if root:
        candidates.append(Path(root) / name)
    candidates.append(Path(os.getcwd()) / name)
    for c in candidates:
        if c.is_file():
            return c
    raise TptpSyntaxError(f"include file {name!r} not found (set LAMBDASUP_TPTP)")


def parse_expr(text: str) -> Node:
    try:
        node = _EXPR.parseString(text, parseAll=True)[0]
    except pp.ParseBaseException as e:
        raise _syntax_error(e, "term") from None
    _reject_arithmetic(node)
    return node


def parse_type(text: str) -> TypeNode:
    try:
        return _TYPE.parseString(text, parseAll=True)[0]
    except pp.ParseBaseException as e:
        raise _syntax_error(e, "type") from None


def parse_term(text: str, sig, variables: Optional[Dict[str, object]] = None):
    """Parse one THF-style term, e.g. ``f @ (g @ a)`` or ``^[X:$i]: (f @ X)``.

    ``variables`` maps free variable names to their ``Var`` (or to a type, in
    which case a variable of that name is created).  Undeclared symbols are
    an error.
    """
    from .clausify import Elaborator

    return Elaborator(sig, strict=True).term_from_text(parse_expr(text), variables or {})


# -- printing ------------------------------------------------------------------------

def print_type(t: TypeNode) -> str:
    if isinstance(t, TypeName):
        return t.name if not t.args else f"{t.name}({', '.join(print_type(a) for a in t.args)})"
    if isinstance(t, TypeVariable):
        return t.name
    if isinstance(t, ArrowType):
        if len(t.args) == 1:
            return f"({print_type(t.args[0])} > {print_type(t.result)})"
        return f"(({' * '.join(print_type(a) for a in t.args)}) > {print_type(t.result)})"
    return f"(!>[{', '.join(v + ': $tType' for v in t.variables)}]: {print_type(t.body)})"


def _print_name(text: str) -> str:
    if text.startswith("$") or text.startswith('"') or (text[:1].islower() and text.replace("_", "a").isalnum()):
        return text
    return "'" + text.replace("\\", "\\\\").replace("'", "\\'") + "'"


def print_node(n: Node) -> str:
    """Fully parenthesised text that parses back to the same tree."""
    if isinstance(n, Name):
        return _print_name(n.text)
    if isinstance(n, Variable):
        return n.name
    if isinstance(n, Number):
        return n.text
    if isinstance(n, ArrowType):
        return print_type(n)
    if isinstance(n, Application):
        if isinstance(n.head, Name):
            return f"{_print_name(n.head.text)}({', '.join(print_node(a) for a in n.args)})"
        return "(" + " @ ".join([print_node(n.head)] + [print_node(a) for a in n.args]) + ")"
    if isinstance(n, Unary):
        return f"(~ {print_node(n.arg)})"
    if isinstance(n, BinOp):
        return f"({print_node(n.left)} {n.op} {print_node(n.right)})"
    vs = ", ".join(v.name if v.type is None else f"{v.name}: {print_type(v.type)}" for v in n.variables)
    return f"({n.quantifier} [{vs}] : {print_node(n.body)})"


def print_statement(s: Statement) -> str:
    if s.is_type_decl:
        return f"{s.lang}({s.name}, type, {_print_name(s.symbol)}: {print_type(s.type)})."
    return f"{s.lang}({s.name}, {s.role}, {print_node(s.formula)})."


def print_problem(ast: ProblemAST) -> str:
    return "\n".join(print_statement(s) for s in ast.statements) + "\n"
