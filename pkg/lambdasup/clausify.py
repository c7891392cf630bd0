"""From a parsed TPTP problem to clauses.

``Elaborator`` types the syntax tree against a signature: declared symbols
keep their declarations, undeclared ones are declared from the types of
their arguments.  Formulas nested inside terms become Boolean proxy terms.
The outer formula skeleton goes through the usual pipeline: negate the
conjecture, negation normal form, Skolemization, distribution into clauses.
Skolem symbols take the enclosing universal variables as arguments and the
free type variables as type arguments.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from . import booleans
from .clauses import Clause, Derivation, Literal
from .errors import ClausifyError, TermTypeError, UnsupportedInputError
from .signature import Signature
from .subst import Substitution
from .terms import Term, Var, fresh_name, fresh_var, mk_app, mk_bound, mk_lam, mk_var
from .tptp import (
    CONNECTIVES, Application, ArrowType, BinOp, ForallType, Name, ProblemAST, Quantified, Statement,
    TypeName, TypeNode, TypeVariable, Unary, Variable, parse_file, parse_tptp,
)
from .types import BOOL, IOTA, TyCon, TyVar, Type, TypeDecl, arrows, base, bool_type, iota

logger = logging.getLogger("lambdasup.clausify")

MAX_CLAUSES = 20000
TTYPE = "$tType"


# -- formula IR ------------------------------------------------------------------------

@dataclass(frozen=True)
class Lit:
    literal: Literal


@dataclass(frozen=True)
class Top:
    value: bool


@dataclass(frozen=True)
class Not:
    arg: "Formula"


@dataclass(frozen=True)
class Junction:
    conjunctive: bool
    parts: Tuple["Formula", ...]


@dataclass(frozen=True)
class Iff:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Quant:
    universal: bool
    variables: Tuple[Var, ...]
    body: "Formula"


@dataclass(frozen=True)
class TypeQuant:
    universal: bool
    names: Tuple[str, ...]
    body: "Formula"


Formula = Union[Lit, Top, Not, Junction, Iff, Quant, TypeQuant]


def conj(*parts: Formula) -> Formula:
    return Junction(True, parts)


def disj(*parts: Formula) -> Formula:
    return Junction(False, parts)


def implies(a: Formula, b: Formula) -> Formula:
    return disj(Not(a), b)


def _subst_formula(f: Formula, sigma: Substitution) -> Formula:
    if isinstance(f, Lit):
        return Lit(f.literal.apply_subst(sigma))
    if isinstance(f, Top):
        return f
    if isinstance(f, Not):
        return Not(_subst_formula(f.arg, sigma))
    if isinstance(f, Junction):
        return Junction(f.conjunctive, tuple(_subst_formula(p, sigma) for p in f.parts))
    if isinstance(f, Iff):
        return Iff(_subst_formula(f.left, sigma), _subst_formula(f.right, sigma))
    if isinstance(f, Quant):
        vs = tuple(mk_var(v.name, sigma.apply_type(v.ty)) for v in f.variables)
        return Quant(f.universal, vs, _subst_formula(f.body, sigma))
    return TypeQuant(f.universal, f.names, _subst_formula(f.body, sigma))


def free_term_vars(f: Formula) -> FrozenSet[Var]:
    if isinstance(f, Lit):
        return f.literal.fvars
    if isinstance(f, Top):
        return frozenset()
    if isinstance(f, Not):
        return free_term_vars(f.arg)
    if isinstance(f, Junction):
        out: FrozenSet[Var] = frozenset()
        for p in f.parts:
            out |= free_term_vars(p)
        return out
    if isinstance(f, Iff):
        return free_term_vars(f.left) | free_term_vars(f.right)
    if isinstance(f, Quant):
        return free_term_vars(f.body) - set(f.variables)
    return free_term_vars(f.body)


def free_type_vars(f: Formula) -> FrozenSet[str]:
    if isinstance(f, Lit):
        return f.literal.tyvars
    if isinstance(f, Top):
        return frozenset()
    if isinstance(f, Not):
        return free_type_vars(f.arg)
    if isinstance(f, Junction):
        out: FrozenSet[str] = frozenset()
        for p in f.parts:
            out |= free_type_vars(p)
        return out
    if isinstance(f, Iff):
        return free_type_vars(f.left) | free_type_vars(f.right)
    if isinstance(f, Quant):
        out = free_type_vars(f.body)
        for v in f.variables:
            out |= v.ty.tyvars
        return out
    return free_type_vars(f.body) - set(f.names)


# -- elaboration -----------------------------------------------------------------------

@dataclass
class _Scope:
    """Names visible while elaborating one statement.

    ``bound`` holds term-level binders as (name, type) outermost first;
    ``outer`` maps formula-level variables to their ``Var``.
    """

    outer: Dict[str, Var] = field(default_factory=dict)
    bound: List[Tuple[str, Type]] = field(default_factory=list)
    tyvars: Dict[str, TyVar] = field(default_factory=dict)
    implicit: Dict[str, Var] = field(default_factory=dict)
    close_free: bool = True

    def lookup_bound(self, name: str) -> Optional[Term]:
        for k in range(len(self.bound) - 1, -1, -1):
            if self.bound[k][0] == name:
                return mk_bound(len(self.bound) - 1 - k, self.bound[k][1])
        return None


class Elaborator:
    """Types TPTP syntax trees against a signature.

    Args:
        sig: signature to read and extend
        strict: refuse undeclared symbols instead of declaring them
    """

    def __init__(self, sig: Signature, strict: bool = False):
        self.sig = sig
        self.strict = strict
        self.uses_booleans = False

    # types

    def declare(self, stmt: Statement) -> None:
        ty = stmt.type
        if isinstance(ty, TypeName) and ty.name == TTYPE:
            self.sig.declare_type(stmt.symbol, 0)
            return
        if isinstance(ty, ArrowType) and _is_ttype(ty.result) and all(_is_ttype(a) for a in ty.args):
            self.sig.declare_type(stmt.symbol, len(ty.args))
            return
        if isinstance(ty, ForallType):
            scope = {n: TyVar(n) for n in ty.variables}
            self.sig.declare(stmt.symbol, TypeDecl(tuple(ty.variables), self.type_of(ty.body, scope)))
            return
        if stmt.symbol in (booleans.TRUE, booleans.FALSE):
            raise ClausifyError(f"{stmt.symbol} cannot be redeclared")
        self.sig.declare(stmt.symbol, TypeDecl((), self.type_of(ty, {})))

    def type_of(self, node: TypeNode, scope: Mapping[str, TyVar]) -> Type:
        if isinstance(node, TypeName):
            if node.name == IOTA and not node.args:
                return iota()
            if node.name == BOOL and not node.args:
                self.sig.declare_type(BOOL, 0)
                return bool_type()
            if node.name in ("$int", "$rat", "$real"):
                raise UnsupportedInputError(f"arithmetic type {node.name} is not supported")
            args = [self.type_of(a, scope) for a in node.args]
            if self.strict and node.name not in self.sig.type_constructors:
                raise TermTypeError(f"undeclared type {node.name}")
            self.sig.declare_type(node.name, len(args))
            return TyCon(node.name, args)
        if isinstance(node, TypeVariable):
            if node.name not in scope:
                raise TermTypeError(f"type variable {node.name} is not bound")
            return scope[node.name]
        if isinstance(node, ArrowType):
            return arrows([self.type_of(a, scope) for a in node.args], self.type_of(node.result, scope))
        raise UnsupportedInputError("type quantifiers are only supported at the top of a declaration")

    def _type_from_term(self, node, scope: _Scope) -> Type:
        """Explicit type argument written in term position, as in ``f @ $i @ X``."""
        if isinstance(node, Name):
            return self.type_of(TypeName(node.text), scope.tyvars)
        if isinstance(node, Variable):
            if node.name not in scope.tyvars:
                raise TermTypeError(f"{node.name} is not a type variable")
            return scope.tyvars[node.name]
        if isinstance(node, Application) and isinstance(node.head, Name):
            return TyCon(node.head.text, [self._type_from_term(a, scope) for a in node.args])
        if isinstance(node, ArrowType):
            return self.type_of(node, scope.tyvars)
        raise TermTypeError(f"expected a type argument, got {node}")

    def _binder_type(self, var, scope: _Scope) -> Type:
        return iota() if var.type is None else self.type_of(var.type, scope.tyvars)

    # terms

    def term(self, node, scope: _Scope, expected: Optional[Type] = None) -> Term:
        if isinstance(node, Variable):
            return self._variable(node.name, scope, expected, ())
        if isinstance(node, Name):
            return self._symbol(node.text, (), scope, expected)
        if isinstance(node, Application):
            if isinstance(node.head, Name):
                return self._symbol(node.head.text, node.args, scope, expected)
            if isinstance(node.head, Variable) and not self._known_variable(node.head.name, scope):
                args = [self.term(a, scope) for a in node.args]
                head = self._variable(node.head.name, scope, None, [a.ty for a in args], expected)
                return self._apply(head, args)
            head = self.term(node.head, scope)
            return self._apply(head, self._args(node.args, head.ty, scope))
        if isinstance(node, Unary):
            self.uses_booleans = True
            return booleans.negate(self.sig, self.term(node.arg, scope, bool_type()))
        if isinstance(node, BinOp):
            return self._binop(node, scope)
        if isinstance(node, Quantified):
            return self._binder(node, scope, expected)
        raise UnsupportedInputError(f"unsupported term {node}")

    def term_from_text(self, node, variables: Mapping[str, object]) -> Term:
        scope = _Scope(close_free=False)
        for name, v in variables.items():
            scope.outer[name] = v if isinstance(v, Var) else mk_var(name, v)  # type: ignore[arg-type]
        return self.term(node, scope)

    def _known_variable(self, name: str, scope: _Scope) -> bool:
        return scope.lookup_bound(name) is not None or name in scope.outer or name in scope.implicit

    def _variable(self, name: str, scope: _Scope, expected: Optional[Type], arg_types: Sequence[Type] = (),
                  result: Optional[Type] = None) -> Term:
        found = scope.lookup_bound(name)
        if found is not None:
            return found
        if name in scope.outer:
            return scope.outer[name]
        if name in scope.implicit:
            return scope.implicit[name]
        if not scope.close_free:
            raise TermTypeError(f"unknown variable {name}")
        ty = expected if expected is not None else arrows(arg_types, result or iota())
        v = fresh_var(ty, "X")
        scope.implicit[name] = v
        return v

    def _args(self, nodes, head_ty: Type, scope: _Scope) -> List[Term]:
        doms, _ = head_ty.split(len(nodes))
        return [self.term(n, scope, doms[i] if i < len(doms) else None) for i, n in enumerate(nodes)]

    def _apply(self, head: Term, args: Sequence[Term]) -> Term:
        try:
            return mk_app(head, list(args))
        except TermTypeError as e:
            raise TermTypeError(f"ill-typed application of {head}: {e}") from None

    def _symbol(self, name: str, arg_nodes, scope: _Scope, expected: Optional[Type]) -> Term:
        if name in (booleans.TRUE, booleans.FALSE):
            self.uses_booleans = True
            booleans.declare_proxies(self.sig)
            return self.sig.const(name)
        if name.startswith('"'):
            if name not in self.sig:
                self.sig.declare(name, TypeDecl((), iota()))
        if name in self.sig:
            decl = self.sig.decl(name)
            k = decl.arity
            if len(arg_nodes) < k:
                raise TermTypeError(f"{name} needs {k} type arguments")
            tyargs = [self._type_from_term(n, scope) for n in arg_nodes[:k]]
            head = self.sig.const(name, tyargs)
            return self._apply(head, self._args(arg_nodes[k:], head.ty, scope))
        if self.strict:
            raise TermTypeError(f"undeclared symbol {name}")
        args = [self.term(n, scope) for n in arg_nodes]
        result = expected or iota()
        decl = TypeDecl((), arrows([a.ty for a in args], result))
        if decl.body.tyvars:
            decl = TypeDecl(tuple(sorted(decl.body.tyvars)), decl.body)
        self.sig.declare(name, decl)
        logger.debug("auto-declared %s: %s", name, decl)
        head = self.sig.const(name, [TyVar(n) for n in decl.vars])
        return self._apply(head, args)

    def _binop(self, node: BinOp, scope: _Scope) -> Term:
        self.uses_booleans = True
        booleans.declare_proxies(self.sig)
        if node.op in ("=", "!="):
            left = self.term(node.left, scope)
            right = self.term(node.right, scope, left.ty)
            out = booleans.equality(self.sig, left, right)
            return out if node.op == "=" else booleans.negate(self.sig, out)
        o = bool_type()
        return booleans.connective(self.sig, node.op, self.term(node.left, scope, o), self.term(node.right, scope, o))

    def _binder(self, node: Quantified, scope: _Scope, expected: Optional[Type]) -> Term:
        q = node.quantifier
        if q in ("!>", "?*"):
            raise UnsupportedInputError("type quantifiers below the formula skeleton are not supported")
        if q == "@-":
            raise UnsupportedInputError("definite description is not supported")
        if q != "^":
            self.uses_booleans = True
            booleans.declare_proxies(self.sig)
        types = [self._binder_type(v, scope) for v in node.variables]
        if q == "^" and expected is not None:
            doms, _ = expected.split(len(types))
            for i, v in enumerate(node.variables):
                if v.type is None and i < len(doms):
                    types[i] = doms[i]
        for v, ty in zip(node.variables, types):
            scope.bound.append((v.name, ty))
        try:
            body = self.term(node.body, scope, None if q == "^" else bool_type())
        finally:
            del scope.bound[len(scope.bound) - len(types):]
        for ty in reversed(types):
            if q == "^":
                body = mk_lam(ty, body)
            elif q == "@+":
                body = booleans.choice(self.sig, ty, body)
            else:
                body = booleans.quantifier(self.sig, q == "?", ty, body)
        return body

    # formulas

    def formula(self, node, scope: _Scope) -> Formula:
        if isinstance(node, BinOp) and node.op in CONNECTIVES:
            a, b = self.formula(node.left, scope), self.formula(node.right, scope)
            op = node.op
            if op == "&":
                return conj(a, b)
            if op == "|":
                return disj(a, b)
            if op == "=>":
                return implies(a, b)
            if op == "<=":
                return implies(b, a)
            if op == "<=>":
                return Iff(a, b)
            if op == "<~>":
                return Not(Iff(a, b))
            if op == "~&":
                return Not(conj(a, b))
            return Not(disj(a, b))
        if isinstance(node, Unary):
            return Not(self.formula(node.arg, scope))
        if isinstance(node, BinOp) and node.op in ("=", "!="):
            left = self.term(node.left, scope)
            right = self.term(node.right, scope, left.ty)
            if left.ty is bool_type():
                self.uses_booleans = True
            return Lit(Literal(left, right, node.op == "="))
        if isinstance(node, Quantified) and node.quantifier in ("!", "?"):
            variables = []
            saved = dict(scope.outer)
            for v in node.variables:
                var = fresh_var(self._binder_type(v, scope), "X")
                scope.outer[v.name] = var
                variables.append(var)
            try:
                body = self.formula(node.body, scope)
            finally:
                scope.outer = saved
            return Quant(node.quantifier == "!", tuple(variables), body)
        if isinstance(node, Quantified) and node.quantifier in ("!>", "?*"):
            saved_ty = dict(scope.tyvars)
            names = []
            for v in node.variables:
                name = fresh_name("T")
                scope.tyvars[v.name] = TyVar(name)
                names.append(name)
            try:
                body = self.formula(node.body, scope)
            finally:
                scope.tyvars = saved_ty
            return TypeQuant(node.quantifier == "!>", tuple(names), body)
        if isinstance(node, Name) and node.text in (booleans.TRUE, booleans.FALSE):
            return Top(node.text == booleans.TRUE)
        atom = self.term(node, scope, bool_type())
        if atom.ty is not bool_type():
            raise TermTypeError(f"formula {atom} has type {atom.ty!r}, expected $o")
        return Lit(Literal(atom, self._true(), True))

    def _true(self) -> Term:
        booleans.declare_proxies(self.sig)
        return self.sig.const(booleans.TRUE)

    def statement(self, stmt: Statement) -> Formula:
        scope = _Scope()
        f = self.formula(stmt.formula, scope)
        if scope.implicit:
            f = Quant(True, tuple(scope.implicit.values()), f)
        return f


def _is_ttype(node) -> bool:
    return isinstance(node, TypeName) and node.name == TTYPE


# -- normal forms --------------------------------------------------------------------

def nnf(f: Formula, positive: bool = True) -> Formula:
    """Negation normal form; ``Iff`` is expanded by polarity."""
    if isinstance(f, Lit):
        lit = f.literal
        return f if positive else Lit(Literal(lit.lhs, lit.rhs, not lit.positive))
    if isinstance(f, Top):
        return Top(f.value == positive)
    if isinstance(f, Not):
        return nnf(f.arg, not positive)
    if isinstance(f, Junction):
        return Junction(f.conjunctive == positive, tuple(nnf(p, positive) for p in f.parts))
    if isinstance(f, Iff):
        if positive:
            return conj(disj(nnf(f.left, False), nnf(f.right, True)), disj(nnf(f.left, True), nnf(f.right, False)))
        return conj(disj(nnf(f.left, True), nnf(f.right, True)), disj(nnf(f.left, False), nnf(f.right, False)))
    if isinstance(f, Quant):
        return Quant(f.universal == positive, f.variables, nnf(f.body, positive))
    return TypeQuant(f.universal == positive, f.names, nnf(f.body, positive))


class Skolemizer:
    """Replaces existentials in an NNF formula and drops universal quantifiers."""

    def __init__(self, sig: Signature):
        self.sig = sig
        self.symbols: List[str] = []

    def __call__(self, f: Formula) -> Formula:
        return self._go(f, ())

    def _go(self, f: Formula, universals: Tuple[Var, ...]) -> Formula:
        if isinstance(f, (Lit, Top)):
            return f
        if isinstance(f, Junction):
            return Junction(f.conjunctive, tuple(self._go(p, universals) for p in f.parts))
        if isinstance(f, TypeQuant):
            if f.universal:
                return self._go(f.body, universals)
            sigma = Substitution({n: self._type_skolem() for n in f.names}, {})
            return self._go(_subst_formula(f.body, sigma), universals)
        if isinstance(f, Quant):
            if f.universal:
                fresh = {v.name: fresh_var(v.ty, "X") for v in f.variables}
                body = _subst_formula(f.body, Substitution({}, fresh))
                return self._go(body, universals + tuple(fresh.values()))
            free = free_term_vars(f)
            deps = tuple(u for u in universals if u in free)
            binding: Dict[str, Term] = {}
            for v in f.variables:
                binding[v.name] = self._skolem(deps, v.ty)
            return self._go(_subst_formula(f.body, Substitution({}, binding)), universals)
        raise ClausifyError(f"formula not in negation normal form: {f}")

    def _skolem(self, deps: Sequence[Var], ty: Type) -> Term:
        body = arrows([u.ty for u in deps], ty)
        names = tuple(sorted(body.tyvars))
        name = self.sig.fresh_symbol("sk", TypeDecl(names, body))
        self.symbols.append(name)
        return self.sig.apply(name, *deps, tyargs=[TyVar(n) for n in names])

    def _type_skolem(self) -> Type:
        n = len(self.sig.type_constructors)
        while f"sktype{n}" in self.sig.type_constructors:
            n += 1
        name = f"sktype{n}"
        self.sig.declare_type(name, 0)
        return base(name)


def cnf(f: Formula, limit: int = MAX_CLAUSES) -> List[Tuple[Literal, ...]]:
    """Distribute a quantifier-free NNF formula into clauses."""
    if isinstance(f, Lit):
        return [(f.literal,)]
    if isinstance(f, Top):
        return [] if f.value else [()]
    if isinstance(f, Junction):
        if f.conjunctive:
            out: List[Tuple[Literal, ...]] = []
            for p in f.parts:
                out.extend(cnf(p, limit))
                if len(out) > limit:
                    raise ClausifyError(f"clausal form exceeds {limit} clauses")
            return out
        acc: List[Tuple[Literal, ...]] = [()]
        for p in f.parts:
            part = cnf(p, limit)
            if len(acc) * len(part) > limit:
                raise ClausifyError(f"clausal form exceeds {limit} clauses")
            acc = [a + b for a, b in itertools.product(acc, part)]
        return acc
    raise ClausifyError(f"unexpected formula in clausal conversion: {f}")


# -- problems ----------------------------------------------------------------------------

@dataclass
class Problem:
    clauses: List[Clause]
    sig: Signature
    has_conjecture: bool = False
    uses_booleans: bool = False
    name: str = ""
    skolems: List[str] = field(default_factory=list)

    @property
    def is_first_order(self) -> bool:
        from .saturation import is_first_order
        return is_first_order(self.clauses)


def clausify_formula(f: Formula, sig: Signature, skolemizer: Optional[Skolemizer] = None) -> List[Tuple[Literal, ...]]:
    skolemizer = skolemizer or Skolemizer(sig)
    return cnf(skolemizer(nnf(f)))


def clausify(ast: ProblemAST, sig: Optional[Signature] = None, with_choice: bool = False, name: str = "") -> Problem:
    """Clauses of ``ast``: axioms as given, conjectures conjoined and negated.

    Returns:
        Problem with the clause list (proxy axioms included when formulas
        occur inside terms) and the signature
    Raises:
        ClausifyError, TermTypeError, UnsupportedInputError
    """
    sig = sig or Signature()
    elab = Elaborator(sig)
    for stmt in ast.declarations:
        elab.declare(stmt)
    skolemizer = Skolemizer(sig)
    clauses: List[Clause] = []
    conjectures: List[Tuple[Statement, Formula]] = []
    for stmt in ast.formulas:
        f = elab.statement(stmt)
        if stmt.role == "conjecture":
            conjectures.append((stmt, f))
            continue
        rule = "negated_conjecture" if stmt.role == "negated_conjecture" else "input"
        for lits in clausify_formula(f, sig, skolemizer):
            clauses.append(Clause(lits, derivation=Derivation(rule, note=stmt.name)))
    if conjectures:
        goal = conj(*(f for _, f in conjectures)) if len(conjectures) > 1 else conjectures[0][1]
        note = ",".join(s.name for s, _ in conjectures)
        for lits in clausify_formula(Not(goal), sig, skolemizer):
            clauses.append(Clause(lits, derivation=Derivation("negated_conjecture", note=note)))
    clauses = booleans.boolean_proxy_encode(clauses, sig, elab.uses_booleans, with_choice)
    logger.debug("%d clauses, %d Skolem symbols", len(clauses), len(skolemizer.symbols))
    return Problem(clauses, sig, bool(conjectures), elab.uses_booleans, name, skolemizer.symbols)


def load_problem(path: Union[str, Path], with_choice: bool = False) -> Problem:
    path = Path(path)
    return clausify(parse_file(path), with_choice=with_choice, name=path.stem)


def problem_from_text(text: str, with_choice: bool = False, name: str = "") -> Problem:
    return clausify(parse_tptp(text), with_choice=with_choice, name=name)
