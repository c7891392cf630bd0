"""SZS status lines and TSTP-style derivation listings."""

from __future__ import annotations

from typing import List, Optional

from .clauses import Clause
from .saturation import ProverResult, Status

KNOWN_RULES = frozenset({
    "input", "axiom", "negated_conjecture", "ext_axiom", "bool_axiom", "ext_inst",
    "sup", "fluid_sup", "flex_sup", "dup_sup", "lambda_sup", "eres", "efact", "arg_cong",
    "neg_ext", "abs_sup", "abs_eres", "abs_efact", "simplify", "tautology", "demod",
    "prune_arg", "lambda_demod", "lambda_demod_ext", "subsumption",
})


def szs_status(result: ProverResult, has_conjecture: bool) -> str:
    """SZS status for ``result``.

    Saturation only counts as a model when the run was complete; otherwise
    the prover gave up.
    """
    if result.status is Status.UNSAT:
        return "Theorem" if has_conjecture else "Unsatisfiable"
    if result.status is Status.SATURATED:
        if result.complete:
            return "CounterSatisfiable" if has_conjecture else "Satisfiable"
        return "GaveUp"
    return "Timeout" if result.reason == "timeout" else "ResourceOut"


def role_of(C: Clause) -> str:
    rule = C.derivation.rule
    if rule == "negated_conjecture":
        return "negated_conjecture"
    if C.derivation.is_input or rule in ("ext_axiom", "bool_axiom"):
        return "axiom"
    return "plain"


def _quote(text: str) -> str:
    return "'" + text.replace("\\", "\\\\").replace("'", "\\'") + "'"


def proof_line(C: Clause) -> str:
    d = C.derivation
    if d.premises:
        parents = ", ".join(f"c{p}" for p in d.premises)
        source = f"inference({d.rule}, [status(thm)], [{parents}])"
    else:
        source = f"introduced({d.rule})"
    comment = d.subst or d.note
    return f"cnf(c{C.id}, {role_of(C)}, ({C}), {source}, {_quote(comment)})."


def proof_lines(result: ProverResult) -> List[str]:
    return [proof_line(C) for C in result.derivation()]


def report(result: ProverResult, problem_name: str = "", has_conjecture: bool = False,
           proof: bool = False, stats: bool = False) -> str:
    """Text printed by the CLI for one run.

    Args:
        result: outcome of the saturation loop
        problem_name: name echoed in the SZS lines
        has_conjecture: choose Theorem/CounterSatisfiable over Unsatisfiable/Satisfiable
        proof: append the derivation of the empty clause
        stats: append the loop counters as comment lines
    Returns:
        newline-terminated text
    """
    status = szs_status(result, has_conjecture)
    out = [f"% SZS status {status} for {problem_name}"]
    if result.bounds_hit and result.status is Status.SATURATED:
        out.append(f"% saturated with bounds hit: {', '.join(sorted(result.bounds_hit))}")
    if result.reason:
        out.append(f"% stopped: {result.reason}")
    if proof and result.empty_clause is not None:
        kind = "CNFRefutation"
        out.append(f"% SZS output start {kind} for {problem_name}")
        out.extend(proof_lines(result))
        out.append(f"% SZS output end {kind} for {problem_name}")
    if stats:
        out.extend(stats_lines(result))
    return "\n".join(out) + "\n"


def stats_lines(result: ProverResult) -> List[str]:
    s = result.stats
    lines = [
        f"% iterations: {s.iterations}",
        f"% generated: {s.generated}  simplified: {s.simplified}  deleted: {s.deleted}",
        f"% streams: {s.streams_created} created, {s.streams_exhausted} exhausted, {s.unif_markers} markers",
        f"% passive peak: {s.passive_peak}",
        f"% elapsed: {s.elapsed:.3f}s",
    ]
    for rule, n in sorted(s.inferences.items()):
        lines.append(f"% inferences {rule}: {n}")
    return lines


def exit_code(status: Optional[str]) -> int:
    """0 for a refutation, 1 for gave up or a model, 2 for resources, 3 for errors."""
    if status in ("Theorem", "Unsatisfiable"):
        return 0
    if status in ("GaveUp", "Satisfiable", "CounterSatisfiable"):
        return 1
    if status in ("Timeout", "ResourceOut", "MemoryOut"):
        return 2
    return 3
