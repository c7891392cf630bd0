#!/usr/bin/env python3
"""
Batch prover: read a TPTP problem, saturate, print the SZS status.

Exit codes: 0 theorem/unsatisfiable, 1 gave up or satisfiable,
2 timeout/resource out, 3 input or internal error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import replace
from pathlib import Path
from typing import Any, Dict, Optional, Sequence

from lambdasup import LambdaSupError, Problem, ProverConfig, load_problem, problem_from_text, saturate
from lambdasup.config import MODES, env_log_level, env_timeout
from lambdasup.order import DEFAULT_PARAMS
from lambdasup.report import exit_code, proof_lines, report, szs_status

logger = logging.getLogger("lambdasup.cli")


class _Parser(argparse.ArgumentParser):
    """Usage errors exit with 3 like every other input error."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(3, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="lambdasup", description="Higher-order superposition prover for TPTP problems")
    p.add_argument("file", help="TPTP problem file (cnf, fof, tff or thf)")
    p.add_argument("--mode", choices=MODES, default="full", help="rule preset (default: full)")
    p.add_argument("--timeout", type=float, default=None, help="seconds (default: $LAMBDASUP_TIMEOUT or 30)")
    p.add_argument("--proof", action="store_true", help="print the refutation")
    p.add_argument("--stats", action="store_true", help="print loop counters")
    p.add_argument("--order", choices=("kbo", "lpo"), default="kbo", help="ground order underlying the term order")
    p.add_argument("--select", dest="selection", choices=("none", "max-neg"), default="none", help="literal selection")
    p.add_argument("--max-clauses", type=int, default=0, help="stop after generating this many clauses (0 = no limit)")
    p.add_argument("--max-iterations", type=int, default=0, help="stop after this many given clauses (0 = no limit)")
    p.add_argument("--age-weight-ratio", type=int, default=4, help="weight picks per age pick")
    p.add_argument("--stream-budget", type=int, default=256, help="cap on the per-visit stream budget")
    p.add_argument("--memory-limit", type=int, default=0, help="MB of resident memory (0 = off)")
    p.add_argument("--unif-fuel", type=int, default=None, help="binding steps per unification branch (default: preset)")
    p.add_argument("--max-unifiers", type=int, default=None, help="unifiers per stream, 0 = no cap (default: preset)")
    p.add_argument("--no-flex-flex", action="store_true", help="leave flex-flex pairs unsolved (gives up completeness)")
    p.add_argument("--log-level", default=None, help="DEBUG, INFO, WARNING (default: $LAMBDASUP_LOG_LEVEL)")

    p.add_argument("--abs", action="store_true", help="enable the Abs rules")
    p.add_argument("--ext-inst", action="store_true", help="enable ExtInst")
    p.add_argument("--lambda-sup", nargs="?", type=int, const=1024, default=0, metavar="N",
                   help="enable λSup with a budget of N Skolem introductions (default 1024)")
    p.add_argument("--dup-sup", action="store_true", help="enable DupSup")
    p.add_argument("--flex-sup", action="store_true", help="enable FlexSup")
    p.add_argument("--lambda-demod", nargs="?", choices=("plain", "ext"), const="plain", default="off",
                   help="enable λDemod; 'ext' adds the extensionality side clause")
    p.add_argument("--choice", action="store_true", help="add the choice axiom when Booleans are used")

    for flag, help_on in (
        ("prune-arg", "PruneArg simplification"),
        ("neg-ext", "NegExt inference"),
        ("ext-axiom", "the extensionality axiom"),
        ("fluid-sup", "FluidSup inference"),
    ):
        group = p.add_mutually_exclusive_group()
        dest = flag.replace("-", "_")
        group.add_argument(f"--{flag}", dest=dest, action="store_true", default=None, help=f"enable {help_on}")
        group.add_argument(f"--no-{flag}", dest=dest, action="store_false", help=f"disable {help_on}")
    return p


def config_from_args(args: argparse.Namespace) -> ProverConfig:
    overrides: Dict[str, Any] = {
        "order": replace(DEFAULT_PARAMS, algorithm=args.order),
        "selection": args.selection,
        "timeout": args.timeout if args.timeout is not None else env_timeout(),
        "max_clauses": args.max_clauses,
        "max_iterations": args.max_iterations,
        "memory_limit_mb": args.memory_limit,
        "weight_ratio": args.age_weight_ratio,
        "stream_budget_cap": args.stream_budget,
        "abs_rules": args.abs,
        "ext_inst": args.ext_inst,
        "lambda_sup": args.lambda_sup,
        "dup_sup": args.dup_sup,
        "lambda_demod": args.lambda_demod,
        "choice": args.choice,
    }
    if args.flex_sup:
        overrides["flex_sup"] = True
    for name in ("prune_arg", "neg_ext", "ext_axiom", "fluid_sup"):
        value = getattr(args, name)
        if value is not None:
            overrides[name] = value
    config = ProverConfig.for_mode(args.mode, **overrides)
    unif: Dict[str, Any] = {}
    if args.unif_fuel is not None:
        unif["fuel"] = args.unif_fuel
    if args.max_unifiers is not None:
        unif["max_unifiers"] = args.max_unifiers
    if args.no_flex_flex:
        unif["flex_flex"] = False
    return replace(config, unif=replace(config.unif, **unif)) if unif else config


def prove(problem: Problem, config: ProverConfig, proof: bool = False, stats: bool = False) -> Dict[str, Any]:
    """Saturate ``problem`` and package the outcome.

    Returns:
        Dict with the SZS status, the report text, the proof lines (or None),
        the loop counters and the exit code
    """
    logger.info("proving %s in mode %s (%d clauses)", problem.name or "<text>", config.describe(), len(problem.clauses))
    result = saturate(problem.clauses, problem.sig, config)
    status = szs_status(result, problem.has_conjecture)
    return {
        "status": status,
        "text": report(result, problem.name, problem.has_conjecture, proof=proof, stats=stats),
        "proof": "\n".join(proof_lines(result)) if proof and result.is_unsat else None,
        "stats": result.stats.as_dict(),
        "rules_used": sorted(result.rules_used()),
        "bounds_hit": sorted(result.bounds_hit),
        "exit_code": exit_code(status),
    }


def prove_text(text: str, config: ProverConfig, name: str = "problem", proof: bool = False) -> Dict[str, Any]:
    return prove(problem_from_text(text, with_choice=config.choice, name=name), config, proof=proof)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    level = (args.log_level or env_log_level()).upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING), format="%(asctime)s | %(message)s")

    name = Path(args.file).stem
    try:
        config = config_from_args(args)
        problem = load_problem(args.file, with_choice=config.choice)
        outcome = prove(problem, config, proof=args.proof, stats=args.stats)
    except (LambdaSupError, OSError, ValueError) as e:
        kind = "InputError" if not isinstance(e, OSError) else "OSError"
        print(f"% SZS status {kind} for {name}")
        print(f"% {e}")
        return 3
    except Exception:
        logger.exception("unexpected failure on %s", args.file)
        print(f"% SZS status Error for {name}")
        return 3
    sys.stdout.write(outcome["text"])
    return outcome["exit_code"]


if __name__ == "__main__":
    sys.exit(main())
