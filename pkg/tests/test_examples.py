"""The bundled problem pack, run the way ``test_harness.py`` runs it."""

import time

import pytest

from lambdasup import ProverConfig, load_problem, saturate, szs_status
from test_harness import expected_status, pack_options

from conftest import PROBLEMS

WORKED = ["EX1_argcong", "EX2_fluid_applied", "EX3_two_literals", "EX4_third_order", "EX5_fluid_lambda", "PRODDIV"]
FIRST_ORDER = sorted(PROBLEMS.glob("fo/*.p"))


def _run(path, mode="full", timeout=10.0):
    config = ProverConfig.for_mode(mode, timeout=timeout, **pack_options(path))
    problem = load_problem(path, with_choice=config.choice)
    start = time.monotonic()
    result = saturate(problem.clauses, problem.sig, config)
    return problem, result, time.monotonic() - start


def _proof_is_closed(result):
    """Every premise of every proof clause is itself in the proof."""
    ids = {C.id for C in result.derivation()}
    return all(set(C.derivation.premises) <= ids for C in result.derivation())


@pytest.mark.parametrize("name", WORKED)
def test_worked_examples_are_refuted(name):
    path = PROBLEMS / f"{name}.p"
    problem, result, seconds = _run(path)
    assert result.is_unsat, f"{name}: {result.status} {result.reason}"
    assert szs_status(result, problem.has_conjecture) == expected_status(path)
    assert _proof_is_closed(result)
    assert seconds < 10.0


def test_lambda_superposition_avoids_fluid_superposition_and_extensionality():
    path = PROBLEMS / "PRODDIV_lambda_sup.p"
    assert pack_options(path) == {"lambda_sup": 1024, "fluid_sup": False, "ext_axiom": False}
    _, result, seconds = _run(path)
    assert result.is_unsat
    used = result.rules_used()
    assert "lambda_sup" in used
    assert not used & {"fluid_sup", "ext_axiom"}
    assert seconds < 10.0


def test_abs_rules_saturate_without_extensionality():
    path = PROBLEMS / "ABS_saturated.p"
    problem, result, seconds = _run(path)
    assert result.is_saturated
    assert not result.complete
    assert szs_status(result, problem.has_conjecture) == "GaveUp"
    assert seconds < 10.0


def test_abs_clause_set_is_refuted_with_extensionality():
    path = PROBLEMS / "ABS_ext.p"
    _, result, seconds = _run(path)
    assert result.is_unsat
    assert seconds < 10.0


@pytest.mark.parametrize("path", FIRST_ORDER, ids=lambda p: p.stem)
def test_first_order_pack(path):
    problem, result, seconds = _run(path, mode="pragmatic", timeout=5.0)
    assert problem.is_first_order
    assert result.is_unsat, f"{path.name}: {result.status} {result.reason}"
    assert szs_status(result, problem.has_conjecture) == expected_status(path)
    assert not result.rules_used() & {"ext_axiom", "fluid_sup", "arg_cong"}
    assert seconds < 5.0


def test_first_order_pack_size():
    assert len(FIRST_ORDER) == 20
