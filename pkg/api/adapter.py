from __future__ import annotations

from datetime import datetime
from typing import Any, Dict, Optional

from lambdasup import ProverConfig
from lambdasup.config import env_timeout

from prove_problem import prove_text


def prove_problem(
    problem: str,
    mode: str = "full",
    timeout: Optional[float] = None,
    proof: bool = False,
    options: Optional[Dict[str, Any]] = None,
) -> Dict[str, Any]:
    """Prove a TPTP problem given as text, returning structured results.

    Args:
        problem: TPTP text; includes resolve against $LAMBDASUP_TPTP
        mode: full, base or pragmatic
        timeout: seconds, default from the environment
        proof: include the derivation listing
        options: extra ProverConfig fields, e.g. {"lambda_sup": 1024}
    Returns:
        Dict with status, proof, stats and generated_at
    """
    config = ProverConfig.for_mode(mode, timeout=timeout or env_timeout(), **(options or {}))
    outcome = prove_text(problem, config, proof=proof)
    return {
        "status": outcome["status"],
        "proof": outcome["proof"],
        "stats": outcome["stats"],
        "rules_used": outcome["rules_used"],
        "bounds_hit": outcome["bounds_hit"],
        "mode": config.describe(),
        "generated_at": datetime.now().isoformat(timespec="seconds"),
    }
