"""Prover configuration: rule toggles, limits and the three mode presets."""

from __future__ import annotations

import os
from dataclasses import dataclass, field, replace
from typing import Optional

from .order import DEFAULT_PARAMS, OrderParams
from .unification import PRAGMATIC, UnifConfig

MODES = ("full", "base", "pragmatic")
LAMBDA_DEMOD_MODES = ("off", "plain", "ext")


def env_timeout(default: float = 30.0) -> float:
    try:
        return float(os.getenv("LAMBDASUP_TIMEOUT", default))
    except ValueError:
        return default


def env_log_level(default: str = "WARNING") -> str:
    return os.getenv("LAMBDASUP_LOG_LEVEL", default).upper()


def tptp_root() -> Optional[str]:
    """Directory used to resolve ``include(...)`` directives."""
    return os.getenv("LAMBDASUP_TPTP") or os.getenv("TPTP")


@dataclass(frozen=True)
class ProverConfig:
    mode: str = "full"
    unif: UnifConfig = field(default_factory=UnifConfig)
    order: OrderParams = DEFAULT_PARAMS
    selection: str = "none"

    # rules
    fluid_sup: bool = True
    flex_sup: bool = False
    ext_axiom: bool = True
    neg_ext: bool = True
    prune_arg: bool = True
    abs_rules: bool = False
    ext_inst: bool = False
    ext_inst_per_clause: int = 8
    lambda_sup: int = 0
    dup_sup: bool = False
    lambda_demod: str = "off"
    choice: bool = False

    # limits
    timeout: float = 30.0
    max_clauses: int = 0
    max_iterations: int = 0
    memory_limit_mb: int = 0

    # scheduling
    weight_ratio: int = 4
    pull_per_iteration: int = 10
    eager_steps: int = 8
    stream_budget_cap: int = 256
    log_every: int = 100

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}; expected one of {', '.join(MODES)}")
        if self.lambda_demod not in LAMBDA_DEMOD_MODES:
            raise ValueError(f"unknown λDemod setting {self.lambda_demod!r}")
        if self.weight_ratio < 0 or self.pull_per_iteration < 1 or self.eager_steps < 0 or self.stream_budget_cap < 1:
            raise ValueError("scheduling knobs out of range")
        if self.lambda_sup < 0:
            raise ValueError("λSup budget must be non-negative")

    @classmethod
    def for_mode(cls, mode: str = "full", **overrides) -> "ProverConfig":
        """Preset for ``mode`` with keyword overrides applied on top."""
        if mode == "full":
            base = cls(mode="full")
        elif mode == "base":
            base = cls(mode="base", fluid_sup=False, flex_sup=True, ext_axiom=False)
        elif mode == "pragmatic":
            base = cls(mode="pragmatic", unif=PRAGMATIC, fluid_sup=False, flex_sup=False, ext_axiom=False)
        else:
            raise ValueError(f"unknown mode {mode!r}; expected one of {', '.join(MODES)}")
        return replace(base, **overrides) if overrides else base

    @property
    def complete_unification(self) -> bool:
        return self.unif.flex_flex and self.unif.iteration

    @property
    def claims_completeness(self) -> bool:
        """Whether a saturated run may be reported as satisfiable."""
        return self.ext_axiom and self.fluid_sup and self.complete_unification

    def describe(self) -> str:
        extras = []
        if self.abs_rules:
            extras.append("abs")
        if self.ext_inst:
            extras.append("ext-inst")
        if self.lambda_sup:
            extras.append(f"lambda-sup={self.lambda_sup}")
        if self.dup_sup:
            extras.append("dup-sup")
        if self.lambda_demod != "off":
            extras.append(f"lambda-demod={self.lambda_demod}")
        return self.mode + ("+" + ",".join(extras) if extras else "")
