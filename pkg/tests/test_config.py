import pytest

from lambdasup.config import MODES, ProverConfig, env_log_level, env_timeout, tptp_root
from lambdasup.unification import PRAGMATIC


def test_full_mode_is_the_complete_calculus():
    cfg = ProverConfig.for_mode("full")
    assert cfg.fluid_sup and cfg.ext_axiom and cfg.neg_ext and cfg.prune_arg
    assert not cfg.flex_sup
    assert cfg.claims_completeness
    assert cfg.describe() == "full"


def test_base_mode_swaps_fluid_for_flex_superposition():
    cfg = ProverConfig.for_mode("base")
    assert cfg.flex_sup and not cfg.fluid_sup and not cfg.ext_axiom
    assert not cfg.claims_completeness


def test_pragmatic_mode_uses_bounded_unification():
    cfg = ProverConfig.for_mode("pragmatic")
    assert cfg.unif is PRAGMATIC
    assert not cfg.complete_unification
    assert not cfg.claims_completeness


def test_overrides_apply_on_top_of_presets():
    cfg = ProverConfig.for_mode("full", timeout=5.0, abs_rules=True, lambda_sup=2, lambda_demod="ext")
    assert cfg.timeout == 5.0
    assert cfg.fluid_sup
    assert cfg.describe() == "full+abs,lambda-sup=2,lambda-demod=ext"


@pytest.mark.parametrize("kwargs", [
    {"mode": "turbo"},
    {"lambda_demod": "always"},
    {"weight_ratio": -1},
    {"pull_per_iteration": 0},
    {"lambda_sup": -3},
])
def test_invalid_settings_are_rejected(kwargs):
    with pytest.raises(ValueError):
        ProverConfig(**kwargs)


def test_unknown_mode_preset():
    with pytest.raises(ValueError):
        ProverConfig.for_mode("turbo")
    assert set(MODES) == {"full", "base", "pragmatic"}


def test_environment_defaults(monkeypatch):
    monkeypatch.setenv("LAMBDASUP_TIMEOUT", "12.5")
    monkeypatch.setenv("LAMBDASUP_LOG_LEVEL", "debug")
    monkeypatch.setenv("LAMBDASUP_TPTP", "/opt/tptp")
    assert env_timeout() == 12.5
    assert env_log_level() == "DEBUG"
    assert tptp_root() == "/opt/tptp"
    monkeypatch.setenv("LAMBDASUP_TIMEOUT", "soon")
    assert env_timeout(7.0) == 7.0
