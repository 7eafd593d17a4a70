from .config import (ConfigError, ScenarioConfig, config_from_dict, default_dists, load_config,
                     resolve_distribution)
from .runner import Aggregate, aggregate, mean_recovery_curve, run_trials
from .simulate import (SchemeMismatch, TranscriptStats, build_precode, control_overhead,
                       run_fcc, run_nocoop, run_pcc, run_perfect, run_trial)

__all__ = [
    "Aggregate", "ConfigError", "ScenarioConfig", "SchemeMismatch", "TranscriptStats",
    "aggregate", "build_precode", "config_from_dict", "control_overhead", "default_dists",
    "load_config", "mean_recovery_curve", "resolve_distribution", "run_fcc", "run_nocoop",
    "run_pcc", "run_perfect", "run_trial", "run_trials",
]
