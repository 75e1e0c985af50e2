"""Command-line orchestration: configs, the HUP check pipeline and result files."""
from .commands import (cmd_check, cmd_counterexample, cmd_potential, cmd_rotation_scan,
                       cmd_spectrum)
from .config import ExperimentConfig, load_config, parse_config

__all__ = ["cmd_check", "cmd_counterexample", "cmd_potential", "cmd_rotation_scan", "cmd_spectrum",
           "ExperimentConfig", "load_config", "parse_config"]
