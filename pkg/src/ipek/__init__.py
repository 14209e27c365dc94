"""Evidential, context-aware trust management for vehicular networks."""

from ipek.config import ConfigError, ScenarioConfig, load_config
from ipek.sim import SimulationTrace, run

__all__ = ["ConfigError", "ScenarioConfig", "SimulationTrace", "load_config", "run"]
__version__ = "0.1.0"
