"""Downlink distributed MIMO over a segmented fronthaul with two-level routing."""

__version__ = "0.1.0"

from .config import ScenarioConfig
from .simulator import run_scenario, run_sweep

__all__ = ["ScenarioConfig", "run_scenario", "run_sweep", "__version__"]
