"""Shared fixtures.

Scenario suites are the slowest things in the tree, and several test
modules inspect their reports.  Run each scenario exactly twice per
session (the second run feeds determinism checks) and share the results.
"""

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from ores.scenarios import SCENARIOS, ScenarioConfig, run_scenario


@pytest.fixture(scope="session")
def scenario_runs():
    cfg = ScenarioConfig()
    out = {}
    for name in sorted(SCENARIOS):
        out[name] = (run_scenario(name, cfg), run_scenario(name, cfg))
    return out


@pytest.fixture(scope="session")
def scenario_reports(scenario_runs):
    return {name: runs[0] for name, runs in scenario_runs.items()}
