"""Shared fixtures: the bundled configuration and its scenarios."""

import pytest

from vlcsec.config import build_scenarios, load_config


@pytest.fixture(scope="session")
def default_cfg():
    return load_config(None)


@pytest.fixture(scope="session")
def scenarios(default_cfg):
    """Reference scenarios keyed by name (setup1, setup2, setup3)."""
    return {s.name: s for s in build_scenarios(default_cfg)}
