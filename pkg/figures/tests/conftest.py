"""Fixtures for the figure tests."""

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from figdata import write_episode  # noqa: E402


@pytest.fixture()
def grid(tmp_path):
    """Factory for a full (or trimmed) scenario/mode/seed results tree."""

    def build(setups=("setup1", "setup2", "setup3"),
              modes=("adaptive", "fixed64"), seeds=(1, 2), **kwargs):
        root = tmp_path / "results"
        for setup in setups:
            for mode in modes:
                for seed in seeds:
                    write_episode(root / setup / mode / f"seed{seed}.csv", **kwargs)
        return root

    return build
