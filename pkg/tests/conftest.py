from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))


def pytest_addoption(parser):
    parser.addoption("--include-stretch", action="store_true", default=False, help="run slow high-degree checks")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--include-stretch"):
        return
    skip = pytest.mark.skip(reason="stretch check; pass --include-stretch")
    for item in items:
        if "stretch" in item.keywords:
            item.add_marker(skip)
