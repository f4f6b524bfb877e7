import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

import pytest

from tkit import build_operators, example_graph


@pytest.fixture(scope="session")
def example():
    return example_graph()


@pytest.fixture(scope="session")
def example_ops(example):
    g, x = example
    return build_operators(g, x)
