import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from complexity_atlas.matrix import AdvantageMatrix, ExportMatrix, ShareMatrix
from complexity_atlas.registry import Registry

FIXTURE_DIR = Path(__file__).parent.parent / "data" / "fixture"


@pytest.fixture
def nested_adv():
    """Perfectly nested 3x3 advantage matrix."""
    m = np.array([[1, 1, 1], [1, 1, 0], [1, 0, 0]])
    return AdvantageMatrix(Registry(["C1", "C2", "C3"]), Registry(["P1", "P2", "P3"]), m)


@pytest.fixture
def fixture_dir():
    assert FIXTURE_DIR.exists(), "bundled fixture missing; run scripts/make_fixture.py"
    return FIXTURE_DIR


def make_adv(m) -> AdvantageMatrix:
    m = np.asarray(m)
    countries = Registry([f"C{i:02d}" for i in range(m.shape[0])])
    products = Registry([f"P{j:02d}" for j in range(m.shape[1])])
    return AdvantageMatrix(countries, products, m)


def make_shares(values) -> ShareMatrix:
    values = np.asarray(values, dtype=float)
    countries = Registry([f"C{i:02d}" for i in range(values.shape[0])])
    products = Registry([f"P{j:02d}" for j in range(values.shape[1])])
    return ShareMatrix(countries, products, values)


def make_exports(values) -> ExportMatrix:
    values = np.asarray(values, dtype=float)
    countries = Registry([f"C{i:02d}" for i in range(values.shape[0])])
    products = Registry([f"P{j:02d}" for j in range(values.shape[1])])
    return ExportMatrix(countries, products, values)
