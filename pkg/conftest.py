"""Shared fixtures: small solutions, groups and braces with hand-checkable tables."""

import json

import numpy as np
import pytest

from braided_group import braiding_from_skewbrace, cyclic_group, symmetric_group, validate_skew_brace
from settings import get_settings
from yb_core import permutation_solution, rack_solution, validate_shelf

collect_ignore = ["examples"]


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="run full-order sweeps")


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: full-order sweeps, skipped without --runslow")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture(autouse=True)
def fresh_settings():
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture
def flip():
    """r(a,b) = (b,a) on two points"""
    return permutation_solution([0, 1], [0, 1])


@pytest.fixture
def p3():
    """r(a,b) = (b+1, a) on Z₃"""
    return permutation_solution([1, 2, 0], [0, 1, 2])


@pytest.fixture
def p_swap():
    """r(a,b) = (1−b, a) on Z₂"""
    return permutation_solution([1, 0], [0, 1])


@pytest.fixture
def dihedral_quandle():
    """a◁b = 2b − a mod 3, r(a,b) = (b, a◁b)"""
    return rack_solution(validate_shelf([[(2 * b - a) % 3 for b in range(3)] for a in range(3)]))


@pytest.fixture
def s3():
    return symmetric_group(3)


@pytest.fixture
def z4_brace():
    """a∘b = a + (−1)^a b on Z₄, multiplicative group Z₂×Z₂"""
    a, b = np.indices((4, 4))
    add = (a + b) % 4
    mul = (a + np.where(a % 2 == 0, b, -b)) % 4
    return validate_skew_brace(add, mul)


@pytest.fixture
def z4_braided(z4_brace):
    return braiding_from_skewbrace(z4_brace)


@pytest.fixture
def z4():
    return cyclic_group(4)


@pytest.fixture
def write_json(tmp_path):
    def write(name, payload):
        path = tmp_path / name
        path.write_text(json.dumps(payload), encoding="utf-8")
        return str(path)

    return write
