from pathlib import Path

import pytest

from setdyn.finite import FiniteRelationSystem

DATA = Path(__file__).parent / "data"


@pytest.fixture
def data_dir():
    return DATA


@pytest.fixture
def two_state():
    # F(0) = {1}, F(1) = {0, 1}
    return FiniteRelationSystem(2, ((1,), (0, 1)))


@pytest.fixture
def two_cycle():
    return FiniteRelationSystem.cycle(2)


@pytest.fixture
def three_cycle():
    return FiniteRelationSystem.cycle(3)


@pytest.fixture
def two_fixed():
    return FiniteRelationSystem.identity(2)


@pytest.fixture
def self_loop():
    return FiniteRelationSystem(1, ((0,),))
