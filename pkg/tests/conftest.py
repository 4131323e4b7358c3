import pytest

from src.entity.bound_expr import MonotoneFn
from src.entity.poly import PolyRing
from src.schemas.run_config import RunConfig


@pytest.fixture
def xy():
    return PolyRing(("x", "y"))


@pytest.fixture
def xyz():
    return PolyRing(("x", "y", "z"))


@pytest.fixture
def small_config():
    return RunConfig(membership_degree_cap=3, scan_cap=16, procedure_step_cap=16, witness_pool_size=32)


@pytest.fixture
def plus_two():
    return MonotoneFn.affine(1, 2)
