from __future__ import annotations

import os

import pytest
from hypothesis import HealthCheck, settings

from lrcc.field import ExtField, field_build
from lrcc.lrcc import build_construction1
from lrcc.msrd import MsrdParams, build_msrd_outer

settings.register_profile(
    "default", max_examples=60, deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.register_profile("ci", max_examples=200, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture(scope="session")
def gf2():
    return field_build(2, 1, 1)


@pytest.fixture(scope="session")
def gf4():
    return field_build(2, 1, 2)


@pytest.fixture(scope="session")
def gf256():
    return field_build(2, 1, 8)


@pytest.fixture(scope="session")
def tiny_outer():
    return build_msrd_outer(MsrdParams(2, 1, 1, 2, 8))


@pytest.fixture(scope="session")
def tiny(tiny_outer):
    """(4,1) global code, two repetition groups over the (2,1) MSRD outer code."""
    return build_construction1(tiny_outer[0], 1, 2, 2)


@pytest.fixture(scope="session")
def fig3():
    """(6,3) binary code: groups {0,1,2}, {3,4,5}, last symbol of each the XOR of the others."""
    from lrcc.convcode import code_from_generator
    from lrcc.lrcc import LocalStructure, LrccCode
    from lrcc.polymat import PolyMatrix

    F = field_build(2, 1, 1)
    rows = [
        [(1,), (), (1,), (), (0, 1), (0, 1)],
        [(), (1,), (1,), (1,), (), (1,)],
        [(), (), (), (), (1,), (1,)],
    ]
    G = PolyMatrix(F, tuple(tuple(tuple(e) for e in r) for r in rows))
    return LrccCode(code_from_generator(F, G), LocalStructure.consecutive(2, 2, 2))
