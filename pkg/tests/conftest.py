import numpy as np
import pytest

from mdsarray import codec
from mdsarray.transform import DegreeSet, upgrade_all_nodes
from mdsarray.vbk import build_vbk


@pytest.fixture(scope="session")
def base63():
    return build_vbk(6, 3, 2, degrees=(2, 3), seed=0)


@pytest.fixture(scope="session")
def code63(base63):
    return upgrade_all_nodes(base63, DegreeSet.make((2, 3)))


@pytest.fixture(scope="session")
def word63(code63):
    rng = np.random.RandomState(2024)
    data = [
        rng.randint(0, code63.field.q, code63.L).astype(np.uint16)
        for _ in range(code63.k)
    ]
    return codec.encode(code63, data)
