import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from ordsolid.dualgraph import build_graph  # noqa: E402
from ordsolid.elliptic import Curve, generate_cyclic_config, torsion_example  # noqa: E402
from ordsolid.geom import FLOAT  # noqa: E402
from ordsolid.verify import exact_grids  # noqa: E402

EXACT_ORDERS = (6, 7, 8, 9, 10, 12)
FLOAT_CURVE = Curve(-2, 1)


@pytest.fixture(scope="session")
def exact_configs():
    out = {}
    for n in EXACT_ORDERS:
        c, G = torsion_example(n)
        out[n] = (c, generate_cyclic_config(c, G, n).lifted)
    return out


@pytest.fixture(scope="session")
def exact_graphs(exact_configs):
    return {n: build_graph(cfg) for n, (_, cfg) in exact_configs.items()}


@pytest.fixture(scope="session")
def float20():
    cfg = generate_cyclic_config(FLOAT_CURVE, None, 20, mode=FLOAT).lifted
    return cfg, build_graph(cfg)


@pytest.fixture(scope="session")
def grids():
    return exact_grids(25)
