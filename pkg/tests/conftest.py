import numpy as np
import pytest

import pathenc as pe
from pathenc import presets


@pytest.fixture(scope="session")
def three_level():
    return presets.three_level_system()


@pytest.fixture(scope="session")
def triangle_graph(three_level):
    return pe.build_graph(three_level)


@pytest.fixture(scope="session")
def ladder_tree(triangle_graph):
    # spanning tree along the ladder transitions; leaves (0, 2) encoded
    return pe.tree_from_edges(triangle_graph, [(0, 1), (1, 2)])


@pytest.fixture(scope="session")
def bfs_tree(triangle_graph):
    return pe.spanning_tree(triangle_graph)


@pytest.fixture(scope="session")
def three_qubit():
    return presets.three_qubit_system()


@pytest.fixture(scope="session")
def synthesis3l():
    return pe.SynthesisConfig(start=0, target=2, duration=6000.0, dt=3.0,
                              amplitude_bound=0.02, max_iterations=1500,
                              target_infidelity=1e-3, seed=7)


@pytest.fixture(scope="session")
def pulse3l(three_level, synthesis3l):
    """Session transfer pulse for the three-level 0 -> 2 problem."""
    pulse, report = pe.grape_optimize(three_level, synthesis3l)
    assert report.fidelity > 0.95, "session fixture pulse failed to converge"
    return pulse, report


@pytest.fixture(scope="session")
def synthesis3q():
    return pe.SynthesisConfig(start=0, target=1, duration=0.004, dt=4e-6,
                              amplitude_bound=6000.0, max_iterations=3000,
                              target_infidelity=1e-3, seed=11)


@pytest.fixture(scope="session")
def pulse3q(three_qubit, synthesis3q):
    pulse, report = pe.grape_optimize(three_qubit, synthesis3q)
    assert report.fidelity > 0.95, "session fixture pulse failed to converge"
    return pulse, report


@pytest.fixture
def two_level():
    return pe.build_system([0.0, 1.0], [[[0, 1.0], [1.0, 0]]])


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
