import numpy as np
import pytest

from pinnet.topology import Graph


def random_connected_graph(rng: np.random.Generator, n_nodes: int, extra_p: float = 0.3) -> Graph:
    """Random connected graph: a random attachment tree plus extra edges."""
    edges = set()
    for v in range(1, n_nodes):
        u = int(rng.integers(0, v))
        edges.add((u, v))
    for i in range(n_nodes):
        for j in range(i + 1, n_nodes):
            if (i, j) not in edges and rng.uniform() < extra_p:
                edges.add((i, j))
    return Graph.from_edges(n_nodes, edges)


@pytest.fixture
def rng():
    return np.random.Generator(np.random.PCG64(20240817))
