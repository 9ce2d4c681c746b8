import numpy as np
import pytest

from optarget import Graph


def star_graph(leaves: int) -> Graph:
    """Star with center 0 and the given number of leaves."""
    return Graph(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def random_connected_graph(n: int, p: float, rng: np.random.Generator) -> Graph:
    """Random G(n, p) plus a random spanning tree so it is always connected."""
    edges = {(j, i) if j < i else (i, j)
             for i in range(1, n)
             for j in (int(rng.integers(0, i)),)}
    iu, ju = np.triu_indices(n, k=1)
    mask = rng.random(iu.shape[0]) < p
    edges.update(zip(iu[mask].tolist(), ju[mask].tolist()))
    return Graph(n, edges)


def random_tree(n: int, rng: np.random.Generator) -> Graph:
    """Uniform random-attachment tree; parent ids always precede children."""
    return Graph(n, [(int(rng.integers(0, i)), i) for i in range(1, n)])


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
