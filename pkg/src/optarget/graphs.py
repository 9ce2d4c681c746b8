"""Undirected graphs over regular agents, generators, and tree utilities.

All graphs are simple (no self-loops, no duplicate edges), undirected, with
unit edge weights and dense 0-indexed node ids. Instances are immutable after
construction and safe to share across threads.
"""

from __future__ import annotations

import warnings
from collections import deque
from typing import Iterable

import numpy as np
import scipy.sparse as sp


class NotATreeError(ValueError):
    """Raised when a tree-only operation is applied to a non-tree graph."""


class DegenerateTreeError(ValueError):
    """Raised when a sampled branching tree is smaller than required."""


class EdgeListError(ValueError):
    """Raised on malformed or empty edge-list files."""


class Graph:
    """Immutable undirected graph on nodes ``0 .. node_count-1``.

    Attributes:
        node_count: Number of nodes N.
        edges: Sorted tuple of unordered edges, each stored as ``(i, j)``
            with ``i < j``.
        adjacency: Per-node neighbor tuples, sorted ascending.
    """

    __slots__ = ("node_count", "edges", "adjacency", "_csr")

    def __init__(self, node_count: int, edges: Iterable[tuple[int, int]]):
        if node_count < 1:
            raise ValueError("node_count must be >= 1")
        normalized = set()
        for u, v in edges:
            u, v = int(u), int(v)
            if u == v:
                raise ValueError(f"self-loop on node {u}")
            if not (0 <= u < node_count and 0 <= v < node_count):
                raise ValueError(f"edge ({u}, {v}) outside [0, {node_count})")
            normalized.add((u, v) if u < v else (v, u))
        object.__setattr__(self, "node_count", node_count)
        object.__setattr__(self, "edges", tuple(sorted(normalized)))
        neighbors: list[list[int]] = [[] for _ in range(node_count)]
        for u, v in self.edges:
            neighbors[u].append(v)
            neighbors[v].append(u)
        object.__setattr__(
            self, "adjacency", tuple(tuple(sorted(ns)) for ns in neighbors)
        )
        object.__setattr__(self, "_csr", None)

    def __setattr__(self, name, value):
        raise AttributeError("Graph is immutable")

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def adjacency_csr(self) -> sp.csr_matrix:
        """0/1 adjacency matrix in CSR form (cached)."""
        if self._csr is None:
            n = self.node_count
            if self.edges:
                rows = np.fromiter(
                    (u for e in self.edges for u in e), dtype=np.int64
                )
                cols = np.fromiter(
                    (u for e in self.edges for u in reversed(e)), dtype=np.int64
                )
                data = np.ones(len(rows), dtype=np.float64)
                mat = sp.csr_matrix((data, (rows, cols)), shape=(n, n))
            else:
                mat = sp.csr_matrix((n, n), dtype=np.float64)
            object.__setattr__(self, "_csr", mat)
        return self._csr

    def __eq__(self, other):
        return (
            isinstance(other, Graph)
            and self.node_count == other.node_count
            and self.edges == other.edges
        )

    def __hash__(self):
        return hash((self.node_count, self.edges))

    def __repr__(self):
        return f"Graph(node_count={self.node_count}, edge_count={self.edge_count})"


class TreeView:
    """A tree rooted at a chosen node, with parent links and subtree sizes.

    Attributes:
        graph: The underlying tree graph.
        root: Root node id.
        parent: Per-node parent id; the root maps to itself.
        depth: Per-node hop distance from the root.
        children: Per-node tuple of children, ascending order.
        subtree_size: Per-node count of nodes in the rooted subtree
            (the node itself included).
    """

    __slots__ = ("graph", "root", "parent", "depth", "children", "subtree_size")

    def __init__(self, graph: Graph, root: int):
        n = graph.node_count
        if not (0 <= root < n):
            raise ValueError(f"root {root} outside [0, {n})")
        if graph.edge_count != n - 1:
            raise NotATreeError(
                f"graph has {graph.edge_count} edges, a tree on {n} nodes has {n - 1}"
            )
        parent = [-1] * n
        depth = [0] * n
        order = [root]
        parent[root] = root
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for v in graph.adjacency[u]:
                if parent[v] == -1:
                    parent[v] = u
                    depth[v] = depth[u] + 1
                    order.append(v)
                    queue.append(v)
        if len(order) != n:
            raise NotATreeError("graph is disconnected")
        children: list[list[int]] = [[] for _ in range(n)]
        for v in order[1:]:
            children[parent[v]].append(v)
        size = [1] * n
        for v in reversed(order[1:]):
            size[parent[v]] += size[v]
        object.__setattr__(self, "graph", graph)
        object.__setattr__(self, "root", root)
        object.__setattr__(self, "parent", tuple(parent))
        object.__setattr__(self, "depth", tuple(depth))
        object.__setattr__(
            self, "children", tuple(tuple(sorted(cs)) for cs in children)
        )
        object.__setattr__(self, "subtree_size", tuple(size))

    def __setattr__(self, name, value):
        raise AttributeError("TreeView is immutable")


def generate_erdos_renyi(n: int, p: float, seed: int) -> Graph:
    """Sample a G(n, p) graph: each unordered pair is an edge with probability p.

    Deterministic for a fixed ``(n, p, seed)`` triple.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if not (0.0 <= p <= 1.0):
        raise ValueError(f"p must be in [0, 1], got {p}")
    rng = np.random.default_rng(seed)
    iu, ju = np.triu_indices(n, k=1)
    mask = rng.random(iu.shape[0]) < p
    return Graph(n, zip(iu[mask].tolist(), ju[mask].tolist()))


def generate_complete(n: int) -> Graph:
    """Complete graph on n nodes."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return Graph(n, ((i, j) for i in range(n) for j in range(i + 1, n)))


def generate_line(n: int) -> Graph:
    """Path graph 0 - 1 - ... - (n-1)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return Graph(n, ((i, i + 1) for i in range(n - 1)))


def generate_poisson_tree(
    lam: float, max_nodes: int, seed: int, min_nodes: int = 1
) -> Graph:
    """Grow a Galton-Watson tree with Poisson(lam) offspring counts.

    Nodes are created in breadth-first order starting from a single root, so
    every parent id is smaller than its children's ids. Growth halts
    mid-generation once ``max_nodes`` nodes exist.

    Args:
        lam: Mean offspring count, > 0.
        max_nodes: Hard cap on the number of nodes.
        seed: RNG seed; the result is deterministic for a fixed seed.
        min_nodes: Raise DegenerateTreeError if the process dies before
            reaching this size, so callers can resample.
    """
    if lam <= 0:
        raise ValueError("lam must be > 0")
    if max_nodes < 1:
        raise ValueError("max_nodes must be >= 1")
    rng = np.random.default_rng(seed)
    edges: list[tuple[int, int]] = []
    count = 1
    queue = deque([0])
    while queue and count < max_nodes:
        u = queue.popleft()
        for _ in range(int(rng.poisson(lam))):
            if count >= max_nodes:
                break
            v = count
            count += 1
            edges.append((u, v))
            queue.append(v)
    if count < min_nodes:
        raise DegenerateTreeError(
            f"branching process died with {count} nodes (< {min_nodes})"
        )
    return Graph(count, edges)


def load_edge_list(path) -> Graph:
    """Read a whitespace-separated ``u v`` edge list file into a Graph.

    Lines beginning with ``#`` are comments. Duplicate pairs and reversed
    duplicates collapse to one undirected edge; self-loops are dropped with a
    single warning reporting how many were seen. The node count is one plus
    the largest id in the file, so sparse id ranges are preserved as isolated
    nodes.
    """
    edges = set()
    max_id = -1
    self_loops = 0
    saw_data = False
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) != 2:
                raise EdgeListError(f"{path}:{lineno}: expected 'u v', got {line!r}")
            try:
                u, v = int(parts[0]), int(parts[1])
            except ValueError as exc:
                raise EdgeListError(f"{path}:{lineno}: non-integer node id") from exc
            if u < 0 or v < 0:
                raise EdgeListError(f"{path}:{lineno}: negative node id")
            saw_data = True
            max_id = max(max_id, u, v)
            if u == v:
                self_loops += 1
                continue
            edges.add((u, v) if u < v else (v, u))
    if not saw_data:
        raise EdgeListError(f"{path}: no edges found")
    if self_loops:
        warnings.warn(f"{path}: dropped {self_loops} self-loop(s)", stacklevel=2)
    return Graph(max_id + 1, edges)


def write_edge_list(g: Graph, path) -> None:
    """Write a Graph in the same ``u v`` per-line format read by load_edge_list."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"# nodes={g.node_count} edges={g.edge_count}\n")
        for u, v in g.edges:
            fh.write(f"{u} {v}\n")


def is_connected(g: Graph) -> bool:
    """True iff a breadth-first search from node 0 reaches every node."""
    seen = bytearray(g.node_count)
    seen[0] = 1
    queue = deque([0])
    reached = 1
    while queue:
        u = queue.popleft()
        for v in g.adjacency[u]:
            if not seen[v]:
                seen[v] = 1
                reached += 1
                queue.append(v)
    return reached == g.node_count


def degrees(g: Graph) -> np.ndarray:
    """Per-node degree within the regular graph (strategic links excluded)."""
    return np.fromiter((len(ns) for ns in g.adjacency), dtype=np.int64,
                       count=g.node_count)


def tree_view(g: Graph, root: int) -> TreeView:
    """Root a tree graph at ``root``; raises NotATreeError otherwise."""
    return TreeView(g, root)


def path_between(t: TreeView, u: int, v: int) -> list[int]:
    """The unique simple path from u to v, endpoints included."""
    n = t.graph.node_count
    if not (0 <= u < n and 0 <= v < n):
        raise ValueError("node id out of range")
    a, b = u, v
    left, right = [a], [b]
    while t.depth[a] > t.depth[b]:
        a = t.parent[a]
        left.append(a)
    while t.depth[b] > t.depth[a]:
        b = t.parent[b]
        right.append(b)
    while a != b:
        a = t.parent[a]
        b = t.parent[b]
        left.append(a)
        right.append(b)
    return left + right[:-1][::-1]


def offspring(t: TreeView, k: int) -> list[int]:
    """Children of k in the rooted view, ascending order."""
    return list(t.children[k])
