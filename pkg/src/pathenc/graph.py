"""Transition graph of a system, spanning trees and integer chain algebra.

Vertices are states 0 .. d-1.  Edges are the allowed transitions (i, j) with
i < j, listed in ascending order; that order fixes edge indices everywhere
else in the package.  An edge's natural orientation is i -> j.  A chain is
an integer vector of signed edge-traversal counts; its boundary is the
incidence matrix applied to it.
"""

from collections import deque
from dataclasses import dataclass

import numpy as np

from .errors import DisconnectedGraph, EdgeInTree


@dataclass(frozen=True)
class HamiltonianGraph:
    vertex_count: int
    edges: tuple                    # ordered (i, j) pairs with i < j

    @property
    def edge_count(self):
        return len(self.edges)

    def edge_index(self, i, j):
        """Index of the undirected edge between i and j, or None."""
        key = (i, j) if i < j else (j, i)
        return self._edge_lookup.get(key)

    @property
    def _edge_lookup(self):
        lookup = self.__dict__.get("_lookup_cache")
        if lookup is None:
            lookup = {e: k for k, e in enumerate(self.edges)}
            object.__setattr__(self, "_lookup_cache", lookup)
        return lookup

    def neighbors(self, v):
        """Adjacent vertices of v in ascending order."""
        out = [j for (i, j) in self.edges if i == v]
        out += [i for (i, j) in self.edges if j == v]
        return sorted(out)


@dataclass(frozen=True)
class SpanningTree:
    edge_indices: tuple             # indices into graph.edges, d - 1 of them

    def __contains__(self, edge_index):
        return edge_index in set(self.edge_indices)


@dataclass(frozen=True)
class DirectedGraph:
    """Arc list of a graph: forward arcs (edge order) then backward arcs."""

    arcs: tuple                     # ordered (u, v) pairs, one per direction

    @property
    def arc_count(self):
        return len(self.arcs)


def build_graph(system) -> HamiltonianGraph:
    """Transition graph of a system: union sparsity of its dipoles."""
    return HamiltonianGraph(vertex_count=system.dim,
                            edges=tuple(system.transitions))


def spanning_tree(graph) -> SpanningTree:
    """Deterministic breadth-first spanning tree rooted at vertex 0.

    Neighbors are visited in ascending index order, so the result is
    reproducible for a given edge list.  Raises ``DisconnectedGraph`` when
    some vertex cannot be reached.
    """
    d = graph.vertex_count
    seen = [False] * d
    seen[0] = True
    tree_edges = []
    queue = deque([0])
    while queue:
        v = queue.popleft()
        for w in graph.neighbors(v):
            if not seen[w]:
                seen[w] = True
                tree_edges.append(graph.edge_index(v, w))
                queue.append(w)
    if not all(seen):
        missing = [v for v in range(d) if not seen[v]]
        raise DisconnectedGraph(f"vertices unreachable from 0: {missing}")
    return SpanningTree(edge_indices=tuple(sorted(tree_edges)))


def tree_from_edges(graph, edge_pairs) -> SpanningTree:
    """Spanning tree from explicit (i, j) pairs, validated."""
    indices = []
    for (i, j) in edge_pairs:
        k = graph.edge_index(i, j)
        if k is None:
            raise DisconnectedGraph(f"({i}, {j}) is not a graph edge")
        indices.append(k)
    tree = SpanningTree(edge_indices=tuple(sorted(set(indices))))
    if len(tree.edge_indices) != graph.vertex_count - 1:
        raise DisconnectedGraph(
            f"a spanning tree needs exactly {graph.vertex_count - 1} edges")
    _tree_adjacency(graph, tree)    # raises if not spanning
    return tree


def incidence_matrix(graph) -> np.ndarray:
    """d x r integer matrix: edge (a, b) gives +1 at row b, -1 at row a."""
    mat = np.zeros((graph.vertex_count, graph.edge_count), dtype=np.int64)
    for k, (a, b) in enumerate(graph.edges):
        mat[a, k] = -1
        mat[b, k] = 1
    return mat


def boundary(graph, chain) -> np.ndarray:
    """0-chain boundary of an edge chain (incidence matrix applied to it)."""
    return incidence_matrix(graph) @ np.asarray(chain, dtype=np.int64)


def _tree_adjacency(graph, tree):
    """vertex -> list of (neighbor, edge index, +1 if natural direction)."""
    adj = {v: [] for v in range(graph.vertex_count)}
    for k in tree.edge_indices:
        i, j = graph.edges[k]
        adj[i].append((j, k, 1))
        adj[j].append((i, k, -1))
    seen = {0}
    queue = deque([0])
    while queue:
        v = queue.popleft()
        for w, _, _ in adj[v]:
            if w not in seen:
                seen.add(w)
                queue.append(w)
    if len(seen) != graph.vertex_count:
        raise DisconnectedGraph("tree does not span every vertex")
    return adj


def tree_path_chain(graph, tree, a, b) -> np.ndarray:
    """The unique chain inside the tree with boundary v_b - v_a.

    Returns the zero chain when a == b.
    """
    chain = np.zeros(graph.edge_count, dtype=np.int64)
    if a == b:
        return chain
    adj = _tree_adjacency(graph, tree)
    # BFS from a recording the (edge, sign) that discovered each vertex.
    prev = {a: None}
    queue = deque([a])
    while queue and b not in prev:
        v = queue.popleft()
        for w, k, sign in sorted(adj[v]):
            if w not in prev:
                prev[w] = (v, k, sign)
                queue.append(w)
    v = b
    while prev[v] is not None:
        u, k, sign = prev[v]
        chain[k] += sign
        v = u
    return chain


def fundamental_cycle(graph, tree, edge_index) -> np.ndarray:
    """Cycle made of a non-tree edge plus the tree path closing it.

    The result has coefficient +1 on the defining edge and lies in the
    kernel of the incidence matrix.
    """
    if edge_index in tree:
        raise EdgeInTree(f"edge {edge_index} belongs to the spanning tree")
    u, v = graph.edges[edge_index]
    chain = tree_path_chain(graph, tree, v, u)
    chain[edge_index] += 1
    return chain


def non_tree_edges(graph, tree):
    """Indices of edges outside the tree, in edge-list order."""
    inside = set(tree.edge_indices)
    return [k for k in range(graph.edge_count) if k not in inside]


def directed_graph(graph) -> DirectedGraph:
    """All 2r arcs: forward arcs in edge order, then backward arcs."""
    forward = [(i, j) for (i, j) in graph.edges]
    backward = [(j, i) for (i, j) in graph.edges]
    return DirectedGraph(arcs=tuple(forward + backward))
