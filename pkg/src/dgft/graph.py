"""Weighted directed graphs, degree matrices, and the in-degree Laplacian.

Edge weights may be complex. The weight matrix convention is
``weights[i, j]`` = weight of the directed edge from node ``j`` to node
``i``, so the in-degree of node ``i`` is the ``i``-th row sum and the
Laplacian is the in-degree diagonal minus the weight matrix. Node indices
are 0-based throughout the API; 1-based labels only exist in the edge-list
file format (see :mod:`dgft.io`).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DimensionMismatchError,
    DuplicateEdgeError,
    GraphSizeError,
    NodeIndexError,
    NonSquareError,
    SelfLoopError,
)

# Entrywise tolerance for treating a weight matrix as undirected.
SYMMETRY_TOL = 1e-12

# Row sums of a Laplacian must vanish to this fraction of the largest
# absolute row sum.
ROW_SUM_TOL = 1e-10


def _as_complex_square(matrix, *, copy: bool = True) -> np.ndarray:
    # asarray still copies when a dtype change forces it; ``copy`` only
    # demands one even when none would be needed.
    a = np.array(matrix, dtype=complex) if copy else np.asarray(matrix, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise NonSquareError(f"expected a square matrix, got shape {a.shape}")
    return a


@dataclass(frozen=True)
class Graph:
    """Weighted directed graph over ``n`` nodes.

    ``weights[i, j]`` holds the weight of the edge from node ``j`` to node
    ``i``; the diagonal must be zero. Instances are immutable: the weight
    matrix is copied and marked read-only at construction.
    """

    n: int
    weights: np.ndarray
    node_labels: list[str] | None = None
    is_undirected: bool = field(init=False)
    is_real_nonnegative: bool = field(init=False)

    def __post_init__(self):
        if self.n < 1:
            raise GraphSizeError(f"node count must be >= 1, got {self.n}")
        w = _as_complex_square(self.weights)
        if w.shape[0] != self.n:
            raise DimensionMismatchError(
                f"weight matrix is {w.shape[0]}x{w.shape[1]} but n={self.n}"
            )
        if np.any(np.diag(w) != 0):
            bad = int(np.flatnonzero(np.diag(w))[0])
            raise SelfLoopError(f"nonzero diagonal entry at node {bad}")
        if self.node_labels is not None and len(self.node_labels) != self.n:
            raise DimensionMismatchError(
                f"{len(self.node_labels)} labels for {self.n} nodes"
            )
        w.flags.writeable = False
        object.__setattr__(self, "weights", w)
        object.__setattr__(
            self, "is_undirected", bool(np.max(np.abs(w - w.T), initial=0.0) <= SYMMETRY_TOL)
        )
        object.__setattr__(
            self,
            "is_real_nonnegative",
            bool(np.all(w.imag == 0) and np.all(w.real >= 0)),
        )


@dataclass(frozen=True)
class GraphSignal:
    """One (possibly complex) value per node, as a length-``n`` vector."""

    values: np.ndarray
    n: int = field(init=False)

    def __post_init__(self):
        v = np.array(self.values, dtype=complex, copy=True).ravel()
        if v.size == 0:
            raise DimensionMismatchError("a signal needs at least one value")
        v.flags.writeable = False
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "n", int(v.size))


@dataclass(frozen=True)
class DirectedLaplacian:
    """In-degree Laplacian of a directed graph.

    Row sums are zero by construction, which is what makes the constant
    vector an eigenvector at eigenvalue zero.
    """

    matrix: np.ndarray
    n: int = field(init=False)

    def __post_init__(self):
        m = _as_complex_square(self.matrix)
        row_sums = np.abs(m.sum(axis=1))
        limit = ROW_SUM_TOL * max(float(np.max(np.abs(m).sum(axis=1), initial=0.0)), 0.0)
        if np.any(row_sums > limit):
            worst = int(np.argmax(row_sums))
            raise ValueError(
                f"row {worst} sums to {m.sum(axis=1)[worst]:.3e}; "
                "not a valid in-degree Laplacian"
            )
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "n", int(m.shape[0]))


def signal_values(f, n: int) -> np.ndarray:
    """Coerce ``f`` (GraphSignal or array-like) to a length-``n`` complex vector."""
    if isinstance(f, GraphSignal):
        values = f.values
    else:
        values = np.asarray(f, dtype=complex).ravel()
    if values.size != n:
        raise DimensionMismatchError(f"signal has {values.size} values, graph has {n} nodes")
    return values


def build_graph(
    n: int,
    edges: list[tuple[int, int, complex]],
    node_labels: list[str] | None = None,
) -> Graph:
    """Build a graph from ``(src, dst, weight)`` triples with 0-based indices.

    Self-loops and duplicate (src, dst) pairs are rejected rather than
    silently folded or summed; ingestion bugs should surface loudly.
    """
    if n < 1:
        raise GraphSizeError(f"node count must be >= 1, got {n}")
    weights = np.zeros((n, n), dtype=complex)
    seen: set[tuple[int, int]] = set()
    for src, dst, weight in edges:
        if not (0 <= src < n) or not (0 <= dst < n):
            raise NodeIndexError(f"edge ({src}, {dst}) outside range [0, {n})")
        if src == dst:
            raise SelfLoopError(f"self-loop at node {src}")
        if (src, dst) in seen:
            raise DuplicateEdgeError(f"duplicate edge ({src}, {dst})")
        seen.add((src, dst))
        weights[dst, src] = weight
    return Graph(n=n, weights=weights, node_labels=node_labels)


def in_degree_matrix(g: Graph) -> np.ndarray:
    """Diagonal matrix of in-degrees (row sums of the weight matrix)."""
    return np.diag(g.weights.sum(axis=1))


def out_degree_vector(g: Graph) -> np.ndarray:
    """Vector of out-degrees (column sums of the weight matrix)."""
    return g.weights.sum(axis=0)


def directed_laplacian(g: Graph) -> DirectedLaplacian:
    """In-degree Laplacian: in-degree diagonal minus the weight matrix."""
    return DirectedLaplacian(matrix=in_degree_matrix(g) - g.weights)


def ring_graph(n: int) -> Graph:
    """Directed cycle on ``n`` nodes, unit weights, node k fed by node k-1.

    Its shift operator (identity minus Laplacian) is exactly the cyclic
    delay of classical discrete-time signals.
    """
    if n < 2:
        raise GraphSizeError(f"a ring needs at least 2 nodes, got {n}")
    edges = [((k - 1) % n, k, 1.0 + 0.0j) for k in range(n)]
    return build_graph(n, edges)


def demo_graph() -> Graph:
    """Five-node weighted digraph used throughout the docs and tests.

    Integer weights, strongly asymmetric, with one complex-conjugate pair
    in its Laplacian spectrum; small enough to check by hand.
    """
    edges_1based = [
        (5, 1, 3),
        (1, 2, 1),
        (3, 2, 2),
        (4, 3, 3),
        (1, 4, 2),
        (2, 4, 4),
        (5, 4, 1),
        (1, 5, 3),
        (2, 5, 3),
    ]
    edges = [(s - 1, d - 1, complex(w)) for s, d, w in edges_1based]
    return build_graph(5, edges)
