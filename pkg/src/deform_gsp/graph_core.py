"""Undirected weighted graphs: representation, structure predicates, generators and I/O.

A :class:`Graph` holds a dense symmetric weight matrix with zero diagonal and a
mode flag.  In ``Mode.NONNEGATIVE`` every weight is >= 0; in ``Mode.SIGNED``
weights may carry either sign and degrees are computed from absolute values.
An edge exists iff its weight is exactly nonzero.
"""

from __future__ import annotations

import csv
import enum
import io
import json
from collections import deque
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np
from scipy.sparse.csgraph import connected_components as _cc

from .errors import (
    IndexOutOfRange,
    InvalidParams,
    MalformedLine,
    NegativeWeightInNonnegativeMode,
    SelfLoop,
    WrongMode,
)

__all__ = [
    "Mode",
    "Graph",
    "load_edge_list",
    "save_edge_list",
    "graph_to_json",
    "graph_from_json",
    "degree_matrix",
    "degrees",
    "connected_components",
    "bipartition",
    "balance_partition",
    "bipartite_component_count",
    "balanced_component_count",
    "clustered",
    "bipartite",
    "signed_balanced",
    "erdos_renyi",
    "mixed",
    "dynamic_sequence",
    "karate",
    "generate",
]


class Mode(str, enum.Enum):
    NONNEGATIVE = "nonneg"
    SIGNED = "signed"

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        v = str(value).lower()
        aliases = {"nonnegative": cls.NONNEGATIVE, "nonneg": cls.NONNEGATIVE,
                   "signed": cls.SIGNED}
        try:
            return aliases[v]
        except KeyError:
            raise InvalidParams(f"unknown graph mode {value!r}") from None


@dataclass(frozen=True, eq=False)
class Graph:
    """Immutable undirected graph on ``n_nodes`` vertices.

    Parameters
    ----------
    weights : array_like, shape (N, N)
        Symmetric weight matrix with zero diagonal.
    mode : Mode
        ``Mode.NONNEGATIVE`` forbids negative weights.
    """

    weights: np.ndarray
    mode: Mode = Mode.NONNEGATIVE

    def __post_init__(self):
        w = np.array(self.weights, dtype=float, copy=True)
        if w.ndim != 2 or w.shape[0] != w.shape[1] or w.shape[0] < 1:
            raise InvalidParams(f"weights must be a nonempty square matrix, got shape {w.shape}")
        if not np.all(np.isfinite(w)):
            raise InvalidParams("weights must be finite")
        if np.any(np.diag(w) != 0):
            raise SelfLoop("weights must have a zero diagonal")
        if not np.array_equal(w, w.T):
            raise InvalidParams("weights must be exactly symmetric")
        mode = Mode.parse(self.mode)
        if mode is Mode.NONNEGATIVE and np.any(w < 0):
            raise NegativeWeightInNonnegativeMode("negative weight in nonnegative mode")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "mode", mode)

    @property
    def n_nodes(self) -> int:
        return self.weights.shape[0]

    @property
    def signed(self) -> bool:
        return self.mode is Mode.SIGNED

    @classmethod
    def from_edges(cls, n_nodes, edges, mode=Mode.NONNEGATIVE):
        """Build a graph from ``(i, j, w)`` triples; later duplicates overwrite earlier ones."""
        mode = Mode.parse(mode)
        w = np.zeros((n_nodes, n_nodes))
        for i, j, x in edges:
            _check_edge(i, j, x, n_nodes, mode)
            w[i, j] = w[j, i] = x
        return cls(w, mode)

    def edges(self):
        """List of ``(i, j, w)`` with ``i < j`` for every nonzero weight."""
        iu, ju = np.nonzero(np.triu(self.weights, k=1))
        return [(int(i), int(j), float(self.weights[i, j])) for i, j in zip(iu, ju)]

    def adjacency_bool(self):
        return self.weights != 0

    def subgraph(self, nodes):
        nodes = np.asarray(nodes, dtype=int)
        return Graph(self.weights[np.ix_(nodes, nodes)], self.mode)

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self.mode is other.mode and np.array_equal(self.weights, other.weights)

    def __hash__(self):
        return hash((self.mode, self.weights.tobytes()))

    def __repr__(self):
        return f"Graph(n_nodes={self.n_nodes}, n_edges={len(self.edges())}, mode={self.mode.value})"


def _check_edge(i, j, w, n_nodes, mode):
    if not (0 <= i < n_nodes and 0 <= j < n_nodes):
        raise IndexOutOfRange(f"edge ({i}, {j}) out of range for {n_nodes} nodes")
    if i == j:
        raise SelfLoop(f"self loop at node {i}")
    if not np.isfinite(w):
        raise MalformedLine(f"non-finite weight on edge ({i}, {j})")
    if mode is Mode.NONNEGATIVE and w < 0:
        raise NegativeWeightInNonnegativeMode(f"negative weight {w} on edge ({i}, {j})")


# ----------------------------------------------------------------------------
# File formats
# ----------------------------------------------------------------------------

def _parse_edge_rows(lines, n_nodes, mode):
    w = np.zeros((n_nodes, n_nodes))
    first = True
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line:
            continue
        parts = [p.strip() for p in line.split(",")]
        try:
            if len(parts) != 3:
                raise ValueError
            i, j = int(parts[0]), int(parts[1])
            x = float(parts[2])
        except ValueError:
            if first and not any(_is_number(p) for p in parts[:2]):
                first = False
                continue  # header
            raise MalformedLine(f"line {lineno}: expected 'i,j,w', got {line!r}") from None
        first = False
        try:
            _check_edge(i, j, x, n_nodes, mode)
        except (IndexOutOfRange, SelfLoop, NegativeWeightInNonnegativeMode, MalformedLine) as exc:
            raise type(exc)(f"line {lineno}: {exc}") from None
        w[i, j] = w[j, i] = x
    return Graph(w, mode)


def _is_number(s):
    try:
        float(s)
    except ValueError:
        return False
    return True


def load_edge_list(path, n_nodes, mode=Mode.NONNEGATIVE):
    """Read a CSV edge list with lines ``i,j,w`` (0-based, optional header).

    Duplicate edges keep the last weight read.
    """
    if n_nodes < 1:
        raise InvalidParams("n_nodes must be positive")
    mode = Mode.parse(mode)
    with open(path, encoding="utf-8", newline=None) as fh:
        return _parse_edge_rows(fh, n_nodes, mode)


def infer_n_nodes(path):
    """Largest node index in an edge list plus one."""
    n = 0
    with open(path, encoding="utf-8", newline=None) as fh:
        for raw in fh:
            parts = raw.strip().split(",")
            if len(parts) == 3 and _is_number(parts[0]) and _is_number(parts[1]):
                n = max(n, int(parts[0]) + 1, int(parts[1]) + 1)
    return n


def save_edge_list(g, path):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("i,j,w\n")
        for i, j, w in g.edges():
            fh.write(f"{i},{j},{w!r}\n")


def graph_to_json(g):
    return json.dumps({"n": g.n_nodes, "mode": g.mode.value,
                       "edges": [[i, j, w] for i, j, w in g.edges()]})


def graph_from_json(text):
    obj = json.loads(text)
    return Graph.from_edges(int(obj["n"]), [tuple(e) for e in obj["edges"]], obj["mode"])


# ----------------------------------------------------------------------------
# Degrees and structure
# ----------------------------------------------------------------------------

def degrees(g):
    """Vector of (absolute-value) weighted degrees."""
    return np.abs(g.weights).sum(axis=1)


def degree_matrix(g):
    """Diagonal degree matrix; absolute row sums in signed mode."""
    return np.diag(degrees(g))


def connected_components(g):
    """Return ``(count, labels)`` with labels in ``[0, count)``."""
    count, labels = _cc(g.adjacency_bool(), directed=False)
    return int(count), labels.astype(int)


def _signed_coloring(g, signs):
    """BFS coloring with ``l_j = l_i * signs[i, j]`` along every edge.

    Returns the labels and a per-component consistency flag.  Components are
    seeded with alternating colors so that both labels appear whenever there
    is more than one component.
    """
    n = g.n_nodes
    nz = g.adjacency_bool()
    nbrs = [np.flatnonzero(nz[i]) for i in range(n)]
    labels = np.zeros(n, dtype=int)
    ok = []
    seed_color = 1
    for root in range(n):
        if labels[root]:
            continue
        labels[root] = seed_color
        seed_color = -seed_color
        consistent = True
        queue = deque([root])
        while queue:
            i = queue.popleft()
            for j in nbrs[i]:
                want = labels[i] * signs[i, j]
                if labels[j] == 0:
                    labels[j] = want
                    queue.append(j)
                elif labels[j] != want:
                    consistent = False
        ok.append(consistent)
    return labels, ok


def bipartition(g):
    """Two-coloring of a nonnegative graph, or ``None`` if it has an odd cycle.

    Returns an int array of +1/-1 labels with no edge inside a color class.
    """
    if g.signed:
        raise WrongMode("bipartition requires a nonnegative graph")
    labels, ok = _signed_coloring(g, -np.ones((g.n_nodes, g.n_nodes), dtype=int))
    return labels if all(ok) else None


def balance_partition(g):
    """Split of a signed graph with positive edges inside and negative edges across.

    Returns labels ``l`` with ``l_i * l_j * sign(w_ij) > 0`` on every edge, or
    ``None`` when the graph is unbalanced.
    """
    if not g.signed:
        raise WrongMode("balance_partition requires a signed graph")
    labels, ok = _signed_coloring(g, np.sign(g.weights).astype(int))
    return labels if all(ok) else None


def bipartite_component_count(g):
    """Number of connected components that admit a 2-coloring (isolated nodes count)."""
    _, ok = _signed_coloring(g, -np.ones((g.n_nodes, g.n_nodes), dtype=int))
    return int(sum(ok))


def balanced_component_count(g):
    """Number of structurally balanced connected components under the weight signs."""
    _, ok = _signed_coloring(g, np.sign(g.weights).astype(int))
    return int(sum(ok))


# ----------------------------------------------------------------------------
# Generators
# ----------------------------------------------------------------------------

def _rng(seed):
    return np.random.default_rng(seed)


def _upper_bernoulli(rng, mask, p):
    """Symmetric 0/1 matrix with independent draws on the strict upper triangle of ``mask``."""
    n = mask.shape[0]
    draws = rng.random((n, n)) < p
    a = np.triu(draws & mask, k=1)
    return (a | a.T).astype(float)


def _check_prob(*ps):
    for p in ps:
        if not 0.0 <= p <= 1.0:
            raise InvalidParams(f"probability {p} outside [0, 1]")


def erdos_renyi(n, p, seed=0):
    if n < 1:
        raise InvalidParams("n must be positive")
    _check_prob(p)
    rng = _rng(seed)
    return Graph(_upper_bernoulli(rng, np.ones((n, n), bool), p))


def clustered(sizes=(20, 20, 20), p_in=0.5, p_out=0.02, seed=0):
    """Stochastic block model with dense clusters and sparse inter-cluster links."""
    sizes = [int(s) for s in sizes]
    if not sizes or min(sizes) < 1:
        raise InvalidParams("cluster sizes must be positive")
    _check_prob(p_in, p_out)
    rng = _rng(seed)
    block = np.repeat(np.arange(len(sizes)), sizes)
    same = block[:, None] == block[None, :]
    w = np.maximum(_upper_bernoulli(rng, same, p_in), _upper_bernoulli(rng, ~same, p_out))
    return Graph(w)


def _spanning_bipartite_tree(rng, left, right):
    """Random spanning tree of the complete bipartite graph on ``left`` x ``right``."""
    left = list(rng.permutation(left))
    right = list(rng.permutation(right))
    edges = [(left[0], right[0])]
    in_left, in_right = [left[0]], [right[0]]
    rest = [(v, 0) for v in left[1:]] + [(v, 1) for v in right[1:]]
    for k in rng.permutation(len(rest)):
        v, side = rest[k]
        if side == 0:
            edges.append((v, in_right[rng.integers(len(in_right))]))
            in_left.append(v)
        else:
            edges.append((in_left[rng.integers(len(in_left))], v))
            in_right.append(v)
    return edges


def bipartite(n_left=30, n_right=30, p=0.2, n_components=1, seed=0):
    """Random bipartite graph made of ``n_components`` connected bipartite blocks.

    Nodes ``0..n_left-1`` form one side and the rest the other; each side is
    dealt round-robin into the blocks.  Every block contains a random spanning
    tree, so the component count is exactly ``n_components``.
    """
    if n_left < 1 or n_right < 1 or n_components < 1:
        raise InvalidParams("bipartite sizes and component count must be positive")
    if n_components > min(n_left, n_right):
        raise InvalidParams("each component needs at least one node per side")
    _check_prob(p)
    rng = _rng(seed)
    n = n_left + n_right
    side = np.r_[np.zeros(n_left, int), np.ones(n_right, int)]
    block = np.r_[np.arange(n_left) % n_components, np.arange(n_right) % n_components]
    mask = (side[:, None] != side[None, :]) & (block[:, None] == block[None, :])
    w = _upper_bernoulli(rng, mask, p)
    for c in range(n_components):
        left = np.flatnonzero((side == 0) & (block == c))
        right = np.flatnonzero((side == 1) & (block == c))
        for i, j in _spanning_bipartite_tree(rng, left, right):
            w[i, j] = w[j, i] = 1.0
    return Graph(w)


def signed_balanced(sizes=(10, 10), p_in=1.0, p_out=0.3, seed=0):
    """Balanced signed graph: positive edges inside groups, negative edges across.

    At least one negative edge joins each consecutive pair of groups.
    """
    sizes = [int(s) for s in sizes]
    if len(sizes) < 2 or min(sizes) < 1:
        raise InvalidParams("need at least two nonempty groups")
    _check_prob(p_in, p_out)
    rng = _rng(seed)
    block = np.repeat(np.arange(len(sizes)), sizes)
    same = block[:, None] == block[None, :]
    w = _upper_bernoulli(rng, same, p_in) - _upper_bernoulli(rng, ~same, p_out)
    starts = np.r_[0, np.cumsum(sizes)]
    for b in range(len(sizes) - 1):
        if not np.any(w[starts[b]:starts[b + 1], starts[b + 1]:starts[b + 2]] < 0):
            i = starts[b] + rng.integers(sizes[b])
            j = starts[b + 1] + rng.integers(sizes[b + 1])
            w[i, j] = w[j, i] = -1.0
    return Graph(w, Mode.SIGNED)


def mixed(n=20, p_cross=0.5, p_same=0.1, p_link=0.08, seed=0):
    """Quasi-bipartite graph with two clusters.

    Nodes are split into two sides and, independently, into two clusters that
    straddle both sides.  Edges between sides inside a cluster are dense
    (``p_cross``); edges on the same side inside a cluster (``p_same``) and
    edges between clusters (``p_link``) are sparse.
    """
    if n < 4:
        raise InvalidParams("mixed graph needs at least 4 nodes")
    _check_prob(p_cross, p_same, p_link)
    rng = _rng(seed)
    idx = np.arange(n)
    side = (idx >= n // 2).astype(int)
    cluster = ((idx % (n // 2)) >= (n // 2) // 2).astype(int)
    same_cluster = cluster[:, None] == cluster[None, :]
    cross_side = side[:, None] != side[None, :]
    w = np.maximum.reduce([
        _upper_bernoulli(rng, same_cluster & cross_side, p_cross),
        _upper_bernoulli(rng, same_cluster & ~cross_side, p_same),
        _upper_bernoulli(rng, ~same_cluster, p_link),
    ])
    return Graph(w)


def _morph(rng, source, target, n_steps):
    """Graphs moving from ``source`` to ``target`` by flipping differing edges.

    Returns ``n_steps + 1`` graphs; the first is ``source``, the last is
    ``target``, and each step flips a fixed share of the differing edges in a
    seeded random order (flips are never undone).
    """
    n = source.n_nodes
    iu, ju = np.triu_indices(n, k=1)
    diff = np.flatnonzero(source.weights[iu, ju] != target.weights[iu, ju])
    order = diff[rng.permutation(len(diff))]
    out = []
    for k in range(n_steps + 1):
        m = int(round(k * len(order) / n_steps))
        w = source.weights.copy()
        sel = order[:m]
        w[iu[sel], ju[sel]] = target.weights[iu[sel], ju[sel]]
        w[ju[sel], iu[sel]] = target.weights[iu[sel], ju[sel]]
        out.append(Graph(w))
    return out


def dynamic_sequence(n=30, length=40, n_clusters=3, p_random=0.2, p_in=0.6,
                     p_out=0.02, p_bipartite=0.3, seed=0):
    """Topology evolving from a random graph to a clustered graph to a bipartite graph.

    Element 1 (index 0) is an Erdos-Renyi graph, element ``length // 2`` is a
    ``n_clusters``-block clustered graph and the last element is bipartite.
    """
    if length < 3:
        raise InvalidParams("sequence length must be at least 3")
    if n < max(2, n_clusters):
        raise InvalidParams("too few nodes for the requested clusters")
    rng = _rng(seed)
    seeds = rng.integers(0, 2**63 - 1, size=4)
    start = erdos_renyi(n, p_random, seed=int(seeds[0]))
    sizes = [len(c) for c in np.array_split(np.arange(n), n_clusters)]
    middle = clustered(sizes, p_in, p_out, seed=int(seeds[1]))
    end = bipartite(n // 2, n - n // 2, p_bipartite, seed=int(seeds[2]))
    mid = length // 2
    morph_rng = _rng(int(seeds[3]))
    first = _morph(morph_rng, start, middle, mid - 1)
    second = _morph(morph_rng, middle, end, length - mid)
    return first + second[1:]


def karate():
    """Zachary's karate club (34 nodes, 78 unit-weight edges)."""
    text = resources.files("deform_gsp.data").joinpath("karate.csv").read_text(encoding="utf-8")
    return _parse_edge_rows(io.StringIO(text), 34, Mode.NONNEGATIVE)


_GENERATORS = {
    "clustered": clustered,
    "bipartite": bipartite,
    "signedbalanced": signed_balanced,
    "erdosrenyi": erdos_renyi,
    "mixed": mixed,
    "dynamicsequence": dynamic_sequence,
}


def generate(kind, params=None, seed=0):
    """Dispatch to a named generator; deterministic in ``seed``."""
    key = str(kind).lower().replace("_", "").replace("-", "")
    params = dict(params or {})
    if key == "karate":
        return karate()
    try:
        fn = _GENERATORS[key]
    except KeyError:
        raise InvalidParams(f"unknown generator {kind!r}") from None
    try:
        return fn(**params, seed=seed)
    except TypeError as exc:
        raise InvalidParams(str(exc)) from None


def write_matrix_csv(m, path_or_buf):
    """Row-major comma-separated dump of a 2-D array."""
    m = np.atleast_2d(np.asarray(m))
    if isinstance(path_or_buf, (str, Path)):
        with open(path_or_buf, "w", encoding="utf-8", newline="") as fh:
            write_matrix_csv(m, fh)
        return
    writer = csv.writer(path_or_buf, lineterminator="\n")
    for row in m:
        writer.writerow([repr(float(x)) for x in row])
