"""Anonymous port-labeled graphs: representation, metrics, canonical labeling.

A port-labeled graph numbers the edges at each node locally 0..deg-1; the
two endpoints of an edge may carry different ports. All values here are
immutable and safe to share. Metric queries run on the BFS kernels and are
cached per graph value.
"""

import itertools
import random
from dataclasses import dataclass, field

from . import kernels
from .errors import GraphError


@dataclass(frozen=True)
class PortLabeledGraph:
    """Immutable port-labeled graph.

    adjacency[v][p] is the pair (w, q): port p at v leads to node w and
    enters it through w's port q.
    """

    node_count: int
    adjacency: tuple

    def __post_init__(self):
        _validate(self.node_count, self.adjacency)

    @classmethod
    def from_adjacency(cls, adjacency):
        adj = tuple(tuple((int(w), int(q)) for w, q in row) for row in adjacency)
        return cls(node_count=len(adj), adjacency=adj)

    @classmethod
    def from_literal(cls, obj):
        """Parse the {"n": ..., "adj": [[[w, q], ...], ...]} wire form."""
        try:
            n = obj["n"]
            adj = obj["adj"]
        except (TypeError, KeyError) as exc:
            raise GraphError(f"graph literal needs 'n' and 'adj': {exc}") from None
        if not isinstance(n, int):
            raise GraphError("graph literal field 'n' must be an integer")
        if not isinstance(adj, list) or len(adj) != n:
            raise GraphError(f"graph literal 'adj' must list {n} nodes")
        try:
            g = cls.from_adjacency(adj)
        except (TypeError, ValueError) as exc:
            if isinstance(exc, GraphError):
                raise
            raise GraphError(f"graph literal is malformed: {exc}") from None
        return g

    def to_literal(self):
        return {
            "n": self.node_count,
            "adj": [[[w, q] for w, q in row] for row in self.adjacency],
        }

    def degree(self, v):
        return len(self.adjacency[v])

    def neighbor(self, v, port):
        """(node reached, entry port there) for taking ``port`` at v."""
        return self.adjacency[v][port]

    def neighbor_tuples(self):
        return tuple(tuple(w for w, _q in row) for row in self.adjacency)

    def distances_from(self, v):
        self._check_node(v)
        return kernels.distances_from(self, v)

    def distance(self, u, v):
        self._check_node(u)
        self._check_node(v)
        return kernels.distances_from(self, u)[v]

    def eccentricity(self, v):
        self._check_node(v)
        return kernels.eccentricities(self)[v]

    def radius(self):
        return min(kernels.eccentricities(self))

    def center_nodes(self):
        eccs = kernels.eccentricities(self)
        r = min(eccs)
        return frozenset(v for v, e in enumerate(eccs) if e == r)

    def edges(self):
        """All edges as sorted (a, b) tuples."""
        out = set()
        for v, row in enumerate(self.adjacency):
            for w, _q in row:
                out.add((v, w) if v < w else (w, v))
        return frozenset(out)

    def _check_node(self, v):
        if not isinstance(v, int) or not 0 <= v < self.node_count:
            raise GraphError(f"node {v!r} out of range for n={self.node_count}")


def _validate(n, adjacency):
    if not isinstance(n, int) or n < 1:
        raise GraphError(f"node count must be a positive integer, got {n!r}")
    if len(adjacency) != n:
        raise GraphError(f"adjacency lists {len(adjacency)} nodes, expected {n}")
    seen_pairs = set()
    for v, row in enumerate(adjacency):
        for p, (w, q) in enumerate(row):
            if not 0 <= w < n:
                raise GraphError(f"adjacency[{v}][{p}] points at missing node {w}")
            if w == v:
                raise GraphError(f"self-loop at node {v}, port {p}")
            if not 0 <= q < len(adjacency[w]):
                raise GraphError(f"adjacency[{v}][{p}] names port {q} absent at node {w}")
            back = adjacency[w][q]
            if tuple(back) != (v, p):
                raise GraphError(
                    f"asymmetric edge: adjacency[{v}][{p}] = ({w}, {q}) "
                    f"but adjacency[{w}][{q}] = {tuple(back)}"
                )
            # parallel edges would repeat a node pair across distinct ports
            if v < w:
                pair = (v, w)
                if pair in seen_pairs:
                    raise GraphError(f"parallel edge between {v} and {w}")
                seen_pairs.add(pair)
    # connectivity by plain BFS; kernels are not involved during validation
    reached = {0}
    frontier = [0]
    while frontier:
        u = frontier.pop()
        for w, _q in adjacency[u]:
            if w not in reached:
                reached.add(w)
                frontier.append(w)
    if len(reached) != n:
        missing = sorted(set(range(n)) - reached)
        raise GraphError(f"graph is disconnected; unreachable nodes {missing}")


@dataclass(frozen=True)
class CanonicalGraph:
    """Canonically labeled connected subgraph with ports kept from the source.

    adjacency[i] is a tuple of (port, neighbor, entry_port) triples in
    ascending port order. Ports are the original graph's numbers, so view
    subgraphs may skip port values at trimmed nodes. node_map takes source
    node indices to canonical ones; it is engine plumbing and excluded from
    equality, so structurally equal views compare equal across rounds and
    observers.
    """

    adjacency: tuple
    node_map: dict = field(compare=False, repr=False)

    @property
    def node_count(self):
        return len(self.adjacency)

    def degree(self, i):
        return len(self.adjacency[i])

    def ports(self, i):
        return tuple(p for p, _w, _q in self.adjacency[i])

    def step(self, i, port):
        """(neighbor, entry port) via ``port`` at node i, or None if absent."""
        for p, w, q in self.adjacency[i]:
            if p == port:
                return w, q
        return None

    def neighbor_tuples(self):
        return tuple(tuple(w for _p, w, _q in row) for row in self.adjacency)

    def distances_from(self, i):
        return kernels.distances_from(self, i)

    def radius(self):
        return min(kernels.eccentricities(self))

    def center_nodes(self):
        eccs = kernels.eccentricities(self)
        r = min(eccs)
        return tuple(i for i, e in enumerate(eccs) if e == r)


def _normalize_edges(edges):
    return {(a, b) if a < b else (b, a) for a, b in edges}


def canonical_form(g, nodes, edges):
    """Deterministic relabeling of a connected subgraph of g.

    Every candidate start gets a breadth-first traversal that discovers
    neighbors in ascending port order; the code of a traversal lists, per
    discovered node, its retained degree and one (port, neighbor index,
    entry port) triple per retained edge. The least code wins, ties broken
    by least source node index, which keeps the labeling stable across
    rounds for any fixed (nodes, edges) input.
    """
    node_set = set(nodes)
    edge_set = _normalize_edges(edges)
    if not node_set:
        raise GraphError("empty subgraph")
    retained = {}
    for v in node_set:
        row = []
        for p, (w, q) in enumerate(g.adjacency[v]):
            pair = (v, w) if v < w else (w, v)
            if pair in edge_set:
                if w not in node_set:
                    raise GraphError(f"edge {pair} leaves the node set")
                row.append((p, w, q))
        retained[v] = tuple(row)

    best = None
    for start in sorted(node_set):
        index = {start: 0}
        order = [start]
        head = 0
        while head < len(order):
            u = order[head]
            head += 1
            for _p, w, _q in retained[u]:
                if w not in index:
                    index[w] = len(order)
                    order.append(w)
        if len(order) != len(node_set):
            raise GraphError("subgraph is disconnected")
        code = tuple(
            (len(retained[u]), tuple((p, index[w], q) for p, w, q in retained[u]))
            for u in order
        )
        if best is None or code < best[0]:
            best = (code, order, index)

    code, order, index = best
    adjacency = tuple(
        tuple((p, index[w], q) for p, w, q in retained[u]) for u in order
    )
    return CanonicalGraph(adjacency=adjacency, node_map=dict(index))


def induced_subgraph(g, nodes):
    """(nodes, edges) of the subgraph induced on ``nodes``."""
    node_set = frozenset(nodes)
    edges = set()
    for v in node_set:
        for w, _q in g.adjacency[v]:
            if w in node_set:
                edges.add((v, w) if v < w else (w, v))
    return node_set, frozenset(edges)


def center_graph(g, node_subset=None):
    """Induced subgraph on the given nodes, defaulting to the center."""
    if node_subset is None:
        node_subset = g.center_nodes()
    return induced_subgraph(g, node_subset)


def random_connected_graph(n, extra_edge_prob, seed):
    """Random spanning tree plus probabilistic extra edges, random ports.

    Reproducible from the seed: the tree attaches node i to a uniformly
    chosen earlier node, every non-tree pair joins with the given
    probability, and each node's ports are a fresh shuffle.
    """
    if not isinstance(n, int) or n < 1:
        raise GraphError(f"node count must be a positive integer, got {n!r}")
    rng = random.Random(seed)
    edges = set()
    for i in range(1, n):
        parent = rng.randrange(i)
        edges.add((parent, i))
    for u, v in itertools.combinations(range(n), 2):
        if (u, v) not in edges and rng.random() < extra_edge_prob:
            edges.add((u, v))

    incident = {v: [] for v in range(n)}
    for u, v in sorted(edges):
        incident[u].append(v)
        incident[v].append(u)
    port_of = {}
    for v in range(n):
        order = incident[v][:]
        rng.shuffle(order)
        for p, w in enumerate(order):
            port_of[v, w] = p
    adjacency = []
    for v in range(n):
        row = [None] * len(incident[v])
        for w in incident[v]:
            row[port_of[v, w]] = (w, port_of[w, v])
        adjacency.append(tuple(row))
    return PortLabeledGraph(node_count=n, adjacency=tuple(adjacency))


def cycle_graph(n):
    """Cycle with uniform ports: 0 is clockwise, 1 is anticlockwise."""
    if n < 3:
        raise GraphError(f"cycle needs at least 3 nodes, got {n}")
    adjacency = tuple(
        (((i + 1) % n, 1), ((i - 1) % n, 0)) for i in range(n)
    )
    return PortLabeledGraph(node_count=n, adjacency=adjacency)
