"""Observation products of the Look step.

A robot sees two things each round: the local view of its own node
(degree plus co-located robot IDs) and the snapshot view, a canonically
labeled copy of the radius-H subgraph around it annotated with per-node
ID lists. The snapshot carries no marker for the observer's own node;
robots that want their position must infer it from what the IDs reveal.
"""

from dataclasses import dataclass
from functools import lru_cache

from .graph import canonical_form


@dataclass(frozen=True)
class LocalView:
    degree: int
    other_robot_ids: tuple
    round: int


@dataclass(frozen=True)
class SnapshotView:
    """Unanchored canonical view subgraph with per-node ID multisets.

    robots[i] is the sorted tuple of IDs occupying canonical node i,
    observer included. Equality is structural: two full-coverage
    snapshots taken by different observers in the same round compare
    equal bitwise.
    """

    graph: object
    robots: tuple
    round: int


def snapshot_subgraph(g, v, horizon):
    """Nodes and edges reachable by paths of length <= horizon from v.

    A node joins at distance <= horizon; an edge joins only if one of its
    endpoints sits at depth <= horizon - 1, since an edge between two
    depth-horizon nodes lies on no such path.
    """
    dist = g.distances_from(v)
    nodes = frozenset(w for w in range(g.node_count) if dist[w] <= horizon)
    edges = set()
    for a in nodes:
        if dist[a] > horizon - 1:
            continue
        for b, _q in g.adjacency[a]:
            edges.add((a, b) if a < b else (b, a))
    return nodes, frozenset(edges)


@lru_cache(maxsize=None)
def _view_canonical(g, v, horizon):
    nodes, edges = snapshot_subgraph(g, v, horizon)
    return canonical_form(g, nodes, edges)


def snapshot_view(g, occupancy, v, horizon, round_no):
    """Build the observer-independent snapshot for a robot at node v.

    occupancy maps node -> sorted tuple of current IDs there (all robots,
    terminated ones included).
    """
    canon = _view_canonical(g, v, horizon)
    robots = [()] * canon.node_count
    for internal, idx in canon.node_map.items():
        robots[idx] = occupancy.get(internal, ())
    return SnapshotView(graph=canon, robots=tuple(robots), round=round_no)


def local_view(g, occupancy, v, own_id, round_no):
    ids = list(occupancy.get(v, ()))
    ids.remove(own_id)
    return LocalView(degree=g.degree(v), other_robot_ids=tuple(ids), round=round_no)
