"""The reference implementations must be right before anything else is.

Every fixture here is small enough to check by eye; expected values were
worked out by hand and are frozen as literals.
"""

import pytest

from byzgather.errors import TraceFormatError
from byzgather.oracle import (
    ORACLE_NODE_CAP,
    bfs_distances,
    brute_snapshot,
    graph_metrics,
    merge_pair_count,
    neighbors_of,
    runs_final_window,
    split_trace,
)

# a-b-c path: ports assigned in ascending neighbor order
PATH3 = [[(1, 0)], [(0, 0), (2, 0)], [(1, 1)]]

# 5-cycle, port 0 clockwise, port 1 anticlockwise
CYCLE5 = [
    [((v + 1) % 5, 1), ((v - 1) % 5, 0)]
    for v in range(5)
]

# 4-cycle, same convention
CYCLE4 = [
    [((v + 1) % 4, 1), ((v - 1) % 4, 0)]
    for v in range(4)
]


def test_bfs_distances_path():
    nb = neighbors_of(PATH3)
    assert bfs_distances(nb, 0) == [0, 1, 2]
    assert bfs_distances(nb, 1) == [1, 0, 1]


def test_bfs_marks_unreachable():
    assert bfs_distances([[1], [0], []], 0) == [0, 1, -1]


def test_graph_metrics_path3():
    radius, center, eccs = graph_metrics(PATH3)
    assert radius == 1
    assert center == {1}
    assert eccs == [2, 1, 2]


def test_graph_metrics_cycle4():
    radius, center, eccs = graph_metrics(CYCLE4)
    assert radius == 2
    assert center == {0, 1, 2, 3}
    assert eccs == [2, 2, 2, 2]


def test_graph_metrics_rejects_disconnected():
    with pytest.raises(ValueError):
        graph_metrics([[(1, 0)], [(0, 0)], []])


def test_brute_snapshot_single_node():
    nodes, edges = brute_snapshot([[]], 0, 0)
    assert nodes == {0}
    assert edges == set()


def test_brute_snapshot_horizon_zero():
    nodes, edges = brute_snapshot(PATH3, 1, 0)
    assert nodes == {1}
    assert edges == set()


def test_brute_snapshot_path3_endpoint():
    nodes, edges = brute_snapshot(PATH3, 0, 1)
    assert nodes == {0, 1}
    assert edges == {(0, 1)}


def test_brute_snapshot_five_cycle_misses_far_edge():
    # Distance-2 view from node 0 covers every node, yet the edge joining
    # the two frontier nodes 2 and 3 lies on no path of length <= 2.
    nodes, edges = brute_snapshot(CYCLE5, 0, 2)
    assert nodes == {0, 1, 2, 3, 4}
    assert edges == {(0, 1), (1, 2), (0, 4), (3, 4)}
    assert len(edges) == 4


def test_brute_snapshot_five_cycle_full_at_three():
    nodes, edges = brute_snapshot(CYCLE5, 0, 3)
    assert len(nodes) == 5
    assert len(edges) == 5


def test_brute_snapshot_refuses_large_graphs():
    big = [[((v + 1) % 9, 1), ((v - 1) % 9, 0)] for v in range(9)]
    assert ORACLE_NODE_CAP < 9
    with pytest.raises(ValueError):
        brute_snapshot(big, 0, 2)


def test_merge_pair_count_small_values():
    # (m, k) -> pairs, worked out from the two caps by hand
    assert merge_pair_count(1, 1) == 0
    assert merge_pair_count(2, 1) == 0
    assert merge_pair_count(3, 1) == 0
    assert merge_pair_count(4, 1) == 1
    # (5, 1): the demand cap allows 2 but only 1 pair fits the budget
    assert merge_pair_count(5, 1) == 1
    assert merge_pair_count(5, 2) == 1
    assert merge_pair_count(6, 2) == 1
    assert merge_pair_count(8, 3) == 1


def test_schedule_fits_round_budget():
    # k march windows + 2*pairs window pairs + the final window must fit
    # into the m-window budget whenever the final window runs.
    for m in range(1, 12):
        for k in range(1, m + 1):
            pairs = merge_pair_count(m, k)
            if runs_final_window(m, k, pairs):
                assert k + 2 * pairs + 1 <= m


def test_split_trace_empty():
    with pytest.raises(TraceFormatError):
        split_trace([])


def test_split_trace_missing_verdict():
    with pytest.raises(TraceFormatError):
        split_trace([{"round": 0, "robots": []}])


def test_split_trace_round_gap():
    bad = [
        {"round": 0, "robots": []},
        {"round": 2, "robots": []},
        {"gathered": True},
    ]
    with pytest.raises(TraceFormatError):
        split_trace(bad)


def test_split_trace_roundtrip():
    records = [{"round": 0, "robots": []}, {"round": 1, "robots": []}]
    verdict = {"gathered": False}
    got_records, got_verdict = split_trace(records + [verdict])
    assert got_records == records
    assert got_verdict == verdict
