"""Robot program units, exercised on hand-built views."""

import pytest

from byzgather.errors import ScenarioError
from byzgather.graph import PortLabeledGraph, cycle_graph, random_connected_graph
from byzgather.robot import (
    HViewRobot,
    Observation,
    center_route,
    dfs_port_sequence,
    find_candidates,
    make_program,
    shortest_path_ports,
    singleton_center_target,
)
from byzgather.views import local_view, snapshot_view

PATH3 = PortLabeledGraph.from_literal(
    {"n": 3, "adj": [[[1, 0]], [[0, 0], [2, 0]], [[1, 1]]]}
)


def occupancy_of(placed):
    occ = {}
    for node, rid in placed:
        occ.setdefault(node, []).append(rid)
    return {v: tuple(sorted(ids)) for v, ids in occ.items()}


def full_view(g, placed, v, round_no=0):
    occ = occupancy_of(placed)
    return snapshot_view(g, occ, v, g.node_count, round_no)


def test_find_candidates_unique_id_pins_position():
    placed = [(0, 5), (2, 9)]
    snap = full_view(PATH3, placed, 0)
    local = local_view(PATH3, occupancy_of(placed), 0, own_id=5, round_no=0)
    cands = find_candidates(snap, local, own_id=5)
    assert len(cands) == 1
    assert snap.robots[cands[0]] == (5,)


def test_find_candidates_duplicated_id_is_ambiguous():
    # the observer's ID also sits on the symmetric far endpoint, and both
    # endpoints look alike, so two candidate positions survive
    placed = [(0, 5), (2, 5)]
    snap = full_view(PATH3, placed, 0)
    local = local_view(PATH3, occupancy_of(placed), 0, own_id=5, round_no=0)
    cands = find_candidates(snap, local, own_id=5)
    assert len(cands) == 2


def test_find_candidates_respects_degree():
    # same singleton occupancy but the center has degree 2; an endpoint
    # observer cannot be confused with it
    placed = [(0, 5), (1, 5)]
    snap = full_view(PATH3, placed, 0)
    local = local_view(PATH3, occupancy_of(placed), 0, own_id=5, round_no=0)
    for cand in find_candidates(snap, local, own_id=5):
        assert snap.graph.degree(cand) == 1


def replay(graph, start, ports):
    at = start
    for p in ports:
        nxt = graph.step(at, p)
        assert nxt is not None, f"port {p} absent at node {at}"
        at = nxt[0]
    return at


def test_dfs_port_sequence_covers_and_returns():
    for seed in range(20):
        g = random_connected_graph(2 + seed % 7, 0.3, seed=seed)
        snap = snapshot_view(g, {}, 0, g.node_count, 0)
        cg = snap.graph
        start = cg.node_map[0]
        seq = dfs_port_sequence(cg, start)
        # replay visits every node and ends where it began
        at = start
        seen = {at}
        for p in seq:
            at = cg.step(at, p)[0]
            seen.add(at)
        assert at == start
        assert seen == set(range(cg.node_count))
        # each tree edge is walked exactly twice
        assert len(seq) == 2 * (cg.node_count - 1)


def test_dfs_port_sequence_single_node():
    g = random_connected_graph(1, 0.0, seed=0)
    snap = snapshot_view(g, {}, 0, 1, 0)
    cg = snap.graph
    assert dfs_port_sequence(cg, cg.node_map[0]) == ()


def test_shortest_path_ports_reaches_target():
    for seed in range(20):
        g = random_connected_graph(3 + seed % 6, 0.35, seed=40 + seed)
        snap = snapshot_view(g, {}, 0, g.node_count, 0)
        cg = snap.graph
        for a in range(cg.node_count):
            for b in range(cg.node_count):
                steps = shortest_path_ports(cg, a, b)
                assert len(steps) == cg.distances_from(a)[b]
                assert replay(cg, a, [s.port for s in steps]) == b


def test_center_route_stays_put_at_center():
    snap = snapshot_view(PATH3, {}, 1, 3, 0)
    cg = snap.graph
    center_handle = cg.node_map[1]
    assert center_route(cg, center_handle) == ()


def test_center_route_walks_endpoint_to_center():
    snap = snapshot_view(PATH3, {}, 0, 3, 0)
    cg = snap.graph
    route = center_route(cg, cg.node_map[0])
    assert len(route) == 1
    assert route[0].node == cg.node_map[1]


def test_singleton_center_target_prefers_smallest_unique():
    # center of the path holds unique id 3; id 7 is duplicated and ignored
    placed = [(1, 3), (0, 7), (2, 7)]
    snap = full_view(PATH3, placed, 1)
    target = singleton_center_target(snap)
    assert target == snap.graph.node_map[1]


def test_singleton_center_target_ignores_non_center_uniques():
    # unique ids exist only at the endpoints; the center rule rejects them
    placed = [(0, 2), (2, 4)]
    snap = full_view(PATH3, placed, 0)
    assert singleton_center_target(snap) is None


def test_singleton_center_target_none_when_all_duplicated():
    placed = [(1, 5), (0, 5)]
    snap = full_view(PATH3, placed, 1)
    assert singleton_center_target(snap) is None


def step_once(robot, g, placed, v, entry=None, round_no=0):
    occ = occupancy_of(placed)
    obs = Observation(
        local=local_view(g, occ, v, robot.own_id, round_no),
        snapshot=snapshot_view(g, occ, v, robot.horizon, round_no),
        entry_port=entry,
    )
    return robot.step(obs)


def test_hview_single_robot_single_node_terminates_round_three():
    g = random_connected_graph(1, 0.0, seed=0)
    robot = HViewRobot(own_id=4, horizon=0)
    actions = [step_once(robot, g, [(0, 4)], 0, round_no=t) for t in range(4)]
    # budget is (1+2)*1*1 = 3 rounds of settling, then immediate windows
    assert actions[3] == "terminate"
    assert robot.phase == "done"


def test_hview_rejects_invalid_phase_loop_guard():
    robot = HViewRobot(own_id=4, horizon=1)
    assert robot.phase == "find_lookout"
    assert robot.round == 0


def test_make_program_hview():
    prog = make_program("hview", own_id=3, horizon=2)
    assert isinstance(prog, HViewRobot)


def test_make_program_approach_walks_and_terminates():
    g = cycle_graph(4)
    prog = make_program("approach:2", own_id=1, horizon=1)
    a0 = step_once(prog, g, [(0, 1)], 0, round_no=0)
    a1 = step_once(prog, g, [(1, 1)], 1, round_no=1)
    a2 = step_once(prog, g, [(2, 1)], 2, round_no=2)
    assert (a0, a1) == (0, 0)
    assert a2 == "terminate"


def test_make_program_approach_even_id_stays():
    g = cycle_graph(4)
    prog = make_program("approach:1", own_id=2, horizon=1)
    assert step_once(prog, g, [(0, 2)], 0, round_no=0) is None
    assert step_once(prog, g, [(0, 2)], 0, round_no=1) == "terminate"


def test_make_program_rejects_unknown():
    with pytest.raises(ScenarioError):
        make_program("wander", own_id=1, horizon=1)
    with pytest.raises(ScenarioError):
        make_program("approach:0", own_id=1, horizon=1)
    with pytest.raises(ScenarioError):
        make_program("approach:x", own_id=1, horizon=1)
