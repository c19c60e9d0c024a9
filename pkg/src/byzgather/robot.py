"""Per-robot deterministic programs.

HViewRobot implements the gathering algorithm as a phase interpreter:
scout every plausible starting node, settle on the best lookout, wait out
a fixed budget so everyone else arrives too, then walk window-aligned
marches and merges until the swarm sits on one agreed node and terminates
in unison. Several toy programs used as references for the adversary
construction live here as well.

Actions are None (stay), an integer port, or the string "terminate".
"""

import math
from collections import Counter
from dataclasses import dataclass
from typing import NamedTuple

from . import kernels
from .errors import ScenarioError

TERMINATE = "terminate"
STAY = None
_CONTINUE = object()


@dataclass(frozen=True)
class Observation:
    local: object
    snapshot: object
    entry_port: object  # port used to enter the current node, or None


class PathStep(NamedTuple):
    port: int        # port to take
    entry_port: int  # port this move enters the next node through
    degree: int      # degree of the node the move starts from
    node: int        # canonical handle of the node the move ends at


def find_candidates(snapshot, local, own_id):
    """Canonical nodes whose degree and ID multiset match the local view."""
    want = tuple(sorted(local.other_robot_ids + (own_id,)))
    graph = snapshot.graph
    return tuple(
        node
        for node in range(graph.node_count)
        if graph.degree(node) == local.degree and snapshot.robots[node] == want
    )


def dfs_port_sequence(graph, start):
    """Ports of a depth-first traversal, backtracking moves included.

    Neighbors are explored in ascending port order; every tree edge is
    walked forward and back, so replaying the sequence returns to start.
    """
    seq = []
    visited = {start}
    stack = [(start, iter(graph.adjacency[start]), None)]
    while stack:
        node, edge_iter, return_port = stack[-1]
        descended = False
        for port, w, entry in edge_iter:
            if w not in visited:
                visited.add(w)
                seq.append(port)
                stack.append((w, iter(graph.adjacency[w]), entry))
                descended = True
                break
        if not descended:
            stack.pop()
            if return_port is not None:
                seq.append(return_port)
    return tuple(seq)


def shortest_path_ports(graph, a, b):
    """Lexicographically least shortest port route a -> b on a canonical graph.

    Greedy: at each node take the smallest port that still shrinks the
    distance to b. Deterministic across robots because they all hold the
    same canonical graph.
    """
    dist = kernels.distances_from(graph, b)
    steps = []
    u = a
    while u != b:
        for port, w, entry in graph.adjacency[u]:
            if dist[w] == dist[u] - 1:
                steps.append(PathStep(port, entry, graph.degree(u), w))
                u = w
                break
        else:
            raise ValueError(f"no route from {a} to {b}")
    return tuple(steps)


def center_route(graph, start):
    """Route from start to the nearest center node of the view graph.

    Ties go to the least canonical index, then the port-lexicographically
    least shortest path.
    """
    dist = kernels.distances_from(graph, start)
    goal = min(graph.center_nodes(), key=lambda c: (dist[c], c))
    return shortest_path_ports(graph, start, goal)


def singleton_center_target(snapshot):
    """Node of the smallest ID that occurs once overall and sits in the center.

    Returns None when no such ID exists this round.
    """
    counts = Counter(rid for ids in snapshot.robots for rid in ids)
    best = None
    for node in snapshot.graph.center_nodes():
        for rid in snapshot.robots[node]:
            if counts[rid] == 1 and (best is None or rid < best[0]):
                best = (rid, node)
    return None if best is None else best[1]


class HViewRobot:
    """The gathering algorithm as a per-round step function.

    Phase tags, in order: find_lookout, wait, march, merge, reverse,
    final_merge, done. All bookkeeping is driven off the robot's own
    round counter; robots are synchronous and wake together at round 0.
    """

    def __init__(self, own_id, horizon):
        self.own_id = own_id
        self.horizon = horizon
        self.round = 0
        self.phase = "find_lookout"
        # scouting state
        self.initial_snapshot = None
        self.start_guesses = ()
        self.guess_index = -1
        self.attempt_route = ()
        self.attempt_pos = 0
        self.stage = "forward"
        self.movement_log = []
        self._pending_entry = None
        self.max_view_nodes = 0
        self.max_view_robots = 0
        self.lookout_route = ()
        self.walk_pos = 0
        self.sync_round = None
        # window state
        self.candidates = None
        self.target = None
        self.marches_done = 0
        self.window_start = None
        self.route = None
        self.route_pos = 0
        # merge state
        self.trial = None
        self.trial_alive = False
        self.moved = 0
        self.checks_done = 0
        self.arrival_checked = False
        self.pairs = 0
        self.pairs_done = 0
        self.run_final = False

    # -- engine entry point ------------------------------------------------

    def step(self, obs):
        if self._pending_entry is not None:
            # entry port for last round's move arrives with this observation
            self._pending_entry[1] = obs.entry_port
            self._pending_entry = None
        action = _CONTINUE
        for _ in range(10_000):
            handler = getattr(self, "_" + self.phase)
            action = handler(obs)
            if action is not _CONTINUE:
                break
        else:
            raise AssertionError("phase cascade did not settle on an action")
        self.round += 1
        return action

    def _move_logged(self, port):
        record = [port, None]
        self.movement_log.append(record)
        self._pending_entry = record
        return port

    # -- scouting ----------------------------------------------------------

    def _find_lookout(self, obs):
        if self.round == 0:
            self.initial_snapshot = obs.snapshot
            self.start_guesses = find_candidates(obs.snapshot, obs.local, self.own_id)
            if not self._next_attempt():
                self.stage = "walk"
        self._note_view(obs.snapshot)
        while True:
            if self.stage == "forward":
                if self.attempt_pos < len(self.attempt_route):
                    port = self.attempt_route[self.attempt_pos]
                    if port < obs.local.degree:
                        self.attempt_pos += 1
                        return self._move_logged(port)
                    # wrong guess: the route asks for a port this node lacks
                self.stage = "reverse"
            if self.stage == "reverse":
                if self.movement_log:
                    _port, entry = self.movement_log.pop()
                    return entry
                if self._next_attempt():
                    continue
                self.stage = "walk"
                self.walk_pos = 0
            if self.stage == "walk":
                if self.walk_pos < len(self.lookout_route):
                    port = self.lookout_route[self.walk_pos]
                    self.walk_pos += 1
                    return port
                self._enter_wait()
                return _CONTINUE

    def _note_view(self, snapshot):
        # strict maximum: revisits never re-fire since node counts are static
        nodes = snapshot.graph.node_count
        if nodes > self.max_view_nodes:
            self.max_view_nodes = nodes
            self.max_view_robots = sum(len(ids) for ids in snapshot.robots)
            self.lookout_route = tuple(port for port, _entry in self.movement_log)

    def _next_attempt(self):
        self.guess_index += 1
        if self.guess_index >= len(self.start_guesses):
            return False
        guess = self.start_guesses[self.guess_index]
        self.attempt_route = dfs_port_sequence(self.initial_snapshot.graph, guess)
        self.attempt_pos = 0
        self.movement_log = []
        self.stage = "forward"
        return True

    def _enter_wait(self):
        budget = (self.max_view_robots + 2) * self.max_view_nodes**2
        self.sync_round = budget
        self.phase = "wait"

    # -- waiting -----------------------------------------------------------

    def _wait(self, obs):
        if self.round < self.sync_round:
            return STAY
        self.candidates = list(find_candidates(obs.snapshot, obs.local, self.own_id))
        self.target = None
        self.marches_done = 0
        self.window_start = self.round
        self.route = None
        self.phase = "march"
        return _CONTINUE

    # -- marching ----------------------------------------------------------

    def _march(self, obs):
        if not self.candidates:
            return STAY
        snapshot = obs.snapshot
        if len(self.candidates) > 1:
            self._prune(snapshot)
        t = self.round
        if t == self.window_start + self.horizon:
            self.marches_done += 1
            target = singleton_center_target(snapshot)
            if target is not None:
                self.target = target
                return self._begin_merge_schedule(obs)
            if self.horizon == 0:
                # re-running the check within this round would see the same
                # snapshot forever; burn one round and look again
                self.window_start = t + 1
                return STAY
            self.window_start = t
            self.route = None
        if t == self.window_start and self.route is None:
            if len(self.candidates) == 1:
                self.route = center_route(snapshot.graph, self.candidates[0])
                self.route_pos = 0
            else:
                self.route = ()
        if self.route and self.route_pos < len(self.route):
            step = self.route[self.route_pos]
            if step.port >= obs.local.degree:
                self.route = ()  # impossible move: freeze for the window
                return STAY
            self.route_pos += 1
            self.candidates[0] = step.node  # walking with a known position
            return step.port
        return STAY

    def _prune(self, snapshot):
        limit = snapshot.graph.node_count
        self.candidates = [
            node
            for node in self.candidates
            if node < limit and self.own_id in snapshot.robots[node]
        ]

    # -- merge scheduling ----------------------------------------------------

    def _begin_merge_schedule(self, obs):
        k = self.marches_done
        m = self.max_view_robots
        self.pairs = min(max(0, math.ceil(m / 2) - k), max(0, (m - 1 - k) // 2))
        self.pairs_done = 0
        self.run_final = k + 2 * self.pairs + 1 <= m
        if self.pairs == 0 and not self.run_final:
            return self._terminate()
        self.phase = "merge" if self.pairs else "final_merge"
        self._begin_merge_window(obs)
        return _CONTINUE

    def _begin_merge_window(self, obs):
        self.window_start = self.round
        self.movement_log = []
        self.moved = 0
        self.checks_done = 0
        self.arrival_checked = False
        self.trial = self.candidates[0] if self.candidates else None
        self.trial_alive = self.trial is not None
        graph = obs.snapshot.graph
        self.route = ()
        self.route_pos = 0
        if self.trial is None:
            return
        if self.trial >= graph.node_count or self.target >= graph.node_count:
            self._drop_trial()
            return
        try:
            self.route = shortest_path_ports(graph, self.trial, self.target)
        except ValueError:
            self._drop_trial()

    def _terminate(self):
        self.phase = "done"
        return TERMINATE

    def _done(self, obs):
        return STAY

    # -- merge windows -------------------------------------------------------

    def _merge(self, obs):
        return self._merge_round(obs, final=False)

    def _final_merge(self, obs):
        return self._merge_round(obs, final=True)

    def _merge_round(self, obs, final):
        t = self.round
        if t == self.window_start + self.horizon:
            if (
                self.trial_alive
                and self.checks_done == 0
                and self.route_pos == len(self.route)
            ):
                # a route of exactly window length leaves no waiting rounds;
                # run the arrival checks once on the boundary snapshot
                self._merge_checks(obs)
            if final:
                return self._terminate()
            self.phase = "reverse"
            self.window_start = t
            return _CONTINUE
        if self.trial_alive and self.route_pos < len(self.route):
            if self.moved > 0 and obs.entry_port != self.route[self.route_pos - 1].entry_port:
                self._drop_trial()
                return STAY
            step = self.route[self.route_pos]
            if step.port >= obs.local.degree:
                self._drop_trial()
                return STAY
            self.route_pos += 1
            self.moved += 1
            return self._move_logged(step.port)
        if self.trial_alive and self.route_pos == len(self.route):
            self._merge_checks(obs)
        return STAY

    def _merge_checks(self, obs):
        """Waiting-round validation after a completed merge walk."""
        self.checks_done += 1
        if not self.arrival_checked:
            self.arrival_checked = True
            if self.moved > 0 and obs.entry_port != self.route[-1].entry_port:
                self._drop_trial()
                return
        snapshot = obs.snapshot
        graph = snapshot.graph
        if graph.node_count < self.max_view_nodes:
            self._drop_trial()
            return
        target = self.target
        if target >= graph.node_count or self.own_id not in snapshot.robots[target]:
            self._drop_trial()
            return
        mine = tuple(sorted(obs.local.other_robot_ids + (self.own_id,)))
        if obs.local.degree != graph.degree(target) or mine != snapshot.robots[target]:
            self._drop_trial()

    def _drop_trial(self):
        if self.trial_alive:
            self.trial_alive = False
            if self.trial in self.candidates:
                self.candidates.remove(self.trial)

    # -- reversing -------------------------------------------------------------

    def _reverse(self, obs):
        t = self.round
        if t == self.window_start + self.horizon:
            self.pairs_done += 1
            if self.pairs_done < self.pairs:
                self.phase = "merge"
                self._begin_merge_window(obs)
                return _CONTINUE
            if self.run_final:
                self.phase = "final_merge"
                self._begin_merge_window(obs)
                return _CONTINUE
            return self._terminate()
        if self.movement_log:
            _port, entry = self.movement_log.pop()
            return entry
        return STAY


class ApproachProgram:
    """Reference program: odd IDs walk port 0, even IDs hold still.

    Everyone terminates at the configured round. On an even cycle with
    ports 0 clockwise this legitimately gathers a walker with a sitter.
    """

    def __init__(self, own_id, horizon, rounds):
        self.own_id = own_id
        self.horizon = horizon
        self.rounds = rounds
        self.round = 0
        self.phase = "run"

    def step(self, obs):
        t = self.round
        self.round += 1
        if t >= self.rounds:
            self.phase = "done"
            return TERMINATE
        if self.own_id % 2 == 1 and obs.local.degree > 0:
            return 0
        return STAY


class CollideProgram:
    """Reference program: odd IDs walk port 0, even IDs walk port 1."""

    def __init__(self, own_id, horizon, rounds):
        self.own_id = own_id
        self.horizon = horizon
        self.rounds = rounds
        self.round = 0
        self.phase = "run"

    def step(self, obs):
        t = self.round
        self.round += 1
        if t >= self.rounds:
            self.phase = "done"
            return TERMINATE
        want = 0 if self.own_id % 2 == 1 else 1
        if want < obs.local.degree:
            return want
        return STAY


def make_program(spec, own_id, horizon):
    """Instantiate a robot program from its scenario name.

    Plain "hview" is the real algorithm; "approach:N" and "collide:N" are
    terminating reference programs for the adversary construction.
    """
    name, _, arg = spec.partition(":")
    if name == "hview":
        if arg:
            raise ScenarioError("program 'hview' takes no parameter")
        return HViewRobot(own_id, horizon)
    if name in ("approach", "collide"):
        if not arg:
            raise ScenarioError(f"program '{name}' needs a round count, e.g. {name}:3")
        try:
            rounds = int(arg)
        except ValueError:
            raise ScenarioError(f"program parameter {arg!r} is not an integer") from None
        if rounds < 1:
            raise ScenarioError("program round count must be positive")
        cls = ApproachProgram if name == "approach" else CollideProgram
        return cls(own_id, horizon, rounds)
    raise ScenarioError(f"unknown robot program {spec!r}")
