"""Synchronous round scheduler.

Each round: freeze the world, hand every live non-faulty robot its two
views plus the entry port from its previous move, collect robot actions
and the adversary's decisions against that same frozen state, then commit
all moves and ID changes at once. Records one trace line per round and a
closing verdict.
"""

import json
from dataclasses import dataclass, field
from typing import NamedTuple

from .adversary import make_strategy
from .errors import EngineInvariantError, ScenarioError, TraceFormatError
from .graph import PortLabeledGraph
from .robot import Observation, make_program
from .views import local_view, snapshot_view


def creation_round(n, m):
    """Round by which every robot has settled and built its candidate set."""
    return (m + 2) * n * n


def round_bound(n, m, horizon):
    """Latest termination round the schedule permits."""
    return creation_round(n, m) + horizon * m


class RobotRecord(NamedTuple):
    handle: int
    rid: int
    node: int
    byzantine: bool
    terminated: bool


@dataclass(frozen=True)
class WorldState:
    """Start-of-round snapshot handed to the adversary."""

    graph: PortLabeledGraph
    robots: tuple
    round: int
    horizon: int


class ScenarioRobot(NamedTuple):
    rid: int
    node: int
    byzantine: bool


@dataclass(frozen=True)
class Scenario:
    graph: PortLabeledGraph
    horizon: int
    robots: tuple
    adversary_name: str = "passive"
    adversary_seed: int = 0
    adversary_params: dict = field(default_factory=dict)
    round_cap: int = None
    program: str = "hview"

    @classmethod
    def from_obj(cls, obj):
        """Build and validate a scenario from its JSON object form."""
        if not isinstance(obj, dict):
            raise ScenarioError("scenario must be a JSON object")
        problems = []
        graph = PortLabeledGraph.from_literal(obj.get("graph"))
        horizon = obj.get("H")
        if not _is_int(horizon) or horizon < 0:
            problems.append(f"H must be a non-negative integer, got {horizon!r}")
            horizon = 0
        rows = obj.get("robots")
        if not isinstance(rows, list) or not rows:
            problems.append("robots must be a non-empty list")
            rows = []
        robots = []
        for i, row in enumerate(rows):
            rid = row.get("id")
            node = row.get("node")
            byz = row.get("byzantine", False)
            if not _is_int(rid) or rid < 1:
                problems.append(f"robot {i}: id must be a positive integer, got {rid!r}")
                rid = 1
            if not _is_int(node) or not 0 <= node < graph.node_count:
                problems.append(f"robot {i}: node {node!r} not in graph")
                node = 0
            if not isinstance(byz, bool):
                problems.append(f"robot {i}: byzantine must be a boolean")
                byz = bool(byz)
            robots.append(ScenarioRobot(rid, node, byz))
        seen = {}
        for i, r in enumerate(robots):
            if not r.byzantine:
                if r.rid in seen:
                    problems.append(
                        f"robots {seen[r.rid]} and {i} share non-faulty id {r.rid}"
                    )
                seen[r.rid] = i
        adv = obj.get("adversary", {})
        if not isinstance(adv, dict):
            problems.append("adversary must be an object")
            adv = {}
        name = adv.get("strategy", "passive")
        seed = adv.get("seed", 0)
        params = adv.get("params", {})
        if not isinstance(name, str):
            problems.append(f"adversary strategy must be a string, got {name!r}")
            name = "passive"
        if not _is_int(seed):
            problems.append(f"adversary seed must be an integer, got {seed!r}")
            seed = 0
        if not isinstance(params, dict):
            problems.append("adversary params must be an object")
            params = {}
        cap = obj.get("round_cap")
        if cap is not None and (not _is_int(cap) or cap < 1):
            problems.append(f"round_cap must be a positive integer, got {cap!r}")
            cap = None
        program = obj.get("program", "hview")
        if not isinstance(program, str):
            problems.append(f"program must be a string, got {program!r}")
            program = "hview"
        if problems:
            raise ScenarioError("invalid scenario: " + "; ".join(problems))
        return cls(
            graph=graph,
            horizon=horizon,
            robots=tuple(robots),
            adversary_name=name,
            adversary_seed=seed,
            adversary_params=params,
            round_cap=cap,
            program=program,
        )

    def to_obj(self):
        out = {
            "graph": self.graph.to_literal(),
            "H": self.horizon,
            "robots": [
                {"id": r.rid, "node": r.node, "byzantine": r.byzantine}
                for r in self.robots
            ],
            "adversary": {
                "strategy": self.adversary_name,
                "seed": self.adversary_seed,
                "params": self.adversary_params,
            },
        }
        if self.round_cap is not None:
            out["round_cap"] = self.round_cap
        if self.program != "hview":
            out["program"] = self.program
        return out


def _is_int(v):
    return isinstance(v, int) and not isinstance(v, bool)


@dataclass
class RunResult:
    trace: list
    verdict: dict
    observations: list


def run(scenario, observe=None):
    """Execute a scenario to termination or its round cap.

    ``observe`` names a non-faulty handle whose per-round Observation
    values are collected verbatim (used for indistinguishability checks).
    """
    g = scenario.graph
    n = g.node_count
    m = len(scenario.robots)
    horizon = scenario.horizon
    bound = round_bound(n, m, horizon)
    cap = scenario.round_cap if scenario.round_cap is not None else 4 * max(bound, 1)

    nonfaulty = [h for h, r in enumerate(scenario.robots) if not r.byzantine]
    byzantine = [h for h, r in enumerate(scenario.robots) if r.byzantine]
    programs = {
        h: make_program(scenario.program, scenario.robots[h].rid, horizon)
        for h in nonfaulty
    }
    strategy = make_strategy(
        scenario.adversary_name, scenario.adversary_seed, scenario.adversary_params
    )

    positions = {h: r.node for h, r in enumerate(scenario.robots)}
    ids = {h: r.rid for h, r in enumerate(scenario.robots)}
    flags = {h: r.byzantine for h, r in enumerate(scenario.robots)}
    pending_entry = {h: None for h in positions}
    terminated = {}
    target_memo = {h: None for h in nonfaulty}
    records = []
    observations = []

    for t in range(cap):
        occupancy = {}
        for h in positions:
            occupancy.setdefault(positions[h], []).append(ids[h])
        occupancy = {v: tuple(sorted(ids_)) for v, ids_ in occupancy.items()}
        world = WorldState(
            graph=g,
            robots=tuple(
                RobotRecord(h, ids[h], positions[h], flags[h], h in terminated)
                for h in sorted(positions)
            ),
            round=t,
            horizon=horizon,
        )

        actions = {}
        snaps = {}
        for h in nonfaulty:
            if h in terminated:
                continue
            lv = local_view(g, occupancy, positions[h], ids[h], t)
            sv = snapshot_view(g, occupancy, positions[h], horizon, t)
            obs = Observation(lv, sv, pending_entry[h])
            snaps[h] = sv
            action = programs[h].step(obs)
            degree = g.degree(positions[h])
            valid = (
                action is None
                or action == "terminate"
                or (_is_int(action) and 0 <= action < degree)
            )
            if not valid:
                raise EngineInvariantError(
                    f"robot {h} (id {ids[h]}) returned invalid action {action!r} "
                    f"at round {t} on a degree-{degree} node"
                )
            actions[h] = action
            if observe == h:
                observations.append(obs)

        decisions = strategy.decide(world, programs)
        for h in byzantine:
            if h not in decisions:
                raise ScenarioError(f"round {t}: adversary left robot {h} undecided")
            new_id, move = decisions[h]
            if not _is_int(new_id) or new_id < 1:
                raise ScenarioError(
                    f"round {t}: adversary assigned bad id {new_id!r} to robot {h}"
                )
            if move is not None:
                degree = g.degree(positions[h])
                if not _is_int(move) or not 0 <= move < degree:
                    raise ScenarioError(
                        f"round {t}: adversary move {move!r} is not a port of a "
                        f"degree-{degree} node"
                    )

        rows = []
        for h in sorted(positions):
            if flags[h]:
                action = decisions[h][1]
            else:
                action = actions.get(h)
            rows.append(
                {
                    "handle": h,
                    "id": ids[h],
                    "node": positions[h],
                    "action": action,
                    "entry_port": pending_entry[h],
                }
            )
        p_sizes = []
        phases = []
        v_targets = []
        for h in nonfaulty:
            prog = programs[h]
            cands = getattr(prog, "candidates", None)
            p_sizes.append(None if cands is None else len(cands))
            phases.append(getattr(prog, "phase", None))
            tgt = getattr(prog, "target", None)
            if tgt is not None and target_memo[h] is None and h in snaps:
                # Translate the robot's snapshot-relative choice to a world
                # node once, with the snapshot it was chosen from; later
                # snapshots renumber as the robot moves.
                node_map = snaps[h].graph.node_map
                inverse = {ci: v for v, ci in node_map.items()}
                target_memo[h] = inverse.get(tgt)
            v_targets.append(target_memo[h])
        phi = None if any(s is None for s in p_sizes) else sum(p_sizes)
        records.append(
            {
                "round": t,
                "robots": rows,
                "phi": phi,
                "p_sizes": p_sizes,
                "v_targets": v_targets,
                "phases": phases,
            }
        )

        for h in nonfaulty:
            if h in terminated:
                continue
            action = actions[h]
            if action == "terminate":
                terminated[h] = t
                pending_entry[h] = None
            elif action is None:
                pending_entry[h] = None
            else:
                w, q = g.adjacency[positions[h]][action]
                positions[h] = w
                pending_entry[h] = q
        for h in byzantine:
            new_id, move = decisions[h]
            ids[h] = new_id
            if move is None:
                pending_entry[h] = None
            else:
                w, q = g.adjacency[positions[h]][move]
                positions[h] = w
                pending_entry[h] = q

        if len(terminated) == len(nonfaulty):
            break

    verdict = _verdict(nonfaulty, positions, terminated, bound)
    return RunResult(records, verdict, observations)


def _verdict(nonfaulty, positions, terminated, bound):
    all_done = len(terminated) == len(nonfaulty)
    if not all_done:
        return {
            "gathered": False,
            "termination_round": None,
            "unanimous_termination": False,
            "bound_satisfied": False,
            "failure_reason": "round cap reached before all non-faulty robots terminated",
        }
    last = max(terminated.values())
    unanimous = len(set(terminated.values())) == 1
    spots = {positions[h] for h in nonfaulty}
    gathered = unanimous and len(spots) == 1
    if gathered:
        reason = None
    elif not unanimous:
        reason = "terminations not unanimous"
    else:
        reason = "terminated at multiple nodes"
    return {
        "gathered": gathered,
        "termination_round": last,
        "unanimous_termination": unanimous,
        "bound_satisfied": last <= bound,
        "failure_reason": reason,
    }


def write_trace(path, result):
    """One JSON object per line: round records, then the verdict."""
    with open(path, "w") as fh:
        for rec in result.trace:
            fh.write(json.dumps(rec, sort_keys=True, separators=(",", ":")) + "\n")
        fh.write(json.dumps(result.verdict, sort_keys=True, separators=(",", ":")) + "\n")


def read_trace(path):
    lines = []
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            raw = raw.strip()
            if not raw:
                continue
            try:
                lines.append(json.loads(raw))
            except json.JSONDecodeError as exc:
                raise TraceFormatError(f"line {lineno}: {exc}") from None
    return lines
