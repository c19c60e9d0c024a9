"""Centralized Byzantine controllers.

A strategy sees the frozen start-of-round world (the adversary is
omniscient) and returns, for every Byzantine robot, the ID it will display
next round and the move it takes this round. Strategies are deterministic
given their seed and parameters, so runs replay bitwise.
"""

from dataclasses import dataclass
import random

from .errors import MimicError, ScenarioError
from .graph import canonical_form, cycle_graph

ID_SPACE = 2**31


def _byzantine(world):
    return [r for r in world.robots if r.byzantine]


class PassiveStrategy:
    """Every Byzantine robot sits still and keeps its current ID."""

    def __init__(self, seed=0, params=None):
        pass

    def decide(self, world, programs=None):
        return {r.handle: (r.rid, None) for r in _byzantine(world)}


class RandomStrategy:
    """Uniform random walk with a fresh random ID every round."""

    def __init__(self, seed=0, params=None):
        self.rng = random.Random(seed)

    def decide(self, world, programs=None):
        out = {}
        for r in _byzantine(world):
            degree = world.graph.degree(r.node)
            pick = self.rng.randrange(degree + 1)
            move = None if pick == degree else pick
            out[r.handle] = (self.rng.randrange(1, ID_SPACE), move)
        return out


class ScriptedStrategy:
    """Replay an explicit per-round script; unscripted rounds are passive.

    params["script"] is a list of {"round": t, "byz": [{"id": i, "move": p},
    ...]} entries, the inner list aligned with Byzantine robots in handle
    order. Missing "id" keeps the current ID; "move" of null means stay.
    """

    def __init__(self, seed=0, params=None):
        rows = (params or {}).get("script", [])
        self.by_round = {}
        for entry in rows:
            t = entry.get("round")
            if not isinstance(t, int) or t < 0:
                raise ScenarioError(f"scripted entry has bad round {t!r}")
            if t in self.by_round:
                raise ScenarioError(f"duplicate scripted round {t}")
            self.by_round[t] = entry.get("byz", [])

    def decide(self, world, programs=None):
        t = world.round
        byz = _byzantine(world)
        rows = self.by_round.get(t)
        if rows is None:
            return {r.handle: (r.rid, None) for r in byz}
        if len(rows) != len(byz):
            raise ScenarioError(
                f"round {t}: script gives {len(rows)} decisions "
                f"for {len(byz)} byzantine robots"
            )
        out = {}
        for r, row in zip(byz, rows):
            move = row.get("move")
            if move is not None:
                degree = world.graph.degree(r.node)
                if not isinstance(move, int) or not 0 <= move < degree:
                    raise ScenarioError(
                        f"round {t}: scripted move {move!r} is not a port "
                        f"of a degree-{degree} node"
                    )
            out[r.handle] = (row.get("id", r.rid), move)
        return out


class ForgerStrategy:
    """Camp at a look-alike node and impersonate a non-faulty victim.

    Each Byzantine robot is assigned a victim (non-faulty robots sorted by
    ID, round-robin). It walks to a camp chosen against the victim's
    starting node: same degree, initially unoccupied, and canonically
    AFTER the victim's node so the impersonation inflates the victim's
    candidate set without ever outranking the victim's true position.
    From shortly before the candidate-creation round onward it displays
    the victim's ID forever. A victim that is co-located at start, or a
    graph with no qualifying camp, leaves that robot passive.
    """

    def __init__(self, seed=0, params=None):
        self.plans = None
        self.forge_round = None

    def _build(self, world):
        g = world.graph
        n = g.node_count
        m = len(world.robots)
        creation = (m + 2) * n * n
        self.forge_round = max(0, creation - n - 2)
        self.plans = {}
        nonfaulty = sorted(
            (r for r in world.robots if not r.byzantine), key=lambda r: r.rid
        )
        if not nonfaulty:
            return
        canon = canonical_form(g, range(n), g.edges())
        occupants = {}
        for r in world.robots:
            occupants.setdefault(r.node, []).append(r.handle)
        taken = set()
        byz = _byzantine(world)
        for i, robot in enumerate(byz):
            victim = nonfaulty[i % len(nonfaulty)]
            if len(occupants[victim.node]) != 1:
                continue
            best = None
            for w in range(n):
                if w == victim.node or w in taken:
                    continue
                if g.degree(w) != g.degree(victim.node):
                    continue
                if any(h != robot.handle for h in occupants.get(w, [])):
                    continue
                if canon.node_map[w] <= canon.node_map[victim.node]:
                    continue
                if best is None or canon.node_map[w] > canon.node_map[best]:
                    best = w
            if best is not None:
                taken.add(best)
                self.plans[robot.handle] = (best, victim.rid)

    def decide(self, world, programs=None):
        if self.plans is None:
            self._build(world)
        out = {}
        for r in _byzantine(world):
            plan = self.plans.get(r.handle)
            if plan is None:
                out[r.handle] = (r.rid, None)
                continue
            camp, victim_id = plan
            shown = victim_id if world.round >= self.forge_round else r.rid
            move = None
            if r.node != camp:
                dist = world.graph.distances_from(camp)
                for port, (w, _q) in enumerate(world.graph.adjacency[r.node]):
                    if dist[w] == dist[r.node] - 1:
                        move = port
                        break
            out[r.handle] = (shown, move)
        return out


@dataclass(frozen=True)
class MimicPlan:
    """Recording of a reference execution on the small cycle.

    ``beta_offsets[t]`` is the impersonated robot's position relative to
    the shadowed robot at round t: positive clockwise, negative
    anticlockwise, None when out of visibility range.
    """

    c: int
    r1: int
    alpha_id: int
    beta_id: int
    alpha_ports: tuple
    beta_ports: tuple
    beta_offsets: tuple

    def __post_init__(self):
        if self.r1 < 1:
            raise MimicError("reference execution must run at least one round")
        if len(self.alpha_ports) != self.r1 or len(self.beta_ports) != self.r1:
            raise MimicError("port recordings must cover rounds 0..r1-1")
        if len(self.beta_offsets) != self.r1 + 1:
            raise MimicError("offset recording must cover rounds 0..r1")

    def to_params(self):
        return {
            "c": self.c,
            "r1": self.r1,
            "alpha_id": self.alpha_id,
            "beta_id": self.beta_id,
            "alpha_ports": list(self.alpha_ports),
            "beta_ports": list(self.beta_ports),
            "beta_offsets": list(self.beta_offsets),
        }

    @classmethod
    def from_params(cls, params):
        try:
            return cls(
                c=params["c"],
                r1=params["r1"],
                alpha_id=params["alpha_id"],
                beta_id=params["beta_id"],
                alpha_ports=tuple(params["alpha_ports"]),
                beta_ports=tuple(params["beta_ports"]),
                beta_offsets=tuple(params["beta_offsets"]),
            )
        except (KeyError, TypeError) as exc:
            raise ScenarioError(f"bad mimic parameters: {exc}") from None


def _signed_offset(node, anchor, n):
    cw = (node - anchor) % n
    return cw if cw <= n // 2 else cw - n


def _port_for_delta(delta):
    # cycle convention: port 0 steps clockwise (+1), port 1 anticlockwise
    if delta == 0:
        return None
    return 0 if delta == 1 else 1


class MimicStrategy:
    """Shadow a recorded two-robot execution around one live robot.

    The two Byzantine robots both display the recorded partner's ID. While
    the partner was out of range, both copy the shadowed robot's recorded
    port, holding their relative positions. While the partner was visible,
    the Byzantine currently standing in for it replays the partner's port
    (also on the round the partner leaves range, which is what actually
    restores the out-of-range distance); the other keeps copying. On the
    round the partner comes back into range, the Byzantine on the matching
    side jumps to reproduce the partner's relative position.
    """

    def __init__(self, seed=0, params=None):
        self.plan = MimicPlan.from_params(params or {})

    def decide(self, world, programs=None):
        plan = self.plan
        byz = _byzantine(world)
        if len(byz) != 2:
            raise MimicError(f"mimic drives exactly 2 byzantine robots, got {len(byz)}")
        t = world.round
        if t >= plan.r1:
            return {r.handle: (plan.beta_id, None) for r in byz}
        alpha = next(
            (r for r in world.robots if not r.byzantine and r.rid == plan.alpha_id),
            None,
        )
        if alpha is None:
            raise MimicError(f"no non-faulty robot carries id {plan.alpha_id}")
        n = world.graph.node_count
        offset = {r.handle: _signed_offset(r.node, alpha.node, n) for r in byz}
        alpha_port = plan.alpha_ports[t]
        alpha_delta = 0 if alpha_port is None else (1 if alpha_port == 0 else -1)
        off_now = plan.beta_offsets[t]
        off_next = plan.beta_offsets[t + 1]

        moves = {r.handle: alpha_port for r in byz}
        if off_now is not None:
            mirror = next((r for r in byz if offset[r.handle] == off_now), None)
            if mirror is None:
                raise MimicError(f"round {t}: no byzantine robot sits at offset {off_now}")
            moves[mirror.handle] = plan.beta_ports[t]
        elif off_next is not None:
            required = (alpha.node + alpha_delta + off_next) % n
            same_side = sorted(
                byz, key=lambda r: (offset[r.handle] > 0) != (off_next > 0)
            )
            for r in same_side:
                delta = _signed_offset(required, r.node, n)
                if abs(delta) <= 1:
                    moves[r.handle] = _port_for_delta(delta)
                    break
            else:
                raise MimicError(
                    f"round {t}: recorded position is unreachable in one move"
                )
        return {r.handle: (plan.beta_id, moves[r.handle]) for r in byz}


def build_mimic_instances(c, reference):
    """Record a reference run on the small cycle and stage its shadow.

    Returns (small scenario, large scenario, plan). The small instance is
    a 2c+2 cycle with two non-faulty robots at antipodal distance c+1 and
    visibility c. The large instance scales the cycle to 4*r1 + 2(c+1)
    nodes, replaces the far robot with two Byzantine impersonators at
    distance c+1 on either side, and parks two fresh non-faulty robots at
    the new antipode, out of reach within r1 rounds.
    """
    if c < 1:
        raise MimicError("visibility constant must be at least 1")
    from .engine import Scenario, run

    n1 = 2 * c + 2
    small = {
        "graph": cycle_graph(n1).to_literal(),
        "H": c,
        "robots": [
            {"id": 1, "node": 0, "byzantine": False},
            {"id": 2, "node": c + 1, "byzantine": False},
        ],
        "adversary": {"strategy": "passive", "seed": 0, "params": {}},
        "program": reference,
    }
    result = run(Scenario.from_obj(small))
    verdict = result.verdict
    if verdict["termination_round"] is None:
        raise MimicError(
            "no r1: reference program did not terminate on the small cycle"
        )
    r1 = verdict["termination_round"]

    def port_track(handle):
        ports = []
        for rec in result.trace[:r1]:
            action = rec["robots"][handle]["action"]
            ports.append(action if isinstance(action, int) else None)
        return tuple(ports)

    offsets = []
    for rec in result.trace[: r1 + 1]:
        a = rec["robots"][0]["node"]
        b = rec["robots"][1]["node"]
        off = _signed_offset(b, a, n1)
        offsets.append(off if abs(off) <= c else None)
    plan = MimicPlan(
        c=c,
        r1=r1,
        alpha_id=1,
        beta_id=2,
        alpha_ports=port_track(0),
        beta_ports=port_track(1),
        beta_offsets=tuple(offsets),
    )

    n2 = 4 * r1 + 2 * (c + 1)
    large = {
        "graph": cycle_graph(n2).to_literal(),
        "H": c,
        "robots": [
            {"id": 1, "node": 0, "byzantine": False},
            {"id": 2, "node": c + 1, "byzantine": True},
            {"id": 2, "node": n2 - (c + 1), "byzantine": True},
            {"id": 3, "node": 2 * r1 + c + 1, "byzantine": False},
            {"id": 4, "node": 2 * r1 + c + 1, "byzantine": False},
        ],
        "adversary": {"strategy": "mimic", "seed": 0, "params": plan.to_params()},
        "program": reference,
    }
    return small, large, plan


_STRATEGIES = {
    "passive": PassiveStrategy,
    "random": RandomStrategy,
    "scripted": ScriptedStrategy,
    "forger": ForgerStrategy,
    "mimic": MimicStrategy,
}


def make_strategy(name, seed=0, params=None):
    cls = _STRATEGIES.get(name)
    if cls is None:
        known = ", ".join(sorted(_STRATEGIES))
        raise ScenarioError(f"unknown adversary strategy {name!r} (known: {known})")
    return cls(seed=seed, params=params)


def adversary_step(strategy, world, nonfaulty_states=None):
    """One decision round: {byzantine handle: (displayed id, move)}."""
    return strategy.decide(world, nonfaulty_states)
