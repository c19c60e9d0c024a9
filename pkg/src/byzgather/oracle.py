"""Brute-force references and trace invariant monitors.

Everything here recomputes its answers from first principles: simple-path
enumeration, plain breadth-first search, and arithmetic over trace records.
The module deliberately avoids the production kernels, view builder, and
robot code so that the two sides of every comparison stay independent.
"""

import math
from collections import Counter, deque

from .errors import TraceFormatError

ORACLE_NODE_CAP = 8


def neighbors_of(adjacency):
    """Strip entry ports: [[(w, q), ...], ...] -> [[w, ...], ...]."""
    return [[w for w, _q in row] for row in adjacency]


def bfs_distances(neighbors, source):
    """Distances by plain BFS; -1 marks unreachable nodes."""
    dist = [-1] * len(neighbors)
    dist[source] = 0
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for w in neighbors[u]:
            if dist[w] < 0:
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


def all_pairs_distances(neighbors):
    return [bfs_distances(neighbors, v) for v in range(len(neighbors))]


def graph_metrics(adjacency):
    """(radius, center node set, eccentricity list) by exhaustive BFS."""
    neighbors = neighbors_of(adjacency)
    eccs = []
    for v in range(len(neighbors)):
        dist = bfs_distances(neighbors, v)
        if min(dist) < 0:
            raise ValueError("graph is disconnected")
        eccs.append(max(dist))
    radius = min(eccs)
    center = {v for v, e in enumerate(eccs) if e == radius}
    return radius, center, eccs


def brute_snapshot(adjacency, v, horizon, cap=ORACLE_NODE_CAP):
    """Nodes and edges lying on some simple path of length <= horizon from v.

    Exponential by construction; refuses graphs above ``cap`` nodes so a
    misuse fails loudly instead of hanging.
    """
    n = len(adjacency)
    if n > cap:
        raise ValueError(f"oracle refuses n={n} > cap={cap}")
    if not 0 <= v < n:
        raise ValueError(f"node {v} out of range")
    nodes = {v}
    edges = set()
    on_path = {v}

    def extend(u, depth):
        if depth == horizon:
            return
        for w, _q in adjacency[u]:
            if w in on_path:
                continue
            edges.add((u, w) if u < w else (w, u))
            nodes.add(w)
            on_path.add(w)
            extend(w, depth + 1)
            on_path.remove(w)

    extend(v, 0)
    return frozenset(nodes), frozenset(edges)


def phi(record):
    """Candidate-set sum of one trace record; undefined before creation."""
    value = record.get("phi")
    if value is None:
        raise ValueError(f"phi undefined at round {record.get('round')}")
    return value


def merge_pair_count(total_robots, march_windows):
    """Number of forward+reverse window pairs the schedule runs."""
    wanted = max(0, math.ceil(total_robots / 2) - march_windows)
    fitting = max(0, (total_robots - 1 - march_windows) // 2)
    return min(wanted, fitting)


def runs_final_window(total_robots, march_windows, pairs):
    return march_windows + 2 * pairs + 1 <= total_robots


def split_trace(trace):
    """Separate round records from the closing verdict line."""
    if not trace:
        raise TraceFormatError("empty trace")
    verdict = trace[-1]
    if "gathered" not in verdict:
        raise TraceFormatError("last trace line is not a verdict")
    records = trace[:-1]
    for i, rec in enumerate(records):
        if rec.get("round") != i:
            raise TraceFormatError(f"record {i} has round {rec.get('round')}")
        if "robots" not in rec:
            raise TraceFormatError(f"record {i} lacks robot data")
    return records, verdict


def _scenario_shape(scenario):
    graph = scenario["graph"]
    adjacency = [[tuple(pair) for pair in row] for row in graph["adj"]]
    robots = scenario["robots"]
    flags = [bool(r["byzantine"]) for r in robots]
    return {
        "adjacency": adjacency,
        "n": graph["n"],
        "horizon": scenario["H"],
        "m": len(robots),
        "f": sum(flags),
        "nonfaulty": [h for h, b in enumerate(flags) if not b],
        "ids": [r["id"] for r in robots],
    }


def _positions(record):
    return {r["handle"]: r["node"] for r in record["robots"]}


def _termination_rounds(records, nonfaulty):
    done = {}
    for rec in records:
        for r in rec["robots"]:
            if r["handle"] in nonfaulty and r["action"] == "terminate":
                done[r["handle"]] = rec["round"]
    return done


def check_invariants(trace, scenario):
    """Run every trace-level check; {name: {"pass": bool, "detail": str}}.

    The checks recompute rounds, windows, and coverage from the scenario
    alone, so a bug in the simulator cannot hide behind its own verdict.
    """
    records, verdict = split_trace(trace)
    shape = _scenario_shape(scenario)
    n, m, f = shape["n"], shape["m"], shape["f"]
    horizon = shape["horizon"]
    nonfaulty = shape["nonfaulty"]
    neighbors = neighbors_of(shape["adjacency"])
    radius, _, _ = graph_metrics(shape["adjacency"])
    sync_round = (m + 2) * n * n
    bound = sync_round + horizon * m
    report = {}

    conforming = horizon >= radius and len(nonfaulty) >= f + 1
    report["conforming"] = {
        "pass": True,
        "detail": f"H={horizon} R={radius} nonfaulty={len(nonfaulty)} f={f}: "
        + ("conforming" if conforming else "non-conforming"),
    }

    # Every non-faulty robot must see the whole graph, and hence every
    # robot, at the synchronization round.
    if sync_round < len(records):
        rec = records[sync_round]
        pos = _positions(rec)
        bad = []
        for h in nonfaulty:
            dist = bfs_distances(neighbors, pos[h])
            covered = sum(1 for d in dist if 0 <= d <= horizon)
            seen_robots = sum(1 for p in pos.values() if 0 <= dist[p] <= horizon)
            if covered != n or seen_robots != m:
                bad.append(f"robot {h}: {covered}/{n} nodes, {seen_robots}/{m} robots")
        report["full_view_at_sync_round"] = {
            "pass": not bad,
            "detail": f"round {sync_round}: " + ("; ".join(bad) or "full coverage"),
        }
    else:
        report["full_view_at_sync_round"] = {
            "pass": False,
            "detail": f"trace ends before round {sync_round}",
        }

    # Target agreement: one round where every robot fixes the same handle,
    # never changed afterwards, no later than sync_round + (f+1)*H.
    target_round = None
    target_value = None
    agree_fail = None
    for rec in records:
        targets = rec["v_targets"]
        if any(t is not None for t in targets):
            target_round = rec["round"]
            values = set(targets)
            if len(values) != 1 or None in values:
                agree_fail = f"round {target_round}: targets {targets}"
            else:
                target_value = targets[0]
            break
    if target_round is not None and agree_fail is None:
        for rec in records[target_round:]:
            if any(t != target_value for t in rec["v_targets"]):
                agree_fail = f"target changed after round {target_round}"
                break
        deadline = sync_round + (f + 1) * horizon
        if agree_fail is None and target_round > deadline:
            agree_fail = f"target set at {target_round} > deadline {deadline}"
    if target_round is None:
        agree_fail = "target never set"
    report["target_agreement"] = {
        "pass": agree_fail is None,
        "detail": agree_fail or f"all robots chose node {target_value} at round {target_round}",
    }

    # Candidate-set sum: defined from one round onwards, within
    # [m - f, m], never increasing, and consistent with per-robot sizes.
    series = [(rec["round"], rec["phi"], rec["p_sizes"]) for rec in records if rec["phi"] is not None]
    phi_fail = None
    if series:
        prev = None
        for rnd, value, sizes in series:
            counted = sum(s for s in sizes if s is not None)
            if value != counted:
                phi_fail = f"round {rnd}: phi={value} but sizes sum to {counted}"
                break
            if not (m - f <= value <= m):
                phi_fail = f"round {rnd}: phi={value} outside [{m - f}, {m}]"
                break
            if prev is not None and value > prev:
                phi_fail = f"round {rnd}: phi rose {prev} -> {value}"
                break
            prev = value
    else:
        phi_fail = "phi never defined"
    report["candidate_sum_bounds"] = {
        "pass": phi_fail is None,
        "detail": phi_fail or f"{len(series)} rounds, phi ended at {series[-1][1]}",
    }

    # Window progress and schedule alignment share the window arithmetic.
    phi_at = {rec["round"]: rec["phi"] for rec in records}
    tags_at = {rec["round"]: rec["phases"] for rec in records}
    progress_fail = None
    align_fail = None
    skip_windows = horizon == 0 or target_round is None or agree_fail is not None
    if not skip_windows and (target_round - sync_round) % horizon != 0:
        align_fail = f"target round {target_round} off the window grid from {sync_round}"
        skip_windows = True
    if not skip_windows:
        k = (target_round - sync_round) // horizon
        pairs = merge_pair_count(m, k)
        final = runs_final_window(m, k, pairs)

        def ungathered(round_no):
            if round_no >= len(records):
                return None
            where = _positions(records[round_no])
            return len({where[h] for h in nonfaulty}) > 1

        checks = []
        for i in range(1, k):
            checks.append((sync_round + (i - 1) * horizon, sync_round + i * horizon, True))
        for j in range(pairs):
            start = target_round + 2 * j * horizon
            checks.append((start, start + horizon, False))
        if final:
            start = target_round + 2 * pairs * horizon
            checks.append((start, start + horizon, False))
        for start, end, always in checks:
            scattered = ungathered(end)
            if scattered is None:
                progress_fail = f"window [{start},{end}) runs past the trace"
                break
            if (always or scattered) and not (
                phi_at.get(end) is not None
                and phi_at.get(start) is not None
                and phi_at[end] <= phi_at[start] - 1
            ):
                progress_fail = (
                    f"window [{start},{end}) ended apart with phi "
                    f"{phi_at.get(start)} -> {phi_at.get(end)}"
                )
                break

        expect = [(sync_round, {"march"})]
        for i in range(1, k):
            expect.append((sync_round + i * horizon, {"march"}))
        first_merge = {"merge"} if pairs else ({"final_merge"} if final else {"done"})
        expect.append((target_round, first_merge))
        for j in range(pairs):
            expect.append((target_round + (2 * j + 1) * horizon, {"reverse"}))
            later = {"merge"} if j + 1 < pairs else ({"final_merge"} if final else {"done"})
            expect.append((target_round + (2 * j + 2) * horizon, later))
        for rnd, allowed in expect:
            tags = tags_at.get(rnd)
            if tags is None or any(tag not in allowed for tag in tags):
                align_fail = f"round {rnd}: phases {tags}, expected {sorted(allowed)}"
                break
    report["window_progress"] = {
        "pass": progress_fail is None,
        "detail": progress_fail
        or ("skipped: zero-length windows or no target" if skip_windows else "every window that ended apart shed a candidate"),
    }
    report["schedule_alignment"] = {
        "pass": align_fail is None,
        "detail": align_fail
        or ("skipped: zero-length windows or no target" if skip_windows else "phase tags sit on the window grid"),
    }

    done = _termination_rounds(records, nonfaulty)
    missing = sorted(set(nonfaulty) - set(done))
    if missing:
        report["round_bound"] = {"pass": False, "detail": f"robots {missing} never terminated"}
        report["unanimous_termination"] = {"pass": False, "detail": f"robots {missing} never terminated"}
        report["gathered"] = {"pass": False, "detail": f"robots {missing} never terminated"}
    else:
        last = max(done.values())
        report["round_bound"] = {
            "pass": last <= bound,
            "detail": f"termination {last} vs bound {bound}",
        }
        unanimous = len(set(done.values())) == 1
        report["unanimous_termination"] = {
            "pass": unanimous,
            "detail": f"termination rounds {sorted(set(done.values()))}",
        }
        where = _positions(records[last])
        spots = {where[h] for h in nonfaulty}
        gathered = unanimous and len(spots) == 1
        claim = verdict.get("gathered")
        if gathered != claim:
            report["gathered"] = {
                "pass": False,
                "detail": f"trace says {gathered}, verdict line says {claim}",
            }
        else:
            report["gathered"] = {
                "pass": gathered,
                "detail": f"final nodes {sorted(spots)} at round {last}",
            }
    return report
