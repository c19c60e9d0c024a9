"""Command-line front end: generate, run, verify, measure, and the
two-cycle indistinguishability construction. Every subcommand is
deterministic given its flags and seed, prints a one-line summary (plus
a JSON report where applicable), and signals trouble with exit status 2.
"""

import argparse
import json
import os
import random
import sys

from .adversary import build_mimic_instances
from .engine import Scenario, read_trace, run, write_trace
from .errors import GraphError, MimicError, ScenarioError, TraceFormatError
from .graph import PortLabeledGraph, random_connected_graph
from .oracle import check_invariants
from .views import snapshot_subgraph

GEN_ADVERSARIES = ("passive", "random", "forger")


def generate_scenario(n, m, f, horizon, adversary="passive", seed=0):
    """Reproducible random scenario as a plain JSON-ready dict.

    ``horizon`` is an integer or the string "radius", which resolves to
    the generated graph's radius. f may exceed the conforming regime on
    purpose; only f > m is impossible.
    """
    problems = []
    if not isinstance(n, int) or n < 1:
        problems.append(f"n must be a positive integer, got {n!r}")
    if not isinstance(m, int) or m < 1:
        problems.append(f"m must be a positive integer, got {m!r}")
    if not isinstance(f, int) or f < 0:
        problems.append(f"f must be a non-negative integer, got {f!r}")
    if isinstance(m, int) and isinstance(f, int) and f > m:
        problems.append(f"cannot place {f} Byzantine robots among {m}")
    if horizon != "radius" and (not isinstance(horizon, int) or horizon < 0):
        problems.append(f'H must be a non-negative integer or "radius", got {horizon!r}')
    if adversary not in GEN_ADVERSARIES:
        problems.append(
            f"generator supports adversaries {', '.join(GEN_ADVERSARIES)}; "
            f"got {adversary!r} (scripted and mimic need hand-built params)"
        )
    if problems:
        raise ScenarioError("; ".join(problems))

    rng = random.Random(seed)
    graph = _usable_graph(n, rng)
    h = graph.radius() if horizon == "radius" else horizon
    ids = rng.sample(range(1, 10 * m + 1), m)
    byz = set(rng.sample(range(m), f))
    robots = [
        {"id": ids[i], "node": rng.randrange(n), "byzantine": i in byz}
        for i in range(m)
    ]
    return {
        "graph": graph.to_literal(),
        "H": h,
        "robots": robots,
        "adversary": {
            "strategy": adversary,
            "seed": rng.randrange(2**32),
            "params": {},
        },
    }


def _usable_graph(n, rng):
    """Sample connected graphs until full-coverage views are edge-complete.

    On some graphs (odd cycles are the smallest) a node can see every
    other node at horizon R while edges between two frontier nodes stay
    hidden; robots that trust such a view as the whole graph disagree
    about its center. Rejecting those graphs keeps generated scenarios
    inside the regime the protocol's guarantee covers.
    """
    while True:
        g = random_connected_graph(n, 0.25, rng.randrange(2**32))
        r = g.radius()
        all_edges = g.edges()
        if all(snapshot_subgraph(g, c, r)[1] == all_edges for c in g.center_nodes()):
            return g


def _load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"{path}: {exc}") from None


def _write_json(path, obj):
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def cmd_run(args):
    scenario_obj = _load_json(args.scenario)
    if args.sweep:
        return _run_sweep(scenario_obj, args)
    result = run(Scenario.from_obj(scenario_obj))
    write_trace(args.trace, result)
    v = result.verdict
    print(
        f"gathered={v['gathered']} termination_round={v['termination_round']} "
        f"bound_satisfied={v['bound_satisfied']} trace={args.trace}"
    )
    return 0 if v["gathered"] else 1


def _run_sweep(scenario_obj, args):
    """Re-run one scenario under adversary seeds S, S+1, ... checking the
    full invariant battery each time; all runs must gather and pass."""
    failures = 0
    for i in range(args.sweep):
        obj = json.loads(json.dumps(scenario_obj))
        obj.setdefault("adversary", {})["seed"] = args.seed + i
        result = run(Scenario.from_obj(obj))
        write_trace(f"{args.trace}.{i}", result)
        report = check_invariants(result.trace + [result.verdict], obj)
        bad = sorted(k for k, r in report.items() if not r["pass"])
        ok = result.verdict["gathered"] and not bad
        if not ok:
            failures += 1
        status = "ok" if ok else ("failed:" + ",".join(bad) if bad else "not gathered")
        print(f"seed={args.seed + i} gathered={result.verdict['gathered']} {status}")
    print(f"sweep: {args.sweep - failures}/{args.sweep} passed")
    return 0 if failures == 0 else 1


def cmd_gen(args):
    if args.H == "radius":
        horizon = "radius"
    else:
        try:
            horizon = int(args.H)
        except ValueError:
            raise ScenarioError(f'--H takes an integer or "radius", got {args.H!r}') from None
    obj = generate_scenario(args.n, args.m, args.f, horizon, args.adversary, args.seed)
    _write_json(args.out, obj)
    print(
        f"wrote {args.out}: n={args.n} m={args.m} f={args.f} H={obj['H']} "
        f"adversary={args.adversary} seed={args.seed}"
    )
    return 0


def cmd_verify(args):
    scenario_obj = _load_json(args.scenario)
    trace = read_trace(args.trace)
    try:
        report = check_invariants(trace, scenario_obj)
    except TraceFormatError:
        raise
    except (KeyError, IndexError, TypeError, ValueError) as exc:
        raise TraceFormatError(f"trace does not match scenario: {exc!r}") from None
    print(json.dumps(report, indent=2, sort_keys=True))
    bad = sorted(k for k, r in report.items() if not r["pass"])
    if bad:
        print(f"verify: FAILED {','.join(bad)}")
        return 1
    print(f"verify: ok ({len(report)} checks)")
    return 0


def cmd_metrics(args):
    obj = _load_json(args.graph)
    literal = obj.get("graph", obj) if isinstance(obj, dict) else obj
    g = PortLabeledGraph.from_literal(literal)
    print(f"n={g.node_count} radius={g.radius()} center={sorted(g.center_nodes())}")
    return 0


def cmd_mimic(args):
    if args.c < 1:
        raise MimicError(f"c must be >= 1, got {args.c}")
    reference = args.reference or f"approach:{args.c + 1}"
    small, large, plan = build_mimic_instances(args.c, reference)
    os.makedirs(args.out, exist_ok=True)
    _write_json(os.path.join(args.out, "c1.json"), small)
    _write_json(os.path.join(args.out, "c2.json"), large)

    res1 = run(Scenario.from_obj(small), observe=0)
    res2 = run(Scenario.from_obj(large), observe=0)
    write_trace(os.path.join(args.out, "c1.trace.jsonl"), res1)
    write_trace(os.path.join(args.out, "c2.trace.jsonl"), res2)

    rounds = plan.r1 + 1
    seq1, seq2 = res1.observations[:rounds], res2.observations[:rounds]
    equal = (
        len(seq1) == rounds
        and len(seq2) == rounds
        and all(a == b for a, b in zip(seq1, seq2))
    )
    report = {
        "c": args.c,
        "r1": plan.r1,
        "reference": reference,
        "rounds_compared": rounds,
        "equal": equal,
        "c1_nodes": small["graph"]["n"],
        "c2_nodes": large["graph"]["n"],
        "c2_gathered": res2.verdict["gathered"],
    }
    _write_json(os.path.join(args.out, "report.json"), report)
    print(
        f"mimic c={args.c} r1={plan.r1}: views equal through round {plan.r1} = {equal}, "
        f"c2 gathered = {res2.verdict['gathered']}"
    )
    return 0 if equal else 1


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="byzgather",
        description="Round-synchronous robot gathering on port-labeled graphs.",
    )
    sub = parser.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("run", help="execute a scenario file and write its trace")
    p.add_argument("--scenario", required=True)
    p.add_argument("--trace", required=True)
    p.add_argument("--sweep", type=int, default=0, metavar="N",
                   help="re-run N times with adversary seeds S..S+N-1, checking invariants")
    p.add_argument("--seed", type=int, default=0, metavar="S")

    p = sub.add_parser("gen", help="generate a reproducible random scenario")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--f", type=int, required=True)
    p.add_argument("--H", default="radius", help='integer or "radius"')
    p.add_argument("--adversary", default="passive", choices=GEN_ADVERSARIES)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)

    p = sub.add_parser("verify", help="check a trace against its scenario")
    p.add_argument("--trace", required=True)
    p.add_argument("--scenario", required=True)

    p = sub.add_parser("metrics", help="print n, radius, and center set of a graph")
    p.add_argument("--graph", required=True, help="graph literal or scenario file")

    p = sub.add_parser("mimic", help="build and check the two-cycle construction")
    p.add_argument("--c", type=int, required=True)
    p.add_argument("--reference", default=None,
                   help="reference program (default approach:<c+1>)")
    p.add_argument("--out", required=True, help="output directory")

    args = parser.parse_args(argv)
    handlers = {
        "run": cmd_run,
        "gen": cmd_gen,
        "verify": cmd_verify,
        "metrics": cmd_metrics,
        "mimic": cmd_mimic,
    }
    try:
        return handlers[args.cmd](args)
    except (ScenarioError, GraphError, TraceFormatError, MimicError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
