"""Time the compiled BFS kernels against the pure-Python fallback.

Usage: python3 benchmarks/bench_kernels.py [node_count]

Builds one random connected graph, packs it once into CSR form, then
times single-source distances and the all-eccentricities sweep on both
implementations. The sweep dominates real workloads (metric queries run
it once per graph and cache the answer), so that ratio is the headline.
"""

import sys
import time

from byzgather import _bfs_py
from byzgather.graph import random_connected_graph
from byzgather.kernels import HAVE_COMPILED, build_csr

try:
    from byzgather import _bfs_c
except ImportError:
    _bfs_c = None


def timed(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def main():
    n = int(sys.argv[1]) if len(sys.argv) > 1 else 1500
    graph = random_connected_graph(n, 0.002, seed=7)
    indptr, indices = build_csr(graph.neighbor_tuples())
    print(f"graph: n={n}, edges={len(indices) // 2}, compiled={HAVE_COMPILED}")

    impls = [("python", _bfs_py)] + ([("compiled", _bfs_c)] if _bfs_c else [])
    rows = []
    for name, impl in impls:
        sssp = timed(lambda: impl.sssp(indptr, indices, 0), repeat=5)
        ecc = timed(lambda: impl.all_eccentricities(indptr, indices), repeat=3)
        rows.append((name, sssp, ecc))
        print(f"{name:>9}: sssp {sssp * 1e3:8.3f} ms   eccentricities {ecc * 1e3:9.3f} ms")

    if len(rows) == 2:
        (_, ps, pe), (_, cs, ce) = rows
        print(f"{'speedup':>9}: sssp {ps / cs:7.1f}x    eccentricities {pe / ce:8.1f}x")
        same = (
            list(_bfs_py.sssp(indptr, indices, 0))
            == list(_bfs_c.sssp(indptr, indices, 0))
        ) and (
            list(_bfs_py.all_eccentricities(indptr, indices))
            == list(_bfs_c.all_eccentricities(indptr, indices))
        )
        print(f"{'agree':>9}: {same}")


if __name__ == "__main__":
    main()
