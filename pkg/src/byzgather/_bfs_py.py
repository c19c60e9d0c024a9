"""Pure-Python breadth-first search kernels over CSR adjacency arrays.

Fallback for the compiled module byzgather._bfs_c; identical signatures
and semantics, chosen at import time by byzgather.kernels.
"""

import numpy as np


def sssp(indptr, indices, source):
    """Single-source distances; -1 for unreachable nodes."""
    n = len(indptr) - 1
    dist = np.full(n, -1, dtype=np.int32)
    dist[source] = 0
    # queue as a preallocated array: every node enters at most once
    queue = np.empty(n, dtype=np.int32)
    queue[0] = source
    head, tail = 0, 1
    ip = indptr
    ix = indices
    while head < tail:
        u = int(queue[head])
        head += 1
        du = int(dist[u]) + 1
        for k in range(int(ip[u]), int(ip[u + 1])):
            w = int(ix[k])
            if dist[w] < 0:
                dist[w] = du
                queue[tail] = w
                tail += 1
    return dist


def all_eccentricities(indptr, indices):
    """Per-node eccentricity; -1 where some node is unreachable."""
    n = len(indptr) - 1
    ecc = np.empty(n, dtype=np.int32)
    for v in range(n):
        dist = sssp(indptr, indices, v)
        ecc[v] = -1 if int(dist.min()) < 0 else int(dist.max())
    return ecc
