# cython: boundscheck=False, wraparound=False, initializedcheck=False
"""Compiled breadth-first search kernels over CSR adjacency arrays."""

import numpy as np

cimport numpy as cnp

cnp.import_array()


def sssp(cnp.int32_t[::1] indptr, cnp.int32_t[::1] indices, int source):
    """Single-source distances; -1 for unreachable nodes."""
    cdef int n = indptr.shape[0] - 1
    dist_arr = np.full(n, -1, dtype=np.int32)
    queue_arr = np.empty(n, dtype=np.int32)
    cdef cnp.int32_t[::1] dist = dist_arr
    cdef cnp.int32_t[::1] queue = queue_arr
    cdef int head = 0, tail = 1, u, w, k, du
    dist[source] = 0
    queue[0] = source
    while head < tail:
        u = queue[head]
        head += 1
        du = dist[u] + 1
        for k in range(indptr[u], indptr[u + 1]):
            w = indices[k]
            if dist[w] < 0:
                dist[w] = du
                queue[tail] = w
                tail += 1
    return dist_arr


def all_eccentricities(cnp.int32_t[::1] indptr, cnp.int32_t[::1] indices):
    """Per-node eccentricity; -1 where some node is unreachable."""
    cdef int n = indptr.shape[0] - 1
    ecc_arr = np.empty(n, dtype=np.int32)
    dist_arr = np.empty(n, dtype=np.int32)
    queue_arr = np.empty(n, dtype=np.int32)
    cdef cnp.int32_t[::1] ecc = ecc_arr
    cdef cnp.int32_t[::1] dist = dist_arr
    cdef cnp.int32_t[::1] queue = queue_arr
    cdef int v, head, tail, u, w, k, du, best, seen
    for v in range(n):
        for u in range(n):
            dist[u] = -1
        dist[v] = 0
        queue[0] = v
        head = 0
        tail = 1
        best = 0
        seen = 1
        while head < tail:
            u = queue[head]
            head += 1
            du = dist[u] + 1
            for k in range(indptr[u], indptr[u + 1]):
                w = indices[k]
                if dist[w] < 0:
                    dist[w] = du
                    if du > best:
                        best = du
                    seen += 1
                    queue[tail] = w
                    tail += 1
        ecc[v] = best if seen == n else -1
    return ecc_arr
