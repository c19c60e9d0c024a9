"""Kernel selection and caching for graph metric queries.

The compiled extension is used when it built; otherwise the pure-Python
fallback with the same contract takes over. Callers pass any hashable
graph object exposing ``neighbor_tuples()``; results are memoized on the
graph's value, so structurally equal graphs share cache entries.
"""

from functools import lru_cache

import numpy as np

try:
    from . import _bfs_c as _impl

    HAVE_COMPILED = True
except ImportError:  # pragma: no cover - depends on the build environment
    from . import _bfs_py as _impl

    HAVE_COMPILED = False


def build_csr(neighbor_tuples):
    """Pack nested neighbor tuples into (indptr, indices) int32 arrays."""
    indptr = np.zeros(len(neighbor_tuples) + 1, dtype=np.int32)
    flat = []
    for v, row in enumerate(neighbor_tuples):
        flat.extend(row)
        indptr[v + 1] = len(flat)
    indices = np.asarray(flat, dtype=np.int32)
    return indptr, indices


@lru_cache(maxsize=None)
def _csr(graph):
    return build_csr(graph.neighbor_tuples())


@lru_cache(maxsize=None)
def distances_from(graph, source):
    indptr, indices = _csr(graph)
    return tuple(int(d) for d in _impl.sssp(indptr, indices, source))


@lru_cache(maxsize=None)
def eccentricities(graph):
    indptr, indices = _csr(graph)
    return tuple(int(e) for e in _impl.all_eccentricities(indptr, indices))
