import sys

from setuptools import setup

# The BFS kernels compile with Cython when available; everything works
# without them via the pure-Python fallback in byzgather._bfs_py.
ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [
            Extension(
                "byzgather._bfs_c",
                ["src/byzgather/_bfs_c.pyx"],
                include_dirs=[numpy.get_include()],
            )
        ],
        language_level=3,
    )
except Exception as exc:  # pragma: no cover - environment dependent
    print(f"byzgather: building without compiled kernels ({exc})", file=sys.stderr)

setup(ext_modules=ext_modules)
