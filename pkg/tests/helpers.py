"""Shared test utilities."""

import numpy as np

from qcot.errors import UsageError
from qcot.exactla import FpMatrix
from qcot.modrep import ModuleRep


def random_fpmatrix(rng, p, rows, cols):
    arr = np.array([rng.randrange(p) for _ in range(rows * cols)], dtype=np.int64)
    return FpMatrix(p, arr.reshape(rows, cols))


def random_module(rng, algebra, max_vertex_dim=2):
    """A random representation satisfying the relations (rejection sampling)."""
    p = algebra.p
    dims = [rng.randrange(max_vertex_dim + 1) for _ in range(algebra.n_vertices)]
    shapes = [(dims[algebra.arrow_target(a)], dims[algebra.arrow_source(a)])
              for a in range(len(algebra.arrows))]
    while True:
        mats = [random_fpmatrix(rng, p, r, c) for r, c in shapes]
        try:
            return ModuleRep(algebra, dims, mats)
        except UsageError:
            continue
