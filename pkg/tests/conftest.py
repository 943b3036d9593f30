import numpy as np
import pytest

from itealg import kernels


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    """Compile the jitted kernels once so timed tests measure steady state."""
    if kernels.numba_available():
        progs = np.array([[kernels.OP_VAR, 0], [kernels.OP_VAR, 0]], dtype=np.int64)
        offsets = np.array([0, 1, 2], dtype=np.int64)
        radices = np.array([2], dtype=np.int64)
        domains = np.array([[0, 1]], dtype=np.int64)
        eye = np.arange(2, dtype=np.int64)
        table = np.zeros((2, 2), dtype=np.int64)
        kernels.find_violation(progs, offsets, radices, domains, table, table, eye,
                               backend="numba")
        kernels.star_search(2, backend="numba")
    yield
