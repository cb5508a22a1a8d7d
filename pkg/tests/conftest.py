import numpy as np
import pytest

from skagree import _kernels


@pytest.fixture(scope="session", autouse=True)
def _warm_kernels():
    # JIT-compile the hot kernels once so per-test runtime assertions
    # measure steady-state behaviour, not compilation.
    _kernels.warmup()


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
