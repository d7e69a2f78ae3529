import time

import pytest

from quintiq.experiments import experiment1, experiment2
from quintiq.scalars import DOUBLE_DOUBLE


@pytest.fixture(scope="session")
def exp1_dd():
    """Experiment 1 rows in dd precision, with the wall time of the run."""
    t0 = time.perf_counter()
    rows = experiment1(DOUBLE_DOUBLE)
    return rows, time.perf_counter() - t0


@pytest.fixture(scope="session")
def exp2_dd():
    t0 = time.perf_counter()
    rows = experiment2(DOUBLE_DOUBLE)
    return rows, time.perf_counter() - t0
