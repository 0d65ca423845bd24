import math

import numpy as np
import pytest

from cadlag_qv import CadlagPath, PartitionScheme

T0 = math.sqrt(2) / 2


@pytest.fixture
def remark():
    """Unit step at an irrational time that no dyadic partition contains."""
    return CadlagPath.step([(T0, 1.0)], 1.0)


@pytest.fixture
def two_jump():
    return CadlagPath.step([(0.25, 1.0), (0.75, 2.0)], 1.0)


@pytest.fixture
def linear():
    t = np.arange(1025) / 1024
    return CadlagPath.from_samples(t, t, 1.0)


@pytest.fixture
def dyadic():
    return PartitionScheme("dyadic", 1.0)


def random_step(rng, n_jumps, horizon=1.0, initial=None):
    times = np.sort(rng.uniform(0.0, horizon, n_jumps))
    sizes = rng.normal(0.0, 1.0, n_jumps)
    x0 = rng.normal() if initial is None else initial
    return CadlagPath.step(list(zip(times, sizes)), horizon, x0)
