import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(__file__))

from rigkit.graphgen import generate
from rigkit.model import ModelParams, trial_rng


@pytest.fixture(scope="session")
def small_instances():
    """A handful of dense little graphs for oracle comparisons."""
    out = []
    for seed in range(4):
        params = ModelParams(n=60, m=240, alpha=0.7, c0=1.0)
        inc, w = generate(params, trial_rng(seed, 60, 0))
        out.append((params, inc, w))
    return out


@pytest.fixture(scope="session")
def medium_instance():
    """One n=200, m=5000 instance shared by adjacency-heavy tests."""
    params = ModelParams(n=200, m=5000, alpha=0.8, c0=1.0)
    inc, w = generate(params, trial_rng(99, 200, 0))
    return params, inc, w
