import numpy as np
import pytest

from magmech import reference_baseline


@pytest.fixture
def baseline():
    return reference_baseline()


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
