import numpy as np
import pytest

from gxr.geometry import make_model

# The (kappa, radius) pairs exercised throughout the suite: flat reference,
# both curvature signs at moderate and near-critical strength, and one
# non-unit radius.
MODEL_PARAMS = [(0.0, 1.0), (0.5, 1.0), (-0.5, 1.0), (0.9, 1.0), (-0.9, 1.0), (0.3, 1.5)]


@pytest.fixture(params=MODEL_PARAMS, ids=lambda p: f"k{p[0]:g}_R{p[1]:g}")
def model(request):
    return make_model(*request.param)


@pytest.fixture
def flat():
    return make_model(0.0, 1.0)


@pytest.fixture
def rng():
    return np.random.default_rng(20260809)
