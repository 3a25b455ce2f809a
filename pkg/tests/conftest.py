import numpy as np
import pytest

from backcom import ClusterModel, NetworkParams


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


# compact network for fast full-field simulations: small operating range
# (d0 ~ 1.56 m) and tight clusters keep the guard window ~10 m
FAST = NetworkParams(
    lambda_pb=1.0, c_bar=1.0, lambda_nd=1.0, m_bar=2.0,
    p_c=2.0, cluster=ClusterModel.thomas(0.5),
)


@pytest.fixture
def fast_params():
    return FAST
