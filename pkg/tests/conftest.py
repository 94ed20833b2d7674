import math

import numpy as np
import pytest

from fdjc.deformation import DeformationSpec, PhotonWeights, q_coherent_weights
from fdjc.dynamics import ModelParams
from fdjc.presets import RECOIL_RATE


def make_params(
    *,
    lambda_c=1e5,
    delta_k_bar=3e7,
    kg=0.0,
    nu=1e7,
    recoil_rate=RECOIL_RATE,
    c_e=1 / math.sqrt(2),
    c_g=1 / math.sqrt(2),
    spec=None,
    weights=None,
    alpha=2.0,
    p_nodes=8,
    scaled_t=None,
    **extra,
):
    """Preset-like parameters with small grids, for unit tests."""
    spec = DeformationSpec.q_type(1.04) if spec is None else spec
    if weights is None:
        weights = q_coherent_weights(spec, alpha)
    if scaled_t is None:
        scaled_t = np.linspace(0.0, 25.0, 51)
    return ModelParams(
        lambda_c=lambda_c,
        delta_k_bar=delta_k_bar,
        kg=kg,
        nu=nu,
        recoil_rate=recoil_rate,
        c_e=c_e,
        c_g=c_g,
        weights=weights,
        spec=spec,
        p_nodes=p_nodes,
        t_grid=np.asarray(scaled_t, dtype=float) / lambda_c,
        **extra,
    )


@pytest.fixture
def params_factory():
    return make_params


@pytest.fixture
def vacuum():
    return PhotonWeights.fock(0)
