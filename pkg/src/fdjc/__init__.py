"""Moving two-level atom in an f-deformed cavity field under gravity.

Special functions, deformed field states, exact block dynamics, observables
and a command-line driver.
"""

__version__ = "0.1.0"

from .deformation import DeformationSpec, PhotonWeights, q_coherent_weights  # noqa: E402
from .dynamics import AmplitudeTrajectory, ModelParams, evolve_state, make_momentum_grid  # noqa: E402
from .observables import ObservableSeries  # noqa: E402

__all__ = [
    "AmplitudeTrajectory",
    "DeformationSpec",
    "ModelParams",
    "ObservableSeries",
    "PhotonWeights",
    "evolve_state",
    "make_momentum_grid",
    "q_coherent_weights",
]
