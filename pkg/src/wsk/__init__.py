"""Weak-form polynomial surrogates for ODEs and POD-reduced diffusion.

The building blocks are Simpson quadrature on uniform grids
(:mod:`wsk.quadrature`), projection and test bases (:mod:`wsk.bases`),
the three linear-system encoders and the minimum-norm solver
(:mod:`wsk.identification`), RK4 integration (:mod:`wsk.ode`), error
decompositions (:mod:`wsk.error_analysis`) and the POD pipeline
(:mod:`wsk.pod`). :class:`WeakSINDy` and :class:`POD` wrap them in the
scikit-learn estimator interface.
"""

__version__ = "0.1.0"

from .bases import ProjectionBasis, TestBasis, eval_projection, eval_test, eval_test_derivative
from .error_analysis import ErrorDecomposition, RateFit, decompose_error, fit_rate, solution_error_bound
from .estimator import WeakSINDy
from .exceptions import (
    BlowUpError,
    ConfigError,
    DegenerateGridError,
    DomainError,
    IncompatibleGridsError,
    InsufficientDataError,
    MissingDataError,
    NumericError,
    StabilityError,
    WSKError,
)
from .identification import (
    GramSystem,
    SurrogateModel,
    Trajectory,
    decode,
    encode_occupation,
    encode_sindy,
    encode_weak,
    project_dynamics,
    solve,
)
from .ode import DynamicsSpec, integrate, integrate_linear, lipschitz_estimate
from .pod import (
    POD,
    PodDecomposition,
    SnapshotField,
    exact_mode_surrogate,
    ftcs_solve,
    pod_decompose,
    proxy_modes,
    reconstruct,
)
from .quadrature import SampledFunction, UniformGrid, inner_product, l2_norm, simpson_integrate
