"""Classical (phase-space) representation of finite-dimensional quantum probability.

Pure states form the phase space; density operators are barycenters of
probability measures on it (:func:`reduce`); effects become fuzzy
indicator functions (:func:`adjoint_effect`); POVMs become Markov kernels
(:func:`kernel_from_povm`).
"""

__version__ = "0.1.0"

from ._config import Tolerances, config_context, get_config, set_config
from .estimators import PovmKernel, ProjectorFeatures, QuantumEffectRegressor
from .exceptions import NumericError, ValidationError
from .extensions import (
    ClassicalExtension,
    example1,
    example2,
    example3,
    extract_omega_tilde,
    index_map,
    reduce_extension,
    verify_representation,
)
from .fuzzy import (
    MarkovKernel,
    Povm,
    classical_distribution,
    kernel_from_povm,
    quantum_distribution,
    random_povm,
    sharp_effect_residual,
    simulate_outcomes,
)
from .linalg import (
    PartialIsometry,
    eig_hermitian,
    operator_norm,
    partial_isometry,
    random_density,
    random_effect,
    random_haar_unitary,
    trace_norm,
)
from .mbmap import (
    ClassicalEffect,
    FromEffect,
    Indicator,
    Tabulated,
    adjoint_effect,
    alternative_ensemble,
    eigen_ensemble,
    purity,
    reduce,
    support_concentration,
    to_pure_point,
)
from .measures import DiscreteMeasure, dirac, expectation, mix, pushforward, tv_distance
from .projective import (
    PurePoint,
    dist_opnorm,
    dist_trace,
    in_weak_neighborhood,
    pure_from_ket,
    sample_haar_pure,
    transition_probability,
)
