"""qcharge: the quantum charging distance and its physics payloads.

Computes the minimal unitary-evolution time between isospectral density
matrices under a unit-operator-norm drive, together with closed forms,
upper/lower bounds, optimal drives, charging-power bounds, and the
associated quantum speed limits.
"""

from .applications import (
    AchievabilityReport,
    DriveProtocol,
    PowerReport,
    classical_two_qubit_protocols,
    evolve,
    power_report,
    propagator,
    qsl_t_cd,
    qsl_t_mcd,
    two_qubit_entanglement_entropy,
    verify_achievability,
)
from .config import DEFAULT_TOLERANCES, Tolerances, tolerances_from_env
from .distance import (
    Diagnostics,
    DistanceResult,
    Method,
    OptimizerOptions,
    base_connector,
    brute_force_distance,
    distance_general,
    distance_nondegenerate,
    pure_distance,
    pure_optimal_hamiltonian,
    qubit_distance,
)
from .matcore import (
    eig_hermitian,
    eig_unitary,
    haar_unitary,
    log_unitary_norm,
    matrix_sqrt_psd,
    min_global_phase_norm,
    operator_norm,
    trace_norm,
)
from .metrics import (
    BoundInterval,
    bound_interval,
    bures_angle,
    fidelity,
    lower_bound_tight,
    trace_distance,
    upper_bound,
)
from .states import (
    BlochVector,
    DensityMatrix,
    SpectralForm,
    from_bloch,
    is_pure,
    isospectral,
    purity,
    random_isospectral_couple,
    random_pure_state,
    spectral_form,
    to_bloch,
)

__version__ = "0.1.0"

__all__ = [
    "AchievabilityReport",
    "BlochVector",
    "BoundInterval",
    "DEFAULT_TOLERANCES",
    "DensityMatrix",
    "Diagnostics",
    "DistanceResult",
    "DriveProtocol",
    "Method",
    "OptimizerOptions",
    "PowerReport",
    "SpectralForm",
    "Tolerances",
    "base_connector",
    "bound_interval",
    "brute_force_distance",
    "bures_angle",
    "classical_two_qubit_protocols",
    "distance_general",
    "distance_nondegenerate",
    "eig_hermitian",
    "eig_unitary",
    "evolve",
    "fidelity",
    "from_bloch",
    "haar_unitary",
    "is_pure",
    "isospectral",
    "log_unitary_norm",
    "lower_bound_tight",
    "matrix_sqrt_psd",
    "min_global_phase_norm",
    "operator_norm",
    "power_report",
    "propagator",
    "pure_distance",
    "pure_optimal_hamiltonian",
    "purity",
    "qsl_t_cd",
    "qsl_t_mcd",
    "qubit_distance",
    "random_isospectral_couple",
    "random_pure_state",
    "spectral_form",
    "to_bloch",
    "tolerances_from_env",
    "trace_distance",
    "trace_norm",
    "two_qubit_entanglement_entropy",
    "upper_bound",
    "verify_achievability",
]
