"""Simulation toolkit for entangling the motion of two distant trapped atoms.

Two cavity-trapped atoms driven by the quadrature-entangled output of a
nondegenerate parametric oscillator relax into a two-mode squeezed state
of their motional modes.  The package provides the source spectra, the
effective two-mode master equation with its exact steady state, Gaussian
covariance propagation (including the finite-bandwidth source cascade),
entanglement and Bell-inequality diagnostics on the motional state, and
an order-of-magnitude feasibility screen for candidate experiments.
"""

from .hilbert import (
    FockBasis,
    ModeOperator,
    PureState,
    DensityMatrix,
    annihilation_op,
    number_op,
    identity_op,
    adjoint,
    compose,
    expectation,
    partial_trace,
    vacuum_state,
    recommended_n_max,
)
from .nopa import (
    NopaParams,
    SpectrumTable,
    transfer_function,
    squeezing_spectra,
    effective_N_M,
    squeeze_parameter,
)
from .states import (
    TmssSpec,
    TruncationWarning,
    WignerGrid,
    tmss_fock,
    squeeze_unitary,
    displacement_op,
    parity_op,
    wigner_analytic,
    wigner_from_density,
    edge_population,
)
from .lindblad import (
    LindbladModel,
    EvolutionResult,
    NumericalError,
    Superoperator,
    build_superoperator,
    steady_state,
    evolve,
    purity,
)
from .gaussian import (
    CovarianceState,
    DriftDiffusion,
    symplectic_form,
    model_from_lindblad,
    steady_covariance,
    evolve_covariance,
    cascade_model,
    collective_mode_map,
    epr_variances,
)
from .metrics import (
    BellSettings,
    fidelity,
    mean_phonon,
    epr_criterion,
    parity_correlation,
    chsh_value,
    log_negativity,
)
from .feasibility import (
    ExperimentParams,
    Check,
    FeasibilityReport,
    coupling_rate,
    cooperativity,
    check_all,
)

__version__ = "0.1.0"

__all__ = [
    "FockBasis",
    "ModeOperator",
    "PureState",
    "DensityMatrix",
    "annihilation_op",
    "number_op",
    "identity_op",
    "adjoint",
    "compose",
    "expectation",
    "partial_trace",
    "vacuum_state",
    "recommended_n_max",
    "NopaParams",
    "SpectrumTable",
    "transfer_function",
    "squeezing_spectra",
    "effective_N_M",
    "squeeze_parameter",
    "TmssSpec",
    "TruncationWarning",
    "WignerGrid",
    "tmss_fock",
    "squeeze_unitary",
    "displacement_op",
    "parity_op",
    "wigner_analytic",
    "wigner_from_density",
    "edge_population",
    "LindbladModel",
    "EvolutionResult",
    "NumericalError",
    "Superoperator",
    "build_superoperator",
    "steady_state",
    "evolve",
    "purity",
    "CovarianceState",
    "DriftDiffusion",
    "symplectic_form",
    "model_from_lindblad",
    "steady_covariance",
    "evolve_covariance",
    "cascade_model",
    "collective_mode_map",
    "epr_variances",
    "BellSettings",
    "fidelity",
    "mean_phonon",
    "epr_criterion",
    "parity_correlation",
    "chsh_value",
    "log_negativity",
    "ExperimentParams",
    "Check",
    "FeasibilityReport",
    "coupling_rate",
    "cooperativity",
    "check_all",
    "__version__",
]
