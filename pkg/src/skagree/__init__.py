"""skagree: feasibility of positive-rate secret-key agreement for discrete
memoryless sources observed through an eavesdropper.

The package answers, for a joint source p(x, y) with an erasure or general
side observer: can the two legitimate parties distill any secret key at
all, and how strong is the residual dependence Eve cannot touch?  It
provides exact erasure thresholds with certificates, single-letter and
block feasibility tests, correlation and divergence measures, an exactly
analyzable advantage-distillation construction with a deterministic
Monte-Carlo simulator, and closed-form benchmark curves for the symmetric
binary source.
"""

from .errors import (
    AlphabetMismatchError,
    AlphabetTooLargeError,
    DegenerateWitnessError,
    DimensionMismatchError,
    EmptySetError,
    EnumerationTooLargeError,
    EpsilonOutOfRangeError,
    GuardError,
    InvalidAlphaError,
    InvalidPathError,
    InvalidPmfError,
    NegativeEntryError,
    NotErasureSourceError,
    NotNormalizedError,
    OutOfRangeError,
    PairsCollideError,
    SetsNotDisjointError,
    SkagreeError,
    ValidationError,
)
from .pmf import (
    ERASURE_SYMBOL,
    Channel,
    Erasure,
    General,
    JointPmf,
    PreceqWitness,
    Source,
    build_erasure_source,
    build_general_source,
    load_source,
    preceq_check,
    preceq_simulation_channels,
    restrict_support,
    source_from_dict,
    validate_channel,
    validate_joint,
    y_given_x,
)
from .info import (
    LN2,
    Divergence,
    binary_entropy,
    bits_to_nats,
    chernoff_information,
    conditional_mutual_information,
    entropy,
    mutual_information,
    nats_to_bits,
    renyi_divergence,
    tv_distance,
)
from .correlation import (
    CorrelationReport,
    doeblin_coefficient,
    erasure_degradation_channel,
    eta,
    j_alpha,
    j_infinity,
    max_reweighted_rho_sq,
    maximal_correlation,
    uncertainty_product_bound,
    verify_uncertainty_product,
)
from .thresholds import (
    Epsilon3Certificate,
    Path,
    ThresholdReport,
    epsilon1_lp,
    epsilon1_paths,
    epsilon2,
    epsilon3_certificate,
    epsilon3_lower_bound,
    lbar_zero_threshold,
    oneway_zero_threshold,
    path_value,
    threshold_report,
)
from .feasibility import (
    WEAK_DEPENDENCE_THRESHOLD,
    FeasibilityVerdict,
    McStatistics,
    SwapInstance,
    exact_acceptance_rate,
    exact_eve_error,
    monte_carlo_protocol,
    pair_feasibility_test,
    set_feasibility_test,
    swap_advantage_lb,
    tilde_p,
)
from .dsbe import (
    CurvePoint,
    DsbeParams,
    DsbeThresholds,
    b0_sub,
    curves_to_csv,
    dsbe_pmf,
    dsbe_source,
    dsbe_thresholds,
    emit_curves,
    repetition_rate,
    s_ow_lower_bound,
)

__version__ = "0.1.0"

__all__ = [
    "ERASURE_SYMBOL",
    "LN2",
    "WEAK_DEPENDENCE_THRESHOLD",
    "AlphabetMismatchError",
    "AlphabetTooLargeError",
    "Channel",
    "CorrelationReport",
    "CurvePoint",
    "DegenerateWitnessError",
    "DimensionMismatchError",
    "Divergence",
    "DsbeParams",
    "DsbeThresholds",
    "EmptySetError",
    "EnumerationTooLargeError",
    "Epsilon3Certificate",
    "EpsilonOutOfRangeError",
    "Erasure",
    "FeasibilityVerdict",
    "General",
    "GuardError",
    "InvalidAlphaError",
    "InvalidPathError",
    "InvalidPmfError",
    "JointPmf",
    "McStatistics",
    "NegativeEntryError",
    "NotErasureSourceError",
    "NotNormalizedError",
    "OutOfRangeError",
    "PairsCollideError",
    "Path",
    "PreceqWitness",
    "SetsNotDisjointError",
    "SkagreeError",
    "Source",
    "SwapInstance",
    "ThresholdReport",
    "ValidationError",
    "b0_sub",
    "binary_entropy",
    "bits_to_nats",
    "build_erasure_source",
    "build_general_source",
    "chernoff_information",
    "conditional_mutual_information",
    "curves_to_csv",
    "doeblin_coefficient",
    "dsbe_pmf",
    "dsbe_source",
    "dsbe_thresholds",
    "emit_curves",
    "entropy",
    "epsilon1_lp",
    "epsilon1_paths",
    "epsilon2",
    "epsilon3_certificate",
    "epsilon3_lower_bound",
    "erasure_degradation_channel",
    "eta",
    "exact_acceptance_rate",
    "exact_eve_error",
    "j_alpha",
    "j_infinity",
    "lbar_zero_threshold",
    "load_source",
    "max_reweighted_rho_sq",
    "maximal_correlation",
    "monte_carlo_protocol",
    "mutual_information",
    "nats_to_bits",
    "oneway_zero_threshold",
    "pair_feasibility_test",
    "path_value",
    "preceq_check",
    "preceq_simulation_channels",
    "renyi_divergence",
    "repetition_rate",
    "restrict_support",
    "s_ow_lower_bound",
    "set_feasibility_test",
    "source_from_dict",
    "swap_advantage_lb",
    "threshold_report",
    "tilde_p",
    "tv_distance",
    "uncertainty_product_bound",
    "validate_channel",
    "validate_joint",
    "y_given_x",
]
