"""Numerical toolkit for entire functions of exponential type at most pi
whose restrictions to the real line are p-th power integrable, together
with the Banach and q-Banach envelopes of those spaces.

A function is represented by its spectral density s on [-pi, pi] through

    f(z) = integral s(t) exp(izt) dt,

so densities are the primitive objects, and everything else (evaluation,
line and area norms, conformal transfer to the disk, envelope functionals,
atomic decompositions, and the verification harness) is built on top.
"""

from .catalog import CatalogEntry, default_catalog, disk_catalog, tagged
from .conformal import (
    CayleyMap,
    TransferReport,
    cayley,
    cayley_derivative,
    cayley_identities,
    cayley_inverse,
    transfer_to_disk,
    verify_transfer_identity,
)
from .envelope import (
    DecompositionResult,
    Dictionary,
    HalfPlanePair,
    apply_T,
    build_dictionary,
    counterexample_family,
    counterexample_ratio,
    embed_j,
    minkowski_norm,
    project_Q,
)
from .errors import (
    ConsistencyError,
    DivergesError,
    DomainError,
    InvalidArgumentError,
    InvalidWeightError,
    NoDecompositionError,
    NotHardyError,
    NotInEpError,
    PoleError,
    PwenvError,
)
from .evaluate import (
    BandLimitedFunction,
    EvalGrid,
    eval_line,
    eval_many,
    eval_point,
    exp_type,
    exponential_type,
)
from .harness import (
    CheckRow,
    ExperimentConfig,
    VerificationReport,
    check_conformal,
    check_envelope_consistency,
    check_plancherel_polya,
    check_projection,
    check_qenvelope,
    check_spectral_growth,
    run_all,
    run_counterexample_sweep,
    run_equivalence_study,
)
from .norms import (
    EnvelopeParams,
    NormReport,
    QuadratureSpec,
    bergman_disk_norm,
    bergman_halfplane_norm,
    envelope_direct_norm,
    envelope_integral_norm,
    ep_norm,
    hardy_halfplane_norm,
    l2_line_mass_exact,
    lp_line_norm,
)
from .spectrum import (
    PartitionOfUnity,
    SmoothstepProfile,
    SpectralDensity,
    make_bump,
    make_fejer,
    make_partition,
    modulate,
    multiply_pointwise,
    smoothstep,
    smoothstep_coefficients,
)

__version__ = "0.1.0"

__all__ = [
    "BandLimitedFunction",
    "CatalogEntry",
    "CayleyMap",
    "CheckRow",
    "ConsistencyError",
    "DecompositionResult",
    "Dictionary",
    "DivergesError",
    "DomainError",
    "EnvelopeParams",
    "EvalGrid",
    "ExperimentConfig",
    "HalfPlanePair",
    "InvalidArgumentError",
    "InvalidWeightError",
    "NoDecompositionError",
    "NormReport",
    "NotHardyError",
    "NotInEpError",
    "PartitionOfUnity",
    "PoleError",
    "PwenvError",
    "QuadratureSpec",
    "SmoothstepProfile",
    "SpectralDensity",
    "TransferReport",
    "VerificationReport",
    "apply_T",
    "bergman_disk_norm",
    "bergman_halfplane_norm",
    "build_dictionary",
    "cayley",
    "cayley_derivative",
    "cayley_identities",
    "cayley_inverse",
    "check_conformal",
    "check_envelope_consistency",
    "check_plancherel_polya",
    "check_projection",
    "check_qenvelope",
    "check_spectral_growth",
    "counterexample_family",
    "counterexample_ratio",
    "default_catalog",
    "disk_catalog",
    "embed_j",
    "envelope_direct_norm",
    "envelope_integral_norm",
    "ep_norm",
    "eval_line",
    "eval_many",
    "eval_point",
    "exp_type",
    "exponential_type",
    "hardy_halfplane_norm",
    "l2_line_mass_exact",
    "lp_line_norm",
    "make_bump",
    "make_fejer",
    "make_partition",
    "minkowski_norm",
    "modulate",
    "multiply_pointwise",
    "project_Q",
    "run_all",
    "run_counterexample_sweep",
    "run_equivalence_study",
    "smoothstep",
    "smoothstep_coefficients",
    "tagged",
    "transfer_to_disk",
    "verify_transfer_identity",
]
