"""Rate-distortion-equivocation regions for secure source coding with side information."""

from .errors import BudgetError, ValidationError
from .probability import (
    Channel,
    DistortionMeasure,
    FullJoint,
    JointSource,
    bob_more_capable,
    classify_bec_bsc_regime,
    compose_full_joint,
    conditional_entropy,
    conditional_mi,
    entropy,
    h2,
    h2_inv,
    make_bec_bsc_source,
    mutual_information,
    star,
)
from .regions import (
    AuxiliarySystem,
    BinaryParams,
    GaussianParams,
    RegionPoint,
    binary_bec_bsc_point,
    binary_wyner_ziv_point,
    corner_point,
    gaussian_inner,
    gaussian_optimal_no_eve_si,
    inner_bound_point,
    lossless_region_point,
    lossless_region_point_alt,
    outer_bound_point,
    uncoded_region_point,
    uncoded_region_point_alt,
)
from .optimize import (
    FrontierResult,
    FrontierSpec,
    RegionConstraints,
    binary_frontier,
    binary_merge_threshold,
    brute_force_oracle,
    convexify,
    generic_inner_frontier,
    lossless_frontier,
)
from .simulate import (
    CodeConfig,
    CodeInstance,
    SimReport,
    exact_equivocation,
    generate_codebooks,
    message_equivocation,
    run_experiment,
)

__all__ = [
    "BudgetError",
    "ValidationError",
    "Channel",
    "DistortionMeasure",
    "FullJoint",
    "JointSource",
    "bob_more_capable",
    "classify_bec_bsc_regime",
    "compose_full_joint",
    "conditional_entropy",
    "conditional_mi",
    "entropy",
    "h2",
    "h2_inv",
    "make_bec_bsc_source",
    "mutual_information",
    "star",
    "AuxiliarySystem",
    "BinaryParams",
    "GaussianParams",
    "RegionPoint",
    "binary_bec_bsc_point",
    "binary_wyner_ziv_point",
    "corner_point",
    "gaussian_inner",
    "gaussian_optimal_no_eve_si",
    "inner_bound_point",
    "lossless_region_point",
    "lossless_region_point_alt",
    "outer_bound_point",
    "uncoded_region_point",
    "uncoded_region_point_alt",
    "FrontierResult",
    "FrontierSpec",
    "RegionConstraints",
    "binary_frontier",
    "binary_merge_threshold",
    "brute_force_oracle",
    "convexify",
    "generic_inner_frontier",
    "lossless_frontier",
    "CodeConfig",
    "CodeInstance",
    "SimReport",
    "exact_equivocation",
    "generate_codebooks",
    "message_equivocation",
    "run_experiment",
]
