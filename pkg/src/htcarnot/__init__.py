"""Generalized H-type Carnot groups: structure, geodesics, and measure contraction.

The library builds step-2 Carnot groups whose horizontal structure operators
satisfy the anticommutation relations L_v L_w + L_w L_v = -2 (v.w) S^2 for a
diagonal non-negative S, synthesizes their optimal geodesics in closed form
(exponential and logarithm maps, Jacobian, cut times, distances), and
verifies the sharp measure contraction property MCP(0, k+3p) by
deterministic quadrature.
"""

from .catalog import CATALOG, catalog_names, catalog_spec, catalog_structure
from .config import ParsedConfig, parse_config
from .errors import (
    BoxOutsideDomain,
    ConfigError,
    CutLocusTarget,
    DimensionMismatch,
    HTCarnotError,
    IdentityTarget,
    NoCandidateFound,
    OutOfDomain,
    SpecNotRealizable,
    StructureInvalid,
    UnsupportedPositiveK,
    WitnessNotFound,
    ZeroCovector,
)
from .geodesics import (
    EXP_NEG_PAIR,
    F_PAIR,
    G_PAIR,
    AnalyticPair,
    Covector,
    DistanceResult,
    SpectralSplit,
    apply_analytic,
    cut_time,
    distance,
    distance_bound,
    exp_map,
    geodesic_sample,
    hamiltonian,
    homothety,
    in_injectivity_domain,
    is_abnormal,
    jacobian,
    log_map,
    spectral_split,
)
from .group import (
    GroupPoint,
    dilate,
    frame_fields,
    identity,
    inverse,
    multiply,
    translation_differential,
)
from .mcp import (
    ContractionReport,
    CovectorBox,
    InequalityReport,
    JacobianContractionReport,
    SharpnessReport,
    check_f_inequality,
    check_g_inequality,
    check_jacobian_contraction,
    contraction_ratio,
    default_box,
    distortion_coefficient,
    geodesic_dimension,
    hausdorff_dimension,
    mcp_report,
    sharpness_box,
    sharpness_witness,
)
from .quadrature import gauss_legendre, mapped_rule, pairwise_sum, tensor_quadrature
from .randomness import DEFAULT_SEED, generator
from .structure import (
    CheckResult,
    ExistenceResult,
    GroupSpec,
    SpectralBlock,
    StructureConstants,
    ValidationReport,
    anticommuting_family,
    build_structure,
    existence_check,
    hurwitz_radon,
    l_of_v,
    max_skew_family_size,
    structure_from_matrices,
    validate_structure,
)

__version__ = "0.1.0"

__all__ = [
    "AnalyticPair",
    "BoxOutsideDomain",
    "CATALOG",
    "CheckResult",
    "ConfigError",
    "ContractionReport",
    "Covector",
    "CovectorBox",
    "CutLocusTarget",
    "DEFAULT_SEED",
    "DimensionMismatch",
    "DistanceResult",
    "EXP_NEG_PAIR",
    "ExistenceResult",
    "F_PAIR",
    "G_PAIR",
    "GroupPoint",
    "GroupSpec",
    "HTCarnotError",
    "IdentityTarget",
    "InequalityReport",
    "JacobianContractionReport",
    "NoCandidateFound",
    "OutOfDomain",
    "ParsedConfig",
    "SharpnessReport",
    "SpecNotRealizable",
    "SpectralBlock",
    "SpectralSplit",
    "StructureConstants",
    "StructureInvalid",
    "UnsupportedPositiveK",
    "ValidationReport",
    "WitnessNotFound",
    "ZeroCovector",
    "anticommuting_family",
    "apply_analytic",
    "build_structure",
    "catalog_names",
    "catalog_spec",
    "catalog_structure",
    "check_f_inequality",
    "check_g_inequality",
    "check_jacobian_contraction",
    "contraction_ratio",
    "cut_time",
    "default_box",
    "dilate",
    "distance",
    "distance_bound",
    "distortion_coefficient",
    "exp_map",
    "existence_check",
    "frame_fields",
    "gauss_legendre",
    "generator",
    "geodesic_dimension",
    "geodesic_sample",
    "hamiltonian",
    "hausdorff_dimension",
    "homothety",
    "hurwitz_radon",
    "identity",
    "in_injectivity_domain",
    "inverse",
    "is_abnormal",
    "jacobian",
    "l_of_v",
    "log_map",
    "mapped_rule",
    "max_skew_family_size",
    "mcp_report",
    "multiply",
    "pairwise_sum",
    "parse_config",
    "sharpness_box",
    "sharpness_witness",
    "spectral_split",
    "structure_from_matrices",
    "tensor_quadrature",
    "translation_differential",
    "validate_structure",
]
