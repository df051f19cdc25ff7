"""Possibilistic representation and combination of belief functions."""

from .isopignistic import (
    IsopignisticFunction,
    RelativeRepresentation,
    ZetaFunction,
    apply_zeta,
    compose,
    decompose,
    probability_from_possibility,
    reconstruct,
    relativize,
    zeta,
)
from .mass import (
    InvalidMassError,
    MassFunction,
    PignisticDistribution,
    PreconditionError,
    WeightFunction,
    bel,
    belief_vector,
    betp,
    commonality_vector,
    ignorance,
    implicability_vector,
    mass_from_sigma,
    mass_from_v,
    pignistic_entropy,
    pl,
    plausibility_vector,
    possibility_from_pignistic,
    q,
    simple_sigma,
    simple_v,
    validate,
    weight_sigma,
    weight_v,
)
from .operators import Operator, OperatorError, fold, pointwise_dominates
from .powerset import Frame, FrameError
from .rules import (
    FusedDiagnostics,
    FusionConfig,
    TotalConflictError,
    bcr,
    caucr,
    ccr,
    combine,
    combine_all,
    dcr,
    dempster,
    dubois_prade,
    informative_leq,
    pecr,
    yager,
)

__all__ = [
    "Frame",
    "FrameError",
    "MassFunction",
    "InvalidMassError",
    "PreconditionError",
    "PignisticDistribution",
    "WeightFunction",
    "validate",
    "bel",
    "pl",
    "q",
    "belief_vector",
    "implicability_vector",
    "plausibility_vector",
    "commonality_vector",
    "weight_sigma",
    "weight_v",
    "mass_from_sigma",
    "mass_from_v",
    "simple_sigma",
    "simple_v",
    "betp",
    "possibility_from_pignistic",
    "ignorance",
    "pignistic_entropy",
    "IsopignisticFunction",
    "RelativeRepresentation",
    "ZetaFunction",
    "decompose",
    "compose",
    "relativize",
    "reconstruct",
    "probability_from_possibility",
    "zeta",
    "apply_zeta",
    "Operator",
    "OperatorError",
    "fold",
    "pointwise_dominates",
    "FusionConfig",
    "FusedDiagnostics",
    "TotalConflictError",
    "pecr",
    "combine",
    "ccr",
    "dcr",
    "dempster",
    "yager",
    "dubois_prade",
    "caucr",
    "bcr",
    "combine_all",
    "informative_leq",
]
