"""Numerical calculus of probabilistic normed spaces.

Distribution-function algebra on the distance d.d.f. cone, triangle-function
convolutions, concrete probabilistic normed spaces with axiom checkers, the
strong topology with its scalar-continuity criterion, probabilistic-radius
boundedness, and numerical normability certificates.
"""

__version__ = "0.1.0"

from .errors import (
    ConfigError,
    ConstructionError,
    DomainError,
    PNSpaceError,
    PreconditionError,
)
from .verdicts import (
    CAVEAT,
    AxiomReport,
    NormabilityCertificate,
    SamplePlan,
    Verdict,
)
from .distfun import (
    AnalyticDistFn,
    DistFn,
    PiecewiseDistFn,
    Profile,
    converges_weakly,
    ddf_eval,
    distfn_from_dict,
    increasing_inverse,
    is_proper,
    plateau,
    profile_family,
    quasi_inverse,
    sibley_distance,
    sibley_to_origin,
    unit_step,
)
from .tnorms import (
    LUKASIEWICZ,
    MIN,
    MIN_TRIANGLE,
    PRODUCT,
    TNorm,
    TriangleFn,
    convolve,
    custom_tnorm,
    dual_tnorm_eval,
    inf_conv,
    inf_convolution,
    pointwise_min,
    sup_conv,
    sup_convolution,
    tnorm,
    tnorm_eval,
    triangle_properties_check,
)
from .spaces import (
    Carrier,
    PNSpace,
    check_axioms,
    check_serstnev,
    is_characteristic,
    make_alpha_simple,
    make_custom,
    make_custom_table,
    make_equilateral,
    make_profile_space,
    make_simple,
    pn_eval,
    profile_condition_check,
    space_from_config,
)
from .topology import (
    neighborhood_contains,
    prob_distance,
    strong_converges,
    tv_continuity_check,
)
from .boundedness import (
    BoundednessReport,
    SetSpec,
    ball,
    boundedness_equivalence_harness,
    finite,
    generator,
    is_d_bounded,
    is_topologically_bounded,
    prob_radius,
    prob_radius_tail,
    set_infimum,
    whole_space,
)
from .normability import (
    alpha_simple_radius,
    alpha_simple_radius_limits,
    ball_equivalence_check,
    convexity_check,
    kolmogorov_certificate,
    neighborhood_radius,
)
