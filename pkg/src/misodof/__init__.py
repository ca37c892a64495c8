"""Degrees-of-freedom outer bounds and achievability schedules for the K-user
MISO broadcast channel with alternating CSIT (perfect, delayed, none)."""

from .core import (
    CsitPattern,
    CsitState,
    LinearInequality,
    MarginalProfile,
    PatternParseError,
    Region,
    joint_mass,
    marginals_of,
    parse_pattern,
    serialize_pattern,
)
from .patterns import Relation, compare_regions, pattern_weighted_inequality, tightened_region
from .polytope import (
    DimensionTooLarge,
    LpStatus,
    contains,
    is_redundant,
    lp_max,
    pareto_maximal,
    remove_redundant,
    vertices,
)
from .region import (
    build_region,
    build_symmetric_region,
    inequality_count,
    psi_order,
    sum_inequality,
    weighted_inequality,
)
from .schemes import (
    InfeasibleScheme,
    ScheduleError,
    SchemeConfig,
    SchemeResult,
    alternating_order2_scheme,
    corner_scheme_case_a,
    feedback_census,
    fig5_scheme,
    fixed_csit_scheme,
    hybrid_corner_scheme,
    mat_min_delay,
    mat_schedule,
    rate_slope,
    simulate_decode,
)

__version__ = "0.1.0"
