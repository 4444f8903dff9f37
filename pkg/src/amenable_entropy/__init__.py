"""Entropy computations for shift actions of discrete amenable groups.

The package covers both sides of the dimensional approach to topological
entropy on symbolic spaces: cover-counting entropy along a Folner sequence,
Bowen-style outer measures with exact rational arithmetic, weighted covers
and their dual Frostman measures, local entropy estimates for product and
Markov measures, and diagnostics for the Folner sequences themselves.
"""

from .bowen import (
    Ball,
    BallFamily,
    BowenReport,
    CoverWord,
    CylinderUnion,
    FrostmanResult,
    OuterMeasureResult,
    ScheduleRow,
    SubShiftAtoms,
    SubsetSpec,
    WeightedCoverResult,
    WholeSpace,
    bowen_entropy_estimate,
    candidate_balls,
    cover_word_M,
    cover_words,
    critical_exponent,
    cylinder_union,
    five_r_disjointify,
    frostman_measure,
    outer_measure_M,
    rational_cost,
    weighted_W,
    weighted_disjoint_subfamilies,
)
from .combinatorics import (
    NameVector,
    hamming_ball_count,
    hamming_distance,
    name_of,
    normalized_hamming,
    stirling_K,
    verify_Ln_bound,
)
from .entropy_top import (
    HtopRow,
    OpenCoverSpec,
    cover_count,
    cover_window,
    htop_profile,
    separated_set_size,
)
from .errors import BudgetExceededError, ConfigError, CoverError, WindowError
from .group import (
    Enumeration,
    FolnerSequence,
    GroupSpec,
    GrowthReport,
    enumerate_prefix,
    folner_defect,
    growth_ratios,
    heisenberg,
    inverse_set,
    product_set,
    shulman_constant,
    shulman_profile,
    zd,
)
from .measures import (
    LocalEntropyEstimate,
    ProductMeasure,
    bernoulli,
    bowen_ball_mass,
    cylinder_mass,
    ergodic_average,
    golden_mean_parry,
    local_entropy_profile,
    markov_chain,
    measure_entropy,
    sample,
    smb_estimate,
)
from .shift_space import (
    Alphabet,
    Cylinder,
    MetricSpec,
    Pattern,
    ShiftSpace,
    act,
    admissible_patterns,
    bowen_ball,
    bowen_window,
    count_admissible,
    full_shift,
    golden_mean_shift,
    pattern_from_literal,
    pattern_to_literal,
)

__version__ = "0.1.0"
