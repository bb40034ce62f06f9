"""betadyn: certified beta-expansions and shrinking-target dichotomies.

A base beta > 1 is represented exactly (integer, rational, quadratic
irrational) or as a shrinkable enclosure; on top sit greedy digit
extraction with certified floors, the admissibility criterion and word
counting, cylinder geometry, orbit hit statistics against shrinking
targets, the zero-or-full series classifiers, box-counting dimension
estimates, and the greedy disjoint-ball selection that powers mass
transference at desk scale.
"""

from .admissibility import (
    AdmissibleCount,
    count_admissible,
    enumerate_admissible,
    is_admissible,
    lex_compare,
)
from .beta import (
    Beta,
    DigitSeq,
    OneExpansion,
    QuadElem,
    beta_transform,
    compare_values,
    digits,
    expansion_of_one,
    reconstruct,
    word_value,
)
from .certified import DEFAULT_CFG, Enclosure, PrecisionCfg
from .cylinders import (
    BlowupCheckReport,
    Cylinder,
    PartitionReport,
    TargetInterval,
    blowup_inequality_check,
    cylinder,
    lex_successor,
    partition_check,
    random_admissible_word,
    target_interval,
)
from .errors import (
    BetadynError,
    BudgetExceeded,
    DegenerateRange,
    HypothesisViolated,
    InadmissibleWord,
    PrecisionExhausted,
    PreconditionUnverifiable,
    UncertifiedFloor,
    UndecidedFiniteness,
)
from .functions import (
    DimensionFn,
    TargetFn,
    corollary_g,
    corollary_psi1,
    corollary_psi_eps,
)
from .measure import (
    Ball,
    BallFamily,
    BoxDimReport,
    Selection,
    SeriesReport,
    TermStructure,
    ball_family_from_targets,
    box_dimension_estimate,
    dyadic_family,
    predicted_hausdorff,
    select_disjoint_blowups,
    series_1d,
    series_2d,
    term_structure,
)
from .targets import (
    GridCell,
    HitRecord,
    RectCover,
    SimulationStats,
    grid_cells,
    hit_sequence,
    hit_sequence_2d,
    monte_carlo_measure,
    rectangle_cover,
)

__version__ = "0.1.0"
