"""Locally repairable convolutional codes: construction, distances and repair."""

from .budget import BudgetExceeded
from .convcode import (
    ConvCode,
    DistanceProfile,
    SumRankLayout,
    L_parameter,
    code_from_generator,
    column_distance_bruteforce,
    column_distance_rank,
    encode_stream,
    is_j_MDS,
    is_j_MSRD,
    is_MDP,
    sum_rank_column_distance,
    sum_rank_weight,
)
from .field import ExtField, FieldElement, field_build, find_primitive_normal, frobenius
from .lrcc import (
    LocalStructure,
    LrccCode,
    attainment_check,
    build_construction1,
    is_partial_MDP,
    is_partial_j_MDS,
    lrcc_bound,
    lrcc_bound_j0,
    restrict_code,
    verify_locality,
)
from .msrd import MsrdParams, build_msrd_outer, msrd_field_bound, verify_msrd
from .polymat import PolyMatrix
from .repair import (
    ErasureStream,
    RepairReport,
    WindowPolicy,
    adaptive_repair,
    inject_erasures,
    local_repair,
    repair_cost_formulas,
    sliding_window_repair,
    tail_biting_encode,
    tail_biting_repair,
)

__version__ = "0.1.0"
