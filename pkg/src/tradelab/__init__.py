"""Construction, validation and exhaustive search of t-(v,k) trades."""
from .algebra import (
    StarSplit,
    check_pair_count_identity,
    derived_trade,
    difference_volume,
    minimal_trade,
    star_split,
    star_trade,
    trade_difference,
    trade_sum,
    weaken,
)
from .core import (
    Block,
    CandidatePair,
    ParameterError,
    Side,
    Trade,
    TradeError,
    ValidationError,
    are_isomorphic,
    canonical_form,
    is_simple,
    is_steiner,
    make_block,
    pair_index,
    replication,
    t_profile,
    trade_from_blocks,
    validate,
)
from .inclusion import InclusionMatrix, build_matrix, kernel_check, signed_vector
from .search import (
    GapReport,
    SearchOutcome,
    SearchSpec,
    brute_force_oracle,
    enumerate_trades,
    forbidden_volumes,
    foundation_bounds,
    verify_gaps,
)
from .ttf import FormatError, load_ttf, read_ttf, save_ttf, write_ttf

__version__ = "0.1.0"
