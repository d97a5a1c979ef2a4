"""Threshold budgets for poorman discrete-bidding reachability games."""

from .budget import INF, Budget, format_budget, parse_budget
from .closed_forms import golden_floors, race_threshold, tow2_threshold, tow3_threshold
from .dag import solve_dag
from .game import (
    Configuration,
    Game,
    InvalidGameError,
    NotADagError,
    Violation,
    gen_choice,
    gen_pipe_violation,
    gen_race,
    gen_tow,
    load_game,
    max_path,
    parse_spec,
    topological_order,
    validate_game,
)
from .iteration import (
    BidInterval,
    ThresholdTable,
    cheapest_moves,
    solve,
    step,
    step_bid,
    step_bound,
    winning_bids,
    winning_moves,
)
from .oracle import bidding_matrix, check_local_determinacy, oracle_threshold, oracle_winner
from .periodicity import PeriodSpec, compose_period, detect_period, predict_period_dag
from .ratios import check_pipe, pipe_bounds, ratio_bracket, ratios_dag

__version__ = "0.1.0"
