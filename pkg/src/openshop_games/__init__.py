"""Cooperative games from unit-time open shop scheduling."""
from .admissibility import (
    AS1,
    AS2,
    AS2P,
    AS3,
    AS3P,
    AS4,
    AS4P,
    BAR2,
    BAR3,
    BAR4,
    REGIMES,
    Regime,
    SchemeCondition,
    TimeCondition,
    all_regimes,
    is_admissible,
)
from .game import (
    Allocation,
    TUGame,
    block_rounded_saving,
    build_game,
    check_convex,
    check_superadditive,
    core_nonempty,
    is_core_member,
    mu_bar,
    mu_j,
)
from .optimal import adiri_amit, j_based_optimal, optimal_total_cost
from .schedule import (
    Instance,
    InvalidInstanceError,
    Schedule,
    Scheme,
    coalition_cost,
    completion_time,
    completion_times,
    is_feasible_schedule,
    is_semi_active,
    scheme_of,
)
from .search import SearchConfig, SearchLimitExceeded, min_coalition_cost

__all__ = [
    "AS1",
    "AS2",
    "AS2P",
    "AS3",
    "AS3P",
    "AS4",
    "AS4P",
    "Allocation",
    "BAR2",
    "BAR3",
    "BAR4",
    "Instance",
    "InvalidInstanceError",
    "REGIMES",
    "Regime",
    "Schedule",
    "Scheme",
    "SchemeCondition",
    "SearchConfig",
    "SearchLimitExceeded",
    "TUGame",
    "TimeCondition",
    "adiri_amit",
    "all_regimes",
    "block_rounded_saving",
    "build_game",
    "check_convex",
    "check_superadditive",
    "coalition_cost",
    "completion_time",
    "completion_times",
    "core_nonempty",
    "is_admissible",
    "is_core_member",
    "is_feasible_schedule",
    "is_semi_active",
    "j_based_optimal",
    "min_coalition_cost",
    "mu_bar",
    "mu_j",
    "optimal_total_cost",
    "scheme_of",
]

__version__ = "0.1.0"
