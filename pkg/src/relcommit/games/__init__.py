from relcommit.games.bounds import (
    BoundSeries,
    ChshnBounds,
    cauchy_schwarz_bound,
    chernoff_tail,
    chshn_bounds,
    rational_le_float,
    recursive_bound,
    simplified_bound,
)
from relcommit.games.bruteforce import DEFAULT_BUDGET, BudgetExceeded, GameValue, classical_value_bruteforce
from relcommit.games.model import (
    DeterministicStrategy,
    GameSpec,
    Player,
    chshn_game,
    product_game,
    strategy_value,
)

__all__ = [
    "BoundSeries", "BudgetExceeded", "DEFAULT_BUDGET", "ChshnBounds", "DeterministicStrategy", "GameSpec", "GameValue",
    "Player", "cauchy_schwarz_bound", "chernoff_tail", "chshn_bounds", "chshn_game",
    "classical_value_bruteforce", "product_game", "rational_le_float", "recursive_bound",
    "simplified_bound", "strategy_value",
]
