"""Gradient play on n-player symmetric LQ games."""

from ._core import (
    GameSpec,
    NotPositiveDefiniteError,
    conjecture_sweep,
    cost,
    diagonal_game,
    exact_gradient,
    marginal_cost_from_cost,
    monte_carlo_cost,
    paper_game,
    paper_initial_profiles,
    pseudogradient_jacobian,
    resolvent,
    rosen_check,
    run_gradient_play,
    scalar_game,
    second_derivative,
    stability_margin,
    two_player_game,
    two_player_mu,
)

__all__ = [
    "GameSpec",
    "NotPositiveDefiniteError",
    "conjecture_sweep",
    "cost",
    "diagonal_game",
    "exact_gradient",
    "marginal_cost_from_cost",
    "monte_carlo_cost",
    "paper_game",
    "paper_initial_profiles",
    "pseudogradient_jacobian",
    "resolvent",
    "rosen_check",
    "run_gradient_play",
    "scalar_game",
    "second_derivative",
    "stability_margin",
    "two_player_game",
    "two_player_mu",
]
