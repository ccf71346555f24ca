"""Non-atomic congestion games: equilibria, price of anarchy and demand-scaling asymptotics."""
from .equilibrium import SolveResult, SolverConfig, check_wardrop, solve_so, solve_wardrop
from .estimators import PriceOfAnarchy, SystemOptimumSolver, WardropSolver
from .game import Game, Group, Resource, Strategy, check_demand, check_profile, validate_game
from .prices import MarginalPrice, Polynomial, PowerLog

__all__ = [
    "Game",
    "Group",
    "MarginalPrice",
    "Polynomial",
    "PowerLog",
    "PriceOfAnarchy",
    "Resource",
    "SolveResult",
    "SolverConfig",
    "Strategy",
    "SystemOptimumSolver",
    "WardropSolver",
    "check_demand",
    "check_profile",
    "check_wardrop",
    "solve_so",
    "solve_wardrop",
    "validate_game",
]
