"""Clause-class recognisers and solvers."""

from .cnf import Cnf, parse_dimacs, write_dimacs
from .edh import EdhDecomposition, NotOneEdh, is_safe, propagate_set, solve_1edh, validate_1edh
from .enumerate import FreeModelEnumerator, enumerate_free_models
from .solvers import engine_for, solve_2sat, solve_auto, solve_dpll, solve_dual_horn, solve_unit

__all__ = [
    "Cnf", "parse_dimacs", "write_dimacs",
    "EdhDecomposition", "NotOneEdh", "is_safe", "propagate_set", "solve_1edh", "validate_1edh",
    "FreeModelEnumerator", "enumerate_free_models",
    "engine_for", "solve_2sat", "solve_auto", "solve_dpll", "solve_dual_horn", "solve_unit",
]
