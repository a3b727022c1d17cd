"""Model checking for first-order team logics by compilation to clause classes."""

from .compiler import Compilation, apply_init, compile_formula, expand_dnf, export_dimacs, predicted_summary
from .errors import (
    BudgetExceeded, ClassMismatch, CompileError, ModelError, ParseError, TeamlogError, UnsupportedFragment,
)
from .formula import classify_fragment, format_formula, free_variables, parse_formula, subformulas
from .model import Structure, Team, full_team, load_structure, load_team, make_structure, make_team
from .semantics import all_satisfying_teams, eval_lax, eval_strict
from .tasks import (
    CheckReport, check_anon_bc_split, check_block_split, count_teams, enumerate_teams,
    maximal_subteams, model_check, normalize_bc, reduce_3sat,
)

__all__ = [
    "Compilation", "apply_init", "compile_formula", "expand_dnf", "export_dimacs", "predicted_summary",
    "BudgetExceeded", "ClassMismatch", "CompileError", "ModelError", "ParseError", "TeamlogError",
    "UnsupportedFragment",
    "classify_fragment", "format_formula", "free_variables", "parse_formula", "subformulas",
    "Structure", "Team", "full_team", "load_structure", "load_team", "make_structure", "make_team",
    "all_satisfying_teams", "eval_lax", "eval_strict",
    "CheckReport", "check_anon_bc_split", "check_block_split", "count_teams", "enumerate_teams",
    "maximal_subteams", "model_check", "normalize_bc", "reduce_3sat",
]
