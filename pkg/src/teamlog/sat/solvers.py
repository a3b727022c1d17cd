"""Class-specific solvers; each returns the set of true variables or None."""

from __future__ import annotations

from ..clauses import ClauseClass, clause_tags
from ..errors import ClassMismatch
from .. import kernels
from .cnf import Cnf
from .edh import NotOneEdh, solve_1edh, validate_1edh


def _model(raw) -> frozenset | None:
    if raw is None:
        return None
    return frozenset(v for v in range(1, len(raw)) if raw[v])


def _require(c: Cnf, tag: str, what: str):
    for clause in c.clauses:
        if tag not in clause_tags(clause):
            raise ClassMismatch(f"clause {list(clause)} is not {what}")


def solve_unit(c: Cnf) -> frozenset | None:
    _require(c, "U", "a unit clause")
    true, false = set(), set()
    for (l,) in c.clauses:
        (true if l > 0 else false).add(abs(l))
    if true & false:
        return None
    return frozenset(true)


def solve_dual_horn(c: Cnf) -> frozenset | None:
    """The unique maximal model, or None."""
    _require(c, "DH", "dual-Horn")
    return _model(kernels.dual_horn(c.num_vars, *c.flat()))


def solve_2sat(c: Cnf) -> frozenset | None:
    _require(c, "2C", "a 2-clause")
    return _model(kernels.two_sat(c.num_vars, *c.flat()))


def solve_dpll(c: Cnf) -> frozenset | None:
    return _model(kernels.dpll(c.num_vars, *c.flat()))


_DISPATCH = {
    ClauseClass.UNIT: ("unit", solve_unit),
    ClauseClass.ONE_EDH: ("oneEDH", solve_1edh),
    ClauseClass.DUAL_HORN: ("dualHorn", solve_dual_horn),
    ClauseClass.I2C: ("twoSat", solve_2sat),
    ClauseClass.TWO_CNF: ("twoSat", solve_2sat),
}


def engine_for(cls: ClauseClass) -> str:
    return _DISPATCH.get(cls, ("dpll", None))[0]


def solve_auto(c: Cnf, cls: ClauseClass | None = None) -> frozenset | None:
    """Dispatch on ``cls`` (re-validated against the clauses); None picks the class."""
    if cls is None:
        from ..clauses import summarize
        cls = summarize(c.clauses).primary
    if cls == ClauseClass.ONE_EDH:
        try:
            d = validate_1edh(c)
        except NotOneEdh as e:
            raise ClassMismatch(f"not 1-EDH: {e.reason}") from None
        return solve_1edh(c, d)
    if cls == ClauseClass.HORN:
        _require(c, "H", "Horn")
    if cls == ClauseClass.I2C:
        _require(c, "I2C", "implicative 2-CNF")
    if cls == ClauseClass.DNF_BLOCK:
        raise ClassMismatch("DNF blocks must be expanded before solving")
    _, fn = _DISPATCH.get(cls, ("dpll", solve_dpll))
    return fn(c)
