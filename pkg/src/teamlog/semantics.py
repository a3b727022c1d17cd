"""Brute-force lax and strict team semantics; the oracle for everything else.

Teams are handled as (columns, frozenset of index tuples).  When a variable
is re-quantified its column is overwritten, exactly as s(a/x) prescribes.
"""

from __future__ import annotations

from itertools import combinations, product

from .errors import BudgetExceeded, ModelError
from .formula import (
    And, Anon, BlockOr, Const, Dep, EqLit, Excl, Exists, Forall, Formula, Incl,
    Indep, Or, RelLit, StrictBlockOr, Truth, free_variables, is_downward_closed, is_fo,
)
from .model import Structure, Team, full_team, team_order_key

DEFAULT_BUDGET = 10_000_000
TEAM_BUDGET = 2**20


def holds(A: Structure, f: Formula, env: dict) -> bool:
    """Tarskian truth of an FO formula under one assignment."""
    if isinstance(f, RelLit):
        return A.holds(f.rel, tuple(env[v] for v in f.args)) == f.positive
    if isinstance(f, EqLit):
        return (env[f.left] == env[f.right]) == f.positive
    if isinstance(f, Truth):
        return f.value
    if isinstance(f, And):
        return holds(A, f.left, env) and holds(A, f.right, env)
    if isinstance(f, Or):
        return holds(A, f.left, env) or holds(A, f.right, env)
    if isinstance(f, (Exists, Forall)):
        test = any if isinstance(f, Exists) else all
        return test(holds(A, f.body, {**env, f.var: a}) for a in range(A.size))
    raise TypeError(f"not a first-order formula: {f!r}")


def satisfying_rows(A: Structure, f: Formula, cols, rows) -> frozenset:
    """Rows (over ``cols``) satisfying the FO formula ``f``."""
    need = free_variables(f)
    idx = {v: _col(cols, v) for v in need}
    return frozenset(s for s in rows if holds(A, f, {v: s[i] for v, i in idx.items()}))


def _col(cols, v):
    for i in range(len(cols) - 1, -1, -1):
        if cols[i] == v:
            return i
    raise ModelError(f"variable {v!r} is not in the team domain {cols}")


def _proj(s, idx):
    return tuple(s[i] for i in idx)


def atom_holds(f: Formula, cols, rows) -> bool:
    """Dependency atoms evaluated directly on a team."""
    if isinstance(f, Dep):
        xi, yi = [_col(cols, v) for v in f.xs], _col(cols, f.y)
        seen = {}
        for s in rows:
            if seen.setdefault(_proj(s, xi), s[yi]) != s[yi]:
                return False
        return True
    if isinstance(f, Const):
        yi = _col(cols, f.y)
        return len({s[yi] for s in rows}) <= 1
    if isinstance(f, Incl):
        xi, yi = [_col(cols, v) for v in f.xs], [_col(cols, v) for v in f.ys]
        ys = {_proj(s, yi) for s in rows}
        return all(_proj(s, xi) in ys for s in rows)
    if isinstance(f, Excl):
        xi, yi = [_col(cols, v) for v in f.xs], [_col(cols, v) for v in f.ys]
        return not ({_proj(s, xi) for s in rows} & {_proj(s, yi) for s in rows})
    if isinstance(f, Anon):
        xi, yi = [_col(cols, v) for v in f.xs], [_col(cols, v) for v in f.ys]
        groups = {}
        for s in rows:
            groups.setdefault(_proj(s, xi), set()).add(_proj(s, yi))
        return all(len(groups[_proj(s, xi)]) >= 2 for s in rows)
    if isinstance(f, Indep):
        xi = [_col(cols, v) for v in f.xs]
        ui = [_col(cols, v) for v in f.us]
        zi = [_col(cols, v) for v in f.zs]
        full = xi + ui + zi
        present = {_proj(s, full) for s in rows}
        by_u = {}
        for s in rows:
            by_u.setdefault(_proj(s, ui), []).append(s)
        for group in by_u.values():
            for s in group:
                head = _proj(s, xi + ui)
                for t in group:
                    # overlapping x/z columns make the combined tuple unmatchable
                    if head + _proj(t, zi) not in present:
                        return False
        return True
    raise TypeError(f"not an atom: {f!r}")


class Evaluator:
    """Memoised evaluator for one structure.

    ``exhaustive=True`` evaluates every connective literally from its
    definition; otherwise exact shortcuts are used: locality (teams are cut
    down to the free variables), flatness for FO subformulas, disjoint splits
    when a disjunct is downward closed, and single-valued witnesses for
    downward-closed existential bodies.
    """

    def __init__(self, A: Structure, *, strict=False, exhaustive=False, budget=DEFAULT_BUDGET):
        self.A = A
        self.strict = strict
        self.exhaustive = exhaustive or strict
        self.budget = budget
        self.steps = 0
        self.memo = {}
        self._info = {}

    def _spend(self, n):
        self.steps += n
        if self.steps > self.budget:
            raise BudgetExceeded(f"brute-force budget of {self.budget} steps exceeded")

    def info(self, f):
        key = id(f)
        got = self._info.get(key)
        if got is None:
            got = (f, free_variables(f), is_fo(f), is_downward_closed(f))
            self._info[key] = got
        return got

    def check(self, team: Team, f: Formula) -> bool:
        for v in free_variables(f):
            if v not in team.vars:
                raise ModelError(f"free variable {v!r} missing from the team")
        return self.sat(f, tuple(team.vars), frozenset(team.rows))

    def sat(self, f, cols, rows) -> bool:
        _, fr, fo, _ = self.info(f)
        if not self.exhaustive:
            if not rows:
                return True
            idx = [_col(cols, v) for v in fr]
            cols = tuple(fr)
            rows = frozenset(_proj(s, idx) for s in rows)
        key = (id(f), cols, rows)
        got = self.memo.get(key)
        if got is None:
            if fo and not self.exhaustive:
                got = len(satisfying_rows(self.A, f, cols, rows)) == len(rows)
            else:
                got = self._sat(f, cols, rows)
            self.memo[key] = got
        return got

    def _sat(self, f, cols, rows):
        if isinstance(f, (RelLit, EqLit, Truth)):
            return len(satisfying_rows(self.A, f, cols, rows)) == len(rows)
        if isinstance(f, (Dep, Const, Indep, Incl, Anon, Excl)):
            self._spend(len(rows))
            return atom_holds(f, cols, rows)
        if isinstance(f, And):
            return self.sat(f.left, cols, rows) and self.sat(f.right, cols, rows)
        if isinstance(f, Or):
            return self._or(f, cols, rows)
        if isinstance(f, (BlockOr, StrictBlockOr)):
            return self._block_or(f, cols, rows)
        if isinstance(f, Exists):
            return self._exists(f, cols, rows)
        if isinstance(f, Forall):
            new_cols, put = _binder(cols, f.var)
            team = frozenset(put(s, a) for s in rows for a in range(self.A.size))
            return self.sat(f.body, new_cols, team)
        raise TypeError(f"unknown formula node {f!r}")

    def _or(self, f, cols, rows):
        left, right = f.left, f.right
        rows_l = sorted(rows)
        if self.strict:
            return self._splits(left, right, cols, rows_l, partitions=True)
        if not self.exhaustive:
            for flat, other in ((left, right), (right, left)):
                if self.info(flat)[2]:
                    good = satisfying_rows(self.A, flat, cols, rows)
                    must = rows - good
                    if self.info(other)[3]:
                        self._spend(1)
                        return self.sat(other, cols, must)
                    optional = sorted(good)
                    self._spend(2 ** len(optional))
                    for k in range(len(optional) + 1):
                        for extra in combinations(optional, k):
                            if self.sat(other, cols, must | frozenset(extra)):
                                return True
                    return False
            if self.info(left)[3] or self.info(right)[3]:
                return self._splits(left, right, cols, rows_l, partitions=True)
        return self._splits(left, right, cols, rows_l, partitions=False)

    def _splits(self, left, right, cols, rows_l, partitions):
        labels = (0, 1) if partitions else (0, 1, 2)
        self._spend(len(labels) ** len(rows_l))
        for lab in product(labels, repeat=len(rows_l)):
            y = frozenset(s for s, c in zip(rows_l, lab) if c != 1)
            z = frozenset(s for s, c in zip(rows_l, lab) if c != 0)
            if self.sat(left, cols, y) and self.sat(right, cols, z):
                return True
        return False

    def _block_or(self, f, cols, rows):
        xi = _col(cols, f.var)
        blocks = {}
        for s in sorted(rows):
            blocks.setdefault(s[xi], []).append(s)
        blocks = list(blocks.values())
        strict = isinstance(f, StrictBlockOr)
        dw = not self.exhaustive and (self.info(f.left)[3] or self.info(f.right)[3])
        labels = (0, 1) if strict or dw else (0, 1, 2)
        self._spend(len(labels) ** len(blocks))
        for lab in product(labels, repeat=len(blocks)):
            y = frozenset(s for b, c in zip(blocks, lab) if c != 1 for s in b)
            z = frozenset(s for b, c in zip(blocks, lab) if c != 0 for s in b)
            if self.sat(f.left, cols, y) and self.sat(f.right, cols, z):
                return True
        return False

    def _exists(self, f, cols, rows):
        new_cols, put = _binder(cols, f.var)
        rows_l = sorted(rows)
        n = self.A.size
        single = self.strict or (not self.exhaustive and self.info(f.body)[3])
        if single:
            choices = [(a,) for a in range(n)]
        else:
            choices = [c for k in range(1, n + 1) for c in combinations(range(n), k)]
        self._spend(len(choices) ** len(rows_l))
        for pick in product(choices, repeat=len(rows_l)):
            team = frozenset(put(s, a) for s, c in zip(rows_l, pick) for a in c)
            if self.sat(f.body, new_cols, team):
                return True
        return False


def _binder(cols, var):
    """Columns after binding ``var`` and a function writing its value into a row."""
    if var in cols:
        i = _col(cols, var)
        return cols, lambda s, a: s[:i] + (a,) + s[i + 1:]
    return cols + (var,), lambda s, a: s + (a,)


def eval_lax(A: Structure, X: Team, f: Formula, *, budget=DEFAULT_BUDGET, exhaustive=False) -> bool:
    return Evaluator(A, budget=budget, exhaustive=exhaustive).check(X, f)


def eval_strict(A: Structure, X: Team, f: Formula, *, budget=DEFAULT_BUDGET) -> bool:
    """Strict semantics: disjoint disjunction splits, single-valued witnesses.

    Block disjunctions keep their own definitions in both semantics.
    """
    return Evaluator(A, strict=True, budget=budget).check(X, f)


def all_satisfying_teams(A: Structure, f: Formula, r=None, *, variables=None,
                         include_empty=False, budget=TEAM_BUDGET) -> list[Team]:
    """Every (by default nonempty) X subset of A^r satisfying ``f``, in team order."""
    vars_ = _team_vars(f, r, variables)
    universe = full_team(A, vars_).rows
    if 2 ** len(universe) > budget:
        raise BudgetExceeded(f"{2 ** len(universe)} candidate teams exceed the budget of {budget}")
    ev = Evaluator(A)
    out = []
    for k in range(0 if include_empty else 1, len(universe) + 1):
        for rows in combinations(universe, k):
            if ev.sat(f, vars_, frozenset(rows)):
                out.append(Team(vars_, rows))
    out.sort(key=lambda t: team_order_key(t.rows, universe))
    return out


def _team_vars(f, r, variables):
    if variables is not None:
        vars_ = tuple(variables)
    else:
        fr = free_variables(f)
        r = len(fr) if r is None else r
        if r < len(fr):
            raise ValueError(f"r={r} is smaller than the {len(fr)} free variables")
        vars_ = fr + tuple(f"_{k}" for k in range(1, r - len(fr) + 1))
    missing = set(free_variables(f)) - set(vars_)
    if missing:
        raise ModelError(f"free variables {sorted(missing)} missing from {vars_}")
    return vars_
