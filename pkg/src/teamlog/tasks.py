"""Reasoning tasks: model checking with fragment dispatch, counting, enumeration,
maximal subteams, the mixed independence/anonymity algorithms and the 3-SAT
reduction for a fixed independence formula."""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from .clauses import ClauseClass
from .compiler import (
    Compilation, add_clauses, apply_init, compile_formula, expand_dnf,
)
from .errors import BudgetExceeded, ClassMismatch, CompileError, ModelError, UnsupportedFragment
from .formula import (
    FALSE, TRUE, And, Formula, Indep, Or, RelLit, StrictBlockOr, classify_fragment, free_variables,
    in_bc_indep, in_dual_horn_fragment, in_fo_anon, is_downward_closed, is_fo,
)
from .model import Structure, Team, make_structure, team_order_key
from .semantics import _col, all_satisfying_teams, eval_lax, eval_strict, satisfying_rows
from .sat import Cnf, FreeModelEnumerator, NotOneEdh, solve_1edh, validate_1edh
from .sat.solvers import solve_2sat, solve_auto, solve_dpll, solve_dual_horn

ENGINES = ("auto", "brute", "dualhorn", "1edh", "2sat", "dpll")
_COST = {"unit": 0, "twoSat": 1, "oneEDH": 2, "dualHorn": 3, "dpll": 4}


@dataclass
class CheckReport:
    verdict: bool
    engine: str
    fragment: str
    summary: str
    stats: dict = field(default_factory=dict)

    def to_json(self, with_time=False) -> dict:
        stats = dict(self.stats)
        if not with_time:
            stats.pop("time", None)
        return {"verdict": self.verdict, "engine": self.engine, "fragment": self.fragment,
                "class": self.summary, "stats": stats}


def _check_vars(X: Team, f: Formula):
    missing = [v for v in free_variables(f) if v not in X.vars]
    if missing:
        raise ModelError(f"free variables {missing} missing from the team")


# -- model checking ----------------------------------------------------------

def model_check(A: Structure, X: Team, f: Formula, *, engine: str = "auto",
                strict: bool = False) -> CheckReport:
    """Decide A |=_X f, choosing the engine from the shape and compiled class."""
    if engine not in ENGINES:
        raise ValueError(f"unknown engine {engine!r}")
    _check_vars(X, f)
    label = classify_fragment(f)
    start = time.perf_counter()
    if strict:
        if engine not in ("auto", "brute"):
            raise ValueError("strict semantics is only available with the brute engine")
        verdict = eval_strict(A, X, f)
        return _report(verdict, "brute", label, "-", {}, start)
    if engine == "brute":
        return _report(eval_lax(A, X, f), "brute", label, "-", {}, start)
    if engine == "auto":
        if _prop22_shape(f):
            verdict = check_block_split(A, X, f.left, f.var, f.right)
            return _report(verdict, "prop22", label, "-", {}, start)
        split = _prop23_split(f)
        if split is not None:
            verdict = check_anon_bc_split(A, X, *split)
            return _report(verdict, "prop23", label, "-", {}, start)
    try:
        c = compile_formula(A, f, team=X)
        parts = expand_dnf(c)
    except (CompileError, UnsupportedFragment, BudgetExceeded):
        if engine != "auto":
            raise
        return _report(eval_lax(A, X, f), "brute", label, "-", {}, start)
    verdict, used = _solve_parts(parts, engine)
    stats = {"vars": c.num_vars, "clauses": len(c.clauses), "compilations": len(parts)}
    summary = c.summary.label if len(parts) == 1 else "+".join(sorted({p.summary.label for p in parts}))
    return _report(verdict, used, label, summary, stats, start)


def _report(verdict, engine, label, summary, stats, start):
    stats = dict(stats, time=round(time.perf_counter() - start, 6))
    return CheckReport(bool(verdict), engine, label.name, summary, stats)


def _solve_parts(parts: list[Compilation], engine: str):
    """Try the pure-CNF disjuncts in order; returns (verdict, engine name)."""
    if engine == "auto" and len(parts) > 1 and all("DH" in p.summary.tags for p in parts):
        return any(solve_dual_horn(p.cnf()) is not None for p in parts), "dualHornDisjunction"
    used = "unit"
    for p in parts:
        cnf = p.cnf()
        if engine == "dualhorn":
            model, name = solve_dual_horn(cnf), "dualHorn"
        elif engine == "2sat":
            model, name = solve_2sat(cnf), "twoSat"
        elif engine == "dpll":
            model, name = solve_dpll(cnf), "dpll"
        elif engine == "1edh":
            try:
                model = solve_1edh(cnf, validate_1edh(cnf))
            except NotOneEdh as e:
                raise ClassMismatch(f"not 1-EDH: {e.reason}") from None
            name = "oneEDH"
        else:
            cls = p.summary.primary
            model = solve_auto(cnf, cls)
            name = {ClauseClass.UNIT: "unit", ClauseClass.ONE_EDH: "oneEDH",
                    ClauseClass.DUAL_HORN: "dualHorn", ClauseClass.I2C: "twoSat",
                    ClauseClass.TWO_CNF: "twoSat"}.get(cls, "dpll")
        if _COST.get(name, 0) >= _COST.get(used, 0):
            used = name
        if model is not None:
            return True, used
    return False, used


def _prop22_shape(f) -> bool:
    return (isinstance(f, StrictBlockOr) and in_dual_horn_fragment(f.left)
            and is_downward_closed(f.right))


def _flatten_or(f):
    if isinstance(f, Or):
        return _flatten_or(f.left) + _flatten_or(f.right)
    return [f]


def _disjoin(parts):
    out = parts[0]
    for p in parts[1:]:
        out = Or(out, p)
    return out


def _prop23_split(f):
    """(phi, psi1, psi2) when f is an FO(anon) formula or'ed with one or two BC formulas."""
    if not isinstance(f, Or):
        return None
    parts = _flatten_or(f)
    bc = [p for p in parts if in_bc_indep(p)]
    rest = [p for p in parts if not in_bc_indep(p)]
    if not 1 <= len(bc) <= 2 or not all(in_fo_anon(p) for p in rest):
        return None
    phi = _disjoin(rest) if rest else FALSE
    return phi, bc[0], bc[1] if len(bc) == 2 else None


# -- enumeration and counting ------------------------------------------------

class TeamEnumeration:
    """Satisfying teams of ``f`` over A^r in team order, with solver statistics.

    ``calls`` counts extendability checks, ``gaps`` the checks spent before
    each emitted team (including a skipped empty team).
    """

    def __init__(self, A: Structure, f: Formula, r=None, *, variables=None, include_empty=False):
        self.A, self.f = A, f
        self.include_empty = include_empty
        self._enum = None
        try:
            c = compile_formula(A, f, r, variables=variables)
            parts = expand_dnf(c)
        except (CompileError, UnsupportedFragment, BudgetExceeded):
            self.engine = "brute"
            self.columns = _brute_columns(f, r, variables)
            return
        self.columns = c.columns
        self.universe = c.free_rows()
        self._enum = FreeModelEnumerator([p.cnf() for p in parts], c.free, allow_general=True)
        self.engine = self._enum.solver

    @property
    def calls(self) -> int:
        return self._enum.calls if self._enum else 0

    @property
    def gaps(self) -> list[int]:
        return self._enum.gaps if self._enum else []

    def __iter__(self):
        if self._enum is None:
            yield from all_satisfying_teams(self.A, self.f, variables=self.columns,
                                            include_empty=self.include_empty)
            return
        for bits in self._enum:
            rows = [s for s, b in zip(self.universe, bits) if b]
            if rows or self.include_empty:
                yield Team(self.columns, tuple(rows))


def _brute_columns(f, r, variables):
    from .compiler import root_columns

    return root_columns(f, r, variables)


def enumerate_teams(A: Structure, f: Formula, r=None, *, variables=None,
                    include_empty=False) -> TeamEnumeration:
    return TeamEnumeration(A, f, r, variables=variables, include_empty=include_empty)


def count_teams(A: Structure, f: Formula, r=None, *, variables=None, include_empty=False) -> int:
    return sum(1 for _ in enumerate_teams(A, f, r, variables=variables, include_empty=include_empty))


# -- maximal subteams --------------------------------------------------------

def _maximal(teams: list[frozenset]) -> list[frozenset]:
    uniq = set(teams)
    return [t for t in uniq if not any(t < u for u in uniq)]


def _max_free_models(c: Compilation) -> list[frozenset]:
    """Maximal projections onto the free block of the models of ``c``'s expansions."""
    parts = expand_dnf(c)
    rows = c.free_rows()
    free = c.free
    if all("DH" in p.summary.tags for p in parts):
        found = []
        for p in parts:
            model = solve_dual_horn(p.cnf())
            if model is not None:
                found.append(frozenset(s for s, v in zip(rows, free) if v in model))
        return _maximal(found)
    enum = FreeModelEnumerator([p.cnf() for p in parts], free, allow_general=True)
    return _maximal([frozenset(s for s, b in zip(rows, bits) if b) for bits in enum])


def _sorted_teams(cols, teams, universe):
    return [Team(cols, tuple(t)) for t in sorted(teams, key=lambda t: team_order_key(t, universe))]


def maximal_subteams(A: Structure, X: Team, f: Formula) -> list[Team]:
    """All inclusion-maximal X' subset of X with A |=_X' f, in team order."""
    _check_vars(X, f)
    try:
        c = compile_formula(A, f, variables=X.vars)
    except (CompileError, UnsupportedFragment):
        return _brute_maximal(A, X, f)
    c = apply_init(c, X, "I2", force=True)
    found = _max_free_models(c)
    return _sorted_teams(X.vars, found, c.free_rows())


def _brute_maximal(A, X, f):
    from itertools import combinations

    rows = X.rows
    good = []
    for k in range(len(rows), -1, -1):
        for sub in combinations(rows, k):
            s = frozenset(sub)
            if not any(s < g for g in good) and eval_lax(A, Team(X.vars, sub), f):
                good.append(s)
    return _sorted_teams(X.vars, good, X.rows)


# -- strict block disjunction with a downward-closed side --------------------

def check_block_split(A: Structure, X: Team, phi: Formula, x: str, psi: Formula) -> bool:
    """A |=_X phi \\/s{x} psi for phi in the dual-Horn fragment and downward-closed psi.

    The maximal x-block subteams satisfying phi are read off the maximal
    models of the compiled phi with the block clauses; it then suffices to
    test psi on each remainder.
    """
    if not is_downward_closed(psi):
        raise UnsupportedFragment("the second disjunct must be downward closed")
    whole = StrictBlockOr(x, phi, psi)
    _check_vars(X, whole)
    if not X.rows:
        return True
    try:
        c = compile_formula(A, phi, variables=X.vars)
    except (CompileError, UnsupportedFragment):
        return eval_lax(A, X, whole)
    c = apply_init(c, X, "I2", force=True)
    xi = _col(X.vars, x)
    block = []
    for s in X.rows:
        for t in X.rows:
            if s != t and s[xi] == t[xi]:
                block.append((-c.var_table.vid(0, s), c.var_table.vid(0, t)))
    c = add_clauses(c, block, "block")
    for sub in _max_free_models(c):
        rest = Team(X.vars, tuple(s for s in X.rows if s not in sub))
        if model_check(A, rest, psi).verdict:
            return True
    return False


# -- Boolean closure of an independence atom -------------------------------

@dataclass(frozen=True)
class BcNormalForm:
    """((..((atom /\\ phi_1) \\/ psi_1) ..) /\\ phi_k) \\/ psi_k with FO phi_i, psi_i."""

    core: Indep
    phis: tuple[Formula, ...]
    psis: tuple[Formula, ...]

    @property
    def k(self) -> int:
        return len(self.phis)

    def formula(self) -> Formula:
        g = self.core
        for p, q in zip(self.phis, self.psis):
            g = Or(And(g, p), q)
        return g

    def residual(self) -> Formula:
        """FO formula of the rows that some level lets drop out of the atom."""
        if not self.phis:
            return FALSE
        g = self.psis[0]
        for p, q in zip(self.phis[1:], self.psis[1:]):
            g = Or(And(g, p), q)
        return g

    def conditions(self, A: Structure, cols, rows):
        """(admissible rows, rows of C+, rows of C-) among ``rows``."""
        rows = frozenset(rows)
        cplus = set(rows)
        for p in self.phis:
            cplus &= satisfying_rows(A, p, cols, rows)
        cminus = set()
        for q in self.psis:
            cminus |= satisfying_rows(A, q, cols, rows)
        ok = set(satisfying_rows(A, self.residual(), cols, rows)) | cplus
        return ok, cplus, cminus


def normalize_bc(f: Formula) -> BcNormalForm:
    """Normal form of a formula built from one independence atom by /\\FO and \\/FO."""
    if not in_bc_indep(f):
        raise UnsupportedFragment("formula is outside the Boolean closure of one independence atom")
    ops = []
    g = f
    while not isinstance(g, Indep):
        if is_fo(g.left):
            fo, g_next = g.left, g.right
        else:
            fo, g_next = g.right, g.left
        ops.append((isinstance(g, And), fo))
        g = g_next
    ops.reverse()
    phis, psis = [], []
    conj, disj = [], []
    for is_and, fo in ops:
        if is_and and disj:
            phis.append(_join(conj, And, TRUE))
            psis.append(_join(disj, Or, FALSE))
            conj, disj = [], []
        (conj if is_and else disj).append(fo)
    if conj or disj:
        phis.append(_join(conj, And, TRUE))
        psis.append(_join(disj, Or, FALSE))
    return BcNormalForm(g, tuple(phis), tuple(psis))


def _join(parts, kind, unit):
    if not parts:
        return unit
    out = parts[0]
    for p in parts[1:]:
        out = kind(out, p)
    return out


class _BcSide:
    """Per-row data of one BC disjunct on a fixed team."""

    def __init__(self, A, nf: BcNormalForm, cols, rows):
        self.ok, cplus, cminus = nf.conditions(A, cols, rows)
        core = nf.core
        self.px = [_col(cols, v) for v in core.xs]
        self.pu = [_col(cols, v) for v in core.us]
        self.pz = [_col(cols, v) for v in core.zs]
        self.optional = cplus
        self.forced = cplus - cminus
        self.present = {self.key(s) for s in cplus}

    @staticmethod
    def _p(s, idx):
        return tuple(s[i] for i in idx)

    def key(self, s, t=None):
        t = s if t is None else t
        return self._p(s, self.px), self._p(s, self.pu), self._p(t, self.pz)

    def compatible(self, s, t) -> bool:
        if s not in self.forced or t not in self.forced or self._p(s, self.pu) != self._p(t, self.pu):
            return True
        return self.key(s, t) in self.present and self.key(t, s) in self.present

    def close(self, team: set) -> set:
        """Add the rows of C+ whose projection lies in the forced rectangle of its u-class."""
        rect = {}
        for s in team & self.forced:
            xs, zs = rect.setdefault(self._p(s, self.pu), (set(), set()))
            xs.add(self._p(s, self.px))
            zs.add(self._p(s, self.pz))
        out = set(team)
        for s in self.optional:
            r = rect.get(self._p(s, self.pu))
            if r and self._p(s, self.px) in r[0] and self._p(s, self.pz) in r[1]:
                out.add(s)
        return out


def anon_bc_split(A: Structure, X: Team, phi: Formula, psi1: Formula,
                  psi2: Formula | None = None):
    """Teams (X', Y, Z) covering X with X' |= phi, Y |= psi1, Z |= psi2, or None.

    Phase 1 takes the maximal subteam X' satisfying phi.  Phase 2 decides by
    2-SAT over Y[s], Z[s] whether the rows outside X' can be covered by a
    team for psi1 and one for psi2, each free of incompatible pairs; the
    witness closure then turns a model into the two subteams.
    """
    if not in_fo_anon(phi):
        raise UnsupportedFragment("first disjunct must be in FO(anon)")
    bcs = [p for p in (psi1, psi2) if p is not None]
    sides = [normalize_bc(p) for p in bcs]
    _check_vars(X, _disjoin([phi] + bcs))
    cols, rows = X.vars, X.rows
    covered = maximal_subteams(A, X, phi)[0].row_set if rows else frozenset()
    need = [s for s in rows if s not in covered]
    data = [_BcSide(A, nf, cols, rows) for nf in sides]
    n = len(rows)
    vid = {s: k + 1 for k, s in enumerate(rows)}

    def var(side, s):
        return vid[s] + side * n

    clauses = [tuple(var(i, s) for i in range(len(data))) for s in need]
    for i, d in enumerate(data):
        for s in rows:
            if s not in d.ok:
                clauses.append((-var(i, s),))
        forced = sorted(d.forced)
        for a in range(len(forced)):
            for b in range(a + 1, len(forced)):
                s, t = forced[a], forced[b]
                if not d.compatible(s, t):
                    clauses.append((-var(i, s), -var(i, t)))
    model = solve_2sat(Cnf(len(data) * n, clauses))
    if model is None:
        return None
    teams = [Team(cols, tuple(d.close({s for s in rows if var(i, s) in model})))
             for i, d in enumerate(data)]
    if len(teams) == 1:
        teams.append(Team(cols, ()))
    return Team(cols, tuple(covered)), teams[0], teams[1]


def check_anon_bc_split(A: Structure, X: Team, phi: Formula, psi1: Formula,
                        psi2: Formula | None = None) -> bool:
    """A |=_X phi \\/ psi1 \\/ psi2 for phi in FO(anon) and BC formulas psi1, psi2."""
    return anon_bc_split(A, X, phi, psi1, psi2) is not None


# -- 3-SAT reduction ---------------------------------------------------------

def _lit_label(l: int) -> str:
    return f"v{l}" if l > 0 else f"~v{-l}"


def reduce_3sat(clauses, num_vars: int | None = None):
    """(structure, team, formula) such that the team satisfies the formula iff the CNF is satisfiable.

    Clauses are triples of nonzero integers in DIMACS style.  The constant 0
    is named by the unary relation Zero.
    """
    clauses = [tuple(c) for c in clauses]
    for c in clauses:
        if len(c) != 3 or any(not isinstance(l, int) or l == 0 for l in c):
            raise ValueError(f"malformed 3-clause {c!r}")
    m = max([abs(l) for c in clauses for l in c] + [num_vars or 0])
    n = len(clauses)
    domain = [f"v{k}" for k in range(1, m + 1)] + [f"~v{k}" for k in range(1, m + 1)]
    domain += [str(k) for k in range(max(n, 1) + 1)]
    A = make_structure(domain, {"Zero": [["0"]]})
    ix = A.index
    rows = []
    for i, c in enumerate(clauses, 1):
        ci = ix(str(i))
        zero, one = ix("0"), ix("1")
        for l in c:
            rows.append((zero, ci, one, one, ix(f"v{abs(l)}"), ix(_lit_label(l))))
        rows.append((one, ci, zero, zero, zero, zero))
        rows.append((one, ci, one, zero, zero, zero))
        rows.append((one, ci, zero, one, zero, zero))
    X = Team(("w", "c", "c1", "c2", "z", "x"), tuple(rows))
    f = Or(RelLit("Zero", True, ("w",)),
           And(Indep(("c1",), ("c",), ("c2",)), Indep(("x",), ("z",), ("x",))))
    return A, X, f
