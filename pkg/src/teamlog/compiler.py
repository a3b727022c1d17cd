"""Translation of team-logic model checking into propositional clauses.

Every occurrence of a subformula phi_i gets one propositional variable
X_i[s] per tuple s over its columns; the root variables X_0[s] form the free
block and come first in lexicographic order of s.  Each rule emits one block
of clauses tagged with the rule name, so the class of every clause can be
checked against the rule that produced it.

Columns of a quantified variable are appended, and a variable is looked up
at its last column, so re-quantification shadows as in s(a/x).
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field, replace
from itertools import combinations, product

from .clauses import VERIFIED, ClassSummary, summarize
from .errors import BudgetExceeded, CompileError, ModelError, UnsupportedFragment
from .formula import (
    LITERALS, And, Anon, BlockOr, Const, Dep, Excl, Exists, Forall, Formula, Incl, Indep, Or,
    StrictBlockOr, children, free_variables, iter_nodes, is_downward_closed, is_fo, is_union_closed,
)
from .model import Structure, Team
from .semantics import _col, holds
from .sat.cnf import Cnf, write_dimacs

STRATEGIES = ("specific", "generic")
EXPANSION_BUDGET = 4096
COMPILE_BUDGET = 2_000_000
_QUADRATIC = {"dep", "excl", "indep", "bor.1", "bor.2"}


# -- rule selection ----------------------------------------------------------

def choose_rule(f: Formula, known: bool, strategy: str = "specific") -> str:
    """Rule applied at a node; ``known`` says whether its team is materialised."""
    specific = strategy == "specific"
    if isinstance(f, LITERALS) or (specific and is_fo(f)):
        return "FO"
    if isinstance(f, Exists):
        return "E"
    if isinstance(f, Forall):
        return "A"
    if isinstance(f, And):
        return "and.2" if specific and (is_fo(f.left) or is_fo(f.right)) else "and.1"
    if isinstance(f, Or):
        if not specific:
            return "or.1"
        if is_fo(f.left) or is_fo(f.right):
            other = f.right if is_fo(f.left) else f.left
            if known and is_downward_closed(other):
                return "or.4"
            # (or.2)'s back-implications X_j[s] -> X_i[s] have no matching
            # dual-Horn clause at X_i, so over union-closed and constancy
            # atoms (or.1) is used to keep the 1-EDH form.
            return "or.2" if _has_lower_atom(other) else "or.1"
        return "or.3" if known else "or.1"
    if isinstance(f, BlockOr):
        return "bor.2" if specific and known else "bor.1"
    if isinstance(f, StrictBlockOr):
        raise UnsupportedFragment("strict block disjunction has no compilation rule")
    for kind, tag in ((Incl, "inc"), (Anon, "anon"), (Dep, "dep"), (Indep, "indep"),
                      (Excl, "excl"), (Const, "const")):
        if isinstance(f, kind):
            return tag
    raise CompileError(f"unsupported node {f!r}")


def _has_lower_atom(f) -> bool:
    return any(isinstance(g, (Dep, Excl, Indep)) for g in iter_nodes(f))


def _fo_split(f):
    """(FO side, other side) of a binary node with an FO side."""
    return (f.left, f.right) if is_fo(f.left) else (f.right, f.left)


def plan(f: Formula, known: bool = True, strategy: str = "specific") -> list[tuple[Formula, str]]:
    """Rules the compiler applies, in pre-order, for a given root team status."""
    out = []

    def walk(g, k):
        rule = choose_rule(g, k, strategy)
        out.append((g, rule))
        if rule == "FO":
            return
        if rule in ("E", "A"):
            walk(g.body, False)
        elif rule == "and.1":
            walk(g.left, k)
            walk(g.right, k)
        elif rule in ("and.2", "or.2", "or.4"):
            walk(_fo_split(g)[1], k if rule != "or.2" else False)
        elif rule in ("or.1", "or.3", "bor.1", "bor.2"):
            walk(g.left, False)
            walk(g.right, False)

    walk(f, known)
    return out


def predicted_summary(f: Formula, known: bool = True) -> ClassSummary:
    """Class guaranteed by the rule plan: the intersection of its verified rows."""
    try:
        rules = [rule for _, rule in plan(f, known)]
    except (UnsupportedFragment, CompileError):
        return ClassSummary(frozenset())
    tags = set(VERIFIED["I.1"] if known else VERIFIED["FO"])
    for rule in rules:
        if rule != "const":
            tags &= VERIFIED[rule]
    return ClassSummary(frozenset(tags), dnf="const" in rules)


# -- compilation objects -----------------------------------------------------

@dataclass(frozen=True)
class VarTable:
    """Dense ids for the pairs (subformula index, tuple)."""

    size: int
    cols: dict          # node index -> column tuple
    base: dict          # node index -> id offset (first id is base + 1)
    num_vars: int

    def vid(self, i: int, s: tuple) -> int:
        k = 0
        for a in s:
            k = k * self.size + a
        return self.base[i] + k + 1

    def rows(self, i: int):
        return product(range(self.size), repeat=len(self.cols[i]))

    def describe(self, v: int) -> tuple[int, tuple]:
        for i in sorted(self.base, key=self.base.get, reverse=True):
            if v > self.base[i]:
                k = v - self.base[i] - 1
                r = len(self.cols[i])
                s = []
                for _ in range(r):
                    s.append(k % self.size)
                    k //= self.size
                return i, tuple(reversed(s))
        raise KeyError(v)


@dataclass(frozen=True)
class DnfBlock:
    node: int
    rule: str
    terms: tuple[tuple[int, ...], ...]   # one conjunction of literals per domain element


@dataclass(frozen=True)
class Compilation:
    structure: Structure
    formula: Formula
    columns: tuple[str, ...]
    var_table: VarTable
    clauses: tuple[tuple[int, ...], ...]
    rules: tuple[str, ...]
    dnf_blocks: tuple[DnfBlock, ...] = ()
    known: dict = field(default_factory=dict)
    team: Team | None = None
    init: str | None = None
    strategy: str = "specific"
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def num_vars(self) -> int:
        return self.var_table.num_vars

    @property
    def free(self) -> tuple[int, ...]:
        n = self.var_table.size ** len(self.columns)
        return tuple(range(1, n + 1))

    @property
    def summary(self) -> ClassSummary:
        if "summary" not in self._cache:
            self._cache["summary"] = summarize(self.clauses, dnf=bool(self.dnf_blocks))
        return self._cache["summary"]

    def cnf(self) -> Cnf:
        if self.dnf_blocks:
            raise CompileError("expand the DNF blocks first")
        if "cnf" not in self._cache:
            self._cache["cnf"] = Cnf(self.num_vars, self.clauses, self.free)
        return self._cache["cnf"]

    def free_rows(self) -> list[tuple]:
        return list(self.var_table.rows(0))

    def rule_counts(self) -> dict:
        return dict(sorted(Counter(self.rules).items()))

    def report(self) -> dict:
        tags = Counter()
        from .clauses import clause_tags

        for c in self.clauses:
            for t in clause_tags(c):
                tags[t] += 1
        return {
            "vars": self.num_vars,
            "free": len(self.free),
            "clauses": len(self.clauses),
            "dnfBlocks": len(self.dnf_blocks),
            "class": self.summary.label,
            "perRule": self.rule_counts(),
            "perTag": dict(sorted(tags.items())),
        }


class _Builder:
    def __init__(self, A: Structure, f: Formula, cols, strategy):
        self.A = A
        self.n = A.size
        self.f = f
        self.strategy = strategy
        self.nodes = [g for g in _preorder(f)]
        self.child_index = _child_indices(f)
        self.cols, self.base = {}, {}
        self.next_id = 0
        self.clauses, self.rules = [], []
        self.seen = {}
        self.dnf = []
        self.known = {}
        self.allocate(0, tuple(cols))

    def allocate(self, i, cols):
        if i not in self.cols:
            self.cols[i] = cols
            self.base[i] = self.next_id
            self.next_id += self.n ** len(cols)

    def x(self, i, s):
        k = 0
        for a in s:
            k = k * self.n + a
        return self.base[i] + k + 1

    def rows(self, i):
        return product(range(self.n), repeat=len(self.cols[i]))

    def emit(self, node, rule, lits):
        lits = set(lits)
        if any(-l in lits for l in lits):
            return
        clause = tuple(sorted(lits, key=lambda l: (abs(l), l)))
        block = self.seen.setdefault((node, rule), set())
        if clause in block:
            return
        block.add(clause)
        self.clauses.append(clause)
        self.rules.append(rule)

    def proj(self, i, vars_):
        idx = [_col(self.cols[i], v) for v in vars_]
        return lambda s: tuple(s[k] for k in idx)

    def sat_rows(self, i, g):
        cols = self.cols[i]
        idx = {v: _col(cols, v) for v in free_variables(g)}
        return {s for s in self.rows(i) if holds(self.A, g, {v: s[k] for v, k in idx.items()})}

    # -- traversal --

    def visit(self, i, known):
        f = self.nodes[i]
        if known is not None:
            self.known[i] = frozenset(known)
        rule = choose_rule(f, known is not None, self.strategy)
        getattr(self, "_" + rule.replace(".", "_"))(i, f, known)

    def _FO(self, i, f, known):
        good = self.sat_rows(i, f)
        for s in self.rows(i):
            if s not in good:
                self.emit(i, "FO", [-self.x(i, s)])

    def _quant(self, i, f, rule):
        j = self.child_index[i][0]
        self.allocate(j, self.cols[i] + (f.var,))
        for s in self.rows(i):
            xi = self.x(i, s)
            kids = [self.x(j, s + (a,)) for a in range(self.n)]
            if rule == "E":
                self.emit(i, rule, [-xi] + kids)
                for k in kids:
                    self.emit(i, rule, [-k, xi])
            else:
                for k in kids:
                    self.emit(i, rule, [-xi, k])
                    self.emit(i, rule, [-k, xi])
        self.visit(j, None)

    def _E(self, i, f, known):
        self._quant(i, f, "E")

    def _A(self, i, f, known):
        self._quant(i, f, "A")

    def _and_1(self, i, f, known):
        j, h = self.child_index[i]
        for c in (j, h):
            self.allocate(c, self.cols[i])
        for s in self.rows(i):
            xi = self.x(i, s)
            for c in (j, h):
                self.emit(i, "and.1", [-xi, self.x(c, s)])
                self.emit(i, "and.1", [-self.x(c, s), xi])
        self.visit(j, known)
        self.visit(h, known)

    def _fo_side(self, i, f):
        j, h = self.child_index[i]
        return (j, h) if is_fo(f.left) else (h, j)

    def _and_2(self, i, f, known):
        a, j = self._fo_side(i, f)
        self.allocate(j, self.cols[i])
        good = self.sat_rows(i, self.nodes[a])
        for s in self.rows(i):
            xi, xj = self.x(i, s), self.x(j, s)
            if s in good:
                self.emit(i, "and.2", [-xi, xj])
                self.emit(i, "and.2", [-xj, xi])
            else:
                self.emit(i, "and.2", [-xi])
                self.emit(i, "and.2", [-xj])
        self.visit(j, None if known is None else set(known) & good)

    def _or_1(self, i, f, known):
        j, h = self.child_index[i]
        for c in (j, h):
            self.allocate(c, self.cols[i])
        for s in self.rows(i):
            xi, xj, xh = self.x(i, s), self.x(j, s), self.x(h, s)
            self.emit(i, "or.1", [-xi, xj, xh])
            self.emit(i, "or.1", [-xj, xi])
            self.emit(i, "or.1", [-xh, xi])
        self.visit(j, None)
        self.visit(h, None)

    def _or_2(self, i, f, known):
        a, h = self._fo_side(i, f)
        self.allocate(h, self.cols[i])
        good = self.sat_rows(i, self.nodes[a])
        for s in self.rows(i):
            xi, xh = self.x(i, s), self.x(h, s)
            if s not in good:
                self.emit(i, "or.2", [-xi, xh])
            self.emit(i, "or.2", [-xh, xi])
        self.visit(h, None)

    def _or_3(self, i, f, known):
        j, h = self.child_index[i]
        for c in (j, h):
            self.allocate(c, self.cols[i])
        for s in self.rows(i):
            xj, xh = self.x(j, s), self.x(h, s)
            if s in known:
                self.emit(i, "or.3", [xj, xh])
            else:
                self.emit(i, "or.3", [-xj])
                self.emit(i, "or.3", [-xh])
        self.visit(j, None)
        self.visit(h, None)

    def _or_4(self, i, f, known):
        a, h = self._fo_side(i, f)
        self.allocate(h, self.cols[i])
        rest = set(known) - self.sat_rows(i, self.nodes[a])
        for s in self.rows(i):
            xh = self.x(h, s)
            self.emit(i, "or.4", [xh] if s in rest else [-xh])
        self.visit(h, rest)

    def _blocks(self, i, f, rows):
        key = self.proj(i, (f.var,))
        groups = {}
        for s in rows:
            groups.setdefault(key(s), []).append(s)
        return groups.values()

    def _bor_1(self, i, f, known):
        j, h = self.child_index[i]
        for c in (j, h):
            self.allocate(c, self.cols[i])
        for s in self.rows(i):
            xi, xj, xh = self.x(i, s), self.x(j, s), self.x(h, s)
            self.emit(i, "bor.1", [-xi, xj, xh])
            self.emit(i, "bor.1", [-xj, xi])
            self.emit(i, "bor.1", [-xh, xi])
        # a child team holding s also holds every row of X_i with the same x value
        for group in self._blocks(i, f, self.rows(i)):
            for s in group:
                for t in group:
                    if s != t:
                        for c in (j, h):
                            self.emit(i, "bor.1", [-self.x(c, s), -self.x(i, t), self.x(c, t)])
        self.visit(j, None)
        self.visit(h, None)

    def _bor_2(self, i, f, known):
        j, h = self.child_index[i]
        for c in (j, h):
            self.allocate(c, self.cols[i])
        for s in self.rows(i):
            xj, xh = self.x(j, s), self.x(h, s)
            if s in known:
                self.emit(i, "bor.2", [xj, xh])
            else:
                self.emit(i, "bor.2", [-xj])
                self.emit(i, "bor.2", [-xh])
        for group in self._blocks(i, f, sorted(known)):
            for s, t in combinations(group, 2):
                for c in (j, h):
                    self.emit(i, "bor.2", [-self.x(c, s), self.x(c, t)])
                    self.emit(i, "bor.2", [-self.x(c, t), self.x(c, s)])
        self.visit(j, None)
        self.visit(h, None)

    def _index(self, i, key):
        out = {}
        for s in self.rows(i):
            out.setdefault(key(s), []).append(s)
        return out

    def _inc(self, i, f, known):
        px, py = self.proj(i, f.xs), self.proj(i, f.ys)
        by_y = self._index(i, py)
        for s in self.rows(i):
            self.emit(i, "inc", [-self.x(i, s)] + [self.x(i, t) for t in by_y.get(px(s), ())])

    def _anon(self, i, f, known):
        px, py = self.proj(i, f.xs), self.proj(i, f.ys)
        by_x = self._index(i, px)
        for s in self.rows(i):
            ys = py(s)
            self.emit(i, "anon", [-self.x(i, s)] + [self.x(i, t) for t in by_x[px(s)] if py(t) != ys])

    def _dep(self, i, f, known):
        px, py = self.proj(i, f.xs), self.proj(i, (f.y,))
        for group in self._index(i, px).values():
            for s, t in combinations(group, 2):
                if py(s) != py(t):
                    self.emit(i, "dep", [-self.x(i, s), -self.x(i, t)])

    def _excl(self, i, f, known):
        px, py = self.proj(i, f.xs), self.proj(i, f.ys)
        by_y = self._index(i, py)
        for s in self.rows(i):
            for t in by_y.get(px(s), ()):
                self.emit(i, "excl", [-self.x(i, s), -self.x(i, t)])

    def _indep(self, i, f, known):
        px, pu, pz = self.proj(i, f.xs), self.proj(i, f.us), self.proj(i, f.zs)
        full = self._index(i, lambda s: px(s) + pu(s) + pz(s))
        for group in self._index(i, pu).values():
            for s in group:
                head = px(s) + pu(s)
                for t in group:
                    wit = full.get(head + pz(t), ())
                    self.emit(i, "indep", [-self.x(i, s), -self.x(i, t)] + [self.x(i, w) for w in wit])

    def _const(self, i, f, known):
        py = self.proj(i, (f.y,))
        terms = []
        for a in range(self.n):
            terms.append(tuple(-self.x(i, s) for s in self.rows(i) if py(s) != (a,)))
        self.dnf.append(DnfBlock(i, "const", tuple(terms)))


def _preorder(f):
    out = [f]
    for c in children(f):
        out.extend(_preorder(c))
    return out


def _child_indices(f):
    out = {}

    def walk(g, i):
        nxt = i + 1
        kids = []
        for c in children(g):
            kids.append(nxt)
            nxt = walk(c, nxt)
        out[i] = tuple(kids)
        return nxt

    walk(f, 0)
    return out


def root_columns(f: Formula, r=None, variables=None) -> tuple[str, ...]:
    fr = free_variables(f)
    if variables is not None:
        cols = tuple(variables)
        missing = [v for v in fr if v not in cols]
        if missing:
            raise ModelError(f"free variables {missing} missing from {list(cols)}")
        if len(set(cols)) != len(cols):
            raise ModelError("duplicate team variables")
        return cols
    r = len(fr) if r is None else r
    if r < len(fr):
        raise CompileError(f"r={r} is smaller than the {len(fr)} free variables")
    pad, k = [], 1
    while len(fr) + len(pad) < r:
        name = f"_{k}"
        if name not in fr:
            pad.append(name)
        k += 1
    return fr + tuple(pad)


def estimated_cost(n: int, f: Formula, r0: int, known: bool = True, strategy: str = "specific") -> int:
    """Upper bound on the tuples visited while emitting clauses."""
    total = 0
    for g, rule, r in _plan_arity(f, r0, known, strategy):
        rows = n ** r
        total += rows * rows if rule in _QUADRATIC else rows * max(n, 1)
    return total


def _plan_arity(f, r0, known, strategy):
    arity = {id(f): r0}
    out = []
    for g, rule in plan(f, known, strategy):
        r = arity[id(g)]
        out.append((g, rule, r))
        for c in children(g):
            arity.setdefault(id(c), r + (1 if isinstance(g, (Exists, Forall)) else 0))
    return out


def compile_formula(A: Structure, f: Formula, r=None, *, variables=None, team: Team | None = None,
                    strategy: str = "specific", budget: int = COMPILE_BUDGET) -> Compilation:
    """Compile ``f`` over ``A``.

    Without a team the root block is left open, so satisfying assignments of
    the root variables are exactly the satisfying teams.  With a team the
    root is fixed by I.1 units and, under the specific strategy, its team is
    propagated to the nodes whose teams it determines.
    """
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}")
    if team is not None:
        cols = root_columns(f, variables=team.vars)
    else:
        cols = root_columns(f, r, variables)
    cost = estimated_cost(A.size, f, len(cols), team is not None, strategy)
    if cost > budget:
        raise BudgetExceeded(f"compilation would visit about {cost} tuples, over the budget of {budget}")
    b = _Builder(A, f, cols, strategy)
    known = None
    if team is not None:
        rows = team.row_set
        for s in b.rows(0):
            b.emit(0, "I.1", [b.x(0, s)] if s in rows else [-b.x(0, s)])
        if strategy == "specific":
            known = rows
    b.visit(0, known)
    table = VarTable(b.n, dict(b.cols), dict(b.base), b.next_id)
    return Compilation(A, f, cols, table, tuple(b.clauses), tuple(b.rules), tuple(b.dnf),
                       b.known, team, "I1" if team is not None else None, strategy)


def apply_init(c: Compilation, X: Team, mode: str = "I1", *, force=False) -> Compilation:
    """Add the I.1 (exact team) or I.2 (subteams of X) unit clauses."""
    if c.init is not None:
        raise CompileError("compilation already carries initialisation clauses")
    if tuple(X.vars) != c.columns:
        raise ModelError(f"team variables {list(X.vars)} do not match columns {list(c.columns)}")
    if mode not in ("I1", "I2"):
        raise ValueError(f"unknown initialisation {mode!r}")
    if mode == "I2" and not force and not is_union_closed(c.formula):
        raise CompileError("I.2 needs a union-closed formula")
    rows = X.row_set
    rule = "I.1" if mode == "I1" else "I.2"
    extra = []
    for s in c.var_table.rows(0):
        v = c.var_table.vid(0, s)
        if s not in rows:
            extra.append((-v,))
        elif mode == "I1":
            extra.append((v,))
    # Units keep every class tag, so the parent's summary and CNF carry over.
    cache = {}
    if not c.dnf_blocks:
        cache = {"summary": c.summary, "cnf": c.cnf().with_units(u for (u,) in extra)}
    return replace(c, clauses=c.clauses + tuple(extra), rules=c.rules + (rule,) * len(extra),
                   team=X, init=mode, _cache=cache)


def add_clauses(c: Compilation, clauses, rule: str) -> Compilation:
    clauses = tuple(tuple(cl) for cl in clauses)
    return replace(c, clauses=c.clauses + clauses, rules=c.rules + (rule,) * len(clauses), _cache={})


def expand_dnf(c: Compilation, budget: int = EXPANSION_BUDGET) -> list[Compilation]:
    """One pure CNF compilation per choice of a term in every DNF block."""
    if not c.dnf_blocks:
        return [c]
    total = 1
    for b in c.dnf_blocks:
        total *= len(b.terms)
    if total > budget:
        raise BudgetExceeded(f"{total} DNF expansions exceed the budget of {budget}")
    out = []
    for choice in product(*(b.terms for b in c.dnf_blocks)):
        extra = []
        for term in choice:
            extra.extend((l,) for l in term)
        out.append(replace(c, clauses=c.clauses + tuple(extra),
                           rules=c.rules + ("const",) * len(extra), dnf_blocks=(), _cache={}))
    return out


def _label(c: Compilation, v: int) -> str:
    i, s = c.var_table.describe(v)
    return f"X_{i}[{','.join(c.structure.domain[a] for a in s)}]"


def export_dimacs(c: Compilation, path=None) -> str:
    """DIMACS text with variable, class and free-block comments; written to ``path`` if given."""
    cnf = c.cnf()
    comments = [f"var {v} = {_label(c, v)}" for v in range(1, c.num_vars + 1)]
    comments.append(f"class {c.summary.label}")
    text = write_dimacs(cnf, comments)
    if path is not None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    return text
