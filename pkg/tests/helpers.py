"""Generators and brute-force oracles shared by the test modules."""

from __future__ import annotations

import random
from collections import Counter
from itertools import chain, combinations, product

from teamlog.compiler import plan
from teamlog.formula import (
    And, Anon, BlockOr, Const, Dep, EqLit, Excl, Exists, Forall, Incl, Indep, Or, RelLit,
    depth, free_variables,
)
from teamlog.model import Team, full_team, make_structure
from teamlog.sat.cnf import Cnf

FREE = ("x", "y")
BOUND = ("z", "w")


def random_structure(rng: random.Random, n: int, density: float = 0.5):
    dom = [str(i) for i in range(n)]
    rels = {
        "P": [[a] for a in dom if rng.random() < density],
        "E": [[a, b] for a in dom for b in dom if rng.random() < density],
    }
    return make_structure(dom, rels)


def all_teams(A, vars_):
    rows = full_team(A, vars_).rows
    for k in range(len(rows) + 1):
        for sub in combinations(rows, k):
            yield Team(tuple(vars_), sub)


def subteams(X: Team):
    for k in range(len(X.rows) + 1):
        for sub in combinations(X.rows, k):
            yield Team(X.vars, sub)


# -- formulas ----------------------------------------------------------------

def _pick(rng, scope, k):
    return tuple(rng.choice(scope) for _ in range(k))


def random_literal(rng, scope):
    kind = rng.randrange(5)
    if kind == 0:
        return RelLit("P", True, _pick(rng, scope, 1))
    if kind == 1:
        return RelLit("P", False, _pick(rng, scope, 1))
    if kind == 2:
        return RelLit("E", rng.random() < 0.6, _pick(rng, scope, 2))
    a, b = _pick(rng, scope, 2)
    return EqLit(kind == 3, a, b)


def random_atom(rng, scope, kinds=("dep", "const", "indep", "incl", "anon", "excl")):
    kind = rng.choice(kinds)
    k = 1 if rng.random() < 0.75 else 2
    if kind == "dep":
        return Dep(_pick(rng, scope, rng.randrange(0, 3)), rng.choice(scope))
    if kind == "const":
        return Const(rng.choice(scope))
    if kind == "indep":
        return Indep(_pick(rng, scope, 1), _pick(rng, scope, rng.randrange(0, 2)), _pick(rng, scope, 1))
    cls = {"incl": Incl, "anon": Anon, "excl": Excl}[kind]
    return cls(_pick(rng, scope, k), _pick(rng, scope, k))


def random_formula(rng, d, scope=FREE, *, atoms=("dep", "const", "indep", "incl", "anon", "excl"),
                   connectives=("and", "or", "bor", "exists", "forall"), max_quant=2, leaf_fo=0.5):
    """Random formula of depth at most ``d`` over ``scope``."""
    if d == 0 or rng.random() < 0.2:
        if not atoms or rng.random() < leaf_fo:
            return random_literal(rng, scope)
        return random_atom(rng, scope, atoms)
    options = [c for c in connectives if c not in ("exists", "forall") or max_quant > 0]
    op = rng.choice(options)
    if op in ("exists", "forall"):
        fresh = [v for v in BOUND if v not in scope] or list(BOUND)
        v = rng.choice(fresh)
        body = random_formula(rng, d - 1, tuple(dict.fromkeys(scope + (v,))), atoms=atoms,
                              connectives=connectives, max_quant=max_quant - 1, leaf_fo=leaf_fo)
        return (Exists if op == "exists" else Forall)(v, body)
    kw = dict(atoms=atoms, connectives=connectives, max_quant=max_quant, leaf_fo=leaf_fo)
    left = random_formula(rng, d - 1, scope, **kw)
    right = random_formula(rng, d - 1, scope, **kw)
    if op == "and":
        return And(left, right)
    if op == "or":
        return Or(left, right)
    return BlockOr(rng.choice(scope), left, right)


def rule_tags(f) -> set:
    tags = {"I.1"}
    for strategy in ("specific", "generic"):
        for known in (True, False):
            tags.update(rule for _, rule in plan(f, known, strategy))
    return tags


def brute_friendly(f) -> bool:
    """Quantifier nodes with at most one free variable keep the oracle's teams small."""
    from teamlog.formula import QUANTIFIERS, iter_nodes

    return all(len(free_variables(g)) <= 1 for g in iter_nodes(f) if isinstance(g, QUANTIFIERS))


def soundness_corpus(size=500, seed=11, min_per_tag=20, max_depth=4):
    """Formulas with at most two free variables covering every rule tag ``min_per_tag`` times."""
    from teamlog.clauses import ALL_RULES

    rng = random.Random(seed)
    wanted = set(ALL_RULES) - {"I.2", "block"}
    out, seen, counts = [], set(), Counter()
    while len(out) < size or any(counts[t] < min_per_tag for t in wanted):
        f = random_formula(rng, rng.randrange(1, max_depth + 1))
        if f in seen or depth(f) > max_depth or not brute_friendly(f):
            continue
        tags = rule_tags(f)
        if len(out) >= size and not any(counts[t] < min_per_tag for t in tags & wanted):
            continue
        seen.add(f)
        out.append(f)
        counts.update(tags)
    return out, counts


def dual_horn_corpus(count=100, seed=5):
    """Formulas of the block-disjunction/inclusion/anonymity/constancy fragment."""
    rng = random.Random(seed)
    out, seen = [], set()
    while len(out) < count:
        f = random_formula(rng, rng.randrange(1, 4), atoms=("incl", "anon", "const"),
                           connectives=("and", "or", "bor", "exists", "forall"), max_quant=1)
        if f not in seen and len(free_variables(f)) >= 1:
            seen.add(f)
            out.append(f)
    return out


def random_dh_side(rng, scope):
    """Quantifier-free formula of the block-disjunction/inclusion/anonymity/constancy fragment."""
    return random_formula(rng, rng.randrange(1, 3), scope, atoms=("incl", "anon", "const"),
                          connectives=("and", "or", "bor"), max_quant=0)


def random_dc_side(rng, scope):
    """Quantifier-free downward-closed formula."""
    return random_formula(rng, rng.randrange(1, 3), scope, atoms=("dep", "excl", "const"),
                          connectives=("and", "or"), max_quant=0)


def random_bc(rng, scope):
    """One independence atom combined with FO literals by conjunction and disjunction."""
    pick = lambda: rng.choice(scope)
    f = Indep((pick(),), tuple(pick() for _ in range(rng.randrange(0, 2))), (pick(),))
    for _ in range(rng.randrange(0, 4)):
        lit = random_literal(rng, scope)
        f = And(f, lit) if rng.random() < 0.5 else Or(lit, f) if rng.random() < 0.5 else Or(f, lit)
    return f


# -- propositional ------------------------------------------------------------

def brute_models(cnf: Cnf):
    n = cnf.num_vars
    for bits in product((False, True), repeat=n):
        true = {v + 1 for v in range(n) if bits[v]}
        if cnf.satisfied_by(true):
            yield frozenset(true)


def brute_sat(cnf: Cnf) -> bool:
    return next(brute_models(cnf), None) is not None


def truth_table(cnf: Cnf) -> int:
    """Bit a is set iff assignment a (bit v-1 of a is variable v) satisfies the CNF."""
    n = cnf.num_vars
    size = 1 << n
    full = (1 << size) - 1
    masks = [0]
    for v in range(1, n + 1):
        half = 1 << (v - 1)
        period = ((1 << half) - 1) << half
        masks.append(period * (full // ((1 << (2 * half)) - 1)))
    out = full
    for clause in cnf.clauses:
        m = 0
        for l in clause:
            m |= masks[l] if l > 0 else full ^ masks[-l]
        out &= m
        if not out:
            break
    return out


def assignment_index(model) -> int:
    return sum(1 << (v - 1) for v in model)


def _clause(rng, n, size, max_neg=None, max_pos=None):
    vs = rng.sample(range(1, n + 1), min(size, n))
    signs = [rng.random() < 0.5 for _ in vs]
    lits = [v if s else -v for v, s in zip(vs, signs)]
    if max_neg is not None:
        negs = [i for i, l in enumerate(lits) if l < 0]
        for i in negs[max_neg:]:
            lits[i] = -lits[i]
    if max_pos is not None:
        poss = [i for i, l in enumerate(lits) if l > 0]
        for i in poss[max_pos:]:
            lits[i] = -lits[i]
    return tuple(lits)


def random_cnf(rng, kind: str, n=None, m=None) -> Cnf:
    n = n or rng.randrange(1, 15)
    m = m if m is not None else rng.randrange(0, 3 * n + 1)
    clauses = []
    for _ in range(m):
        if kind == "2sat":
            clauses.append(_clause(rng, n, rng.randrange(1, 3)))
        elif kind == "dualhorn":
            clauses.append(_clause(rng, n, rng.randrange(1, 5), max_neg=1))
        elif kind == "horn":
            clauses.append(_clause(rng, n, rng.randrange(1, 5), max_pos=1))
        else:
            clauses.append(_clause(rng, n, rng.randrange(1, 5)))
    return Cnf(n, clauses)


def random_1edh(rng, n=None) -> Cnf:
    """Random 1-EDH formula: units, one DH clause per head, back-implications to it."""
    n = n or rng.randrange(1, 15)
    vs = list(range(1, n + 1))
    clauses = []
    for v in vs:
        r = rng.random()
        if r < 0.12:
            clauses.append((v,))
        elif r < 0.2:
            clauses.append((-v,))
    eq_used = set()
    for x in vs:
        if rng.random() < 0.5:
            continue
        others = [v for v in vs if v != x]
        if not others:
            continue
        right = rng.sample(others, min(len(others), rng.randrange(1, 4)))
        clauses.append(tuple([-x] + right))
        for y in right:
            if y not in eq_used and rng.random() < 0.5:
                eq_used.add(y)
                clauses.append((-y, x))
    return Cnf(n, clauses)


def flatten(xs):
    return list(chain.from_iterable(xs))


# -- acceptance report ---------------------------------------------------------

ACCEPTANCE = []


def report(criterion, ok: bool, detail: str):
    """Record and print one PASS/FAIL line for an acceptance criterion."""
    line = f"{'PASS' if ok else 'FAIL'} criterion {criterion}: {detail}"
    ACCEPTANCE.append(line)
    print(line)
    return ok
