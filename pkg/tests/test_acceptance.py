"""Acceptance suite: one PASS/FAIL line per criterion, also listed in the terminal summary."""

import random
import time
from collections import Counter
from itertools import combinations, combinations_with_replacement, permutations, product

import pytest

from helpers import (
    FREE, all_teams, assignment_index, brute_friendly, dual_horn_corpus, random_1edh, random_bc, random_cnf,
    random_dc_side, random_dh_side, random_formula, random_structure, report, soundness_corpus, truth_table,
)
from teamlog.clauses import STARRED, VERIFIED, clause_tags
from teamlog.compiler import apply_init, compile_formula, expand_dnf
from teamlog.formula import (
    Const, Dep, Or, StrictBlockOr, free_variables, is_downward_closed, is_fo, is_union_closed, parse_formula,
)
from teamlog.model import Team, full_team, make_structure, restrict_team, team_order_key
from teamlog.sat import Cnf, solve_1edh, solve_2sat, solve_auto, solve_dpll, solve_dual_horn
from teamlog.semantics import Evaluator, all_satisfying_teams, eval_lax
from teamlog.tasks import (
    check_anon_bc_split, check_block_split, count_teams, enumerate_teams, maximal_subteams, model_check,
    reduce_3sat,
)

CYCLE = parse_formula("exists x exists y (incl(y ; x) /\\ E(x,y))")
EMPTY_ASSIGNMENT = Team((), ((),))
XY = ("x", "y")


# -- criterion 1 ------------------------------------------------------------------

def _random_graph(rng):
    n = rng.randrange(3, 21)
    if rng.random() < 0.5:
        order = rng.sample(range(n), n)
        p = rng.uniform(0.05, 0.5)
        edges = [(order[i], order[j]) for i in range(n) for j in range(i + 1, n) if rng.random() < p]
    else:
        p = rng.uniform(0.01, 0.15)
        edges = [(a, b) for a in range(n) for b in range(n) if rng.random() < p]
    return n, edges


def _has_cycle(n, edges):
    succ = {v: [] for v in range(n)}
    for a, b in edges:
        succ[a].append(b)
    color = [0] * n
    for root in range(n):
        if color[root]:
            continue
        color[root] = 1
        stack = [(root, iter(succ[root]))]
        while stack:
            v, it = stack[-1]
            w = next(it, None)
            if w is None:
                color[v] = 2
                stack.pop()
            elif color[w] == 1:
                return True
            elif color[w] == 0:
                color[w] = 1
                stack.append((w, iter(succ[w])))
    return False


def test_criterion_1_cycle_detection():
    rng = random.Random(1)
    start = time.perf_counter()
    wrong, classes, cyclic = 0, Counter(), 0
    for _ in range(200):
        n, edges = _random_graph(rng)
        G = make_structure(range(n), {"E": [[str(a), str(b)] for a, b in edges]})
        rep = model_check(G, EMPTY_ASSIGNMENT, CYCLE)
        want = _has_cycle(n, edges)
        cyclic += want
        wrong += rep.verdict != want
        classes[rep.summary] += 1
    elapsed = time.perf_counter() - start
    ok = wrong == 0 and set(classes) == {"1-EDH"} and elapsed < 10
    report(1, ok, f"200 graphs ({cyclic} cyclic), {wrong} mismatches, classes {dict(classes)}, {elapsed:.1f}s")
    assert ok


# -- criteria 2 and 3 ---------------------------------------------------------------

def _corpus_runs():
    """(formula, structure, r, strategy) over |A| in {1,2,3} and |Fr| <= r <= 2."""
    corpus, counts = soundness_corpus()
    rng = random.Random(3)
    for f in corpus:
        for n in (1, 2, 3):
            A = random_structure(rng, n)
            for r in range(len(free_variables(f)), 3):
                for strategy in ("specific", "generic"):
                    yield f, A, r, strategy


def test_criterion_2_exhaustive_soundness():
    corpus, counts = soundness_corpus()
    start = time.perf_counter()
    instances, mismatches = 0, []
    evaluators = {}
    for f, A, r, strategy in _corpus_runs():
        ev = evaluators.setdefault(id(A), (A, Evaluator(A)))[1]
        parts = expand_dnf(compile_formula(A, f, r, strategy=strategy))
        classes = [p.summary.primary for p in parts]
        for X in all_teams(A, parts[0].columns):
            want = ev.sat(f, X.vars, X.row_set)
            got = any(solve_auto(apply_init(p, X).cnf(), cl) is not None for p, cl in zip(parts, classes))
            instances += 1
            if got != want:
                mismatches.append((f, A.size, X))
    elapsed = time.perf_counter() - start
    covered = min(counts.values())
    ok = not mismatches and len(corpus) >= 500 and covered >= 20 and elapsed < 300
    report(2, ok, f"{len(corpus)} formulas, every rule tag >= {covered} times, {instances} instances, "
                  f"{len(mismatches)} mismatches, {elapsed:.0f}s")
    assert ok, mismatches[:3]


def _conformance(table):
    violations = Counter()
    clauses = 0
    rng = random.Random(4)
    for f, A, r, strategy in _corpus_runs():
        cols = free_variables(f) + tuple(f"_{i}" for i in range(1, r - len(free_variables(f)) + 1))
        rows = full_team(A, cols).rows
        known = Team(cols, rng.sample(rows, rng.randrange(0, len(rows) + 1)))
        for team in (None, known):
            c = compile_formula(A, f, r, team=team, strategy=strategy)
            for lits, rule in zip(c.clauses, c.rules):
                clauses += 1
                for tag in table[rule] - clause_tags(lits):
                    violations[rule, tag] += 1
    return clauses, violations


@pytest.mark.xfail(strict=True, reason="the printed table stars DH1 for (or.3) and DH for (bor.1); "
                                       "the sound clauses of those rules lack them")
def test_criterion_3_starred_table_conformance():
    clauses, violations = _conformance(STARRED)
    cells = ", ".join(f"{rule} x {tag}: {k}" for (rule, tag), k in sorted(violations.items()))
    ok = not violations
    report(3, ok, f"{clauses} clauses checked against the printed table, violations: {cells or 'none'}")
    assert ok


def test_criterion_3_verified_table():
    clauses, violations = _conformance(VERIFIED)
    ok = not violations
    report("3 (verified table)", ok, f"{clauses} clauses, {sum(violations.values())} violations")
    assert ok


# -- criteria 4 and 5 ---------------------------------------------------------------

def _agrees(c, model, table):
    if model is None:
        return table == 0
    return c.satisfied_by(model) and bool(table >> assignment_index(model) & 1)


def test_criterion_4_solver_cross_validation():
    rng = random.Random(4)
    gen = {
        "solve_1edh": (lambda: random_1edh(rng, rng.randrange(1, 15)), solve_1edh),
        "solve_dual_horn": (lambda: random_cnf(rng, "dualhorn", n=rng.randrange(1, 15)), solve_dual_horn),
        "solve_2sat": (lambda: random_cnf(rng, "2sat", n=rng.randrange(1, 15)), solve_2sat),
        "solve_dpll": (lambda: random_cnf(rng, "any", n=rng.randrange(1, 15)), solve_dpll),
    }
    wrong, sat = Counter(), Counter()
    for name, (make, solver) in gen.items():
        for _ in range(10_000):
            c = make()
            table = truth_table(c)
            model = solver(c)
            sat[name] += table != 0
            wrong[name] += not _agrees(c, model, table)
            if name == "solve_1edh":
                wrong["1edh vs dual-Horn"] += (model is None) != (solve_dual_horn(c) is None)
    ok = sum(wrong.values()) == 0
    detail = ", ".join(f"{k}: 10000 ({sat[k]} sat)" for k in gen)
    report(4, ok, f"{detail}; mismatches {dict(wrong) or 0}")
    assert ok


def test_criterion_5_maximal_model():
    rng = random.Random(5)
    done, wrong = 0, 0
    while done < 1000:
        c = random_cnf(rng, "dualhorn", n=rng.randrange(1, 15))
        table = truth_table(c)
        if not table:
            continue
        top = solve_dual_horn(c)
        below = top is not None and table >> assignment_index(top) & 1 and all(
            not table & truth_table(Cnf(c.num_vars, [(v,)])) for v in range(1, c.num_vars + 1) if v not in top)
        wrong += not below
        done += 1
    report(5, wrong == 0, f"1000 satisfiable dual-Horn instances, {wrong} not above every model")
    assert wrong == 0


# -- criteria 6, 7 and 10 -----------------------------------------------------------

def _fragment_instances():
    for k, f in enumerate(dual_horn_corpus()):
        for n in (1, 2):
            A = random_structure(random.Random(k), n)
            for r in range(max(len(free_variables(f)), 1), 3):
                yield f, A, r


def test_criterion_6_enumeration():
    bad, runs, teams, worst = [], 0, 0, 0
    for f, A, r in _fragment_instances():
        en = enumerate_teams(A, f, r)
        got = list(en)
        want = all_satisfying_teams(A, f, variables=en.columns)
        universe = full_team(A, en.columns).rows
        keys = [team_order_key(t.row_set, universe) for t in got]
        increasing = all(a < b for a, b in zip(keys, keys[1:]))
        bound = 2 * len(universe) + 1
        worst = max([worst] + [g / bound for g in en.gaps])
        if got != want or not increasing or any(g > bound for g in en.gaps):
            bad.append((f, A.size, r))
        runs += 1
        teams += len(got)
    ok = not bad
    report(6, ok, f"100 formulas, {runs} runs, {teams} teams, {len(bad)} failures, "
                  f"max gap {worst:.2f} of the 2|free|+1 bound")
    assert ok, bad[:3]


def _brute_maximal(A, X, f):
    good = [frozenset(s) for k in range(len(X.rows) + 1) for s in combinations(X.rows, k)
            if eval_lax(A, Team(X.vars, s), f)]
    return {g for g in good if not any(g < h for h in good)}


def test_criterion_7_maximal_subteams():
    rng = random.Random(7)
    bad, runs, singletons = [], 0, 0
    for f, A, r in _fragment_instances():
        cols = free_variables(f) + tuple(f"_{i}" for i in range(1, r - len(free_variables(f)) + 1))
        rows = full_team(A, cols).rows
        for X in (full_team(A, cols), Team(cols, rng.sample(rows, rng.randrange(0, len(rows) + 1)))):
            got = maximal_subteams(A, X, f)
            wrong = {t.row_set for t in got} != _brute_maximal(A, X, f) or len(got) != len(set(got))
            if is_union_closed(f):
                singletons += 1
                wrong = wrong or len(got) != 1
            if wrong:
                bad.append((f, X))
            runs += 1
    ok = not bad
    report(7, ok, f"{runs} teams, {singletons} with union-closed formulas, {len(bad)} failures")
    assert ok, bad[:3]


def test_criterion_10_counting():
    bad, runs = [], 0
    for f, A, r in _fragment_instances():
        en = enumerate_teams(A, f, r)
        if count_teams(A, f, r) != len(all_satisfying_teams(A, f, variables=en.columns)):
            bad.append((f, A.size, r))
        runs += 1
    bit = make_structure("01")
    const = count_teams(bit, Const("x"), 1)
    dep = count_teams(bit, Dep(("x",), "y"), 2)
    dep_oracle = len(all_satisfying_teams(bit, Dep(("x",), "y"), 2))
    ok = not bad and const == 2 and dep == dep_oracle
    report(10, ok, f"{runs} runs, {len(bad)} mismatches; const fixture {const}; dep fixture {dep} "
                   f"(oracle {dep_oracle})")
    assert ok, bad[:3]


@pytest.mark.xfail(strict=True, reason="the oracle gives 8 teams for dep(x;y) over |A|=2, r=2, not 11")
def test_criterion_10_stated_dep_fixture():
    dep = count_teams(make_structure("01"), Dep(("x",), "y"), 2)
    report("10 (stated dep fixture 11)", dep == 11, f"count_teams gives {dep}")
    assert dep == 11


# -- criterion 8 --------------------------------------------------------------------

def canonical_3sat(max_vars=4, max_clauses=3):
    """One representative per class of instances up to variable renaming and polarity flips.

    A team is a set, so clause order and literal order inside a clause never
    matter; clauses are sorted literal multisets and instances are clause multisets.
    """
    lits = [s * v for v in range(1, max_vars + 1) for s in (1, -1)]
    clauses = sorted({tuple(sorted(c)) for c in combinations_with_replacement(lits, 3)})
    index = {c: k for k, c in enumerate(clauses)}
    group = []
    for perm in permutations(range(1, max_vars + 1)):
        for signs in product((1, -1), repeat=max_vars):
            g = lambda l: (1 if l > 0 else -1) * signs[abs(l) - 1] * perm[abs(l) - 1]
            group.append([index[tuple(sorted(g(l) for l in c))] for c in clauses])
    level, out = {()}, [()]
    for _ in range(max_clauses):
        level = {min(tuple(sorted(g[k] for k in inst)) for g in group)
                 for inst in {tuple(sorted(rep + (k,))) for rep in level for k in range(len(clauses))}}
        out.extend(sorted(level))
    return [[clauses[k] for k in inst] for inst in out]


def _sat3(clauses):
    m = max([abs(l) for c in clauses for l in c] + [0])
    return any(all(any((l > 0) == bits[abs(l) - 1] for l in c) for c in clauses)
               for bits in product((False, True), repeat=m))


def test_criterion_8_3sat_reduction():
    instances = canonical_3sat()
    wrong, sat = 0, 0
    for clauses in instances:
        A, X, f = reduce_3sat(clauses)
        want = _sat3(clauses)
        sat += want
        wrong += model_check(A, X, f, engine="brute").verdict != want
    report(8, wrong == 0, f"{len(instances)} canonical instances ({sat} satisfiable), {wrong} mismatches")
    assert wrong == 0


# -- criterion 9 --------------------------------------------------------------------

def _small_team(rng, A):
    rows = full_team(A, XY).rows
    return Team(XY, rng.sample(rows, rng.randrange(1, min(len(rows), 8) + 1)))


def test_criterion_9_split_algorithms():
    rng = random.Random(9)
    wrong = Counter()
    for _ in range(500):
        A = random_structure(rng, rng.randrange(1, 4))
        X = _small_team(rng, A)
        phi, psi, x = random_dh_side(rng, XY), random_dc_side(rng, XY), rng.choice(XY)
        wrong["prop22"] += check_block_split(A, X, phi, x, psi) != eval_lax(A, X, StrictBlockOr(x, phi, psi))
    for _ in range(500):
        A = random_structure(rng, rng.randrange(1, 4))
        X = _small_team(rng, A)
        phi = random_formula(rng, rng.randrange(0, 3), XY, atoms=("anon",), connectives=("and", "or"),
                             max_quant=0)
        psi1 = random_bc(rng, XY)
        psi2 = random_bc(rng, XY) if rng.random() < 0.7 else None
        whole = Or(phi, psi1 if psi2 is None else Or(psi1, psi2))
        wrong["prop23"] += check_anon_bc_split(A, X, phi, psi1, psi2) != eval_lax(A, X, whole)
    ok = sum(wrong.values()) == 0
    report(9, ok, f"500 block-split and 500 anonymity/independence instances, mismatches {dict(wrong) or 0}")
    assert ok


# -- criterion 11 -------------------------------------------------------------------

def _closure_instance(rng, **kw):
    A = random_structure(rng, rng.randrange(1, 4))
    f = random_formula(rng, 3, **kw)
    while not brute_friendly(f):
        f = random_formula(rng, 3, **kw)
    rows = full_team(A, FREE).rows
    return A, f, Team(FREE, rng.sample(rows, rng.randrange(0, min(len(rows), 9) + 1)))


def _flat(rng):
    A, f, X = _closure_instance(rng, atoms=(), connectives=("and", "or", "exists", "forall"))
    assert is_fo(f)
    return eval_lax(A, X, f) == all(eval_lax(A, Team(FREE, (s,)), f) for s in X.rows)


def _downward(rng):
    A, f, X = _closure_instance(rng, atoms=("dep", "excl", "const"),
                                connectives=("and", "or", "bor", "exists", "forall"))
    assert is_downward_closed(f)
    while not (X.rows and eval_lax(A, X, f)):
        A, f, X = _closure_instance(rng, atoms=("dep", "excl", "const"),
                                    connectives=("and", "or", "bor", "exists", "forall"))
    return eval_lax(A, Team(FREE, [s for s in X.rows if rng.random() < 0.5]), f)


def _union(rng):
    kw = dict(atoms=("incl", "anon"), connectives=("and", "or", "exists", "forall"))
    while True:
        A, f, X = _closure_instance(rng, **kw)
        assert is_union_closed(f)
        rows = full_team(A, FREE).rows
        Y = Team(FREE, rng.sample(rows, rng.randrange(1, len(rows) + 1)))
        if X.rows and X.row_set != Y.row_set and eval_lax(A, X, f) and eval_lax(A, Y, f):
            return eval_lax(A, Team(FREE, X.rows + Y.rows), f)


def _local(rng):
    A, f, X = _closure_instance(rng)
    wide = Team(FREE + ("u",), [s + (rng.randrange(A.size),) for s in X.rows])
    v = eval_lax(A, X, f)
    return v == eval_lax(A, wide, f) == eval_lax(A, restrict_team(X, free_variables(f)), f)


def _empty(rng):
    A, f, _ = _closure_instance(rng)
    return eval_lax(A, Team(FREE, ()), f)


def test_criterion_11_closure_laws():
    rng = random.Random(11)
    laws = {"flatness": _flat, "downward closure": _downward, "union closure": _union,
            "locality": _local, "empty team": _empty}
    violations = {name: sum(not law(rng) for _ in range(1000)) for name, law in laws.items()}
    ok = not any(violations.values())
    report(11, ok, "1000 instances per law, violations " + ", ".join(f"{k}: {v}" for k, v in violations.items()))
    assert ok
