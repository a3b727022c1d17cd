"""1-EDH formulas: recognition, Propagate, safe variables and the decision procedure.

A binary clause ``a -> b`` may serve either as a dual-Horn clause headed by
``a`` or as a back-implication of a dual-Horn clause headed by ``b``; the
choice is made by a small 2-SAT problem over the binary clauses.
"""

from __future__ import annotations

from array import array
from dataclasses import dataclass, field

from ..errors import ClassMismatch
from .. import kernels
from .cnf import Cnf


class NotOneEdh(ClassMismatch):
    """Clause set outside 1-EDH; ``reason`` names the violated condition."""

    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


@dataclass(frozen=True)
class EdhDecomposition:
    uplus: frozenset
    uminus: frozenset
    dh: dict = field(default_factory=dict)   # head -> frozenset of right-hand variables
    eq: dict = field(default_factory=dict)   # y -> x for the back-implication y -> x
    num_vars: int = 0


def _orient(binary, fixed_heads, fixed_dh):
    """Choose DH (True) or EQ (False) for each binary implication a -> b."""
    m = len(binary)
    clauses = []
    by_head = {}
    index = {}
    for k, (a, b) in enumerate(binary):
        by_head.setdefault(a, []).append(k)
        index[(a, b)] = k
    for a, ks in by_head.items():
        if a in fixed_heads:
            clauses.extend((-(k + 1),) for k in ks)
        for i in range(len(ks)):
            for j in range(i + 1, len(ks)):
                p, q = ks[i] + 1, ks[j] + 1
                clauses.append((-p, -q))
                clauses.append((p, q))
    for k, (a, b) in enumerate(binary):
        if a in fixed_dh.get(b, ()):
            continue
        back = index.get((b, a))
        if back is None:
            clauses.append((k + 1,))
        else:
            clauses.append((k + 1, back + 1))
    lits, starts = array("i"), array("i", [0])
    for c in clauses:
        lits.extend(c)
        starts.append(len(lits))
    model = kernels.two_sat(m, lits, starts)
    if model is None:
        return None
    return [bool(model[k + 1]) for k in range(m)]


def _diagnose(binary, fixed_heads, fixed_dh):
    index = set(binary)
    must_dh, must_eq = {}, {}
    for a, b in binary:
        if a in fixed_heads:
            must_eq[a] = must_eq.get(a, 0) + 1
        elif a not in fixed_dh.get(b, ()) and (b, a) not in index:
            must_dh[a] = must_dh.get(a, 0) + 1
    for a in sorted(must_dh):
        if must_dh[a] + (a in fixed_heads) >= 2:
            return f"variable {a} heads two DH clauses"
    for a in sorted(must_eq):
        if must_eq[a] >= 2:
            return f"variable {a} heads two EQ clauses"
    return "no orientation of the binary clauses meets the one-head conditions"


def validate_1edh(c: Cnf) -> EdhDecomposition:
    uplus, uminus = set(), set()
    dh: dict[int, frozenset] = {}
    binary = []
    seen_binary = set()
    for clause in c.clauses:
        lits = set(clause)
        if any(-l in lits for l in lits):
            continue
        pos = sorted(l for l in lits if l > 0)
        neg = sorted(-l for l in lits if l < 0)
        if len(lits) == 1:
            (uplus if pos else uminus).add(pos[0] if pos else neg[0])
        elif len(neg) == 1 and len(pos) == 1:
            if (neg[0], pos[0]) not in seen_binary:
                seen_binary.add((neg[0], pos[0]))
                binary.append((neg[0], pos[0]))
        elif len(neg) == 1 and len(pos) >= 2:
            head, right = neg[0], frozenset(pos)
            if head in dh and dh[head] != right:
                raise NotOneEdh(f"variable {head} heads two DH clauses")
            dh[head] = right
        else:
            raise NotOneEdh(f"clause {list(clause)} fits no 1-EDH category")
    fixed_heads = set(dh)
    choice = _orient(binary, fixed_heads, dh)
    if choice is None:
        raise NotOneEdh(_diagnose(binary, fixed_heads, dh))
    eq = {}
    for (a, b), is_dh in zip(binary, choice):
        if not is_dh:
            eq[a] = b
    # Prefer reading a -> b as a back-implication when it backs b's own
    # multi-literal clause; that keeps every condition and is canonical.
    fixed = dict(dh)
    for (a, b), is_dh in zip(binary, choice):
        if is_dh and a not in eq and a in fixed.get(b, ()) and eq.get(b) != a:
            eq[a] = b
        elif is_dh:
            dh[a] = frozenset({b})
    return EdhDecomposition(frozenset(uplus), frozenset(uminus), dh, eq, c.num_vars)


def propagate_set(d: EdhDecomposition, y: int) -> frozenset:
    out = {y}
    while y in d.eq and d.eq[y] not in out:
        y = d.eq[y]
        out.add(y)
    return frozenset(out)


def is_safe(d: EdhDecomposition, y: int) -> bool:
    return not (propagate_set(d, y) & d.uminus)


def _good_vertices(d: EdhDecomposition, safe):
    """Vertices from which the Coherency walk can be completed.

    Edges x -> y for y in Right(C_x) that are safe and not positive units; a
    vertex is accepting when it heads no DH clause or one of its right-hand
    variables is a positive unit.  Good vertices reach an accepting vertex or
    a cycle.
    """
    def succ(x):
        return [y for y in sorted(d.dh.get(x, ())) if y not in d.uplus and safe(y)]

    def accepting(x):
        return x not in d.dh or bool(d.dh[x] & d.uplus)

    # Tarjan over the portion reachable from the positive units
    index, low, on_stack, stack, comps = {}, {}, set(), [], []
    counter = 0
    for root in sorted(d.uplus):
        if root in index:
            continue
        work = [(root, iter(succ(root)))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, it = work[-1]
            w = next(it, None)
            if w is not None:
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(succ(w))))
                elif w in on_stack:
                    low[v] = min(low[v], index[w])
                continue
            work.pop()
            if work:
                u = work[-1][0]
                low[u] = min(low[u], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                comps.append(comp)
    # components come out in reverse topological order
    good = set()
    for comp in comps:
        members = set(comp)
        cyclic = len(comp) > 1 or any(v in succ(v) for v in comp)
        if cyclic or any(accepting(v) for v in comp) or any(
                w in good for v in comp for w in succ(v) if w not in members):
            good |= members
    return good, succ, accepting


def solve_1edh(c: Cnf, decomposition: EdhDecomposition | None = None) -> frozenset | None:
    """Decision procedure with model reconstruction; true variables or None."""
    d = decomposition or validate_1edh(c)
    cache = {}

    def safe(y):
        if y not in cache:
            cache[y] = is_safe(d, y)
        return cache[y]

    for x in d.uplus:
        if not safe(x):
            return None
    good, succ, accepting = _good_vertices(d, safe)
    if not all(x in good for x in d.uplus):
        return None
    true = set()
    for x in sorted(d.uplus):
        path, visited = [x], {x}
        v = x
        while not accepting(v):
            nxt = next(w for w in succ(v) if w in good)
            if nxt in visited:
                break
            path.append(nxt)
            visited.add(nxt)
            v = nxt
        for y in path:
            true |= propagate_set(d, y)
    return frozenset(true)
