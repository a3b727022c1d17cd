"""Pure-Python solver kernels.

Every kernel takes a flattened clause list (``lits`` holds the literals of
clause ``c`` in ``lits[starts[c]:starts[c + 1]]``) and returns a bytearray
model indexed by variable (slot 0 unused) or None when unsatisfiable.
"""


def dual_horn(n, lits, starts):
    """Maximal model of a dual-Horn clause set.

    Computes the least set of variables forced false by unit propagation;
    every other variable is set true.
    """
    m = len(starts) - 1
    count = [0] * m
    neg = [0] * m
    occ = [[] for _ in range(n + 1)]
    false = bytearray(n + 1)
    queue = []
    for c in range(m):
        seen = set()
        for k in range(starts[c], starts[c + 1]):
            l = lits[k]
            if l > 0:
                if l not in seen:
                    seen.add(l)
                    occ[l].append(c)
                    count[c] += 1
            elif neg[c] and neg[c] != -l:
                raise ValueError("clause has two negative literals")
            else:
                neg[c] = -l
        if count[c] == 0:
            v = neg[c]
            if v == 0:
                return None
            if not false[v]:
                false[v] = 1
                queue.append(v)
    while queue:
        v = queue.pop()
        for c in occ[v]:
            count[c] -= 1
            if count[c] == 0:
                a = neg[c]
                if a == 0:
                    return None
                if not false[a]:
                    false[a] = 1
                    queue.append(a)
    model = bytearray(1 - b for b in false)
    model[0] = 0
    return model


def two_sat(n, lits, starts):
    """Implication graph plus Tarjan's strongly connected components."""
    m = len(starts) - 1
    adj = [[] for _ in range(2 * n)]

    def node(l):
        return 2 * (l - 1) if l > 0 else 2 * (-l - 1) + 1

    for c in range(m):
        a, b = starts[c], starts[c + 1]
        if b - a == 0:
            return None
        if b - a == 1:
            x = node(lits[a])
            adj[x ^ 1].append(x)
        elif b - a == 2:
            x, y = node(lits[a]), node(lits[a + 1])
            adj[x ^ 1].append(y)
            adj[y ^ 1].append(x)
        else:
            raise ValueError("clause longer than two literals")

    N = 2 * n
    index = [-1] * N
    low = [0] * N
    comp = [-1] * N
    on_stack = bytearray(N)
    stack = []
    counter = 0
    ncomp = 0
    for root in range(N):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = 1
        while work:
            v, i = work[-1]
            if i < len(adj[v]):
                work[-1] = (v, i + 1)
                w = adj[v][i]
                if index[w] == -1:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = 1
                    work.append((w, 0))
                elif on_stack[w] and index[w] < low[v]:
                    low[v] = index[w]
                continue
            work.pop()
            if work:
                u = work[-1][0]
                if low[v] < low[u]:
                    low[u] = low[v]
            if low[v] == index[v]:
                while True:
                    w = stack.pop()
                    on_stack[w] = 0
                    comp[w] = ncomp
                    if w == v:
                        break
                ncomp += 1
    model = bytearray(n + 1)
    for v in range(1, n + 1):
        p, q = comp[2 * (v - 1)], comp[2 * (v - 1) + 1]
        if p == q:
            return None
        model[v] = 1 if p < q else 0
    return model


def dpll(n, lits, starts):
    """DPLL with conflict-driven clause learning.

    Branches on the first unassigned variable, true first.  A conflict is
    analysed back to its first unique implication point; the learned clause
    is kept and the search backjumps to the clause's second-highest level.
    Clauses are watched on their first two literals.
    """
    m = len(starts) - 1
    val = [-1] * (n + 1)
    level = [0] * (n + 1)
    reason = [-1] * (n + 1)
    seen = bytearray(n + 1)
    watches = [[] for _ in range(2 * n + 1)]
    clauses = []
    trail, lim = [], []
    units = []
    for c in range(m):
        cl = list(dict.fromkeys(lits[starts[c]:starts[c + 1]]))
        if not cl:
            return None
        present = set(cl)
        if any(-l in present for l in cl):
            continue
        if len(cl) == 1:
            units.append(cl[0])
            continue
        watches[n + cl[0]].append(len(clauses))
        watches[n + cl[1]].append(len(clauses))
        clauses.append(cl)

    def value(l):
        x = val[l if l > 0 else -l]
        if x < 0:
            return -1
        return x if l > 0 else 1 - x

    def assign(l, r):
        v = l if l > 0 else -l
        val[v] = 1 if l > 0 else 0
        level[v] = len(lim)
        reason[v] = r
        trail.append(l)

    for l in units:
        x = value(l)
        if x == 0:
            return None
        if x == -1:
            assign(l, -1)

    qhead = 0

    def propagate():
        # returns the index of a falsified clause, or -1
        nonlocal qhead
        while qhead < len(trail):
            false_lit = -trail[qhead]
            qhead += 1
            ws = watches[n + false_lit]
            keep = []
            for k, c in enumerate(ws):
                cl = clauses[c]
                if cl[0] == false_lit:
                    cl[0], cl[1] = cl[1], cl[0]
                first = cl[0]
                if value(first) == 1:
                    keep.append(c)
                    continue
                for j in range(2, len(cl)):
                    if value(cl[j]) != 0:
                        cl[1], cl[j] = cl[j], cl[1]
                        watches[n + cl[1]].append(c)
                        break
                else:
                    keep.append(c)
                    if value(first) == 0:
                        keep.extend(ws[k + 1:])
                        watches[n + false_lit] = keep
                        return c
                    assign(first, c)
            watches[n + false_lit] = keep
        return -1

    def analyze(confl):
        learnt = [0]
        current = len(lim)
        counter = 0
        p = 0
        idx = len(trail) - 1
        cl = clauses[confl]
        while True:
            for q in (cl if p == 0 else cl[1:]):
                v = q if q > 0 else -q
                if not seen[v] and level[v] > 0:
                    seen[v] = 1
                    if level[v] == current:
                        counter += 1
                    else:
                        learnt.append(q)
            while not seen[abs(trail[idx])]:
                idx -= 1
            p = trail[idx]
            idx -= 1
            seen[abs(p)] = 0
            counter -= 1
            if counter == 0:
                break
            cl = clauses[reason[abs(p)]]
        learnt[0] = -p
        for q in learnt[1:]:
            seen[abs(q)] = 0
        back = 0
        if len(learnt) > 1:
            i = max(range(1, len(learnt)), key=lambda j: level[abs(learnt[j])])
            learnt[1], learnt[i] = learnt[i], learnt[1]
            back = level[abs(learnt[1])]
        return learnt, back

    if propagate() >= 0:
        return None
    nxt = 1
    while True:
        confl = propagate()
        if confl >= 0:
            if not lim:
                return None
            learnt, back = analyze(confl)
            while len(trail) > lim[back]:
                l = trail.pop()
                val[l if l > 0 else -l] = -1
            del lim[back:]
            qhead = len(trail)
            nxt = 1
            if len(learnt) == 1:
                assign(learnt[0], -1)
            else:
                watches[n + learnt[0]].append(len(clauses))
                watches[n + learnt[1]].append(len(clauses))
                clauses.append(learnt)
                assign(learnt[0], len(clauses) - 1)
            continue
        while nxt <= n and val[nxt] != -1:
            nxt += 1
        if nxt > n:
            model = bytearray(n + 1)
            for v in range(1, n + 1):
                model[v] = val[v]
            return model
        lim.append(len(trail))
        assign(nxt, -1)
