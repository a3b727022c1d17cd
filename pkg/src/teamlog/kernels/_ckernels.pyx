# cython: language_level=3
"""Compiled solver kernels; same contracts as ``_pykernels``."""

from libc.stdlib cimport calloc, free, malloc, realloc


def dual_horn(int n, const int[::1] lit, const int[::1] st):
    cdef Py_ssize_t m = st.shape[0] - 1
    cdef Py_ssize_t L = lit.shape[0]
    cdef int* count = <int*>calloc(m + 1, sizeof(int))
    cdef int* neg = <int*>calloc(m + 1, sizeof(int))
    cdef int* occ_n = <int*>calloc(n + 2, sizeof(int))
    cdef int* occ_start = <int*>calloc(n + 2, sizeof(int))
    cdef int* occ = <int*>malloc((L + 1) * sizeof(int))
    cdef int* fill = <int*>calloc(n + 2, sizeof(int))
    cdef char* false_ = <char*>calloc(n + 1, 1)
    cdef int* queue = <int*>malloc((n + 1) * sizeof(int))
    cdef int* mark = <int*>calloc(n + 1, sizeof(int))
    cdef Py_ssize_t c, k
    cdef int l, v, a, qn = 0, bad = 0
    try:
        # occurrence lists of positive literals, distinct per clause
        for c in range(m):
            for k in range(st[c], st[c + 1]):
                l = lit[k]
                if l > 0 and mark[l] != c + 1:
                    mark[l] = c + 1
                    occ_n[l] += 1
        for v in range(1, n + 1):
            occ_start[v + 1] = occ_start[v] + occ_n[v]
        for v in range(n + 1):
            mark[v] = 0
        for c in range(m):
            for k in range(st[c], st[c + 1]):
                l = lit[k]
                if l > 0:
                    if mark[l] != c + 1:
                        mark[l] = c + 1
                        occ[occ_start[l] + fill[l]] = <int>c
                        fill[l] += 1
                        count[c] += 1
                elif neg[c] != 0 and neg[c] != -l:
                    bad = 2
                    break
                else:
                    neg[c] = -l
            if bad:
                break
            if count[c] == 0:
                v = neg[c]
                if v == 0:
                    bad = 1
                    break
                if not false_[v]:
                    false_[v] = 1
                    queue[qn] = v
                    qn += 1
        if bad == 2:
            raise ValueError("clause has two negative literals")
        if bad:
            return None
        while qn > 0:
            qn -= 1
            v = queue[qn]
            for k in range(occ_start[v], occ_start[v] + occ_n[v]):
                c = occ[k]
                count[c] -= 1
                if count[c] == 0:
                    a = neg[c]
                    if a == 0:
                        return None
                    if not false_[a]:
                        false_[a] = 1
                        queue[qn] = a
                        qn += 1
        model = bytearray(n + 1)
        for v in range(1, n + 1):
            model[v] = 0 if false_[v] else 1
        return model
    finally:
        free(count); free(neg); free(occ_n); free(occ_start)
        free(occ); free(fill); free(false_); free(queue); free(mark)


cdef inline int _node(int l):
    return 2 * (l - 1) if l > 0 else 2 * (-l - 1) + 1


def two_sat(int n, const int[::1] lit, const int[::1] st):
    cdef Py_ssize_t m = st.shape[0] - 1
    cdef int N = 2 * n
    cdef int* deg = <int*>calloc(N + 1, sizeof(int))
    cdef int* head = <int*>calloc(N + 1, sizeof(int))
    cdef int* edges = <int*>malloc((2 * m + 1) * sizeof(int))
    cdef int* fill = <int*>calloc(N + 1, sizeof(int))
    cdef int* index = <int*>malloc((N + 1) * sizeof(int))
    cdef int* low = <int*>malloc((N + 1) * sizeof(int))
    cdef int* comp = <int*>malloc((N + 1) * sizeof(int))
    cdef char* on_stack = <char*>calloc(N + 1, 1)
    cdef int* stack = <int*>malloc((N + 1) * sizeof(int))
    cdef int* work = <int*>malloc((N + 1) * sizeof(int))
    cdef int* pos = <int*>malloc((N + 1) * sizeof(int))
    cdef Py_ssize_t c
    cdef int a, b, x, y, v, w, u, root, sp = 0, wp = 0, counter = 0, ncomp = 0, bad = 0
    try:
        for c in range(m):
            a = st[c]
            b = st[c + 1]
            if b - a == 0:
                bad = 1
                break
            if b - a > 2:
                bad = 2
                break
            x = _node(lit[a])
            if b - a == 1:
                deg[x ^ 1] += 1
            else:
                y = _node(lit[a + 1])
                deg[x ^ 1] += 1
                deg[y ^ 1] += 1
        if bad == 2:
            raise ValueError("clause longer than two literals")
        if bad:
            return None
        for v in range(N):
            head[v + 1] = head[v] + deg[v]
        for c in range(m):
            a = st[c]
            b = st[c + 1]
            x = _node(lit[a])
            if b - a == 1:
                edges[head[x ^ 1] + fill[x ^ 1]] = x
                fill[x ^ 1] += 1
            else:
                y = _node(lit[a + 1])
                edges[head[x ^ 1] + fill[x ^ 1]] = y
                fill[x ^ 1] += 1
                edges[head[y ^ 1] + fill[y ^ 1]] = x
                fill[y ^ 1] += 1
        for v in range(N):
            index[v] = -1
        for root in range(N):
            if index[root] != -1:
                continue
            index[root] = counter
            low[root] = counter
            counter += 1
            stack[sp] = root
            sp += 1
            on_stack[root] = 1
            work[0] = root
            pos[0] = head[root]
            wp = 1
            while wp > 0:
                v = work[wp - 1]
                if pos[wp - 1] < head[v + 1]:
                    w = edges[pos[wp - 1]]
                    pos[wp - 1] += 1
                    if index[w] == -1:
                        index[w] = counter
                        low[w] = counter
                        counter += 1
                        stack[sp] = w
                        sp += 1
                        on_stack[w] = 1
                        work[wp] = w
                        pos[wp] = head[w]
                        wp += 1
                    elif on_stack[w] and index[w] < low[v]:
                        low[v] = index[w]
                    continue
                wp -= 1
                if wp > 0:
                    u = work[wp - 1]
                    if low[v] < low[u]:
                        low[u] = low[v]
                if low[v] == index[v]:
                    while True:
                        sp -= 1
                        w = stack[sp]
                        on_stack[w] = 0
                        comp[w] = ncomp
                        if w == v:
                            break
                    ncomp += 1
        model = bytearray(n + 1)
        for v in range(1, n + 1):
            if comp[2 * (v - 1)] == comp[2 * (v - 1) + 1]:
                return None
            model[v] = 1 if comp[2 * (v - 1)] < comp[2 * (v - 1) + 1] else 0
        return model
    finally:
        free(deg); free(head); free(edges); free(fill)
        free(index); free(low); free(comp); free(on_stack); free(stack); free(work); free(pos)


cdef inline int _value(signed char* val, int l):
    cdef int x = val[l if l > 0 else -l]
    if x < 0:
        return -1
    return x if l > 0 else 1 - x


cdef struct _Db:
    int* arena
    Py_ssize_t used
    Py_ssize_t cap
    int* cstart
    int* clen
    int nc
    int ccap
    int** wl
    int* wn
    int* wcap


cdef int _grow_arena(_Db* db, Py_ssize_t need) except -1:
    cdef int* a
    if db.used + need <= db.cap:
        return 0
    while db.used + need > db.cap:
        db.cap = 2 * db.cap + 16
    a = <int*>realloc(db.arena, db.cap * sizeof(int))
    if a == NULL:
        raise MemoryError()
    db.arena = a
    return 0


cdef int _watch(_Db* db, int idx, int c) except -1:
    cdef int* w
    if db.wn[idx] == db.wcap[idx]:
        db.wcap[idx] = 2 * db.wcap[idx] + 4
        w = <int*>realloc(db.wl[idx], db.wcap[idx] * sizeof(int))
        if w == NULL:
            raise MemoryError()
        db.wl[idx] = w
    db.wl[idx][db.wn[idx]] = c
    db.wn[idx] += 1
    return 0


cdef int _add_clause(_Db* db, int n, int* lits, int k) except -1:
    cdef int i, c
    cdef int* p
    _grow_arena(db, k)
    if db.nc == db.ccap:
        db.ccap = 2 * db.ccap + 16
        p = <int*>realloc(db.cstart, db.ccap * sizeof(int))
        if p == NULL:
            raise MemoryError()
        db.cstart = p
        p = <int*>realloc(db.clen, db.ccap * sizeof(int))
        if p == NULL:
            raise MemoryError()
        db.clen = p
    c = db.nc
    db.cstart[c] = <int>db.used
    db.clen[c] = k
    for i in range(k):
        db.arena[db.used + i] = lits[i]
    db.used += k
    db.nc += 1
    _watch(db, n + lits[0], c)
    _watch(db, n + lits[1], c)
    return c


def dpll(int n, const int[::1] lit, const int[::1] st):
    cdef Py_ssize_t m = st.shape[0] - 1
    cdef _Db db
    cdef signed char* val = <signed char*>malloc(n + 1)
    cdef int* level = <int*>calloc(n + 1, sizeof(int))
    cdef int* reason = <int*>malloc((n + 1) * sizeof(int))
    cdef char* seen = <char*>calloc(n + 1, 1)
    cdef int* mark = <int*>calloc(2 * n + 1, sizeof(int))
    cdef int* trail = <int*>malloc((n + 1) * sizeof(int))
    cdef int* lim = <int*>malloc((n + 1) * sizeof(int))
    cdef int* buf = <int*>malloc((n + 2) * sizeof(int))
    cdef Py_ssize_t c, k
    cdef int i, j, l, q, v, x, cl, tn = 0, dn = 0, qhead = 0, nxt = 1, taut, size
    cdef int confl, false_lit, keep, first, found, counter, p, idx, back, best, cs, ln
    db.arena = NULL
    db.used = 0
    db.cap = 0
    db.cstart = NULL
    db.clen = NULL
    db.nc = 0
    db.ccap = 0
    db.wl = <int**>calloc(2 * n + 1, sizeof(int*))
    db.wn = <int*>calloc(2 * n + 1, sizeof(int))
    db.wcap = <int*>calloc(2 * n + 1, sizeof(int))
    try:
        for v in range(n + 1):
            val[v] = -1
            reason[v] = -1
        # load clauses: drop duplicate literals and tautologies, queue units
        for c in range(m):
            if st[c + 1] == st[c]:
                return None
            size = 0
            taut = 0
            for k in range(st[c], st[c + 1]):
                l = lit[k]
                if mark[n - l] == c + 1:
                    taut = 1
                if mark[n + l] != c + 1:
                    mark[n + l] = c + 1
                    buf[size] = l
                    size += 1
            if taut:
                continue
            if size == 1:
                l = buf[0]
                x = _value(val, l)
                if x == 0:
                    return None
                if x == -1:
                    val[l if l > 0 else -l] = 1 if l > 0 else 0
                    trail[tn] = l
                    tn += 1
                continue
            _add_clause(&db, n, buf, size)

        while True:
            # propagate the trail from qhead over the two-watched literals
            confl = -1
            while qhead < tn and confl < 0:
                false_lit = -trail[qhead]
                qhead += 1
                keep = 0
                j = 0
                while j < db.wn[n + false_lit]:
                    cl = db.wl[n + false_lit][j]
                    j += 1
                    cs = db.cstart[cl]
                    ln = db.clen[cl]
                    if db.arena[cs] == false_lit:
                        db.arena[cs] = db.arena[cs + 1]
                        db.arena[cs + 1] = false_lit
                    first = db.arena[cs]
                    if _value(val, first) == 1:
                        db.wl[n + false_lit][keep] = cl
                        keep += 1
                        continue
                    found = 0
                    for i in range(2, ln):
                        if _value(val, db.arena[cs + i]) != 0:
                            db.arena[cs + 1] = db.arena[cs + i]
                            db.arena[cs + i] = false_lit
                            _watch(&db, n + db.arena[cs + 1], cl)
                            found = 1
                            break
                    if found:
                        continue
                    db.wl[n + false_lit][keep] = cl
                    keep += 1
                    if _value(val, first) == 0:
                        confl = cl
                        while j < db.wn[n + false_lit]:
                            db.wl[n + false_lit][keep] = db.wl[n + false_lit][j]
                            keep += 1
                            j += 1
                        break
                    v = first if first > 0 else -first
                    val[v] = 1 if first > 0 else 0
                    level[v] = dn
                    reason[v] = cl
                    trail[tn] = first
                    tn += 1
                db.wn[n + false_lit] = keep

            if confl >= 0:
                if dn == 0:
                    return None
                # first-UIP analysis; buf[0] receives the asserting literal
                size = 1
                counter = 0
                p = 0
                idx = tn - 1
                cl = confl
                while True:
                    cs = db.cstart[cl]
                    ln = db.clen[cl]
                    for i in range(0 if p == 0 else 1, ln):
                        q = db.arena[cs + i]
                        v = q if q > 0 else -q
                        if not seen[v] and level[v] > 0:
                            seen[v] = 1
                            if level[v] == dn:
                                counter += 1
                            else:
                                buf[size] = q
                                size += 1
                    while not seen[trail[idx] if trail[idx] > 0 else -trail[idx]]:
                        idx -= 1
                    p = trail[idx]
                    idx -= 1
                    v = p if p > 0 else -p
                    seen[v] = 0
                    counter -= 1
                    if counter == 0:
                        break
                    cl = reason[v]
                buf[0] = -p
                for i in range(1, size):
                    seen[buf[i] if buf[i] > 0 else -buf[i]] = 0
                back = 0
                if size > 1:
                    best = 1
                    for i in range(2, size):
                        if level[buf[i] if buf[i] > 0 else -buf[i]] > level[buf[best] if buf[best] > 0 else -buf[best]]:
                            best = i
                    l = buf[1]
                    buf[1] = buf[best]
                    buf[best] = l
                    back = level[buf[1] if buf[1] > 0 else -buf[1]]
                while tn > lim[back]:
                    tn -= 1
                    l = trail[tn]
                    val[l if l > 0 else -l] = -1
                dn = back
                qhead = tn
                nxt = 1
                l = buf[0]
                v = l if l > 0 else -l
                val[v] = 1 if l > 0 else 0
                level[v] = dn
                reason[v] = _add_clause(&db, n, buf, size) if size > 1 else -1
                trail[tn] = l
                tn += 1
                continue

            while nxt <= n and val[nxt] != -1:
                nxt += 1
            if nxt > n:
                model = bytearray(n + 1)
                for v in range(1, n + 1):
                    model[v] = val[v]
                return model
            lim[dn] = tn
            dn += 1
            val[nxt] = 1
            level[nxt] = dn
            reason[nxt] = -1
            trail[tn] = nxt
            tn += 1
    finally:
        for i in range(2 * n + 1):
            free(db.wl[i])
        free(db.wl); free(db.wn); free(db.wcap)
        free(db.arena); free(db.cstart); free(db.clen)
        free(val); free(level); free(reason); free(seen); free(mark)
        free(trail); free(lim); free(buf)
