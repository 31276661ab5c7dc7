# cython: language_level=3
"""Compiled fixpoint kernel: the Cython twin of ``pure.py``.

Same algorithms, same tie-breaking, same outputs; only the inner loops are
typed.  Any semantic change here must be mirrored in the pure kernel.
"""
from cpython.mem cimport PyMem_Free, PyMem_Malloc

NAME = "compiled"


cdef struct Buffers:
    int *owners
    int *succ_ptr
    int *succ
    int *pred_ptr
    int *pred


cdef int *_alloc(Py_ssize_t count) except NULL:
    cdef int *p = <int *> PyMem_Malloc(count * sizeof(int))
    if p == NULL:
        raise MemoryError()
    return p


cdef int *_copy_list(list values) except NULL:
    cdef Py_ssize_t k = len(values)
    cdef int *p = _alloc(k if k > 0 else 1)
    cdef Py_ssize_t i
    for i in range(k):
        p[i] = values[i]
    return p


def attract(n, owners, succ_ptr, succ, pred_ptr, pred, alive, live, targets, exist):
    """See ``pure.attract``; identical contract."""
    cdef int cn = n
    cdef int e0 = 1 if exist[0] else 0
    cdef int e1 = 1 if exist[1] else 0
    cdef int e2 = 1 if exist[2] else 0
    cdef int *c_owners = _copy_list(list(owners))
    cdef int *c_pred_ptr = _copy_list(list(pred_ptr))
    cdef int *c_pred = _copy_list(list(pred))
    cdef int *c_alive = _copy_list(list(alive))
    cdef int *c_live = _copy_list(list(live))
    cdef int *mark = _alloc(cn if cn > 0 else 1)
    cdef int *cnt = _alloc(cn if cn > 0 else 1)
    cdef int *stamped = _alloc(cn if cn > 0 else 1)
    cdef int *choice = _alloc(cn if cn > 0 else 1)
    cdef int *queue = _alloc(cn if cn > 0 else 1)
    cdef int qlen = 0, qi = 0
    cdef int t, s, j, o, take
    try:
        for s in range(cn):
            mark[s] = 0
            stamped[s] = 0
            choice[s] = -1
        for t in targets:
            if c_alive[t] and not mark[t]:
                mark[t] = 1
                queue[qlen] = t
                qlen += 1
        while qi < qlen:
            t = queue[qi]
            qi += 1
            for j in range(c_pred_ptr[t], c_pred_ptr[t + 1]):
                s = c_pred[j]
                if not c_alive[s] or mark[s]:
                    continue
                o = c_owners[s]
                take = (o == 0 and e0) or (o == 1 and e1) or (o == 2 and e2)
                if take:
                    mark[s] = 1
                    choice[s] = t
                    queue[qlen] = s
                    qlen += 1
                else:
                    if not stamped[s]:
                        stamped[s] = 1
                        cnt[s] = c_live[s]
                    cnt[s] -= 1
                    if cnt[s] == 0:
                        mark[s] = 1
                        queue[qlen] = s
                        qlen += 1
        order = [queue[j] for j in range(qlen)]
        out_choice = [choice[s] for s in range(cn)]
        return order, out_choice
    finally:
        PyMem_Free(c_owners)
        PyMem_Free(c_pred_ptr)
        PyMem_Free(c_pred)
        PyMem_Free(c_alive)
        PyMem_Free(c_live)
        PyMem_Free(mark)
        PyMem_Free(cnt)
        PyMem_Free(stamped)
        PyMem_Free(choice)
        PyMem_Free(queue)


cdef int _attract_sub(int player, int *targets, int tlen, int run,
                      Buffers *b, int *alive, int *live,
                      int *mark, int *cnt, int *stamp,
                      int *choice_out, int *queue) nogil:
    cdef int qlen = 0, qi = 0
    cdef int t, s, j
    for j in range(tlen):
        t = targets[j]
        mark[t] = run
        queue[qlen] = t
        qlen += 1
    while qi < qlen:
        t = queue[qi]
        qi += 1
        for j in range(b.pred_ptr[t], b.pred_ptr[t + 1]):
            s = b.pred[j]
            if not alive[s] or mark[s] == run:
                continue
            if b.owners[s] == player:
                mark[s] = run
                choice_out[s] = t
                queue[qlen] = s
                qlen += 1
            else:
                if stamp[s] != run:
                    stamp[s] = run
                    cnt[s] = live[s]
                cnt[s] -= 1
                if cnt[s] == 0:
                    mark[s] = run
                    queue[qlen] = s
                    qlen += 1
    return qlen


def solve_parity(n, owners, priorities, succ_ptr, succ, pred_ptr, pred):
    """See ``pure.solve_parity``; identical contract."""
    cdef int cn = n
    cdef Buffers b
    b.owners = _copy_list(list(owners))
    b.succ_ptr = _copy_list(list(succ_ptr))
    b.succ = _copy_list(list(succ))
    b.pred_ptr = _copy_list(list(pred_ptr))
    b.pred = _copy_list(list(pred))
    cdef int *prio = _copy_list(list(priorities))
    cdef Py_ssize_t scratch = cn if cn > 0 else 1
    cdef int *alive = _alloc(scratch)
    cdef int *live = _alloc(scratch)
    cdef int *winner = _alloc(scratch)
    cdef int *ch0 = _alloc(scratch)
    cdef int *ch1 = _alloc(scratch)
    cdef int *mark = _alloc(scratch)
    cdef int *cnt = _alloc(scratch)
    cdef int *stamp = _alloc(scratch)
    cdef int *queue = _alloc(scratch)
    cdef int *targets = _alloc(scratch)
    # Removed-state pool: segments of active frames are disjoint, so n slots
    # suffice; each frame records its (start, length) window.
    cdef int *pool = _alloc(scratch)
    cdef int depth_cap = cn + 2
    cdef int *f_phase = _alloc(depth_cap)
    cdef int *f_player = _alloc(depth_cap)
    cdef int *f_prio = _alloc(depth_cap)
    cdef int *f_start = _alloc(depth_cap)
    cdef int *f_len = _alloc(depth_cap)
    cdef int depth, run, pool_top
    cdef int s, j, t, m, i, opp, tlen, seg, start, best, has_opp
    cdef int *chi
    try:
        for s in range(cn):
            alive[s] = 1
            live[s] = b.succ_ptr[s + 1] - b.succ_ptr[s]
            winner[s] = -1
            ch0[s] = -1
            ch1[s] = -1
            mark[s] = 0
            cnt[s] = 0
            stamp[s] = 0
        run = 0
        pool_top = 0
        depth = 1
        f_phase[0] = 0
        while depth > 0:
            if f_phase[depth - 1] == 0:
                m = -1
                for s in range(cn):
                    if alive[s] and (m < 0 or prio[s] < m):
                        m = prio[s]
                if m < 0:
                    depth -= 1
                    continue
                i = m & 1
                tlen = 0
                for s in range(cn):
                    if alive[s] and prio[s] == m:
                        targets[tlen] = s
                        tlen += 1
                chi = ch0 if i == 0 else ch1
                run += 1
                seg = _attract_sub(i, targets, tlen, run, &b, alive, live,
                                   mark, cnt, stamp, chi, queue)
                start = pool_top
                for j in range(seg):
                    s = queue[j]
                    pool[pool_top] = s
                    pool_top += 1
                    alive[s] = 0
                for j in range(seg):
                    s = pool[start + j]
                    for t in range(b.pred_ptr[s], b.pred_ptr[s + 1]):
                        live[b.pred[t]] -= 1
                f_phase[depth - 1] = 1
                f_player[depth - 1] = i
                f_prio[depth - 1] = m
                f_start[depth - 1] = start
                f_len[depth - 1] = seg
                f_phase[depth] = 0
                depth += 1
            elif f_phase[depth - 1] == 1:
                i = f_player[depth - 1]
                opp = 1 - i
                has_opp = 0
                for s in range(cn):
                    if alive[s] and winner[s] == opp:
                        has_opp = 1
                        break
                start = f_start[depth - 1]
                seg = f_len[depth - 1]
                if not has_opp:
                    # restore the attractor, award everything to player i
                    for j in range(seg):
                        s = pool[start + j]
                        alive[s] = 1
                        for t in range(b.pred_ptr[s], b.pred_ptr[s + 1]):
                            live[b.pred[t]] += 1
                    chi = ch0 if i == 0 else ch1
                    m = f_prio[depth - 1]
                    for j in range(seg):
                        s = pool[start + j]
                        winner[s] = i
                        if b.owners[s] == i and prio[s] == m:
                            best = -1
                            for t in range(b.succ_ptr[s], b.succ_ptr[s + 1]):
                                if alive[b.succ[t]] and (best < 0 or b.succ[t] < best):
                                    best = b.succ[t]
                            chi[s] = best
                    pool_top = start
                    depth -= 1
                else:
                    tlen = 0
                    for s in range(cn):
                        if alive[s] and winner[s] == opp:
                            targets[tlen] = s
                            tlen += 1
                    for j in range(seg):
                        s = pool[start + j]
                        alive[s] = 1
                        for t in range(b.pred_ptr[s], b.pred_ptr[s + 1]):
                            live[b.pred[t]] += 1
                    pool_top = start
                    chi = ch0 if opp == 0 else ch1
                    run += 1
                    seg = _attract_sub(opp, targets, tlen, run, &b, alive, live,
                                       mark, cnt, stamp, chi, queue)
                    start = pool_top
                    for j in range(seg):
                        s = queue[j]
                        winner[s] = opp
                        pool[pool_top] = s
                        pool_top += 1
                        alive[s] = 0
                    for j in range(seg):
                        s = pool[start + j]
                        for t in range(b.pred_ptr[s], b.pred_ptr[s + 1]):
                            live[b.pred[t]] -= 1
                    f_phase[depth - 1] = 2
                    f_start[depth - 1] = start
                    f_len[depth - 1] = seg
                    f_phase[depth] = 0
                    depth += 1
            else:
                start = f_start[depth - 1]
                seg = f_len[depth - 1]
                for j in range(seg):
                    s = pool[start + j]
                    alive[s] = 1
                    for t in range(b.pred_ptr[s], b.pred_ptr[s + 1]):
                        live[b.pred[t]] += 1
                pool_top = start
                depth -= 1
        out_winner = [winner[s] for s in range(cn)]
        out0 = [ch0[s] for s in range(cn)]
        out1 = [ch1[s] for s in range(cn)]
        return out_winner, out0, out1
    finally:
        PyMem_Free(b.owners)
        PyMem_Free(b.succ_ptr)
        PyMem_Free(b.succ)
        PyMem_Free(b.pred_ptr)
        PyMem_Free(b.pred)
        PyMem_Free(prio)
        PyMem_Free(alive)
        PyMem_Free(live)
        PyMem_Free(winner)
        PyMem_Free(ch0)
        PyMem_Free(ch1)
        PyMem_Free(mark)
        PyMem_Free(cnt)
        PyMem_Free(stamp)
        PyMem_Free(queue)
        PyMem_Free(targets)
        PyMem_Free(pool)
        PyMem_Free(f_phase)
        PyMem_Free(f_player)
        PyMem_Free(f_prio)
        PyMem_Free(f_start)
        PyMem_Free(f_len)
