# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled twin of the pure-Python graph kernels.

Same contracts as ``weakspe._pykernel``; see that module for semantics.
Pair masks are limited to 64 bits here; the dispatcher falls back to the
pure kernel for wider constraint systems.
"""

from cpython.bytearray cimport PyByteArray_AS_STRING
from libc.stdlib cimport free, malloc


cdef struct Buffers:
    int *idx
    int *low
    int *ptr
    char *on
    int *scc_stack
    int *call


cdef int _alloc(Buffers *b, int nv) except -1:
    b.idx = <int *> malloc(nv * sizeof(int))
    b.low = <int *> malloc(nv * sizeof(int))
    b.ptr = <int *> malloc(nv * sizeof(int))
    b.on = <char *> malloc(nv)
    b.scc_stack = <int *> malloc(nv * sizeof(int))
    b.call = <int *> malloc(nv * sizeof(int))
    if not (b.idx and b.low and b.ptr and b.on and b.scc_stack and b.call):
        _release(b)
        raise MemoryError()
    return 0


cdef void _release(Buffers *b) noexcept:
    free(b.idx)
    free(b.low)
    free(b.ptr)
    free(b.on)
    free(b.scc_stack)
    free(b.call)


cdef list _sccs_c(int nv, const int[:] succ_flat, const int[:] succ_off,
                  list members, const char *in_sub, Buffers *b):
    cdef int v, w, root, j, counter = 0, sp = 0, cp = 0
    cdef bint advanced
    cdef list comps = [], comp
    for v in range(nv):
        b.idx[v] = -1
        b.on[v] = 0
    for root in members:
        if b.idx[root] != -1:
            continue
        b.idx[root] = counter
        b.low[root] = counter
        counter += 1
        b.ptr[root] = succ_off[root]
        b.on[root] = 1
        b.scc_stack[sp] = root
        sp += 1
        b.call[0] = root
        cp = 1
        while cp > 0:
            v = b.call[cp - 1]
            advanced = False
            while b.ptr[v] < succ_off[v + 1]:
                w = succ_flat[b.ptr[v]]
                b.ptr[v] += 1
                if not in_sub[w]:
                    continue
                if b.idx[w] == -1:
                    b.idx[w] = counter
                    b.low[w] = counter
                    counter += 1
                    b.ptr[w] = succ_off[w]
                    b.on[w] = 1
                    b.scc_stack[sp] = w
                    sp += 1
                    b.call[cp] = w
                    cp += 1
                    advanced = True
                    break
                if b.on[w] and b.idx[w] < b.low[v]:
                    b.low[v] = b.idx[w]
            if advanced:
                continue
            cp -= 1
            if cp > 0 and b.low[v] < b.low[b.call[cp - 1]]:
                b.low[b.call[cp - 1]] = b.low[v]
            if b.low[v] == b.idx[v]:
                comp = []
                while True:
                    sp -= 1
                    w = b.scc_stack[sp]
                    b.on[w] = 0
                    comp.append(w)
                    if w == v:
                        break
                comp.sort()
                comps.append(comp)
    return comps


def sccs(int nv, const int[:] succ_flat, const int[:] succ_off, members):
    cdef bytearray sub_ba = bytearray(nv)
    cdef char *in_sub = PyByteArray_AS_STRING(sub_ba)
    cdef int v
    cdef list mlist = list(members)
    for v in mlist:
        in_sub[v] = 1
    cdef Buffers b
    _alloc(&b, nv)
    try:
        comps = _sccs_c(nv, succ_flat, succ_off, mlist, in_sub, &b)
    finally:
        _release(&b)
    comps.sort()
    return comps


def streett_good_sets(int nv, const int[:] succ_flat, const int[:] succ_off,
                      members, const unsigned long long[:] g_masks,
                      const unsigned long long[:] r_masks):
    cdef bytearray sub_ba = bytearray(nv)
    cdef char *in_sub = PyByteArray_AS_STRING(sub_ba)
    cdef list good = [], work = [list(members)], cand, comps, comp, sub
    cdef unsigned long long present_g, present_r, violated
    cdef int v, j
    cdef bint has_loop
    cdef Buffers b
    _alloc(&b, nv)
    try:
        while work:
            cand = work.pop()
            for v in cand:
                in_sub[v] = 1
            comps = _sccs_c(nv, succ_flat, succ_off, cand, in_sub, &b)
            for v in cand:
                in_sub[v] = 0
            for comp in comps:
                if len(comp) == 1:
                    v = comp[0]
                    has_loop = False
                    for j in range(succ_off[v], succ_off[v + 1]):
                        if succ_flat[j] == v:
                            has_loop = True
                            break
                    if not has_loop:
                        continue
                present_g = 0
                present_r = 0
                for v in comp:
                    present_g |= g_masks[v]
                    present_r |= r_masks[v]
                violated = present_g & ~present_r
                if violated == 0:
                    good.append(comp)
                else:
                    sub = [v for v in comp if not g_masks[v] & violated]
                    if sub:
                        work.append(sub)
    finally:
        _release(&b)
    good.sort()
    return good


def closure_to(int nv, const int[:] pred_flat, const int[:] pred_off,
               const unsigned char[:] allowed, seeds):
    cdef bytearray mask_ba = bytearray(nv)
    cdef char *mask = PyByteArray_AS_STRING(mask_ba)
    cdef int *stack = <int *> malloc(nv * sizeof(int))
    if not stack:
        raise MemoryError()
    cdef int sp = 0, s, v, u, j
    try:
        for s in seeds:
            if allowed[s] and not mask[s]:
                mask[s] = 1
                stack[sp] = s
                sp += 1
        while sp > 0:
            sp -= 1
            v = stack[sp]
            for j in range(pred_off[v], pred_off[v + 1]):
                u = pred_flat[j]
                if allowed[u] and not mask[u]:
                    mask[u] = 1
                    stack[sp] = u
                    sp += 1
    finally:
        free(stack)
    return mask_ba


def reach_from(int nv, const int[:] succ_flat, const int[:] succ_off,
               const unsigned char[:] allowed, int start):
    cdef bytearray mask_ba = bytearray(nv)
    cdef char *mask = PyByteArray_AS_STRING(mask_ba)
    if not allowed[start]:
        return mask_ba
    cdef int *stack = <int *> malloc(nv * sizeof(int))
    if not stack:
        raise MemoryError()
    cdef int sp = 0, v, w, j
    mask[start] = 1
    stack[0] = start
    sp = 1
    try:
        while sp > 0:
            sp -= 1
            v = stack[sp]
            for j in range(succ_off[v], succ_off[v + 1]):
                w = succ_flat[j]
                if allowed[w] and not mask[w]:
                    mask[w] = 1
                    stack[sp] = w
                    sp += 1
    finally:
        free(stack)
    return mask_ba
