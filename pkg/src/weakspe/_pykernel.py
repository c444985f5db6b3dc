"""Pure-Python graph kernels: the reference twin of the compiled extension.

All functions work on the compressed adjacency arrays cached by
``GameGraph.csr`` and on dense vertex indices.  ``members`` arguments list
the vertices of the sub-arena under consideration; masks are bytearrays of
length ``nv`` with one flag per vertex.
"""

from __future__ import annotations


def sccs(nv, succ_flat, succ_off, members):
    """Strongly connected components of the subgraph induced by ``members``.

    Returns each component as an ascending list; components are ordered
    lexicographically.  Singletons without a self-loop are included (callers
    that need a cycle must filter them).
    """
    in_sub = bytearray(nv)
    for v in members:
        in_sub[v] = 1
    comps = _sccs(nv, succ_flat, succ_off, members, in_sub)
    comps.sort()
    return comps


def _sccs(nv, succ_flat, succ_off, members, in_sub):
    # Iterative Tarjan; recursion depth would be |members| otherwise.
    idx = [-1] * nv
    low = [0] * nv
    ptr = [0] * nv
    on = bytearray(nv)
    scc_stack: list[int] = []
    comps: list[list[int]] = []
    counter = 0
    for root in members:
        if idx[root] != -1:
            continue
        idx[root] = low[root] = counter
        counter += 1
        ptr[root] = succ_off[root]
        on[root] = 1
        scc_stack.append(root)
        call = [root]
        while call:
            v = call[-1]
            advanced = False
            while ptr[v] < succ_off[v + 1]:
                w = succ_flat[ptr[v]]
                ptr[v] += 1
                if not in_sub[w]:
                    continue
                if idx[w] == -1:
                    idx[w] = low[w] = counter
                    counter += 1
                    ptr[w] = succ_off[w]
                    on[w] = 1
                    scc_stack.append(w)
                    call.append(w)
                    advanced = True
                    break
                if on[w] and idx[w] < low[v]:
                    low[v] = idx[w]
            if advanced:
                continue
            call.pop()
            if call and low[v] < low[call[-1]]:
                low[call[-1]] = low[v]
            if low[v] == idx[v]:
                comp = []
                while True:
                    w = scc_stack.pop()
                    on[w] = 0
                    comp.append(w)
                    if w == v:
                        break
                comp.sort()
                comps.append(comp)
    return comps


def streett_good_sets(nv, succ_flat, succ_off, members, g_masks, r_masks):
    """Maximal vertex sets hosting a cycle that meets every (G, R) constraint.

    A set qualifies when it is strongly connected inside ``members``, has at
    least one internal edge, and for every pair j: it misses G_j or meets
    R_j.  The search decomposes into components and repeatedly deletes the
    G-vertices of violated pairs, so the returned sets are pairwise disjoint
    and the result is independent of traversal order.  ``g_masks``/``r_masks``
    give, per vertex, the bitmask of pairs whose G (resp. R) contains it.
    """
    in_sub = bytearray(nv)
    good: list[list[int]] = []
    work = [list(members)]
    while work:
        cand = work.pop()
        for v in cand:
            in_sub[v] = 1
        comps = _sccs(nv, succ_flat, succ_off, cand, in_sub)
        for v in cand:
            in_sub[v] = 0
        for comp in comps:
            if len(comp) == 1:
                v = comp[0]
                if not any(succ_flat[j] == v for j in range(succ_off[v], succ_off[v + 1])):
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
    good.sort()
    return good


def closure_to(nv, pred_flat, pred_off, allowed, seeds):
    """Vertices inside ``allowed`` that can reach a seed along allowed vertices."""
    mask = bytearray(nv)
    stack = []
    for s in seeds:
        if allowed[s] and not mask[s]:
            mask[s] = 1
            stack.append(s)
    while stack:
        v = stack.pop()
        for j in range(pred_off[v], pred_off[v + 1]):
            u = pred_flat[j]
            if allowed[u] and not mask[u]:
                mask[u] = 1
                stack.append(u)
    return mask


def reach_from(nv, succ_flat, succ_off, allowed, start):
    """Vertices reachable from ``start`` along allowed vertices (start included)."""
    mask = bytearray(nv)
    if not allowed[start]:
        return mask
    mask[start] = 1
    stack = [start]
    while stack:
        v = stack.pop()
        for j in range(succ_off[v], succ_off[v + 1]):
            w = succ_flat[j]
            if allowed[w] and not mask[w]:
                mask[w] = 1
                stack.append(w)
    return mask
