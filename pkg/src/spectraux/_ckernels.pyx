# cython: language_level=3
"""Compiled kernels. Same contract as ``spectraux._pykernels``.

The MWIS search packs station sets into one 64-bit word, so it is limited
to 64 stations; larger requests are routed to the Python kernel.
"""
from libc.stdint cimport int64_t, uint64_t
from libc.stdlib cimport calloc, free

import numpy as np

BACKEND = "cython"
MAX_MWIS_STATIONS = 64


cdef extern from *:
    int popcount64 "__builtin_popcountll"(unsigned long long x) nogil
    int ctz64 "__builtin_ctzll"(unsigned long long x) nogil


def greedy_rounds(owners, indptr, indices, bids, int n_operators):
    cdef const int64_t[::1] own_v = np.ascontiguousarray(owners, dtype=np.int64)
    cdef const int64_t[::1] ptr_v = np.ascontiguousarray(indptr, dtype=np.int64)
    cdef const int64_t[::1] idx_v = np.ascontiguousarray(indices, dtype=np.int64)
    cdef const int64_t[::1] bid_v = np.ascontiguousarray(bids, dtype=np.int64)
    cdef Py_ssize_t m = own_v.shape[0]
    cdef Py_ssize_t i, s, e, u, k, winner, critical, remaining, n_own, n_nb
    cdef int64_t price
    cdef int rnd = 0

    cdef int64_t[::1] start = np.zeros(n_operators + 1, dtype=np.int64)
    cdef int64_t[::1] score = np.zeros(n_operators, dtype=np.int64)
    cdef int64_t[::1] count = np.zeros(n_operators, dtype=np.int64)
    cdef int64_t[::1] lam = np.zeros(n_operators, dtype=np.int64)
    cdef unsigned char[::1] hit = np.zeros(n_operators, dtype=np.uint8)
    cdef unsigned char[::1] alive = np.ones(m, dtype=np.uint8)
    cdef int64_t[::1] seen = np.full(m, -1, dtype=np.int64)
    cdef int64_t[::1] own_buf = np.zeros(m, dtype=np.int64)
    cdef int64_t[::1] nb_buf = np.zeros(m, dtype=np.int64)

    for s in range(m):
        k = own_v[s]
        start[k + 1] += 1
        score[k] += bid_v[s]
        count[k] += 1
    for i in range(n_operators):
        start[i + 1] += start[i]

    rounds = []
    remaining = m
    while remaining > 0:
        winner = -1
        for i in range(n_operators):
            if count[i] > 0 and (winner < 0 or score[i] > score[winner]):
                winner = i

        n_own = 0
        for s in range(start[winner], start[winner + 1]):
            if alive[s]:
                own_buf[n_own] = s
                n_own += 1

        n_nb = 0
        for i in range(n_own):
            s = own_buf[i]
            for e in range(ptr_v[s], ptr_v[s + 1]):
                u = idx_v[e]
                if alive[u] and seen[u] != rnd:
                    seen[u] = rnd
                    nb_buf[n_nb] = u
                    n_nb += 1
                    k = own_v[u]
                    hit[k] = 1
                    lam[k] += bid_v[u]

        critical = -1
        price = 0
        for k in range(n_operators):
            if hit[k]:
                if critical < 0 or lam[k] > price:
                    critical = k
                    price = lam[k]
                lam[k] = 0
                hit[k] = 0

        rounds.append((int(winner), int(score[winner]), int(critical), int(price),
                       tuple([int(own_buf[i]) for i in range(n_own)])))

        for i in range(n_own):
            s = own_buf[i]
            alive[s] = 0
            score[winner] -= bid_v[s]
            count[winner] -= 1
        for i in range(n_nb):
            u = nb_buf[i]
            alive[u] = 0
            k = own_v[u]
            score[k] -= bid_v[u]
            count[k] -= 1
        remaining -= n_own + n_nb
        rnd += 1
    return rounds


cdef struct Search:
    uint64_t* adj
    int64_t* w
    uint64_t best_mask
    int64_t best_w
    int64_t nodes


cdef inline int64_t _mask_weight(Search* st, uint64_t mask) noexcept nogil:
    cdef int64_t total = 0
    while mask:
        total += st.w[ctz64(mask)]
        mask &= mask - 1
    return total


cdef inline bint _prefer(uint64_t cand, uint64_t inc) noexcept nogil:
    cdef uint64_t diff = cand ^ inc
    return (cand & diff & (~diff + 1)) != 0


cdef void _visit(Search* st, uint64_t alive, uint64_t cur_mask, int64_t cur_w) noexcept nogil:
    cdef int64_t bound
    cdef int pick, pick_deg, v, deg
    cdef uint64_t rest, bit, cand
    st.nodes += 1
    bound = cur_w + _mask_weight(st, alive)
    if bound < st.best_w:
        return
    pick = -1
    pick_deg = 0
    rest = alive
    while rest:
        v = ctz64(rest)
        rest &= rest - 1
        deg = popcount64(st.adj[v] & alive)
        if deg > pick_deg:
            pick = v
            pick_deg = deg
    if pick < 0:
        cand = cur_mask | alive
        if bound > st.best_w or (bound == st.best_w and _prefer(cand, st.best_mask)):
            st.best_w = bound
            st.best_mask = cand
        return
    bit = (<uint64_t>1) << pick
    _visit(st, alive & ~bit & ~st.adj[pick], cur_mask | bit, cur_w + st.w[pick])
    _visit(st, alive & ~bit, cur_mask, cur_w)


def mwis(adj_masks, weights, alive):
    cdef Py_ssize_t m = len(weights)
    cdef Py_ssize_t i
    cdef Search st
    cdef uint64_t start_mask
    if m > MAX_MWIS_STATIONS:
        raise ValueError(f"compiled MWIS supports at most {MAX_MWIS_STATIONS} stations, got {m}")
    st.adj = <uint64_t*> calloc(m + 1, sizeof(uint64_t))
    st.w = <int64_t*> calloc(m + 1, sizeof(int64_t))
    if st.adj == NULL or st.w == NULL:
        free(st.adj)
        free(st.w)
        raise MemoryError()
    try:
        for i in range(m):
            st.adj[i] = <uint64_t> int(adj_masks[i])
            st.w[i] = <int64_t> int(weights[i])
        st.best_mask = 0
        st.best_w = -1
        st.nodes = 0
        start_mask = <uint64_t> int(alive)
        with nogil:
            _visit(&st, start_mask, 0, 0)
        return int(st.best_mask), int(st.best_w), int(st.nodes)
    finally:
        free(st.adj)
        free(st.w)
