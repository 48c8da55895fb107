"""Pure-Python kernels. Same contract as the compiled ``_ckernels`` module.

Both kernels take plain arrays so they can be swapped freely:

``greedy_rounds(owners, indptr, indices, bids, n_operators)``
    Runs the greedy allocation loop over a CSR conflict graph whose station
    ids are grouped by owner. Returns a list of
    ``(winner, residual_score, critical_or_-1, price, allocated_ids)``.

``mwis(adj_masks, weights, alive)``
    Exact maximum-weight independent set restricted to the stations in the
    ``alive`` bitmask. Returns ``(set_mask, weight, nodes_explored)``. Among
    optima the winner is the one containing the lowest station id at the
    first station where two optima differ.
"""
from __future__ import annotations

BACKEND = "python"
MAX_MWIS_STATIONS = None  # unbounded: Python ints are arbitrary-width bitsets


def greedy_rounds(owners, indptr, indices, bids, n_operators):
    owners = [int(o) for o in owners]
    indptr = [int(p) for p in indptr]
    indices = [int(v) for v in indices]
    bids = [int(b) for b in bids]
    m = len(owners)

    start = [0] * (n_operators + 1)
    for o in owners:
        start[o + 1] += 1
    for i in range(n_operators):
        start[i + 1] += start[i]

    alive = [True] * m
    score = [sum(bids[start[i]:start[i + 1]]) for i in range(n_operators)]
    count = [start[i + 1] - start[i] for i in range(n_operators)]
    lam = [0] * n_operators
    hit = [False] * n_operators
    seen = [-1] * m
    remaining = m
    rounds = []
    rnd = 0

    while remaining:
        winner = -1
        for i in range(n_operators):
            if count[i] and (winner < 0 or score[i] > score[winner]):
                winner = i
        own = [s for s in range(start[winner], start[winner + 1]) if alive[s]]

        nbhd = []
        touched = []
        for s in own:
            for u in indices[indptr[s]:indptr[s + 1]]:
                if alive[u] and seen[u] != rnd:
                    seen[u] = rnd
                    nbhd.append(u)
                    k = owners[u]
                    if not hit[k]:
                        hit[k] = True
                        touched.append(k)
                    lam[k] += bids[u]

        critical, price = -1, 0
        for k in sorted(touched):
            if critical < 0 or lam[k] > price:
                critical, price = k, lam[k]
            lam[k] = 0
            hit[k] = False

        rounds.append((winner, score[winner], critical, price, tuple(own)))
        for s in own + nbhd:
            alive[s] = False
            k = owners[s]
            score[k] -= bids[s]
            count[k] -= 1
        remaining -= len(own) + len(nbhd)
        rnd += 1
    return rounds


def _lowest_bit_index(x):
    return (x & -x).bit_length() - 1


def _prefer(candidate, incumbent):
    diff = candidate ^ incumbent
    return bool(candidate & diff & -diff)


def mwis(adj_masks, weights, alive):
    adj = [int(a) for a in adj_masks]
    w = [int(x) for x in weights]
    best = [-1, 0]
    nodes = 0

    def mask_weight(mask):
        total = 0
        while mask:
            low = mask & -mask
            total += w[low.bit_length() - 1]
            mask ^= low
        return total

    def visit(alive, cur_mask, cur_w):
        nonlocal nodes
        nodes += 1
        bound = cur_w + mask_weight(alive)
        if bound < best[0]:
            return
        pick, pick_deg = -1, 0
        rest = alive
        while rest:
            low = rest & -rest
            v = low.bit_length() - 1
            rest ^= low
            deg = (adj[v] & alive).bit_count()
            if deg > pick_deg:
                pick, pick_deg = v, deg
        if pick < 0:
            cand = cur_mask | alive
            if bound > best[0] or (bound == best[0] and _prefer(cand, best[1])):
                best[0], best[1] = bound, cand
            return
        bit = 1 << pick
        visit(alive & ~bit & ~adj[pick], cur_mask | bit, cur_w + w[pick])
        visit(alive & ~bit, cur_mask, cur_w)

    visit(int(alive), 0, 0)
    return best[1], best[0], nodes
