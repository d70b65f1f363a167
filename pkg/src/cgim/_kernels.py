"""Compiled inner loops.

All spread computations go through :func:`spread`, a synchronous-round
frontier simulation layered over a read-only *base* state (``bact``/``bcnt``)
plus a sparse scratch overlay (``xact``/``xcnt``). Every node whose overlay
entry changes is recorded in ``touched`` so callers can either discard the
overlay (marginal gains) or fold it into the base (commits) in time
proportional to the nodes actually reached.

``xact`` codes: 0 untouched, 1 active, 2 staged for activation at round end.
"""
from __future__ import annotations

import math

import numpy as np
from numba import njit, uint64

LINEAR, CONCAVE_SQUARE, CONVEX_SQRT, CONSTANT, POWER_LAW = 0, 1, 2, 3, 4

_GOLDEN = uint64(0x9E3779B97F4A7C15)
_M1 = uint64(0xBF58476D1CE4E5B9)
_M2 = uint64(0x94D049BB133111EB)


@njit(inline="always")
def _mix(z):
    z = (z ^ (z >> uint64(30))) * _M1
    z = (z ^ (z >> uint64(27))) * _M2
    return z ^ (z >> uint64(31))


@njit(inline="always")
def uniform(key, a, b):
    """Counter-based U[0,1) for (key, a, b); splitmix64 finalizer."""
    z = _mix(uint64(key) + uint64(a) * _GOLDEN)
    z = _mix(z + (uint64(b) + uint64(1)) * _GOLDEN)
    return float(z >> uint64(11)) * (1.0 / 9007199254740992.0)


@njit(inline="always")
def inverse_cdf(variant, param, u):
    if variant == LINEAR:
        return u
    if variant == CONCAVE_SQUARE:
        return u * u
    if variant == CONVEX_SQRT:
        return math.sqrt(u)
    if variant == CONSTANT:
        return param
    return u ** (1.0 / (param - 1.0))


@njit(inline="always")
def requirement(delta, degree):
    m = int(math.ceil(delta * degree))
    return m if m > 1 else 1


@njit(nogil=True, cache=True)
def spread(indptr, indices, req, bact, bcnt, seeds,
           xact, xcnt, mark, touched, front, nxt, rounds,
           lazy, indeg, variant, param, key, sim):
    """Run the cascade from ``seeds`` over the base state.

    Returns ``(new, ntouched, nrounds)``: nodes newly activated (seeds
    included), length of the ``touched`` prefix, and the number of rounds
    after the seeding round. ``rounds[t]`` receives the activations of round
    ``t`` (``rounds[0]`` the seeds). With ``lazy`` set, ``req[w]`` is drawn
    from the counter-based generator the first time ``w`` is reached.
    """
    ntouch = 0
    nf = 0
    for i in range(seeds.shape[0]):
        s = seeds[i]
        if bact[s] == 0 and xact[s] == 0:
            xact[s] = 1
            front[nf] = s
            nf += 1
            if mark[s] == 0:
                mark[s] = 1
                touched[ntouch] = s
                ntouch += 1
    new = nf
    rounds[0] = nf
    t = 0
    while nf > 0:
        nn = 0
        for i in range(nf):
            u = front[i]
            for j in range(indptr[u], indptr[u + 1]):
                w = indices[j]
                if mark[w] == 0:
                    mark[w] = 1
                    touched[ntouch] = w
                    ntouch += 1
                    if lazy:
                        req[w] = requirement(
                            inverse_cdf(variant, param, uniform(key, sim, w)), indeg[w])
                xcnt[w] += 1
                if bact[w] == 0 and xact[w] == 0 and bcnt[w] + xcnt[w] >= req[w]:
                    xact[w] = 2
                    nxt[nn] = w
                    nn += 1
        if nn == 0:
            break
        t += 1
        for i in range(nn):
            w = nxt[i]
            xact[w] = 1
            front[i] = w
        rounds[t] = nn
        new += nn
        nf = nn
    return new, ntouch, t


@njit(nogil=True, cache=True)
def _reset(xact, xcnt, mark, touched, ntouch):
    for i in range(ntouch):
        w = touched[i]
        xact[w] = 0
        xcnt[w] = 0
        mark[w] = 0


@njit(nogil=True, cache=True)
def _fold(bact, bcnt, xact, xcnt, mark, touched, ntouch):
    for i in range(ntouch):
        w = touched[i]
        if xact[w] == 1:
            bact[w] = 1
        bcnt[w] += xcnt[w]
        xact[w] = 0
        xcnt[w] = 0
        mark[w] = 0


@njit(nogil=True, cache=True)
def simulate_one(indptr, indices, req, seeds, n):
    """Single run from scratch; returns (active mask, per-round counts, rounds)."""
    bact = np.zeros(n, np.uint8)
    bcnt = np.zeros(n, np.int32)
    xact = np.zeros(n, np.uint8)
    xcnt = np.zeros(n, np.int32)
    mark = np.zeros(n, np.uint8)
    touched = np.empty(n, np.int64)
    front = np.empty(n, np.int64)
    nxt = np.empty(n, np.int64)
    rounds = np.zeros(n + 1, np.int64)
    dummy = np.zeros(1, np.int64)
    new, ntouch, t = spread(indptr, indices, req, bact, bcnt, seeds, xact, xcnt, mark,
                            touched, front, nxt, rounds, False, dummy, 0, 0.0, 0, 0)
    active = xact == 1
    return active, rounds[: t + 1].copy(), t


@njit(nogil=True, cache=True)
def snapshot_spread_sum(indptr, indices, reqs, seeds, lo, hi):
    """Sum over snapshot rows lo..hi-1 of the spread size from ``seeds``."""
    n = reqs.shape[1]
    bact = np.zeros(n, np.uint8)
    bcnt = np.zeros(n, np.int32)
    xact = np.zeros(n, np.uint8)
    xcnt = np.zeros(n, np.int32)
    mark = np.zeros(n, np.uint8)
    touched = np.empty(n, np.int64)
    front = np.empty(n, np.int64)
    nxt = np.empty(n, np.int64)
    rounds = np.zeros(n + 1, np.int64)
    dummy = np.zeros(1, np.int64)
    total = 0
    for r in range(lo, hi):
        new, ntouch, t = spread(indptr, indices, reqs[r], bact, bcnt, seeds, xact, xcnt,
                                mark, touched, front, nxt, rounds, False, dummy, 0, 0.0, 0, 0)
        total += new
        _reset(xact, xcnt, mark, touched, ntouch)
    return total


@njit(nogil=True, cache=True)
def mc_spread_sums(indptr, indices, indeg, variant, param, seeds, key, lo, hi):
    """Fresh simulations lo..hi-1 with thresholds drawn lazily from ``key``.

    Returns (sum of sizes, sum of squared sizes).
    """
    n = indeg.shape[0]
    req = np.zeros(n, np.int64)
    bact = np.zeros(n, np.uint8)
    bcnt = np.zeros(n, np.int32)
    xact = np.zeros(n, np.uint8)
    xcnt = np.zeros(n, np.int32)
    mark = np.zeros(n, np.uint8)
    touched = np.empty(n, np.int64)
    front = np.empty(n, np.int64)
    nxt = np.empty(n, np.int64)
    rounds = np.zeros(n + 1, np.int64)
    s1 = 0
    s2 = 0
    for r in range(lo, hi):
        new, ntouch, t = spread(indptr, indices, req, bact, bcnt, seeds, xact, xcnt, mark,
                                touched, front, nxt, rounds, True, indeg, variant, param,
                                key, r)
        s1 += new
        s2 += new * new
        _reset(xact, xcnt, mark, touched, ntouch)
    return s1, s2


@njit(nogil=True, cache=True)
def mc_candidate_sums(indptr, indices, indeg, variant, param, base, cands, keys, R):
    """For each candidate c: sum over R fresh runs of |spread(base + c)|."""
    nb = base.shape[0]
    seeds = np.empty(nb + 1, np.int64)
    seeds[:nb] = base
    out = np.empty(cands.shape[0], np.int64)
    for i in range(cands.shape[0]):
        seeds[nb] = cands[i]
        s1, s2 = mc_spread_sums(indptr, indices, indeg, variant, param, seeds, keys[i], 0, R)
        out[i] = s1
    return out


@njit(nogil=True, cache=True)
def cache_gain_sum(indptr, indices, reqs, bact, bcnt, u, lo, hi):
    """Sum over snapshots lo..hi-1 of nodes newly activated by adding ``u``."""
    n = reqs.shape[1]
    xact = np.zeros(n, np.uint8)
    xcnt = np.zeros(n, np.int32)
    mark = np.zeros(n, np.uint8)
    touched = np.empty(n, np.int64)
    front = np.empty(n, np.int64)
    nxt = np.empty(n, np.int64)
    rounds = np.zeros(n + 1, np.int64)
    dummy = np.zeros(1, np.int64)
    seeds = np.empty(1, np.int64)
    seeds[0] = u
    total = 0
    for r in range(lo, hi):
        new, ntouch, t = spread(indptr, indices, reqs[r], bact[r], bcnt[r], seeds, xact, xcnt,
                                mark, touched, front, nxt, rounds, False, dummy, 0, 0.0, 0, 0)
        total += new
        _reset(xact, xcnt, mark, touched, ntouch)
    return total


@njit(nogil=True, cache=True)
def cache_commit(indptr, indices, reqs, bact, bcnt, u, lo, hi):
    """Advance snapshots lo..hi-1 to the fixpoint including ``u``; returns total gain."""
    n = reqs.shape[1]
    xact = np.zeros(n, np.uint8)
    xcnt = np.zeros(n, np.int32)
    mark = np.zeros(n, np.uint8)
    touched = np.empty(n, np.int64)
    front = np.empty(n, np.int64)
    nxt = np.empty(n, np.int64)
    rounds = np.zeros(n + 1, np.int64)
    dummy = np.zeros(1, np.int64)
    seeds = np.empty(1, np.int64)
    seeds[0] = u
    total = 0
    for r in range(lo, hi):
        new, ntouch, t = spread(indptr, indices, reqs[r], bact[r], bcnt[r], seeds, xact, xcnt,
                                mark, touched, front, nxt, rounds, False, dummy, 0, 0.0, 0, 0)
        total += new
        _fold(bact[r], bcnt[r], xact, xcnt, mark, touched, ntouch)
    return total


@njit(nogil=True, cache=True)
def exact_extra_mass(indptr, indices, n, support, probs, sizes, seed_sets, seed_lens):
    """Enumerate joint requirement assignments.

    ``support[v, :sizes[v]]`` are the possible requirements of node ``v`` with
    masses ``probs[v, :]``. For every seed set row returns
    sum_assignments prob * (spread size - |seeds|), plus the total mass seen.
    """
    nsets = seed_sets.shape[0]
    acc = np.zeros(nsets)
    req = np.empty(n, np.int64)
    digits = np.zeros(n, np.int64)
    bact = np.zeros(n, np.uint8)
    bcnt = np.zeros(n, np.int32)
    xact = np.zeros(n, np.uint8)
    xcnt = np.zeros(n, np.int32)
    mark = np.zeros(n, np.uint8)
    touched = np.empty(n, np.int64)
    front = np.empty(n, np.int64)
    nxt = np.empty(n, np.int64)
    rounds = np.zeros(n + 1, np.int64)
    dummy = np.zeros(1, np.int64)
    mass = 0.0
    while True:
        p = 1.0
        for v in range(n):
            req[v] = support[v, digits[v]]
            p *= probs[v, digits[v]]
        mass += p
        if p > 0.0:
            for s in range(nsets):
                seeds = seed_sets[s, : seed_lens[s]]
                new, ntouch, t = spread(indptr, indices, req, bact, bcnt, seeds, xact, xcnt,
                                        mark, touched, front, nxt, rounds, False, dummy,
                                        0, 0.0, 0, 0)
                acc[s] += p * (new - seed_lens[s])
                _reset(xact, xcnt, mark, touched, ntouch)
        v = 0
        while v < n:
            digits[v] += 1
            if digits[v] < sizes[v]:
                break
            digits[v] = 0
            v += 1
        if v == n:
            break
    return acc, mass
