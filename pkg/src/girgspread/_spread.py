"""Compiled push-pull kernels.

Vertex ``v`` in round ``t`` picks neighbour slot
``floor(u01(combine(key, v), t) * deg(v))``; both the full simulation and the
single-round reference read the same streams, so they agree exactly.
"""
import numpy as np
from numba import njit

from ._rng import combine, u01

STOP_NONE = 0
STOP_FRACTION = 1
STOP_TARGET = 2
STOP_MAX_ROUNDS = 3
STOP_UNREACHABLE = 4


@njit(cache=True, nogil=True)
def choose(indptr, indices, key, v, t):
    deg = indptr[v + 1] - indptr[v]
    k = int(u01(combine(key, v), t) * deg)
    if k >= deg:
        k = deg - 1
    return indices[indptr[v] + k]


@njit(cache=True, nogil=True)
def _push3(buf, m, a, b, c):
    if m + 1 > buf.shape[0]:
        out = np.empty((2 * buf.shape[0] + 16, 3), dtype=np.int64)
        out[: buf.shape[0]] = buf
        buf = out
    buf[m, 0] = a
    buf[m, 1] = b
    buf[m, 2] = c
    return buf


@njit(cache=True, nogil=True)
def round_kernel(indptr, indices, informed, order, key, t):
    """One synchronous round from the round-start mask ``informed``.

    Vertices are visited in ``order``; the result does not depend on it.
    Returns the new mask, transmissions ``(t, u, v)`` and selections
    ``(t, chooser, chosen)``.
    """
    new = informed.copy()
    tx = np.empty((16, 3), dtype=np.int64)
    sel = np.empty((16, 3), dtype=np.int64)
    ntx = 0
    nsel = 0
    for idx in range(order.shape[0]):
        v = order[idx]
        if indptr[v + 1] == indptr[v]:
            continue
        u = choose(indptr, indices, key, v, t)
        sel = _push3(sel, nsel, t, v, u)
        nsel += 1
        if informed[v] != informed[u]:
            if informed[v]:
                new[u] = True
            else:
                new[v] = True
            # an edge picked from both sides is one transmission
            if choose(indptr, indices, key, u, t) != v or v < u:
                tx = _push3(tx, ntx, t, min(u, v), max(u, v))
                ntx += 1
    return new, tx[:ntx], sel[:nsel]


@njit(cache=True, nogil=True)
def spread_kernel(indptr, indices, start, key, stop_kind, stop_count, target,
                  max_rounds, record_sel):
    N = indptr.shape[0] - 1
    rnd = np.full(N, -1, dtype=np.int64)
    infnb = np.zeros(N, dtype=np.int64)
    newcounts = np.zeros(max_rounds + 1, dtype=np.int64)
    tx = np.empty((16, 3), dtype=np.int64)
    sel = np.empty((16, 3), dtype=np.int64)
    ntx = 0
    nsel = 0

    rnd[start] = 0
    newcounts[0] = 1
    informed = 1
    front_inf = np.empty(N, dtype=np.int64)
    front_un = np.empty(N, dtype=np.int64)
    nfi = 0
    nfu = 0
    in_fu = np.zeros(N, dtype=np.bool_)
    for p in range(indptr[start], indptr[start + 1]):
        y = indices[p]
        infnb[y] += 1
        if not in_fu[y]:
            in_fu[y] = True
            front_un[nfu] = y
            nfu += 1
    if indptr[start + 1] > indptr[start]:
        front_inf[0] = start
        nfi = 1
    newly = np.empty(N, dtype=np.int64)

    t = 0
    stop = STOP_NONE
    while True:
        if stop_kind == STOP_FRACTION and informed >= stop_count:
            stop = STOP_FRACTION
            break
        if stop_kind == STOP_TARGET and rnd[target] >= 0:
            stop = STOP_TARGET
            break
        if t >= max_rounds:
            stop = STOP_UNREACHABLE if nfu == 0 and stop_kind != STOP_NONE else STOP_MAX_ROUNDS
            break
        if nfu == 0 and not record_sel:
            # nothing can change any more
            if stop_kind == STOP_NONE:
                t = max_rounds
                stop = STOP_MAX_ROUNDS
            else:
                stop = STOP_UNREACHABLE
            break
        t += 1
        nnew = 0
        if record_sel:
            for v in range(N):
                if indptr[v + 1] > indptr[v]:
                    sel = _push3(sel, nsel, t, v, choose(indptr, indices, key, v, t))
                    nsel += 1
        # push from informed vertices with an uninformed neighbour
        for a in range(nfi):
            v = front_inf[a]
            u = choose(indptr, indices, key, v, t)
            r = rnd[u]
            if r < 0 or r == t:
                if r < 0:
                    rnd[u] = t
                    newly[nnew] = u
                    nnew += 1
                tx = _push3(tx, ntx, t, min(u, v), max(u, v))
                ntx += 1
        # pull by uninformed vertices with an informed neighbour
        for a in range(nfu):
            u = front_un[a]
            r = rnd[u]
            if r >= 0 and r < t:
                continue
            v = choose(indptr, indices, key, u, t)
            rv = rnd[v]
            if rv >= 0 and rv < t:
                if r < 0:
                    rnd[u] = t
                    newly[nnew] = u
                    nnew += 1
                if choose(indptr, indices, key, v, t) != u:
                    tx = _push3(tx, ntx, t, min(u, v), max(u, v))
                    ntx += 1
        newcounts[t] = nnew
        informed += nnew
        # frontier maintenance
        for a in range(nnew):
            x = newly[a]
            for p in range(indptr[x], indptr[x + 1]):
                y = indices[p]
                infnb[y] += 1
                if rnd[y] < 0 and not in_fu[y]:
                    in_fu[y] = True
                    front_un[nfu] = y
                    nfu += 1
        k = 0
        for a in range(nfu):
            y = front_un[a]
            if rnd[y] < 0:
                front_un[k] = y
                k += 1
            else:
                in_fu[y] = False
        nfu = k
        k = 0
        for a in range(nfi):
            y = front_inf[a]
            if infnb[y] < indptr[y + 1] - indptr[y]:
                front_inf[k] = y
                k += 1
        for a in range(nnew):
            y = newly[a]
            if infnb[y] < indptr[y + 1] - indptr[y]:
                front_inf[k] = y
                k += 1
        nfi = k
    return rnd, t, newcounts[: t + 1], tx[:ntx], sel[:nsel], stop
