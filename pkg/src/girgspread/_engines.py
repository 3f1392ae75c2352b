"""Compiled edge samplers.

``naive_edges`` flips one keyed coin per unordered pair and is the reference.

``grid_edges`` produces the same edge distribution in roughly linear time.
Vertices are split into weight layers ``[2^i, 2^(i+1))`` and sorted along a
Morton curve of a dyadic cell grid.  For every pair of layers the set of
vertex pairs is partitioned by cell pairs:

* at the target level (cells about the size of a strong-edge ball) every
  pair of touching cells is enumerated with bound ``theta``;
* at each coarser level, cell pairs whose parents touch but which do not
  touch themselves are bounded by the kernel at their minimum separation.

Inside a cell pair, candidates are drawn by geometric skipping at the bound
and kept with probability ``p / bound``, so every pair ends up an edge with
probability exactly ``p``.  The minimum-component geometry runs one
one-dimensional pass per coordinate; a pair is only eligible in the pass of
the coordinate that attains its minimum.
"""
import math

import numpy as np
from numba import njit

from ._rng import combine, u01


@njit(cache=True, nogil=True)
def volume_code(r, d, geom):
    if geom == 0:
        v = (2.0 * r) ** d
        return 1.0 if v > 1.0 else v
    b = 1.0 - 2.0 * r
    if b < 0.0:
        b = 0.0
    return 1.0 - b ** d


@njit(cache=True, nogil=True)
def kernel_code(wprod, vol, n, alpha, theta):
    denom = n * vol
    if denom <= 0.0 or wprod >= denom:
        return theta
    return theta * (wprod / denom) ** alpha


@njit(cache=True, nogil=True)
def coord_dist(a, b):
    t = abs(a - b)
    return t if t < 1.0 - t else 1.0 - t


@njit(cache=True, nogil=True)
def pair_dist(X, u, v, geom):
    best = coord_dist(X[u, 0], X[v, 0])
    for c in range(1, X.shape[1]):
        t = coord_dist(X[u, c], X[v, c])
        if geom == 0:
            if t > best:
                best = t
        elif t < best:
            best = t
    return best


@njit(cache=True, nogil=True)
def _grow(buf, size):
    if size < buf.shape[0]:
        return buf
    out = np.empty(max(16, 2 * buf.shape[0]), dtype=buf.dtype)
    out[: buf.shape[0]] = buf
    return out


@njit(cache=True, nogil=True)
def naive_edges(X, w, n, alpha, theta, geom, key):
    N = X.shape[0]
    d = X.shape[1]
    us = np.empty(16, dtype=np.int64)
    vs = np.empty(16, dtype=np.int64)
    m = 0
    for i in range(N):
        ki = combine(key, i)
        for j in range(i + 1, N):
            r = pair_dist(X, i, j, geom)
            p = kernel_code(w[i] * w[j], volume_code(r, d, geom), n, alpha, theta)
            if u01(ki, j) < p:
                us = _grow(us, m)
                vs = _grow(vs, m)
                us[m] = i
                vs[m] = j
                m += 1
    return us[:m], vs[:m]


@njit(cache=True, nogil=True)
def _interleave(cc, D, bits):
    code = np.int64(0)
    for b in range(bits):
        for c in range(D):
            code |= ((cc[c] >> b) & 1) << (b * D + c)
    return code


@njit(cache=True, nogil=True)
def _deinterleave(code, D, bits, out):
    for c in range(D):
        out[c] = 0
    for b in range(bits):
        for c in range(D):
            out[c] |= ((code >> (b * D + c)) & 1) << b


@njit(cache=True, nogil=True)
def _wrap_offset(a, b, m):
    t = abs(a - b)
    return t if t < m - t else m - t


@njit(cache=True, nogil=True)
def _touching(ac, bc, m, D):
    for c in range(D):
        if _wrap_offset(ac[c], bc[c], m) > 1:
            return False
    return True


@njit(cache=True, nogil=True)
def _lower_bound(arr, lo, hi, value):
    while lo < hi:
        mid = (lo + hi) >> 1
        if arr[mid] < value:
            lo = mid + 1
        else:
            hi = mid
    return lo


@njit(cache=True, nogil=True)
def _offsets(D, base):
    """All vectors in ``{0..base-1}^D`` shifted by ``shift`` later by caller."""
    total = base ** D
    out = np.empty((total, D), dtype=np.int64)
    for t in range(total):
        x = t
        for c in range(D):
            out[t, c] = x % base
            x //= base
    return out


@njit(cache=True, nogil=True)
def _grid_pass(X, w, cols, n, alpha, theta, geom, key, cls, us, vs, m):
    N = X.shape[0]
    d = X.shape[1]
    D = cols.shape[0]
    if N < 2:
        return us, vs, m

    lmax = int(math.log2(N) / D)
    if lmax * D > 60:
        lmax = 60 // D
    if lmax < 0:
        lmax = 0
    side = np.int64(1) << lmax

    layer = np.empty(N, dtype=np.int64)
    K = 0
    for v in range(N):
        li = int(math.floor(math.log2(w[v])))
        if li < 0:
            li = 0
        layer[v] = li
        if li + 1 > K:
            K = li + 1
    wtop = np.zeros(K, dtype=np.float64)
    for v in range(N):
        if w[v] > wtop[layer[v]]:
            wtop[layer[v]] = w[v]

    cc = np.empty(D, dtype=np.int64)
    mort = np.empty(N, dtype=np.int64)
    for v in range(N):
        for c in range(D):
            x = int(X[v, cols[c]] * side)
            if x >= side:
                x = side - 1
            cc[c] = x
        mort[v] = _interleave(cc, D, lmax)
    sortkey = layer * (np.int64(1) << (D * lmax)) + mort
    order = np.argsort(sortkey, kind="mergesort")
    sv = order
    smort = mort[order]
    lstart = np.zeros(K + 1, dtype=np.int64)
    for v in range(N):
        lstart[layer[v] + 1] += 1
    for i in range(K):
        lstart[i + 1] += lstart[i]

    nb3 = _offsets(D, 3)
    ch2 = _offsets(D, 2)
    ac = np.empty(D, dtype=np.int64)
    pc = np.empty(D, dtype=np.int64)
    qc = np.empty(D, dtype=np.int64)
    bc = np.empty(D, dtype=np.int64)
    pcodes = np.empty(nb3.shape[0], dtype=np.int64)
    bcodes = np.empty(nb3.shape[0] * ch2.shape[0], dtype=np.int64)
    coordd = np.empty(d, dtype=np.float64)

    for i in range(K):
        if lstart[i + 1] == lstart[i]:
            continue
        for j in range(i, K):
            if lstart[j + 1] == lstart[j]:
                continue
            # iterate cells of the smaller layer on the A side
            la, lb = i, j
            if lstart[j + 1] - lstart[j] < lstart[i + 1] - lstart[i]:
                la, lb = j, i
            same = i == j
            wb = wtop[i] * wtop[j]
            lstar = 0
            for lev in range(lmax, -1, -1):
                if n * volume_code(1.0 / (np.int64(1) << lev), d, geom) >= wb:
                    lstar = lev
                    break
            kij = combine(key, i * K + j)
            for lev in range(lstar + 1):
                mcell = np.int64(1) << lev
                shift = D * (lmax - lev)
                klev = combine(kij, lev)
                sa = lstart[la]
                ea = lstart[la + 1]
                pos = sa
                while pos < ea:
                    acode = smort[pos] >> shift
                    a1 = pos + 1
                    while a1 < ea and (smort[a1] >> shift) == acode:
                        a1 += 1
                    a0 = pos
                    pos = a1
                    _deinterleave(acode, D, lev, ac)
                    nb = 0
                    if lev == lstar:
                        # type I: touching cells at the target level
                        for t in range(nb3.shape[0]):
                            for c in range(D):
                                bc[c] = (ac[c] + nb3[t, c] - 1 + mcell) % mcell
                            code = _interleave(bc, D, lev)
                            dup = False
                            for s in range(nb):
                                if bcodes[s] == code:
                                    dup = True
                                    break
                            if not dup:
                                bcodes[nb] = code
                                nb += 1
                    nb_touch = nb
                    if lev >= 1:
                        # type II: parents touch, cells do not
                        half = mcell >> 1
                        for c in range(D):
                            pc[c] = ac[c] >> 1
                        npar = 0
                        for t in range(nb3.shape[0]):
                            for c in range(D):
                                qc[c] = (pc[c] + nb3[t, c] - 1 + half) % half
                            code = _interleave(qc, D, lev - 1)
                            dup = False
                            for s in range(npar):
                                if pcodes[s] == code:
                                    dup = True
                                    break
                            if dup:
                                continue
                            pcodes[npar] = code
                            npar += 1
                            for e in range(ch2.shape[0]):
                                for c in range(D):
                                    bc[c] = 2 * qc[c] + ch2[e, c]
                                if _touching(ac, bc, mcell, D):
                                    continue
                                bcodes[nb] = _interleave(bc, D, lev)
                                nb += 1
                    for s in range(nb):
                        bcode = bcodes[s]
                        if same and bcode < acode:
                            continue
                        lo = bcode << shift
                        hi = (bcode + 1) << shift
                        b0 = _lower_bound(smort, lstart[lb], lstart[lb + 1], lo)
                        b1 = _lower_bound(smort, b0, lstart[lb + 1], hi)
                        if b1 == b0:
                            continue
                        if s < nb_touch:
                            pbar = theta
                        else:
                            _deinterleave(bcode, D, lev, bc)
                            gap = 0
                            for c in range(D):
                                off = _wrap_offset(ac[c], bc[c], mcell) - 1
                                if off > gap:
                                    gap = off
                            r0 = gap / mcell
                            pbar = kernel_code(wb, volume_code(r0, d, geom), n, alpha, theta)
                        if pbar <= 0.0:
                            continue
                        na = a1 - a0
                        nbb = b1 - b0
                        total = na * nbb
                        kk = combine(combine(klev, acode), bcode)
                        ctr = 0
                        idx = -1
                        if pbar < 1.0:
                            logq = math.log1p(-pbar)
                        else:
                            logq = 0.0
                        while True:
                            if pbar < 1.0:
                                uu = 1.0 - u01(kk, ctr)
                                ctr += 1
                                jump = math.log(uu) / logq
                                if jump >= total - idx:
                                    break
                                idx += 1 + int(jump)
                            else:
                                idx += 1
                            if idx >= total:
                                break
                            ia = idx // nbb
                            ib = idx - ia * nbb
                            uvert = sv[a0 + ia]
                            vvert = sv[b0 + ib]
                            acc = u01(kk, ctr)
                            ctr += 1
                            if same and bcode == acode and uvert >= vvert:
                                continue
                            if cls >= 0:
                                best = 0
                                for c in range(d):
                                    coordd[c] = coord_dist(X[uvert, c], X[vvert, c])
                                    if coordd[c] < coordd[best]:
                                        best = c
                                if best != cls:
                                    continue
                                r = coordd[cls]
                            else:
                                r = pair_dist(X, uvert, vvert, geom)
                            p = kernel_code(w[uvert] * w[vvert], volume_code(r, d, geom), n, alpha, theta)
                            if acc * pbar < p:
                                us = _grow(us, m)
                                vs = _grow(vs, m)
                                if uvert < vvert:
                                    us[m] = uvert
                                    vs[m] = vvert
                                else:
                                    us[m] = vvert
                                    vs[m] = uvert
                                m += 1
    return us, vs, m


@njit(cache=True, nogil=True)
def grid_edges(X, w, n, alpha, theta, geom, key):
    us = np.empty(16, dtype=np.int64)
    vs = np.empty(16, dtype=np.int64)
    m = 0
    d = X.shape[1]
    if geom == 0:
        cols = np.arange(d)
        us, vs, m = _grid_pass(X, w, cols, n, alpha, theta, geom, key, -1, us, vs, m)
    else:
        for c in range(d):
            cols = np.array([c])
            us, vs, m = _grid_pass(X, w, cols, n, alpha, theta, geom, combine(key, c), c, us, vs, m)
    return us[:m], vs[:m]
