"""Hierarchies of bridge edges between two vertices.

A node holds a pair ``(a, b)`` at rescaled distance ``L = n^(1/d) |x_a - x_b|``.
If ``L`` exceeds ``stop_dist`` the finder looks for a bridge edge ``(u', v')``
with ``u'`` and ``v'`` at rescaled distance ``[L^g/2, L^g]`` from ``a`` and
``b`` respectively and splits into the children ``(a, u')`` and ``(v', b)``.
In-order leaves are the gaps; the bridge between two consecutive gaps gets
the edge timeblock of their rank.

Weight bands (``X`` stands for ``[X, 2X]``):

* ``weak``: one endpoint ``w_h1``, the other ``L^(d g/(tau-1) - eps)``;
* ``strong``: one endpoint ``L^(d(1 - g/(tau-1)))``, the other ``L^(d g/(tau-1))``.
"""
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..errors import UsageError
from ..regimes import edge_block, gamma_weak
from ._audit import emit
from .influence import distances_from

MODES = ("weak", "strong")


@dataclass
class HNode:
    a: int
    b: int
    level: int
    L: float
    bridge: Optional[tuple] = None
    bands: Optional[tuple] = None
    left: Optional["HNode"] = None
    right: Optional["HNode"] = None
    failure: Optional[str] = None

    @property
    def is_leaf(self):
        return self.bridge is None


@dataclass
class Hierarchy:
    root: HNode
    gamma: float
    mode: str
    eps: float
    w_h1: float
    Z: int
    stop_dist: float
    R_cap: int
    scale: float = 1.0

    def leaves(self):
        out = []
        _inorder(self.root, out)
        return out

    def nodes(self):
        out, stack = [], [self.root]
        while stack:
            x = stack.pop()
            out.append(x)
            if not x.is_leaf:
                stack += [x.right, x.left]
        return out

    def bridges(self):
        """Bridge edges with their consecutive-gap rank, in time order."""
        out = []
        _ranked_bridges(self.root, [0], out)
        return out

    @property
    def depth(self):
        return 1 + max(x.level for x in self.nodes())

    @property
    def complete(self):
        return all(x.failure is None for x in self.nodes())

    def failures(self):
        return [(x.a, x.b, x.level, x.failure) for x in self.nodes() if x.failure]

    def to_dict(self):
        return {
            "gamma": self.gamma, "mode": self.mode, "eps": self.eps, "w_h1": self.w_h1,
            "Z": self.Z, "depth": self.depth, "complete": self.complete,
            "gaps": [[int(x.a), int(x.b)] for x in self.leaves()],
            "bridges": [{"rank": r, "edge": [int(u), int(v)]} for r, (u, v) in self.bridges()],
            "failures": [{"pair": [int(a), int(b)], "level": lv, "reason": why}
                         for a, b, lv, why in self.failures()],
        }


def _inorder(x, out):
    if x.is_leaf:
        out.append(x)
        return
    _inorder(x.left, out)
    _inorder(x.right, out)


def _ranked_bridges(x, counter, out):
    """In-order walk: the bridge of a node sits between its subtrees' gaps."""
    if x.is_leaf:
        counter[0] += 1
        return
    _ranked_bridges(x.left, counter, out)
    out.append((counter[0] - 1, x.bridge))
    _ranked_bridges(x.right, counter, out)


def rescaled_distances(graph, v):
    return distances_from(graph, v) * graph.params.n ** (1.0 / graph.params.d)


def bands_for(L, gamma, mode, tau, d, eps, w_h1):
    """(near-a band low end, near-b band low end) for the unswapped orientation."""
    if mode == "weak":
        return w_h1, L ** (d * gamma / (tau - 1) - eps)
    return L ** (d * (1 - gamma / (tau - 1))), L ** (d * gamma / (tau - 1))


def default_eps(tau, alpha, gamma, mode):
    if mode == "strong":
        return 0.0
    slack = gamma - gamma_weak(tau, alpha)
    return 0.1 * slack if slack > 0 else 0.01


def find_hierarchy(graph, u, v, gamma, mode="weak", stop_dist=8.0, R_cap=8, eps=None, w_h1=1.0,
                   Z=2, try_swapped=True, scale=1.0):
    """Greedy hierarchy between ``u`` and ``v``; failures are annotated on nodes.

    ``scale`` widens the balls to ``[L^g/2, scale*L^g]`` (H1 then holds only
    if ``scale == 1``; the verifier checks against the returned value).
    """
    if mode not in MODES:
        raise UsageError(f"mode must be one of {MODES}")
    if u == v:
        raise UsageError("u and v must differ")
    if not 0 < gamma < 1:
        raise UsageError("gamma must lie in (0, 1)")
    N = graph.num_vertices
    if not (0 <= u < N and 0 <= v < N):
        raise UsageError("vertex does not exist")
    if R_cap < 1:
        raise UsageError("R_cap must be >= 1")
    p = graph.params
    if eps is None:
        eps = default_eps(p.tau, p.alpha, gamma, mode)
    stop_dist = max(1.0, float(stop_dist))
    used = set()
    dist_cache = {}

    def rd(x):
        if x not in dist_cache:
            dist_cache[x] = rescaled_distances(graph, x)
        return dist_cache[x]

    W = graph.weights

    def search(a, b, L, lo_a, lo_b):
        rad = L ** gamma
        da, db = rd(a), rd(b)
        near_a = np.flatnonzero((da >= rad / 2) & (da <= scale * rad) & (W >= lo_a) & (W <= 2 * lo_a))
        near_b = np.flatnonzero((db >= rad / 2) & (db <= scale * rad) & (W >= lo_b) & (W <= 2 * lo_b))
        if near_a.size == 0 or near_b.size == 0:
            return None
        near_b = near_b[np.lexsort((near_b, db[near_b]))]
        in_a = np.zeros(N, dtype=bool)
        in_a[near_a] = True
        for y in near_b:
            if int(y) in used:
                continue
            nb = graph.neighbors(y)
            hits = nb[in_a[nb]]
            hits = [int(h) for h in hits[np.lexsort((hits, da[hits]))] if int(h) not in used and h != y]
            if hits:
                return hits[0], int(y)
        return None

    def build(a, b, level):
        L = float(rd(a)[b])
        node = HNode(a, b, level, L)
        if L <= stop_dist or level >= R_cap - 1:
            return node
        lo_a, lo_b = bands_for(L, gamma, mode, p.tau, p.d, eps, w_h1)
        found = search(a, b, L, lo_a, lo_b)
        bands = (lo_a, lo_b)
        if found is None and try_swapped:
            found = search(a, b, L, lo_b, lo_a)
            bands = (lo_b, lo_a)
        if found is None:
            node.failure = "no bridge edge in the search balls"
            return node
        ua, vb = found
        used.update((ua, vb))
        node.bridge = (ua, vb)
        node.bands = bands
        node.left = build(a, ua, level + 1)
        node.right = build(vb, b, level + 1)
        return node

    root = build(int(u), int(v), 0)
    h = Hierarchy(root, float(gamma), mode, float(eps), float(w_h1), int(Z), stop_dist,
                  int(R_cap), float(scale))
    return emit(graph, h)


def verify_hierarchy_timing(h, trace):
    """Check that each bridge edge was selected inside its edge timeblock.

    Returns ``(per_edge, ok)`` with ``per_edge`` a list of
    ``(rank, edge, passed)``.
    """
    if trace.selections is None:
        raise UsageError("trace has no selection events; rerun with record_selections=True")
    sel = trace.selections
    per_edge = []
    for rank, (a, b) in h.bridges():
        blk = edge_block(h.Z, rank)
        hit = ((sel[:, 1] == a) & (sel[:, 2] == b)) | ((sel[:, 1] == b) & (sel[:, 2] == a))
        rounds = sel[hit, 0]
        ok = bool(np.any((rounds >= blk.lo) & (rounds <= blk.hi)))
        per_edge.append((rank, (int(a), int(b)), ok))
    return per_edge, all(x[2] for x in per_edge)
