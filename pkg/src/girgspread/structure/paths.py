"""Greedy weight-increasing paths on a sampled graph.

Each macro-step moves from the current vertex of weight ``w`` to a vertex of
weight in ``[w^(1+beta), 2 w^(1+beta)]`` found in the annulus at distance
``[R0, 2 R0]``, ``R0 = n^(-1/d) w^(((1+beta)(tau-1)+eps)/d)``.  The mechanisms
differ in how the step is routed:

``direct``          a single edge;
``via-low-weight``  through a common neighbour of weight <= cap inside BoI(current);
``relay3hop``       low -> mid -> next, with the mid vertex of weight in
                    ``[X, 2X]``, ``X = w^(tau-2+eps)``, inside BoI(current).

Candidates are always scanned by increasing distance, then increasing id.
"""
from dataclasses import dataclass, field
import math
from typing import List, Optional

import numpy as np

from ..errors import UsageError
from ..geometry import GeometryKind, torus_coord_dist
from ._audit import emit
from .influence import ball_of_influence_radius, distances_from

MECHANISMS = ("direct", "via-low-weight", "relay3hop")
DEFAULT_CAP = 8.0


@dataclass
class PathStep:
    """One hop ``src -> dst`` with its role in the construction."""

    src: int
    dst: int
    weight: float
    distance: float
    mechanism: str
    role: str
    plate_dim: Optional[int] = None


@dataclass
class PathResult:
    vertices: List[int]
    steps: List[PathStep]
    success: bool
    failure_step: Optional[int]
    mechanism: str
    beta: float
    eps: float
    cap: float
    target_weight: float
    scale: float = 1.0
    macro_starts: List[int] = field(default_factory=list)

    @property
    def length(self):
        return len(self.vertices) - 1

    def to_dict(self):
        return {
            "vertices": [int(v) for v in self.vertices],
            "steps": [s.__dict__ for s in self.steps],
            "success": self.success,
            "failure_step": self.failure_step,
            "mechanism": self.mechanism,
            "beta": self.beta,
            "eps": self.eps,
            "cap": self.cap,
            "target_weight": self.target_weight,
        }


def annulus(w, beta, eps, params):
    """Inner radius of the search annulus for a step from weight ``w``."""
    return params.n ** (-1.0 / params.d) * w ** (((1 + beta) * (params.tau - 1) + eps) / params.d)


def weight_band(w, beta):
    lo = w ** (1 + beta)
    return lo, 2 * lo


def _sorted_by_distance(ids, dvec):
    if ids.size == 0:
        return ids
    return ids[np.lexsort((ids, dvec[ids]))]


def _step_candidates(graph, cur, beta, eps):
    """Vertices in the annulus and weight band of ``cur``, ordered by distance then id."""
    p = graph.params
    w = graph.weights[cur]
    r0 = annulus(w, beta, eps, p)
    lo, hi = weight_band(w, beta)
    dcur = distances_from(graph, cur)
    sel = np.flatnonzero((dcur >= r0) & (dcur <= 2 * r0)
                         & (graph.weights >= lo) & (graph.weights <= hi))
    return _sorted_by_distance(sel, dcur), dcur


def _default_eps(graph, beta):
    # an edge from w to w^(1+beta) across the annulus is strong iff
    # eps <= (2 + beta) - (1 + beta)(tau - 1)
    tau = graph.params.tau
    slack = (2 + beta) - (1 + beta) * (tau - 1)
    return 0.1 * slack if slack > 0 else 0.01


def greedy_weight_path(graph, start, beta, eps=None, target_weight=None, mechanism="direct",
                       cap=DEFAULT_CAP, max_steps=64):
    if mechanism not in MECHANISMS:
        raise UsageError(f"unknown mechanism {mechanism!r}; expected one of {MECHANISMS}")
    if not 0 <= start < graph.num_vertices:
        raise UsageError(f"start vertex {start} does not exist")
    if not beta > 0:
        raise UsageError("beta must be positive")
    if eps is None:
        eps = _default_eps(graph, beta)
    if not eps > 0:
        raise UsageError("eps must be positive")
    if target_weight is None:
        target_weight = math.sqrt(graph.params.n)
    p = graph.params
    res = PathResult([int(start)], [], False, None, mechanism, float(beta), float(eps),
                     float(cap), float(target_weight))
    cur = int(start)
    for step in range(max_steps):
        if graph.weights[cur] >= target_weight:
            res.success = True
            return emit(graph, res)
        cands, dcur = _step_candidates(graph, cur, beta, eps)
        w = graph.weights[cur]
        hops = None
        if mechanism == "direct":
            nb = graph.neighbors(cur)
            for c in cands:
                if _contains(nb, c):
                    hops = [(c, "next")]
                    break
        else:
            boi = ball_of_influence_radius(w, p)
            nb = graph.neighbors(cur)
            lows = nb[(graph.weights[nb] <= cap) & (dcur[nb] <= boi)]
            lows = _sorted_by_distance(lows, dcur)
            if mechanism == "via-low-weight":
                for c in cands:
                    common = _first_common(graph, lows, c)
                    if common is not None:
                        hops = [(common, "low"), (c, "next")]
                        break
            else:
                x = w ** (p.tau - 2 + eps)
                mids = np.flatnonzero((graph.weights >= x) & (graph.weights <= 2 * x) & (dcur <= boi))
                mids = _sorted_by_distance(mids[mids != cur], dcur)
                for c in cands:
                    found = None
                    for m in mids:
                        if not graph.has_edge(m, c):
                            continue
                        low = _first_common(graph, lows, m)
                        if low is not None:
                            found = [(low, "low"), (m, "mid"), (c, "next")]
                            break
                    if found:
                        hops = found
                        break
        if hops is None:
            res.failure_step = step
            return emit(graph, res)
        res.macro_starts.append(len(res.vertices) - 1)
        src = cur
        for v, role in hops:
            v = int(v)
            res.steps.append(PathStep(src, v, float(graph.weights[v]), float(dcur[v]), mechanism, role))
            res.vertices.append(v)
            src = v
        cur = src
    res.success = bool(graph.weights[cur] >= target_weight)
    if not res.success:
        res.failure_step = max_steps
    return emit(graph, res)


def _contains(sorted_arr, x):
    k = np.searchsorted(sorted_arr, x)
    return k < sorted_arr.shape[0] and sorted_arr[k] == x


def _first_common(graph, candidates, target):
    """First vertex of ``candidates`` (in order) adjacent to ``target``."""
    nb = graph.neighbors(target)
    for q in candidates:
        if q != target and _contains(nb, q):
            return int(q)
    return None


def mcd_alternating_path(graph, start, beta, target_weight=None, cap=DEFAULT_CAP, scale=1.0,
                         max_steps=64):
    """Weight-increasing path for the minimum-component geometry.

    Macro-step ``m`` uses plate dimension ``j = 1, 2, 1, 2, ...``: from the
    current vertex it moves to a neighbour ``q`` of weight <= cap inside its
    dimension-``j`` plate, then to the heaviest neighbour ``u`` of such a ``q``
    whose coordinate in the other dimension is within ``W_q W_u / n`` of
    ``q``'s.  The step is accepted if ``W_u >= w^(1+beta)``.
    """
    p = graph.params
    if p.geometry is not GeometryKind.MinComponent:
        raise UsageError("mcd_alternating_path needs the minimum-component geometry")
    if p.d < 2:
        raise UsageError("mcd_alternating_path needs d >= 2")
    if not 0 <= start < graph.num_vertices:
        raise UsageError(f"start vertex {start} does not exist")
    if not beta > 0:
        raise UsageError("beta must be positive")
    if target_weight is None:
        target_weight = math.sqrt(p.n)
    res = PathResult([int(start)], [], False, None, "mcd-alt", float(beta), 0.0, float(cap),
                     float(target_weight), float(scale))
    cur = int(start)
    X = graph.positions
    W = graph.weights
    for step in range(max_steps):
        if W[cur] >= target_weight:
            res.success = True
            return emit(graph, res)
        j = 1 + step % 2
        jo = 3 - j
        w = W[cur]
        half = scale * w / p.n
        nb = graph.neighbors(cur)
        cdj = np.atleast_1d(torus_coord_dist(X[nb, j - 1], X[cur, j - 1]))
        lows = nb[(W[nb] <= cap) & (cdj <= half)]
        best = None
        for q in lows:
            qn = graph.neighbors(q)
            qn = qn[qn != cur]
            if qn.size == 0:
                continue
            cdo = np.atleast_1d(torus_coord_dist(X[qn, jo - 1], X[q, jo - 1]))
            ok = qn[cdo <= W[q] * W[qn] / p.n]
            if ok.size == 0:
                continue
            u = ok[np.lexsort((ok, -W[ok]))][0]
            if best is None or (W[u], -u, -q) > (W[best[1]], -best[1], -best[0]):
                best = (int(q), int(u))
        if best is None or W[best[1]] < w ** (1 + beta):
            res.failure_step = step
            return emit(graph, res)
        q, u = best
        res.macro_starts.append(len(res.vertices) - 1)
        res.steps.append(PathStep(cur, q, float(W[q]), float(torus_coord_dist(X[q, j - 1], X[cur, j - 1])),
                                  "mcd-alt", "low", j))
        res.steps.append(PathStep(q, u, float(W[u]), float(torus_coord_dist(X[u, jo - 1], X[q, jo - 1])),
                                  "mcd-alt", "next", jo))
        res.vertices += [q, u]
        cur = u
    res.success = bool(W[cur] >= target_weight)
    if not res.success:
        res.failure_step = max_steps
    return emit(graph, res)
