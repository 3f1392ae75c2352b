"""GIRG and MCD-GIRG sampling, graph container, components and degree moments."""
from dataclasses import dataclass, field
import math
from typing import NamedTuple, Optional

import numpy as np
from scipy import sparse
from scipy.sparse import csgraph
from scipy.stats import poisson

from . import _engines
from ._rng import COUNT, EDGE, POSITION, WEIGHT, MASK64, stream_key, u01, uniform_block
from .errors import ResourceError, UsageError
from .geometry import GeometryKind

MAX_VERTICES = 50_000_000
ENGINES = ("grid", "naive")


@dataclass(frozen=True)
class ModelParams:
    """Generator knobs.  ``fixed_count`` replaces the Poisson vertex count."""

    n: float
    d: int = 1
    tau: float = 2.5
    alpha: float = 2.0
    theta: float = 1.0
    geometry: GeometryKind = GeometryKind.EuclideanInf
    seed: int = 0
    fixed_count: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "geometry", GeometryKind.parse(self.geometry))
        if not (math.isfinite(self.n) and self.n > 0):
            raise UsageError(f"n must be positive, got {self.n}")
        if int(self.d) != self.d or self.d < 1:
            raise UsageError(f"d must be an integer >= 1, got {self.d}")
        object.__setattr__(self, "d", int(self.d))
        if not (math.isfinite(self.tau) and self.tau > 2):
            raise UsageError(f"tau must be > 2, got {self.tau}")
        if not (math.isfinite(self.alpha) and self.alpha > 1):
            raise UsageError(f"alpha must be finite and > 1, got {self.alpha}")
        if not (0 < self.theta <= 1):
            raise UsageError(f"theta must lie in (0, 1], got {self.theta}")
        if int(self.seed) != self.seed or not (0 <= self.seed <= MASK64):
            raise UsageError(f"seed must be an unsigned 64-bit integer, got {self.seed}")
        object.__setattr__(self, "seed", int(self.seed))
        if self.fixed_count is not None:
            if int(self.fixed_count) != self.fixed_count or self.fixed_count < 0:
                raise UsageError(f"fixed_count must be a nonnegative integer, got {self.fixed_count}")
            object.__setattr__(self, "fixed_count", int(self.fixed_count))

    def replace(self, **changes):
        kw = dict(n=self.n, d=self.d, tau=self.tau, alpha=self.alpha, theta=self.theta,
                  geometry=self.geometry, seed=self.seed, fixed_count=self.fixed_count)
        kw.update(changes)
        return ModelParams(**kw)


class Vertex(NamedTuple):
    id: int
    position: np.ndarray
    weight: float


@dataclass(frozen=True, eq=False)
class Graph:
    """Immutable sampled graph in CSR form.

    ``indices[indptr[v]:indptr[v+1]]`` is the sorted neighbour list of ``v``.
    """

    params: ModelParams
    positions: np.ndarray
    weights: np.ndarray
    indptr: np.ndarray
    indices: np.ndarray
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        for arr in (self.positions, self.weights, self.indptr, self.indices):
            arr.setflags(write=False)

    @classmethod
    def from_edges(cls, params, positions, weights, us, vs):
        positions = np.ascontiguousarray(positions, dtype=np.float64).reshape(-1, params.d)
        weights = np.ascontiguousarray(weights, dtype=np.float64)
        N = positions.shape[0]
        if weights.shape != (N,):
            raise UsageError("weights and positions disagree on the vertex count")
        us = np.asarray(us, dtype=np.int64)
        vs = np.asarray(vs, dtype=np.int64)
        if us.size and (min(us.min(), vs.min()) < 0 or max(us.max(), vs.max()) >= N):
            raise UsageError("edge endpoint out of range")
        if np.any(us == vs):
            raise UsageError("self-loops are not allowed")
        lo = np.minimum(us, vs)
        hi = np.maximum(us, vs)
        if lo.size:
            packed = np.unique(lo * N + hi)
            lo, hi = packed // N, packed % N
        src = np.concatenate([lo, hi])
        dst = np.concatenate([hi, lo])
        order = np.lexsort((dst, src))
        indices = dst[order]
        indptr = np.zeros(N + 1, dtype=np.int64)
        np.cumsum(np.bincount(src, minlength=N), out=indptr[1:])
        return cls(params, positions, weights, indptr, indices)

    @property
    def num_vertices(self):
        return int(self.weights.shape[0])

    @property
    def num_edges(self):
        return int(self.indices.shape[0] // 2)

    @property
    def degrees(self):
        if "deg" not in self._cache:
            deg = np.diff(self.indptr)
            deg.setflags(write=False)
            self._cache["deg"] = deg
        return self._cache["deg"]

    def neighbors(self, v):
        return self.indices[self.indptr[v]:self.indptr[v + 1]]

    @property
    def adjacency(self):
        return [self.neighbors(v) for v in range(self.num_vertices)]

    def vertex(self, v):
        if not 0 <= v < self.num_vertices:
            raise UsageError(f"vertex {v} does not exist")
        return Vertex(int(v), self.positions[v], float(self.weights[v]))

    @property
    def vertices(self):
        return [self.vertex(v) for v in range(self.num_vertices)]

    def has_edge(self, u, v):
        nb = self.neighbors(u)
        k = np.searchsorted(nb, v)
        return bool(k < nb.shape[0] and nb[k] == v)

    def edges(self):
        """All edges as an ``(E, 2)`` array with ``u < v``, sorted."""
        src = np.repeat(np.arange(self.num_vertices, dtype=np.int64), self.degrees)
        keep = src < self.indices
        return np.stack([src[keep], self.indices[keep]], axis=1)

    def to_csr(self):
        data = np.ones(self.indices.shape[0], dtype=np.int8)
        N = self.num_vertices
        return sparse.csr_matrix((data, self.indices, self.indptr), shape=(N, N))


def pareto_quantile(u, tau):
    """Inverse CDF of the Pareto density ``(tau-1) w^-tau`` on ``[1, inf)``."""
    u = np.asarray(u, dtype=float)
    if tau <= 1:
        raise UsageError("tau must exceed 1")
    if np.any((u < 0) | (u >= 1)):
        raise UsageError("u must lie in [0, 1)")
    out = (1.0 - u) ** (-1.0 / (tau - 1.0))
    return out if out.ndim else float(out)


def vertex_count(params):
    if params.fixed_count is not None:
        N = params.fixed_count
    else:
        u = u01(stream_key(params.seed, COUNT), 0)
        N = int(poisson.ppf(u, params.n))
    if N > MAX_VERTICES:
        raise ResourceError(f"refusing to allocate {N} vertices (limit {MAX_VERTICES})", attempted=N)
    return N


def sample_vertices(params):
    """Positions and weights for the seed in ``params``."""
    N = vertex_count(params)
    pos = uniform_block(stream_key(params.seed, POSITION), 0, N * params.d).reshape(N, params.d)
    w = pareto_quantile(uniform_block(stream_key(params.seed, WEIGHT), 0, N), params.tau)
    return pos, np.atleast_1d(w)


def sample_edges(positions, weights, params, engine="grid", seed=None):
    """Edge endpoints ``(us, vs)`` for a fixed vertex set.

    ``seed`` defaults to ``params.seed``; passing another value redraws only
    the edges, keeping the vertex set shared.
    """
    if engine not in ENGINES:
        raise UsageError(f"unknown engine {engine!r}; expected one of {ENGINES}")
    key = stream_key(params.seed if seed is None else seed, EDGE)
    X = np.ascontiguousarray(positions, dtype=np.float64)
    w = np.ascontiguousarray(weights, dtype=np.float64)
    fn = _engines.grid_edges if engine == "grid" else _engines.naive_edges
    return fn(X, w, float(params.n), float(params.alpha), float(params.theta),
              params.geometry.code, key)


def sample_graph(params, engine="grid"):
    pos, w = sample_vertices(params)
    us, vs = sample_edges(pos, w, params, engine)
    return Graph.from_edges(params, pos, w, us, vs)


class ComponentLabels(NamedTuple):
    labels: np.ndarray
    giant_id: int
    giant_size: int

    def giant_vertices(self):
        return np.flatnonzero(self.labels == self.giant_id)


def giant_component(graph):
    """Connected components; the giant is the largest, smallest label on ties.

    Labels number components in order of their smallest vertex id.
    """
    N = graph.num_vertices
    if N == 0:
        return ComponentLabels(np.zeros(0, dtype=np.int64), -1, 0)
    if "components" in graph._cache:
        return graph._cache["components"]
    _, labels = csgraph.connected_components(graph.to_csr(), directed=False)
    labels = labels.astype(np.int64)
    sizes = np.bincount(labels)
    gid = int(np.argmax(sizes))
    out = ComponentLabels(labels, gid, int(sizes[gid]))
    graph._cache["components"] = out
    return out


class DegreeBucket(NamedTuple):
    level: int
    lo: float
    hi: float
    mean: float
    variance: float
    count: int


def degree_stats(graph):
    """Degree moments per weight bucket ``[2^k, 2^(k+1))`` (empty buckets omitted)."""
    if graph.num_vertices == 0:
        return []
    level = np.floor(np.log2(graph.weights)).astype(np.int64)
    deg = graph.degrees.astype(float)
    out = []
    for k in np.unique(level):
        sel = deg[level == k]
        out.append(DegreeBucket(int(k), 2.0 ** k, 2.0 ** (k + 1), float(sel.mean()),
                                float(sel.var()), int(sel.size)))
    return out
