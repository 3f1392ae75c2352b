"""Synchronous push-pull spreading, the independent-activation process R' and
their coupling.

Informed sets are boolean masks over vertex ids.  Randomness is addressed by
``(seed, vertex, round)`` so a round's outcome is a pure function of the
round-start mask.
"""
from dataclasses import dataclass
import json
import math
from typing import Optional, Union

import numpy as np

from . import _spread
from ._rng import COUPLE, PUSHPULL, RPRIME, START, stream_key, u01, uniform_at, uniform_at2
from .errors import UsageError
from .model import giant_component

RANDOM_GIANT = "random-giant"

_STOP_NAMES = {
    _spread.STOP_FRACTION: "fraction",
    _spread.STOP_TARGET: "target",
    _spread.STOP_MAX_ROUNDS: "max_rounds",
    _spread.STOP_UNREACHABLE: "unreachable",
}


@dataclass(frozen=True)
class SpreadConfig:
    """Start vertex, stop rule and RNG stream for one push-pull run.

    At most one of ``fraction`` and ``target`` may be set; ``max_rounds``
    always applies as a guard.
    """

    start_vertex: Union[int, str] = RANDOM_GIANT
    fraction: Optional[float] = None
    target: Optional[int] = None
    max_rounds: int = 100_000
    record_selections: bool = False
    seed: int = 0

    def __post_init__(self):
        if self.fraction is not None and self.target is not None:
            raise UsageError("choose either a fraction or a target stop rule, not both")
        if self.fraction is not None and not (0 < self.fraction <= 1):
            raise UsageError(f"fraction must lie in (0, 1], got {self.fraction}")
        if self.max_rounds < 0:
            raise UsageError("max_rounds must be nonnegative")
        if isinstance(self.start_vertex, str) and self.start_vertex != RANDOM_GIANT:
            raise UsageError(f"start_vertex must be an id or {RANDOM_GIANT!r}")

    @property
    def stop_rule(self):
        if self.fraction is not None:
            return "fraction"
        if self.target is not None:
            return "target"
        return "max_rounds"


@dataclass
class SpreadTrace:
    """Result of :func:`run_spread`.

    ``informed_round[v]`` is ``inf`` for vertices never informed.
    ``transmissions`` rows are ``(round, u, v)`` with ``u < v``;
    ``selections`` rows are ``(round, chooser, chosen)``.
    """

    start: int
    informed_round: np.ndarray
    rounds_elapsed: int
    new_per_round: np.ndarray
    transmissions: np.ndarray
    selections: Optional[np.ndarray]
    stop: str

    @property
    def informed_count(self):
        return int(np.isfinite(self.informed_round).sum())

    def informed_at(self, t):
        """Mask of vertices informed by the end of round ``t``."""
        return self.informed_round <= t

    def jsonl_records(self):
        total = 0
        for t, k in enumerate(self.new_per_round):
            total += int(k)
            yield {"round": t, "new": int(k), "informed": total}
        for t, u, v in self.transmissions:
            yield {"round": int(t), "edge": [int(u), int(v)], "kind": "transmit"}
        if self.selections is not None:
            for t, u, v in self.selections:
                yield {"round": int(t), "edge": [int(u), int(v)], "kind": "select"}

    def write_jsonl(self, fh):
        for rec in self.jsonl_records():
            fh.write(json.dumps(rec) + "\n")


def _key(seed, tag, *path):
    return stream_key(seed, tag, *path)


def _as_mask(graph, informed):
    informed = np.asarray(informed)
    N = graph.num_vertices
    if informed.dtype == bool:
        if informed.shape != (N,):
            raise UsageError("informed mask has the wrong length")
        return informed
    mask = np.zeros(N, dtype=bool)
    if informed.size:
        if informed.min() < 0 or informed.max() >= N:
            raise UsageError("informed set contains unknown vertices")
        mask[informed.astype(np.int64)] = True
    return mask


def push_pull_round(graph, informed, seed, t=1, order=None):
    """One push-pull round from the round-start set ``informed``.

    Returns ``(new_mask, events)`` where ``events`` has ``transmissions`` and
    ``selections`` arrays.  ``order`` only permutes the internal visiting
    order and cannot change the outcome.
    """
    mask = _as_mask(graph, informed)
    order = np.arange(graph.num_vertices) if order is None else np.asarray(order, dtype=np.int64)
    new, tx, sel = _spread.round_kernel(graph.indptr, graph.indices, mask, order,
                                        _key(seed, PUSHPULL), int(t))
    return new, {"transmissions": tx, "selections": sel}


def pick_giant_start(graph, seed):
    comp = giant_component(graph)
    if comp.giant_size == 0:
        raise UsageError("graph is empty; no giant component to start from")
    members = comp.giant_vertices()
    u = u01(_key(seed, START), 0)
    return int(members[min(int(u * members.size), members.size - 1)])


def run_spread(graph, cfg):
    N = graph.num_vertices
    if cfg.start_vertex == RANDOM_GIANT:
        start = pick_giant_start(graph, cfg.seed)
    else:
        start = int(cfg.start_vertex)
        if not 0 <= start < N:
            raise UsageError(f"start vertex {start} does not exist")
    stop_kind, stop_count, target = _spread.STOP_NONE, 0, 0
    if cfg.fraction is not None:
        stop_kind = _spread.STOP_FRACTION
        stop_count = max(1, math.ceil(cfg.fraction * giant_component(graph).giant_size - 1e-12))
    elif cfg.target is not None:
        if not 0 <= cfg.target < N:
            raise UsageError(f"target vertex {cfg.target} does not exist")
        stop_kind, target = _spread.STOP_TARGET, int(cfg.target)
    rnd, t, newcounts, tx, sel, stop = _spread.spread_kernel(
        graph.indptr, graph.indices, start, _key(cfg.seed, PUSHPULL), stop_kind,
        stop_count, target, int(cfg.max_rounds), bool(cfg.record_selections))
    informed_round = np.where(rnd >= 0, rnd.astype(float), np.inf)
    return SpreadTrace(start, informed_round, int(t), newcounts, tx,
                       sel if cfg.record_selections else None, _STOP_NAMES[stop])


def replay_transmissions(num_vertices, start, transmissions):
    """Rebuild ``informed_round`` from the start vertex and transmission log."""
    out = np.full(num_vertices, np.inf)
    out[start] = 0
    for t, u, v in transmissions:
        if out[u] < t and not out[v] < t:
            out[v] = min(out[v], t)
        elif out[v] < t and not out[u] < t:
            out[u] = min(out[u], t)
        else:
            raise UsageError(f"transmission ({t}, {u}, {v}) does not cross the informed boundary")
    return out


@dataclass(frozen=True)
class RPrimeConfig:
    c: float = 3.0
    rounds: int = 1

    def __post_init__(self):
        if not self.c > 0:
            raise UsageError("c must be positive")


def activation_probs(graph, c):
    """Per-vertex coin probability ``min(1, c*max(1, ln N)/deg)`` (0 if isolated)."""
    N = graph.num_vertices
    lg = max(1.0, math.log(N)) if N > 0 else 1.0
    deg = graph.degrees.astype(float)
    with np.errstate(divide="ignore"):
        p = np.where(deg > 0, np.minimum(1.0, c * lg / np.where(deg > 0, deg, 1.0)), 0.0)
    return p


def _activate(graph, cfg, seed, t):
    edges = graph.edges()
    p = activation_probs(graph, cfg.c)
    key = _key(seed, RPRIME, t)
    E = edges.shape[0]
    ids = np.arange(E, dtype=np.int64)
    c0 = uniform_at2(key, ids, np.zeros(E, dtype=np.int64)) < p[edges[:, 0]]
    c1 = uniform_at2(key, ids, np.ones(E, dtype=np.int64)) < p[edges[:, 1]]
    return edges[c0 | c1]


def _spread_over(mask, edges):
    new = mask.copy()
    if edges.size:
        u, v = edges[:, 0], edges[:, 1]
        new[v[mask[u]]] = True
        new[u[mask[v]]] = True
    return new


def rprime_round(graph, informed, cfg, seed, t=1):
    """One round of R': returns ``(activated_edges, new_mask)``."""
    if graph.num_vertices == 0:
        raise UsageError("graph is empty")
    mask = _as_mask(graph, informed)
    act = _activate(graph, cfg, seed, t)
    return act, _spread_over(mask, act)


def coupled_round(graph, informed, cfg, seed, t=1, informed_r=None):
    """Advance R' and the coupled push-pull process R by one round.

    ``informed`` is the R' set; ``informed_r`` the R set (defaults to the
    same).  Each vertex with an activated incident edge picks one of them
    uniformly and R moves along the picks only.  ``valid`` is False when some
    non-isolated vertex had no activated incident edge.
    """
    if graph.num_vertices == 0:
        raise UsageError("graph is empty")
    mask_p = _as_mask(graph, informed)
    mask_r = mask_p if informed_r is None else _as_mask(graph, informed_r)
    act = _activate(graph, cfg, seed, t)
    new_p = _spread_over(mask_p, act)

    N = graph.num_vertices
    ends = np.concatenate([act[:, 0], act[:, 1]])
    other = np.concatenate([act[:, 1], act[:, 0]])
    order = np.argsort(ends, kind="stable")
    ends, other = ends[order], other[order]
    counts = np.bincount(ends, minlength=N)
    valid = bool(np.all(counts[graph.degrees > 0] > 0))
    starts = np.concatenate([[0], np.cumsum(counts)[:-1]])
    choosers = np.flatnonzero(counts)
    u = uniform_at(_key(seed, COUPLE, t), choosers)
    slot = np.minimum((u * counts[choosers]).astype(np.int64), counts[choosers] - 1)
    picked = other[starts[choosers] + slot]
    new_r = _spread_over(mask_r, np.stack([choosers, picked], axis=1))
    return new_p, new_r, valid
