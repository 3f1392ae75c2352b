"""Census of long edges bucketed by slowdown level."""
from dataclasses import dataclass, field

import numpy as np

from ..errors import UsageError
from ..geometry import dist


@dataclass
class CensusReport:
    delta: float
    n_realized: int
    threshold: float
    counts: dict = field(default_factory=dict)

    @property
    def total_long_edges(self):
        return int(sum(self.counts.values()))

    def level(self, i):
        return self.counts.get(i, 0)

    def to_dict(self):
        return {"delta": self.delta, "n_realized": self.n_realized, "threshold": self.threshold,
                "total_long_edges": self.total_long_edges,
                "counts": {str(k): v for k, v in sorted(self.counts.items())}}


def slowdown_level(wu, wv):
    """``i`` with ``2^i <= min(wu, wv) < 2^(i+1)``."""
    return np.floor(np.log2(np.minimum(wu, wv))).astype(np.int64)


def long_edge_census(graph, delta=None):
    """Count edges of length ``>= N^-delta`` (N the realized vertex count) per level.

    ``delta`` defaults to ``0.2/d``.
    """
    if delta is None:
        delta = 0.2 / graph.params.d
    if not delta > 0:
        raise UsageError("delta must be positive")
    N = graph.num_vertices
    thr = float(N) ** (-delta) if N > 0 else 0.0
    rep = CensusReport(float(delta), N, thr)
    e = graph.edges()
    if e.shape[0] == 0:
        return rep
    lengths = np.atleast_1d(dist(graph.positions[e[:, 0]], graph.positions[e[:, 1]], graph.params.geometry))
    long_ = lengths >= thr
    lv = slowdown_level(graph.weights[e[long_, 0]], graph.weights[e[long_, 1]])
    ids, cnt = np.unique(lv, return_counts=True)
    rep.counts = {int(i): int(c) for i, c in zip(ids, cnt)}
    return rep
