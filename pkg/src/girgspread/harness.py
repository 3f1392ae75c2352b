"""Scaling experiments and growth-model fitting."""
from concurrent.futures import ThreadPoolExecutor
import csv
from dataclasses import dataclass, field
import io
import json
import math
from typing import List, NamedTuple, Optional

import numpy as np

from ._rng import GRAPH, TRIAL, derive_seed
from .errors import DataError, UsageError
from .geometry import GeometryKind
from .model import ModelParams, giant_component, sample_graph
from .protocol import SpreadConfig, run_spread

CSV_HEADER = ("n", "graph_seed", "trial", "rounds", "giant_size", "stop")
MODELS = ("loglog", "polylog", "polynomial")


@dataclass
class ExperimentConfig:
    """One scaling experiment: a parameter template swept over ``n_grid``."""

    n_grid: List[float]
    d: int = 1
    tau: float = 2.5
    alpha: float = 2.0
    theta: float = 1.0
    geometry: str = "inf"
    graphs_per_n: int = 1
    trials_per_graph: int = 1
    fraction: float = 0.5
    max_rounds: int = 100_000
    seed_base: int = 0
    engine: str = "grid"
    out: Optional[str] = None

    def __post_init__(self):
        if not self.n_grid:
            raise UsageError("n_grid must be nonempty")
        if self.graphs_per_n < 1 or self.trials_per_graph < 1:
            raise UsageError("graphs_per_n and trials_per_graph must be >= 1")
        GeometryKind.parse(self.geometry)
        self.template(self.n_grid[0], 0)

    def template(self, n, seed):
        return ModelParams(n=float(n), d=self.d, tau=self.tau, alpha=self.alpha, theta=self.theta,
                           geometry=self.geometry, seed=seed)

    @classmethod
    def from_dict(cls, data):
        known = set(cls.__dataclass_fields__)
        extra = set(data) - known
        if extra:
            raise UsageError(f"unknown config keys: {sorted(extra)}")
        return cls(**data)

    @classmethod
    def from_json(cls, path):
        try:
            with open(path) as fh:
                data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise DataError(f"config is not valid JSON: {exc.msg}", line=exc.lineno) from None
        except OSError as exc:
            raise DataError(f"cannot read config: {exc}") from None
        return cls.from_dict(data)


class Row(NamedTuple):
    n: float
    graph_seed: int
    trial: int
    rounds: int
    giant_size: int
    stop: str


def graph_seed(seed_base, n, g):
    return derive_seed(seed_base, GRAPH, int(round(float(n) * 1000)), g)


def _graph_job(cfg, n, g):
    gs = graph_seed(cfg.seed_base, n, g)
    graph = sample_graph(cfg.template(n, gs), engine=cfg.engine)
    comp = giant_component(graph)
    rows = []
    for t in range(cfg.trials_per_graph):
        if comp.giant_size == 0:
            rows.append(Row(n, gs, t, -1, 0, "empty-giant"))
            continue
        sc = SpreadConfig(fraction=cfg.fraction, max_rounds=cfg.max_rounds,
                          seed=derive_seed(gs, TRIAL, t))
        tr = run_spread(graph, sc)
        rows.append(Row(n, gs, t, tr.rounds_elapsed, comp.giant_size, tr.stop))
    return rows


def run_scaling_experiment(cfg, threads=1):
    """Rows ordered by (n, graph, trial) regardless of ``threads``."""
    jobs = [(n, g) for n in cfg.n_grid for g in range(cfg.graphs_per_n)]
    if threads <= 1:
        parts = [_graph_job(cfg, n, g) for n, g in jobs]
    else:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            parts = list(ex.map(lambda job: _graph_job(cfg, *job), jobs))
    return [r for part in parts for r in part]


def _fmt_n(n):
    n = float(n)
    return str(int(n)) if n.is_integer() else format(n, ".17g")


def write_rows(rows, fh):
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in rows:
        w.writerow([_fmt_n(r.n), r.graph_seed, r.trial, r.rounds, r.giant_size, r.stop])


def rows_to_csv(rows):
    buf = io.StringIO()
    write_rows(rows, buf)
    return buf.getvalue()


def read_rows(fh):
    rd = csv.reader(fh)
    header = next(rd, None)
    if header is None or tuple(header) != CSV_HEADER:
        raise DataError(f"expected CSV header {','.join(CSV_HEADER)}", line=1)
    out = []
    for ln, rec in enumerate(rd, start=2):
        if len(rec) != len(CSV_HEADER):
            raise DataError(f"expected {len(CSV_HEADER)} fields", line=ln)
        try:
            out.append(Row(float(rec[0]), int(rec[1]), int(rec[2]), int(rec[3]), int(rec[4]), rec[5]))
        except ValueError:
            raise DataError("malformed numeric field", line=ln) from None
    return out


@dataclass
class FitReport:
    """Three growth models fitted to the median rounds per ``n``.

    ``coefficients[model]`` holds ``a`` and the exponent (``b`` or ``c``).
    ``rss`` compares models on the log of the medians; ``rss_native`` is each
    model's residual sum on its own fitting axes.
    """

    ns: List[float]
    medians: List[float]
    coefficients: dict = field(default_factory=dict)
    rss: dict = field(default_factory=dict)
    rss_native: dict = field(default_factory=dict)
    winner: str = ""

    def to_dict(self):
        return {"ns": self.ns, "medians": self.medians, "coefficients": self.coefficients,
                "rss": self.rss, "rss_native": self.rss_native, "winner": self.winner}


def medians_by_n(rows):
    by = {}
    for r in rows:
        if r.rounds >= 0:
            by.setdefault(float(r.n), []).append(r.rounds)
    ns = sorted(by)
    return ns, [float(np.median(by[n])) for n in ns]


def fit_growth(rows=None, ns=None, medians=None):
    """Fit ``a*loglog n``, ``a*(log n)^b`` and ``a*n^c`` to medians per ``n``.

    Pass either scaling rows or explicit ``ns``/``medians``.  The winner has
    the smallest log-residual sum; near-ties go to the model listed first in
    ``MODELS`` (fewest parameters).
    """
    if rows is not None:
        ns, medians = medians_by_n(rows)
    ns = np.asarray(ns, dtype=float)
    m = np.asarray(medians, dtype=float)
    if len(np.unique(ns)) < 3:
        raise UsageError("fit_growth needs at least 3 distinct n values")
    if np.any(ns <= math.e) or np.any(m <= 0):
        raise UsageError("fit_growth needs n > e and positive medians")
    logn = np.log(ns)
    llogn = np.log(logn)
    y = np.log(m)
    rep = FitReport([float(x) for x in ns], [float(x) for x in m])

    a = float(np.dot(llogn, m) / np.dot(llogn, llogn))
    rep.coefficients["loglog"] = {"a": a}
    rep.rss_native["loglog"] = float(np.sum((m - a * llogn) ** 2))
    rep.rss["loglog"] = float(np.sum((y - np.log(a * llogn)) ** 2)) if a > 0 else math.inf

    for name, x, key in (("polylog", llogn, "b"), ("polynomial", logn, "c")):
        slope, icpt = np.polyfit(x, y, 1)
        res = float(np.sum((y - (icpt + slope * x)) ** 2))
        rep.coefficients[name] = {"a": float(math.exp(icpt)), key: float(slope)}
        rep.rss[name] = res
        rep.rss_native[name] = res

    scale = float(np.sum((y - y.mean()) ** 2))
    tol = 1e-12 + 1e-9 * scale
    best = min(rep.rss.values())
    rep.winner = next(k for k in MODELS if rep.rss[k] <= best + tol)
    return rep


def attach_fit(report, fit):
    """Store the polynomial exponent of ``fit`` on a RegimeReport."""
    report.fitted_slow_exponent = fit.coefficients["polynomial"]["c"]
    return report
