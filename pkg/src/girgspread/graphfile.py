"""Line-oriented text format for sampled graphs.

::

    #girg v1
    params n=<real> d=<int> tau=<real> alpha=<real> theta=<real> geom=<inf|min> seed=<u64>
    V <count>
    <id> <x1> ... <xd> <weight>
    E <count>
    <u> <v>

Reals are written with 17 significant digits, which round-trips doubles
exactly.
"""
import io
import os

import numpy as np

from .errors import DataError
from .geometry import GeometryKind
from .model import Graph, ModelParams

VERSION = "v1"
_PARAM_KEYS = ("n", "d", "tau", "alpha", "theta", "geom", "seed")


def _r(x):
    return format(float(x), ".17g")


def write_graph(graph, fh):
    p = graph.params
    fh.write(f"#girg {VERSION}\n")
    fh.write(f"params n={_r(p.n)} d={p.d} tau={_r(p.tau)} alpha={_r(p.alpha)} "
             f"theta={_r(p.theta)} geom={p.geometry.value} seed={p.seed}\n")
    fh.write(f"V {graph.num_vertices}\n")
    for v in range(graph.num_vertices):
        coords = " ".join(_r(x) for x in graph.positions[v])
        fh.write(f"{v} {coords} {_r(graph.weights[v])}\n")
    e = graph.edges()
    fh.write(f"E {e.shape[0]}\n")
    for u, v in e:
        fh.write(f"{u} {v}\n")


def save_graph(path, graph):
    if hasattr(path, "write"):
        write_graph(graph, path)
        return
    with open(path, "w") as fh:
        write_graph(graph, fh)


def dumps(graph):
    buf = io.StringIO()
    write_graph(graph, buf)
    return buf.getvalue()


class _Lines:
    def __init__(self, fh):
        self.fh = fh
        self.no = 0

    def next(self, what):
        line = self.fh.readline()
        if not line:
            raise DataError(f"unexpected end of file, expected {what}", line=self.no + 1)
        self.no += 1
        return line.rstrip("\n")


def _num(tok, kind, ln, what):
    try:
        return kind(tok)
    except ValueError:
        raise DataError(f"bad {what} {tok!r}", line=ln) from None


def read_graph(fh):
    r = _Lines(fh)
    head = r.next("header").strip()
    parts = head.split()
    if len(parts) != 2 or parts[0] != "#girg":
        raise DataError("missing '#girg' header", line=1)
    if parts[1] != VERSION:
        raise DataError(f"unsupported graph file version {parts[1]!r}", line=1)

    ptoks = r.next("params line").split()
    if not ptoks or ptoks[0] != "params":
        raise DataError("expected a 'params' line", line=r.no)
    kv = {}
    for tok in ptoks[1:]:
        if "=" not in tok:
            raise DataError(f"malformed parameter {tok!r}", line=r.no)
        k, v = tok.split("=", 1)
        kv[k] = v
    missing = [k for k in _PARAM_KEYS if k not in kv]
    if missing:
        raise DataError(f"missing parameters {missing}", line=r.no)
    ln = r.no
    try:
        params = ModelParams(
            n=_num(kv["n"], float, ln, "n"), d=_num(kv["d"], int, ln, "d"),
            tau=_num(kv["tau"], float, ln, "tau"), alpha=_num(kv["alpha"], float, ln, "alpha"),
            theta=_num(kv["theta"], float, ln, "theta"), geometry=GeometryKind.parse(kv["geom"]),
            seed=_num(kv["seed"], int, ln, "seed"))
    except ValueError as exc:
        if isinstance(exc, DataError):
            raise
        raise DataError(str(exc), line=ln) from None

    count = _section(r, "V")
    d = params.d
    pos = np.empty((count, d))
    w = np.empty(count)
    for i in range(count):
        toks = r.next("vertex line").split()
        if len(toks) != d + 2:
            raise DataError(f"vertex line needs {d + 2} fields, got {len(toks)}", line=r.no)
        if _num(toks[0], int, r.no, "vertex id") != i:
            raise DataError(f"vertex ids must be 0..{count - 1} in order", line=r.no)
        pos[i] = [_num(t, float, r.no, "coordinate") for t in toks[1:-1]]
        w[i] = _num(toks[-1], float, r.no, "weight")
        if np.any((pos[i] < 0) | (pos[i] >= 1)):
            raise DataError("coordinates must lie in [0, 1)", line=r.no)
        if not w[i] >= 1:
            raise DataError("weights must be >= 1", line=r.no)

    m = _section(r, "E")
    e = np.empty((m, 2), dtype=np.int64)
    for i in range(m):
        toks = r.next("edge line").split()
        if len(toks) != 2:
            raise DataError("edge line needs two ids", line=r.no)
        u, v = (_num(t, int, r.no, "vertex id") for t in toks)
        if not (0 <= u < v < count):
            raise DataError(f"edge ({u}, {v}) must satisfy 0 <= u < v < {count}", line=r.no)
        e[i] = (u, v)
    g = Graph.from_edges(params, pos, w, e[:, 0], e[:, 1])
    if g.num_edges != m:
        raise DataError("duplicate edges", line=r.no)
    return g


def _section(r, tag):
    toks = r.next(f"'{tag} <count>' line").split()
    if len(toks) != 2 or toks[0] != tag:
        raise DataError(f"expected '{tag} <count>'", line=r.no)
    n = _num(toks[1], int, r.no, "count")
    if n < 0:
        raise DataError("negative count", line=r.no)
    return n


def load_graph(path):
    if hasattr(path, "readline"):
        return read_graph(path)
    if not os.path.exists(path):
        raise DataError(f"no such file: {path}")
    with open(path) as fh:
        return read_graph(fh)


def loads(text):
    return read_graph(io.StringIO(text))
