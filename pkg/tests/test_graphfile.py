import io

import numpy as np
import pytest

from girgspread.errors import DataError
from girgspread.graphfile import dumps, load_graph, loads, save_graph
from girgspread.model import ModelParams, sample_graph


def same_graph(a, b):
    assert a.params.n == b.params.n and a.params.d == b.params.d
    assert a.params.tau == b.params.tau and a.params.alpha == b.params.alpha
    assert a.params.theta == b.params.theta and a.params.geometry is b.params.geometry
    assert a.params.seed == b.params.seed
    assert np.array_equal(a.positions, b.positions) and np.array_equal(a.weights, b.weights)
    assert np.array_equal(a.edges(), b.edges())


@pytest.mark.parametrize("geom,d", [("inf", 1), ("min", 2), ("inf", 3)])
def test_round_trip_bit_exact(tmp_path, geom, d):
    g = sample_graph(ModelParams(n=400.5, d=d, tau=2.37, alpha=1.9, theta=0.8, geometry=geom, seed=2 ** 63 + 5))
    path = tmp_path / "g.girg"
    save_graph(str(path), g)
    same_graph(g, load_graph(str(path)))
    same_graph(g, loads(dumps(g)))
    buf = io.StringIO()
    save_graph(buf, g)
    buf.seek(0)
    same_graph(g, load_graph(buf))


def test_empty_graph_round_trip():
    g = sample_graph(ModelParams(n=10, fixed_count=0))
    text = dumps(g)
    assert "V 0\n" in text and text.endswith("E 0\n")
    h = loads(text)
    assert h.num_vertices == 0 and h.num_edges == 0


GOOD = ("#girg v1\nparams n=10 d=1 tau=2.5 alpha=2 theta=1 geom=inf seed=3\n"
        "V 2\n0 0.25 1.5\n1 0.75 2\nE 1\n0 1\n")


def test_good_text_parses():
    g = loads(GOOD)
    assert g.num_vertices == 2 and g.has_edge(0, 1) and g.weights[1] == 2.0


def test_unknown_version():
    with pytest.raises(DataError) as exc:
        loads(GOOD.replace("v1", "v9"))
    assert exc.value.line == 1 and "v9" in str(exc.value)


@pytest.mark.parametrize("old,new,line", [
    ("tau=2.5", "tau=1.5", 2),          # invalid model parameter
    ("geom=inf", "geom=l2", 2),
    ("V 2", "V two", 3),
    ("0 0.25 1.5", "0 1.25 1.5", 4),    # coordinate outside [0,1)
    ("1 0.75 2", "1 0.75 0.5", 5),      # weight below 1
    ("1 0.75 2", "3 0.75 2", 5),        # ids out of order
    ("0 1\n", "1 0\n", 7),              # u < v required
    ("0 1\n", "0 2\n", 7),
    ("E 1\n0 1\n", "E 2\n0 1\n0 1\n", 8),  # duplicate edge
    ("E 1", "E 3", 8),                  # truncated
])
def test_malformed_lines(old, new, line):
    with pytest.raises(DataError) as exc:
        loads(GOOD.replace(old, new))
    assert exc.value.line == line, str(exc.value)
