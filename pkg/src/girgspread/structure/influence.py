"""Balls and plates of influence, strong edges."""
import numpy as np

from ..errors import UsageError
from ..geometry import GeometryKind, dist, radius_for_volume, torus_coord_dist, volume


def ball_of_influence_radius(w, params):
    """Radius of the ball of volume ``min(1, w/n)`` under ``params.geometry``."""
    if np.any(np.asarray(w) < 1):
        raise UsageError("weights are >= 1")
    return radius_for_volume(np.minimum(1.0, np.asarray(w, dtype=float) / params.n),
                             params.d, params.geometry)


def is_strong_edge(u, v, params):
    """``W_u W_v >= n V(|x_u - x_v|)`` for two :class:`Vertex` values."""
    r = dist(u.position, v.position, params.geometry)
    return bool(u.weight * v.weight >= params.n * volume(r, params.d, params.geometry))


def distances_from(graph, v):
    """Distances from vertex ``v`` to every vertex."""
    return np.asarray(dist(graph.positions, graph.positions[v], graph.params.geometry)).reshape(-1)


def mcd_plate(graph, v, j, scale=1.0):
    """Vertices whose ``j``-th coordinate (1-based) is within ``scale*W_v/n`` of ``v``'s."""
    p = graph.params
    if p.geometry is not GeometryKind.MinComponent:
        raise UsageError("plates of influence are defined for the minimum-component geometry")
    if not 1 <= j <= p.d:
        raise UsageError(f"dimension index must lie in 1..{p.d}, got {j}")
    if scale < 1:
        raise UsageError("scale must be >= 1")
    if not 0 <= v < graph.num_vertices:
        raise UsageError(f"vertex {v} does not exist")
    half = scale * graph.weights[v] / p.n
    cd = np.atleast_1d(torus_coord_dist(graph.positions[:, j - 1], graph.positions[v, j - 1]))
    return np.flatnonzero(cd <= half)
