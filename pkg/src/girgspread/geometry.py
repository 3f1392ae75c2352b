"""Torus geometry: coordinate distances, the two norms, their ball volumes and
the GIRG connection kernel.

Points live on the unit torus ``[0, 1)^d``.  Distances are either the
infinity norm (``GeometryKind.EuclideanInf``) or the minimum component
distance (``GeometryKind.MinComponent``); both use the wrapped coordinate
distance ``min(|a - b|, 1 - |a - b|)``.

All functions accept scalars or numpy arrays and broadcast.
"""
import enum

import numpy as np

from .errors import UsageError


class GeometryKind(enum.Enum):
    EuclideanInf = "inf"
    MinComponent = "min"

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        for kind in cls:
            if value in (kind.value, kind.name):
                return kind
        raise UsageError(f"unknown geometry {value!r}; expected 'inf' or 'min'")

    @property
    def code(self):
        """Integer code used by the compiled kernels (0 = inf, 1 = min)."""
        return 0 if self is GeometryKind.EuclideanInf else 1


def torus_coord_dist(a, b):
    delta = np.abs(np.asarray(a, dtype=float) - np.asarray(b, dtype=float))
    out = np.minimum(delta, 1.0 - delta)
    return out if out.ndim else float(out)


def dist(x, y, geometry):
    """Distance between points ``x`` and ``y`` (last axis = coordinates)."""
    geometry = GeometryKind.parse(geometry)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape[-1] != y.shape[-1]:
        raise UsageError(f"dimension mismatch: {x.shape[-1]} vs {y.shape[-1]}")
    per_coord = torus_coord_dist(x, y)
    per_coord = np.asarray(per_coord)
    if geometry is GeometryKind.EuclideanInf:
        out = per_coord.max(axis=-1)
    else:
        out = per_coord.min(axis=-1)
    return out if np.ndim(out) else float(out)


def volume(r, d, geometry):
    """Exact torus volume of the closed ball of radius ``r``."""
    geometry = GeometryKind.parse(geometry)
    r = np.asarray(r, dtype=float)
    if np.any(r < 0):
        raise UsageError("radius must be nonnegative")
    if geometry is GeometryKind.EuclideanInf:
        out = np.minimum(1.0, (2.0 * r) ** d)
    else:
        out = 1.0 - np.maximum(0.0, 1.0 - 2.0 * r) ** d
    return out if out.ndim else float(out)


def radius_for_volume(v, d, geometry):
    """Inverse of :func:`volume` on ``[0, 1]``; returns radii in ``[0, 0.5]``."""
    geometry = GeometryKind.parse(geometry)
    v = np.clip(np.asarray(v, dtype=float), 0.0, 1.0)
    if geometry is GeometryKind.EuclideanInf:
        out = v ** (1.0 / d) / 2.0
    else:
        out = (1.0 - (1.0 - v) ** (1.0 / d)) / 2.0
    return out if out.ndim else float(out)


def connection_prob(wu, wv, r, params):
    """Edge probability ``theta * min(1, (wu*wv / (n*V(r)))**alpha)``.

    A zero volume (coincident points) gives ``theta``.
    """
    vol = np.asarray(volume(r, params.d, params.geometry), dtype=float)
    prod = np.asarray(wu, dtype=float) * np.asarray(wv, dtype=float)
    denom = params.n * vol
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(denom > 0, prod / np.where(denom > 0, denom, 1.0), np.inf)
    out = params.theta * np.minimum(ratio, 1.0) ** params.alpha
    return out if out.ndim else float(out)
