"""Gaussian surface-area measures of planar convex bodies, weighted by a
power of the support value.

For a polygon the measure is atomic, one atom per edge sitting at the edge
normal.  Because the support value is constant along an edge, the atom
weight reduces to a one-dimensional Gaussian segment integral with the
squared radius split as |x|^2 = h^2 + t^2, so the weight is exact up to the
normal CDF.  For a smooth body given by its support function the measure
has a density against arclength in the normal angle, evaluated nodewise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtr

from .errors import InvalidPolygonError
from .scalar_kernel import disk_measure
from .support import SupportFn

_GEOM_RTOL = 1e-12


@dataclass(frozen=True)
class Polygon:
    """Strictly convex polygon, counterclockwise, origin strictly inside."""

    vertices: np.ndarray

    def __post_init__(self):
        verts = np.ascontiguousarray(self.vertices, dtype=float)
        object.__setattr__(self, "vertices", verts)
        if verts.ndim != 2 or verts.shape[1] != 2 or verts.shape[0] < 3:
            raise InvalidPolygonError(
                f"need at least 3 planar vertices, got shape {verts.shape}"
            )
        if not np.all(np.isfinite(verts)):
            raise InvalidPolygonError("vertices must be finite")
        scale = float(np.max(np.abs(verts)))
        edges = np.roll(verts, -1, axis=0) - verts
        cross = edges[:, 0] * np.roll(edges, -1, axis=0)[:, 1] - edges[:, 1] * np.roll(
            edges, -1, axis=0
        )[:, 0]
        if np.min(cross) <= _GEOM_RTOL * scale * scale:
            raise InvalidPolygonError(
                "vertex sequence is not strictly convex counterclockwise "
                "(collinear or reflex turn found)"
            )
        lengths = np.hypot(edges[:, 0], edges[:, 1])
        normals = np.stack([edges[:, 1], -edges[:, 0]], axis=1) / lengths[:, None]
        supports = np.sum(verts * normals, axis=1)
        if np.min(supports) <= _GEOM_RTOL * scale:
            raise InvalidPolygonError("origin is not strictly inside the polygon")

    @property
    def n_edges(self) -> int:
        return self.vertices.shape[0]

    def edge_frames(self):
        """Per edge: outward unit normal, support value, endpoint tangential
        coordinates (t0 < t1) in the frame where x = h*normal + t*tangent."""
        verts = self.vertices
        nxt = np.roll(verts, -1, axis=0)
        edges = nxt - verts
        lengths = np.hypot(edges[:, 0], edges[:, 1])
        tangents = edges / lengths[:, None]
        normals = np.stack([tangents[:, 1], -tangents[:, 0]], axis=1)
        supports = np.sum(verts * normals, axis=1)
        t0 = np.sum(verts * tangents, axis=1)
        t1 = np.sum(nxt * tangents, axis=1)
        return normals, supports, t0, t1


@dataclass(frozen=True)
class DiscreteMeasure:
    """Atomic measure on the circle: one (angle, weight) pair per atom."""

    angles: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        ang = np.ascontiguousarray(self.angles, dtype=float)
        wts = np.ascontiguousarray(self.weights, dtype=float)
        object.__setattr__(self, "angles", ang)
        object.__setattr__(self, "weights", wts)
        if ang.shape != wts.shape or ang.ndim != 1:
            raise ValueError("angles and weights must be matching 1-d arrays")
        if np.any(wts < 0.0) or not np.all(np.isfinite(wts)):
            raise ValueError("weights must be finite and nonnegative")

    @property
    def total(self) -> float:
        return float(np.sum(self.weights))


def polygon_measure(poly: Polygon, p: float) -> DiscreteMeasure:
    """Atom weights of the weighted Gaussian boundary measure of a polygon.

    Per edge the weight is h^(1-p) * exp(-h^2/2) * (Phi(t1) - Phi(t0)) divided
    by sqrt(2*pi), with Phi the standard normal CDF; no quadrature involved.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"exponent p must lie in [0, 1], got {p}")
    normals, supports, t0, t1 = poly.edge_frames()
    weights = (
        supports ** (1.0 - p)
        * np.exp(-supports * supports / 2.0)
        * (ndtr(t1) - ndtr(t0))
        / math.sqrt(2.0 * math.pi)
    )
    angles = np.mod(np.arctan2(normals[:, 1], normals[:, 0]), 2.0 * np.pi)
    return DiscreteMeasure(angles=angles, weights=weights)


def smooth_measure_density(h: SupportFn, p: float) -> np.ndarray:
    """Nodal density of the weighted Gaussian boundary measure of a smooth
    body: h^(1-p) * exp(-(h'^2+h^2)/2) * (h''+h) / (2*pi)."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"exponent p must lie in [0, 1], got {p}")
    hp = h.derivative(1)
    curv = h.curvature_factor()
    return (
        h.values ** (1.0 - p)
        * np.exp(-(hp * hp + h.values * h.values) / 2.0)
        * curv
        / (2.0 * math.pi)
    )


def smooth_total_measure(h: SupportFn, p: float) -> float:
    """Total mass of the smooth-body measure by the trapezoidal rule, which
    is spectrally accurate on the periodic grid."""
    density = smooth_measure_density(h, p)
    return float(2.0 * math.pi * np.mean(density))


def regular_ngon(
    n: int, r: float, mode: str = "inscribed", offset: float = 0.0
) -> Polygon:
    """Regular n-gon tied to the disk of radius r.

    Inscribed puts the vertices on the disk boundary; circumscribed scales
    the circumradius by 1/cos(pi/n) so the edges are tangent to the disk.
    """
    if n < 3:
        raise ValueError(f"polygon needs at least 3 vertices, got {n}")
    if r <= 0.0:
        raise ValueError(f"disk radius must be positive, got {r}")
    if mode == "inscribed":
        radius = r
    elif mode == "circumscribed":
        radius = r / math.cos(math.pi / n)
    else:
        raise ValueError(f"mode must be inscribed or circumscribed, got {mode!r}")
    angles = offset + 2.0 * np.pi * np.arange(n) / n
    verts = radius * np.stack([np.cos(angles), np.sin(angles)], axis=1)
    return Polygon(verts)


@dataclass(frozen=True)
class ConvergenceCurve:
    """Total-measure gap of regular n-gons against the limiting disk."""

    ns: tuple
    gaps: np.ndarray
    disk_total: float
    mode: str

    @property
    def is_decreasing(self) -> bool:
        return bool(np.all(np.diff(self.gaps) < 0.0))


def measure_convergence_check(
    ns, r: float, p: float, mode: str = "inscribed"
) -> ConvergenceCurve:
    """Gap between n-gon total measure and the disk value per refinement."""
    ns = tuple(int(n) for n in ns)
    disk_total = float(disk_measure(r, p))
    gaps = np.empty(len(ns))
    for i, n in enumerate(ns):
        total = polygon_measure(regular_ngon(n, r, mode), p).total
        gaps[i] = abs(total - disk_total)
    return ConvergenceCurve(ns=ns, gaps=gaps, disk_total=disk_total, mode=mode)
