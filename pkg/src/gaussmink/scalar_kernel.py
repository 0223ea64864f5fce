"""Scalar building blocks of the planar isotropic Gaussian Minkowski equation.

The isotropic equation h^{1-p} e^{-(h'^2+h^2)/2} (h'' + h) = c on the circle
has the constant solution h = t exactly when t^{2-p} e^{-t^2/2} = c, i.e. when
the total Gaussian surface measure of the centred disk of radius t equals c.
That disk measure is unimodal in t: it rises to its maximum c_p at the
critical radius sqrt(2-p) and decays beyond it, so a level c below c_p is hit
at exactly two radii m1 < sqrt(2-p) < m2.

Nonconstant solutions are organised by the potential
    phi(t) = e^{-t^2/2} + (c/p) t^p        (0 < p <= 1)
    phi(t) = e^{-t^2/2} + c log t          (p = 0)
whose derivative is t^{p-1} (c - disk_measure(t)); oscillation extrema occur
at pairs of radii where phi takes equal values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.optimize import brentq

from .errors import NoRootsError

# Levels within this relative distance of c_p are treated as tangent
# (double root at the critical radius).
TANGENT_RTOL = 1e-10

_ROOT_RESIDUAL = 1e-12
_MAX_DOUBLINGS = 60


@dataclass(frozen=True)
class Params:
    """Exponent p in [0, 1] and isotropic level c > 0."""

    p: float
    c: float

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"exponent p must lie in [0, 1], got {self.p}")
        if not self.c > 0.0:
            raise ValueError(f"level c must be positive, got {self.c}")


@dataclass(frozen=True)
class RootPair:
    """Radii of the constant solutions, m1 <= m2."""

    m1: float
    m2: float


def disk_measure(t, p: float):
    """Total Gaussian surface measure t^{2-p} e^{-t^2/2} of the disk of radius t."""
    t = np.asarray(t, dtype=float) if np.ndim(t) else float(t)
    if np.any(np.asarray(t) < 0.0):
        raise ValueError("radius must be nonnegative")
    return t ** (2.0 - p) * np.exp(-np.square(t) / 2.0)


def disk_measure_deriv(t, p: float):
    """Derivative of disk_measure in t: t^{1-p} e^{-t^2/2} ((2-p) - t^2)."""
    t = np.asarray(t, dtype=float) if np.ndim(t) else float(t)
    return t ** (1.0 - p) * np.exp(-np.square(t) / 2.0) * ((2.0 - p) - np.square(t))


def critical_radius(p: float) -> float:
    """Radius sqrt(2-p) where the disk measure peaks."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"exponent p must lie in [0, 1], got {p}")
    return math.sqrt(2.0 - p)


def c_threshold(p: float) -> float:
    """Largest level admitting constant solutions: (2-p)^{(2-p)/2} e^{-(2-p)/2}."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"exponent p must lie in [0, 1], got {p}")
    q = 2.0 - p
    return q ** (q / 2.0) * math.exp(-q / 2.0)


def density_threshold(p: float) -> float:
    """c_threshold expressed as a density value, c_p / (2 pi)."""
    return c_threshold(p) / (2.0 * math.pi)


def potential(t, params: Params):
    """Turning-point potential phi(t); the conserved energy of an extremum at height t."""
    p, c = params.p, params.c
    arr = np.asarray(t, dtype=float)
    if p == 0.0:
        if np.any(arr <= 0.0):
            raise ValueError("potential at p = 0 requires t > 0")
        out = np.exp(-arr * arr / 2.0) + c * np.log(arr)
    else:
        if np.any(arr < 0.0):
            raise ValueError("potential requires t >= 0")
        out = np.exp(-arr * arr / 2.0) + (c / p) * arr**p
    return out if np.ndim(t) else float(out)


def potential_deriv(t, params: Params):
    """phi'(t) = c t^{p-1} - t e^{-t^2/2} = t^{p-1} (c - disk_measure(t))."""
    p, c = params.p, params.c
    arr = np.asarray(t, dtype=float)
    if np.any(arr <= 0.0):
        raise ValueError("potential_deriv requires t > 0")
    out = c * arr ** (p - 1.0) - arr * np.exp(-arr * arr / 2.0)
    return out if np.ndim(t) else float(out)


def _polish_root(t: float, p: float, c: float) -> float:
    # one or two guarded Newton steps push the bracketed root to full precision
    for _ in range(3):
        r = float(disk_measure(t, p)) - c
        if abs(r) < 1e-16:
            break
        d = float(disk_measure_deriv(t, p))
        if d == 0.0:
            break
        step = r / d
        if abs(step) > 0.5 * t:
            break
        t -= step
    return t


@lru_cache(maxsize=4096)
def _roots_cached(p: float, c: float) -> RootPair:
    cp = c_threshold(p)
    rc = critical_radius(p)
    if abs(c - cp) <= TANGENT_RTOL * cp:
        return RootPair(rc, rc)
    if c > cp:
        raise NoRootsError(f"level c = {c} exceeds the fold value c_p = {cp}")

    def f(t):
        return float(disk_measure(t, p)) - c

    m1 = brentq(f, 0.0, rc, xtol=1e-300, rtol=4 * np.finfo(float).eps)
    m1 = _polish_root(m1, p, c)

    hi = rc + 1.0
    for _ in range(_MAX_DOUBLINGS):
        if f(hi) < 0.0:
            break
        hi *= 2.0
    else:
        raise NoRootsError("outer bracket for the larger radius did not close")
    m2 = brentq(f, rc, hi, xtol=1e-300, rtol=4 * np.finfo(float).eps)
    m2 = _polish_root(m2, p, c)

    for m in (m1, m2):
        if abs(float(disk_measure(m, p)) - c) >= _ROOT_RESIDUAL:
            raise NoRootsError(f"root residual above {_ROOT_RESIDUAL} at t = {m}")
    return RootPair(m1, m2)


def constant_radii(params: Params) -> RootPair:
    """Radii m1 <= m2 of the constant solutions at level c.

    Returns the degenerate pair (sqrt(2-p), sqrt(2-p)) at tangency and raises
    NoRootsError beyond it.
    """
    return _roots_cached(params.p, params.c)


def count_constant_solutions(params: Params) -> int:
    """Number of constant solutions at this level: 2 below c_p, 1 at it, 0 above."""
    cp = c_threshold(params.p)
    if abs(params.c - cp) <= TANGENT_RTOL * cp:
        return 1
    return 2 if params.c < cp else 0
