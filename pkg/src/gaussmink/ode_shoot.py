"""Shooting for the radial oscillation equation and closed-orbit search.

Nonconstant positive solutions of

    h'' = c * h^(p-1) * exp((h'^2 + h^2) / 2) - h

oscillate between a minimum level and the matching maximum of the conserved
energy.  Integrating from a minimum until the derivative first changes sign
measures the half period directly, which cross-checks the quadrature route.
A closed solution on the circle would need the half period to equal pi/k for
some positive integer k, so the orbit search scans minimum levels over their
admissible range, flags any grid point whose half period lands within a
tolerance of some pi/k, and separately brackets sign changes of the defect
between neighbouring grid points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp

from .errors import (
    HReachedZeroError,
    NoTurningPointError,
    StepFailureError,
    ToolkitError,
)
from .good_set import GoodSet, aspect_bound, matching_level
from .scalar_kernel import Params, constant_radii
from .theta_quad import pi_over_k_distance, theta_normalized

_THETA_SPAN = 8.0 * math.pi
_H_FLOOR = 1e-8
_EXP_ARG_MAX = 700.0


@dataclass
class Trajectory:
    """Sampled solution of the oscillation equation."""

    thetas: np.ndarray
    h: np.ndarray
    hp: np.ndarray
    energy0: float
    max_drift: float


@dataclass(frozen=True)
class ShootResult:
    """First turning point reached from a minimum level."""

    theta_star: float
    h_max: float
    s_observed: float
    trajectory: Trajectory


def first_integral(h, hp, params: Params):
    """Conserved energy along solutions; constant up to integrator drift."""
    h = np.asarray(h, dtype=float)
    hp = np.asarray(hp, dtype=float)
    if np.any(h <= 0.0):
        raise ValueError("energy is defined for positive levels only")
    core = np.exp(-(hp * hp + h * h) / 2.0)
    if params.p > 0.0:
        val = core + (params.c / params.p) * h**params.p
    else:
        val = core + params.c * np.log(h)
    return val if val.ndim else float(val)


def _rhs(params: Params):
    p, c = params.p, params.c

    def rhs(theta, y):
        h, hp = y
        arg = (hp * hp + h * h) / 2.0
        if arg > _EXP_ARG_MAX:
            raise StepFailureError(
                "state left the bounded energy region; the exponential factor overflowed"
            )
        return (hp, c * h ** (p - 1.0) * math.exp(arg) - h)

    return rhs


def integrate(
    params: Params,
    h0: float,
    hp0: float = 0.0,
    theta_max: float = _THETA_SPAN,
    tol: float = 1e-10,
    n_samples: int = 2001,
) -> Trajectory:
    """Integrate from (h0, hp0) over [0, theta_max] with dense sampling.

    Raises HReachedZeroError if the level collapses to the positivity floor,
    with the partial trajectory attached for inspection.
    """
    if h0 <= 0.0:
        raise ValueError(f"initial level must be positive, got {h0}")

    def hit_floor(theta, y):
        return y[0] - _H_FLOOR

    hit_floor.terminal = True
    hit_floor.direction = -1.0

    sol = solve_ivp(
        _rhs(params),
        (0.0, theta_max),
        (h0, hp0),
        method="DOP853",
        rtol=tol,
        atol=tol * 1e-2,
        events=(hit_floor,),
        dense_output=True,
    )
    if not sol.success and sol.status != 1:
        raise StepFailureError(f"integrator failed: {sol.message}")
    t_end = sol.t[-1]
    thetas = np.linspace(0.0, t_end, n_samples)
    states = sol.sol(thetas)
    h, hp = states[0], states[1]
    e0 = first_integral(h0, hp0, params)
    positive = h > 0.0
    drift = float(np.max(np.abs(first_integral(h[positive], hp[positive], params) - e0)))
    traj = Trajectory(thetas=thetas, h=h, hp=hp, energy0=e0, max_drift=drift)
    if sol.status == 1 and sol.t_events[0].size:
        raise HReachedZeroError(
            f"level reached the positivity floor at angle {sol.t_events[0][0]:.6f}",
            trajectory=traj,
        )
    return traj


def shoot_half_period(params: Params, h0: float, tol: float = 1e-10) -> ShootResult:
    """Angle from the minimum level h0 to the first maximum.

    h0 must lie strictly below the smaller constant radius so the level
    initially rises; the first sign change of the derivative marks the half
    period and the observed maximum gives the aspect ratio directly.
    """
    roots = constant_radii(params)
    if not h0 < roots.m1:
        raise ValueError(
            f"minimum level {h0} must lie below the smaller constant radius {roots.m1}"
        )

    def turning(theta, y):
        return y[1]

    turning.terminal = True
    turning.direction = -1.0

    def hit_floor(theta, y):
        return y[0] - _H_FLOOR

    hit_floor.terminal = True
    hit_floor.direction = -1.0

    sol = solve_ivp(
        _rhs(params),
        (0.0, _THETA_SPAN),
        (h0, 0.0),
        method="DOP853",
        rtol=tol,
        atol=tol * 1e-2,
        events=(turning, hit_floor),
        dense_output=True,
    )
    if not sol.success and sol.status != 1:
        raise StepFailureError(f"integrator failed: {sol.message}")
    if sol.t_events[1].size:
        raise HReachedZeroError("level collapsed before the first turning point")
    if not sol.t_events[0].size:
        raise NoTurningPointError(
            f"no turning point within angle {_THETA_SPAN:.3f} from level {h0}"
        )
    theta_star = float(sol.t_events[0][0])
    theta_star = _refine_turning(sol.sol, theta_star)
    h_max = float(sol.sol(theta_star)[0])
    thetas = np.linspace(0.0, theta_star, 1001)
    states = sol.sol(thetas)
    e0 = first_integral(h0, 0.0, params)
    drift = float(
        np.max(np.abs(first_integral(states[0], states[1], params) - e0))
    )
    traj = Trajectory(
        thetas=thetas, h=states[0], hp=states[1], energy0=e0, max_drift=drift
    )
    return ShootResult(
        theta_star=theta_star, h_max=h_max, s_observed=h_max / h0, trajectory=traj
    )


def _refine_turning(dense, theta0: float, width: float = 1e-6) -> float:
    """Bisect the derivative's sign change around the event location."""
    lo, hi = theta0 - width, theta0 + width
    flo = dense(lo)[1]
    fhi = dense(hi)[1]
    if not (flo > 0.0 > fhi):
        return theta0
    while hi - lo > 1e-12:
        mid = 0.5 * (lo + hi)
        if dense(mid)[1] > 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


@dataclass
class ClosedOrbitScan:
    """Defect of the half period against pi/k over admissible minimum levels.

    ``candidates`` lists the grid points whose defect fell below the
    candidate tolerance; that is the advertised outcome of the search.
    ``brackets`` records sign changes of the defect between neighbouring
    grid points and is purely diagnostic: a crossing between points says
    the defect vanishes somewhere in the gap, not that any grid point is
    close to pi/k, and the search claims nothing in the other direction.
    """

    c: float
    p: float
    h0_values: np.ndarray
    theta_values: np.ndarray
    dist_values: np.ndarray
    k_values: np.ndarray
    candidate_tol: float = 1e-4
    candidates: list = field(default_factory=list)
    brackets: list = field(default_factory=list)
    n_failures: int = 0

    @property
    def found(self) -> bool:
        return bool(self.candidates)

    @property
    def min_dist(self) -> float:
        ok = np.isfinite(self.dist_values)
        return float(np.min(self.dist_values[ok])) if np.any(ok) else math.inf

    @property
    def argmin_h0(self) -> float:
        ok = np.isfinite(self.dist_values)
        if not np.any(ok):
            return math.nan
        idx = np.argmin(np.where(ok, self.dist_values, math.inf))
        return float(self.h0_values[idx])


def find_closed_solutions(
    params: Params,
    n_h0: int = 200,
    tol: float = 1e-9,
    margin: float = 1e-6,
    candidate_tol: float = 1e-4,
) -> ClosedOrbitScan:
    """Scan admissible minimum levels for half periods hitting pi/k.

    A closed nonconstant solution would force the half period to equal some
    pi/k.  Each grid point whose computed half period lies within
    ``candidate_tol`` of a pi/k is flagged as a candidate; an empty candidate
    list is the expected outcome across the whole exponent range handled
    here.  Sign changes of the defect between neighbouring grid points are
    additionally bracketed for diagnosis.  Near the admissibility ceiling
    the half period grows without bound, so a bracket with a large defect at
    both ends simply marks that steep climb passing a pi/k level.
    """
    roots = constant_radii(params)
    if roots.m2 - roots.m1 <= 0.0:
        return ClosedOrbitScan(
            c=params.c,
            p=params.p,
            h0_values=np.empty(0),
            theta_values=np.empty(0),
            dist_values=np.empty(0),
            k_values=np.empty(0, dtype=int),
        )
    bound = aspect_bound(params.c, params.p)
    if bound.finite:
        h0_lo = (roots.m2 / bound.value) * (1.0 + 1e-7)
    else:
        h0_lo = roots.m1 * 1e-3
    h0_hi = roots.m1 * (1.0 - margin)
    h0s = np.geomspace(max(h0_lo, roots.m1 * 1e-6), h0_hi, n_h0)
    thetas = np.full(n_h0, math.nan)
    dists = np.full(n_h0, math.nan)
    ks = np.zeros(n_h0, dtype=int)
    failures = 0
    for i, h0 in enumerate(h0s):
        try:
            h1 = matching_level(params, float(h0))
            s = h1 / h0
            if s <= 1.0:
                failures += 1
                continue
            gs = GoodSet(c=params.c, h0=float(h0), p=params.p, s=float(s))
            thetas[i] = theta_normalized(gs, tol).value
            dists[i], ks[i] = pi_over_k_distance(thetas[i])
        except (ToolkitError, ValueError):
            failures += 1
    candidates = [
        (float(h0s[i]), int(ks[i]))
        for i in range(n_h0)
        if np.isfinite(dists[i]) and dists[i] < candidate_tol
    ]
    brackets = []
    for i in range(n_h0 - 1):
        if not (np.isfinite(thetas[i]) and np.isfinite(thetas[i + 1])):
            continue
        for k in {int(ks[i]), int(ks[i + 1])}:
            level = math.pi / k
            d0, d1 = thetas[i] - level, thetas[i + 1] - level
            if d0 == 0.0 or d1 == 0.0 or (d0 < 0.0 < d1) or (d1 < 0.0 < d0):
                brackets.append((float(h0s[i]), float(h0s[i + 1]), k))
    return ClosedOrbitScan(
        c=params.c,
        p=params.p,
        h0_values=h0s,
        theta_values=thetas,
        dist_values=dists,
        k_values=ks,
        candidate_tol=candidate_tol,
        candidates=candidates,
        brackets=brackets,
        n_failures=failures,
    )
