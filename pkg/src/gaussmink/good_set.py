"""Construction and validation of oscillation data for the isotropic equation.

A nonconstant periodic solution oscillates between a minimum level h0 and
a maximum level h1 = h0 * s with s > 1.  Conservation of the first integral
forces the potential to match across the pair, phi(h0) = phi(h0 * s), with
phi rising at h0 and falling (or critical) at h0 * s.  A quadruple
(c, h0, p, s) satisfying all of that is the basic object the half-period
quadrature and the shooting integrator consume; the admissible aspect ratios
s for a given (c, p) form an interval (1, S_c) whose endpoint this module
also computes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .errors import (
    AspectTooLargeError,
    EpsTooLargeError,
    NoGoodSetError,
    NotGoodSetError,
)
from .scalar_kernel import (
    Params,
    TANGENT_RTOL,
    c_threshold,
    constant_radii,
    potential,
    potential_deriv,
)

# residual of the defining equation after construction
EQ_RESIDUAL = 1e-12
# slack used when re-checking invariants on already-built data
CHECK_TOL = 1e-10


@dataclass(frozen=True)
class GoodSet:
    """Oscillation datum: level c, minimum h0, exponent p, aspect s = h1/h0."""

    c: float
    h0: float
    p: float
    s: float

    def __post_init__(self):
        Params(self.p, self.c)
        if self.h0 <= 0.0:
            raise ValueError(f"h0 must be positive, got {self.h0}")
        if self.s <= 1.0:
            raise ValueError(f"aspect s must exceed 1, got {self.s}")

    @property
    def h1(self) -> float:
        return self.h0 * self.s

    @property
    def params(self) -> Params:
        return Params(self.p, self.c)

    @property
    def level(self) -> float:
        """Conserved energy of the oscillation, phi(h0)."""
        return potential(self.h0, self.params)


@dataclass(frozen=True)
class AspectBound:
    """Supremum of admissible aspect ratios; value is math.inf when unbounded."""

    value: float

    @property
    def finite(self) -> bool:
        return math.isfinite(self.value)

    def admits(self, s: float) -> bool:
        return 1.0 < s < self.value


def _match_gap(h: float, p: float, c: float, s: float) -> float:
    """phi(h) - phi(h*s) in a cancellation-free form."""
    # e^{-h^2/2} - e^{-(hs)^2/2} = -e^{-h^2/2} expm1(-h^2 (s^2-1)/2)
    diff = -math.exp(-h * h / 2.0) * math.expm1(-h * h * (s * s - 1.0) / 2.0)
    if p == 0.0:
        return diff - c * math.log(s)
    return diff - (c / p) * h**p * math.expm1(p * math.log(s))


def is_good_set(c: float, h0: float, p: float, s: float) -> bool:
    """Check the level-matching and slope conditions for (c, h0, p, s)."""
    params = Params(p, c)
    if h0 <= 0.0:
        raise ValueError(f"h0 must be positive, got {h0}")
    if s <= 1.0:
        raise ValueError(f"aspect s must exceed 1, got {s}")
    h1 = h0 * s

    pot0 = potential(h0, params)
    pot1 = potential(h1, params)
    scale = max(1.0, abs(pot0), abs(pot1))
    if abs(pot0 - pot1) > CHECK_TOL * scale:
        return False

    d0 = potential_deriv(h0, params)
    d1 = potential_deriv(h1, params)
    dscale = max(abs(c * h0 ** (p - 1.0)), h0 * math.exp(-h0 * h0 / 2.0))
    if d0 <= 1e-12 * dscale:
        return False
    d1scale = max(abs(c * h1 ** (p - 1.0)), h1 * math.exp(-h1 * h1 / 2.0))
    if d1 > 1e-12 * d1scale:
        return False

    try:
        roots = constant_radii(params)
    except Exception:
        return False
    if not (h0 < roots.m1 * (1.0 + CHECK_TOL)):
        return False
    if not (roots.m1 * (1.0 - CHECK_TOL) < h1 <= roots.m2 * (1.0 + CHECK_TOL)):
        return False
    return True


def solve_h0(c: float, p: float, s: float) -> float:
    """Solve phi(h0) = phi(h0 * s) for the minimum level h0 of a good set.

    The root is bracketed inside [m1/s, min(m1, m2/s)], which pins the
    maximum level h0*s into the falling stretch [m1, m2] of the potential and
    rules out spurious matches beyond m2.
    """
    params = Params(p, c)
    if s <= 1.0:
        raise ValueError(f"aspect s must exceed 1, got {s}")
    cp = c_threshold(p)
    if c >= cp * (1.0 - TANGENT_RTOL):
        raise NoGoodSetError(f"level c = {c} at or above the fold c_p = {cp}")

    bound = aspect_bound(c, p)
    if not bound.admits(s):
        raise AspectTooLargeError(
            f"aspect s = {s} is not below the admissible bound {bound.value}"
        )

    roots = constant_radii(params)
    lo = roots.m1 / s
    hi = min(roots.m1, roots.m2 / s)
    flo = _match_gap(lo, p, c, s)
    fhi = _match_gap(hi, p, c, s)
    if not flo < 0.0:
        raise NotGoodSetError(f"degenerate aspect s = {s}: no sign change at the bracket")
    if not fhi > 0.0:
        raise AspectTooLargeError(f"aspect s = {s} is numerically at the admissible bound")

    h0 = brentq(
        lambda h: _match_gap(h, p, c, s),
        lo,
        hi,
        xtol=1e-300,
        rtol=4 * np.finfo(float).eps,
    )

    # guarded Newton polish on the matching gap
    for _ in range(2):
        r = _match_gap(h0, p, c, s)
        if abs(r) < 1e-17:
            break
        d = potential_deriv(h0, params) - s * potential_deriv(h0 * s, params)
        if d == 0.0:
            break
        step = r / d
        if abs(step) > 0.1 * h0:
            break
        h0 -= step

    if abs(_match_gap(h0, p, c, s)) >= EQ_RESIDUAL:
        raise NotGoodSetError("level-matching residual did not reach tolerance")
    return h0


def make_good_set(c: float, p: float, s: float) -> GoodSet:
    """Construct and validate the good set for (c, p, s)."""
    gs = GoodSet(c=c, h0=solve_h0(c, p, s), p=p, s=s)
    if not is_good_set(gs.c, gs.h0, gs.p, gs.s):
        raise NotGoodSetError("constructed quadruple failed validation")
    return gs


def aspect_bound(c: float, p: float) -> AspectBound:
    """Supremum S_c of admissible aspect ratios at level c.

    The bound is infinite exactly when the potential value at the outer
    radius m2 does not exceed the potential's limit at 0+ (which is 1 for
    p > 0 and -inf for p = 0, so the p = 0 bound is mathematically always
    finite).  Otherwise S_c = m2 / y0, where y0 < m1 matches the potential
    value at m2 from the rising side.  At p = 0 with very small levels the
    matching height underflows double precision; the bound is then beyond
    float range and comes back as inf.
    """
    params = Params(p, c)
    cp = c_threshold(p)
    if c >= cp * (1.0 - TANGENT_RTOL):
        raise NoGoodSetError(f"level c = {c} at or above the fold c_p = {cp}")
    roots = constant_radii(params)
    pot_m2 = potential(roots.m2, params)
    if p > 0.0 and pot_m2 <= 1.0:
        return AspectBound(math.inf)

    def f(t):
        return potential(t, params) - pot_m2

    lo = roots.m1
    while lo > 1e-300:
        lo *= 0.5
        if f(lo) < 0.0:
            break
    else:
        return AspectBound(math.inf)
    y0 = brentq(f, lo, roots.m1, xtol=1e-300, rtol=4 * np.finfo(float).eps)
    return AspectBound(roots.m2 / y0)


def matching_level(params: Params, h0: float) -> float:
    """Maximum level h1 in [m1, m2] with phi(h1) = phi(h0), given h0 < m1."""
    roots = constant_radii(params)
    if not 0.0 < h0 < roots.m1:
        raise NotGoodSetError(f"h0 = {h0} is not below the inner radius {roots.m1}")
    target = potential(h0, params)
    if target < potential(roots.m2, params):
        raise AspectTooLargeError(
            "potential level at h0 drops below the well floor; no matching maximum"
        )

    def f(t):
        return potential(t, params) - target

    return brentq(f, roots.m1, roots.m2, xtol=1e-300, rtol=4 * np.finfo(float).eps)


def implied_aspect(params: Params, h0: float) -> float:
    """Aspect ratio h1/h0 of the oscillation whose minimum is h0."""
    return matching_level(params, h0) / h0


def eps_ceiling(p_star: float) -> float:
    """Admissible level ceiling p* e (1 - e^{-(1/2) e^{-2/p*}}) for fixed-level paths."""
    if not 0.0 < p_star <= 1.0:
        raise ValueError(f"lower exponent must lie in (0, 1], got {p_star}")
    return p_star * math.e * (-math.expm1(-0.5 * math.exp(-2.0 / p_star)))


def h0_of_p_path(eps: float, p: float, s: float, p_star: float) -> float:
    """Minimum level h0(p) along the fixed-level path c = eps, p in [p*, 1].

    Below the ceiling the good set exists for every aspect s > 1, h0(p) is
    unique and decreasing in p, and the maximum level stays below e^{-1/p}.
    """
    ceiling = eps_ceiling(p_star)
    if not 0.0 < eps < ceiling:
        raise EpsTooLargeError(
            f"eps = {eps} is not inside (0, {ceiling}) for p* = {p_star}"
        )
    if not p_star <= p <= 1.0:
        raise ValueError(f"p = {p} outside the path range [{p_star}, 1]")
    h0 = solve_h0(eps, p, s)
    cap = math.exp(-1.0 / p)
    if h0 * s > cap * (1.0 + 1e-9):
        raise NotGoodSetError(
            f"path invariant violated: h0*s = {h0 * s} exceeds e^(-1/p) = {cap}"
        )
    return h0


def c_of_p_path(h_star: float, s_star: float, p: float) -> float:
    """Level c(p) making (c(p), h*, p, s*) a good set with h* and s* held fixed.

    Continuous down to p = 0, where the power-mean expression degenerates to
    the logarithmic one.
    """
    if h_star <= 0.0:
        raise ValueError("h* must be positive")
    if s_star <= 1.0:
        raise ValueError("s* must exceed 1")
    diff = -math.exp(-h_star * h_star / 2.0) * math.expm1(
        -h_star * h_star * (s_star * s_star - 1.0) / 2.0
    )
    if p == 0.0:
        return diff / math.log(s_star)
    return p * diff / (h_star**p * math.expm1(p * math.log(s_star)))
