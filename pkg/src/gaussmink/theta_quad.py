"""Half-period quadrature for oscillations of the isotropic equation.

The angle a nonconstant solution spends travelling from a minimum level h0 to
the next maximum h0 * s is an integral over the level ratio x in [1, s],

    Theta = int_1^s dx / sqrt(R(x)),

whose radicand R vanishes linearly at both endpoints (simple turning points).
Two algebraically equivalent radicands are provided: the raw one built from
the conserved energy, and a normalized one that substitutes the matching
identity so the endpoint zeros are exact by construction.  Both are handled
by a double-exponential (tanh-sinh) rule with explicit endpoint distances, a
linearized radicand inside a tiny boundary layer, and a dust clamp for
rounding noise.

Closed nonconstant solutions would need Theta to hit pi/k for an integer k,
so the scan facilities report the distance to the nearest pi/k together with
monotonicity flags in the level c and the exponent p.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Optional

import numpy as np

from .errors import (
    IntegrandNegativeError,
    NotGoodSetError,
    QuadratureError,
    ToolkitError,
)
from .good_set import (
    GoodSet,
    aspect_bound,
    c_of_p_path,
    eps_ceiling,
    h0_of_p_path,
    is_good_set,
    solve_h0,
)
from .scalar_kernel import c_threshold

_T_CAP = 4.0  # tanh-sinh abscissa cutoff; weights are ~1e-17 beyond it
_SWITCH_FRAC = 1e-8  # boundary-layer width as a fraction of (s - 1)
_MIN_TOL = 1e-10

CSV_COLUMNS = (
    "c",
    "p",
    "s",
    "h0",
    "theta",
    "err",
    "gt_pi",
    "dist_pi_over_k",
    "dc_flag",
    "dp_flag",
)


@dataclass(frozen=True)
class ThetaResult:
    """Half-period value with the quadrature's own error estimate."""

    value: float
    est_error: float
    form: str


def _tanh_sinh(fvals, a: float, b: float, tol: float, max_level: int = 11):
    """Integrate fvals(x, dlo, dhi) over [a, b] with the tanh-sinh rule.

    dlo and dhi are the distances to the endpoints, computed in a
    cancellation-free way so the integrand can resolve its endpoint
    singularities far below floating-point spacing around a and b.
    """
    half = 0.5 * (b - a)
    width = b - a

    def contrib(ts: np.ndarray, h: float) -> float:
        z = 0.5 * np.pi * np.sinh(ts)
        ez = np.exp(-2.0 * np.abs(z))
        dist = 2.0 * half * ez / (1.0 + ez)
        pos = ts >= 0.0
        x = np.where(pos, b - dist, a + dist)
        dlo = np.where(pos, width - dist, dist)
        dhi = np.where(pos, dist, width - dist)
        w = h * half * 0.5 * np.pi * np.cosh(ts) / np.cosh(z) ** 2
        return float(np.sum(w * fvals(x, dlo, dhi)))

    h = 1.0
    ts = np.arange(-int(_T_CAP), int(_T_CAP) + 1, dtype=float)
    total = contrib(ts, h)
    for level in range(1, max_level + 1):
        h *= 0.5
        k = np.arange(1, int(_T_CAP / h) + 1, 2, dtype=float)
        ts = np.concatenate([-k[::-1], k]) * h
        total_new = 0.5 * total + contrib(ts, h)
        err = abs(total_new - total)
        total = total_new
        if level >= 3 and err <= tol * max(1.0, abs(total)):
            return total, err
    raise QuadratureError(
        f"tanh-sinh rule did not reach tol = {tol} within {max_level} levels"
    )


def _check_slopes(slope_a: float, slope_b: float) -> None:
    if not slope_a > 0.0 or not slope_b < 0.0:
        raise IntegrandNegativeError(
            "radicand does not rise from zero at the endpoints; "
            f"slopes ({slope_a}, {slope_b}) signal an invalid good set"
        )


def _raw_integrand(gs: GoodSet):
    h0, p, s, c = gs.h0, gs.p, gs.s, gs.c
    w2 = h0 * h0
    g1 = -math.expm1(-w2 / 2.0)  # 1 - e^{-h0^2/2}
    kp = (c / p) * h0**p if p > 0.0 else 0.0
    eps_at_s = g1 + (kp * math.expm1(p * math.log(s)) if p > 0.0 else c * math.log(s))
    a_at_s = 1.0 - eps_at_s  # energy minus power term at the maximum
    if a_at_s <= 0.0:
        raise IntegrandNegativeError("log argument vanished at the maximum level")
    slope_a = -2.0 + 2.0 * c * h0 ** (p - 2.0) * math.exp(w2 / 2.0)
    slope_b = -2.0 * s + 2.0 * c * h0 ** (p - 2.0) * s ** (p - 1.0) / a_at_s
    _check_slopes(slope_a, slope_b)
    switch = _SWITCH_FRAC * (s - 1.0)
    negtol = 1e3 * np.finfo(float).eps * max(1.0, s * s)

    def fvals(x, dlo, dhi):
        out = np.empty_like(x)
        na = dlo < switch
        nb = dhi < switch
        mid = ~(na | nb)
        if np.any(mid):
            xm, dm = x[mid], dlo[mid]
            if p > 0.0:
                eps_a = g1 + kp * np.expm1(p * np.log1p(dm))
            else:
                eps_a = g1 + c * np.log1p(dm)
            ell = np.log1p(-eps_a) + 0.5 * w2  # log of the radicand's exp argument
            radicand = -dm * (1.0 + xm) - (2.0 / w2) * ell
            if np.any(radicand <= -negtol):
                raise IntegrandNegativeError(
                    "radicand went negative in the interior of [1, s]"
                )
            radicand = np.where(radicand <= 0.0, np.inf, radicand)
            out[mid] = 1.0 / np.sqrt(radicand)
        out[na] = 1.0 / np.sqrt(slope_a * dlo[na])
        out[nb] = 1.0 / np.sqrt(-slope_b * dhi[nb])
        return out

    return fvals


# Aspect windows at or below this width take the endpoint-anchored radicand
# forms; wider windows use the direct formula plus linearized endpoint layers.
_NARROW_SPAN = 0.25


def _series_tail(dm: np.ndarray, first_coef: float, coef_step) -> np.ndarray:
    """Sum sum_{k>=2} c_k dm^k given c_2 and the recurrence c_k = step(c, k)."""
    acc = np.zeros_like(dm)
    power = dm * dm
    coef = first_coef
    for k in range(2, 200):
        term = coef * power
        acc += term
        if np.max(np.abs(term)) <= 1e-18 * max(np.max(np.abs(acc)), 1e-300):
            break
        power = power * dm
        coef = coef_step(coef, k)
    return acc


def _log1p_minus_linear(dm: np.ndarray) -> np.ndarray:
    """log(1 + dm) - dm without subtractive cancellation."""
    dm = np.asarray(dm, dtype=float)
    out = np.empty_like(dm)
    small = np.abs(dm) <= 0.5
    if np.any(small):
        d = dm[small]
        out[small] = _series_tail(d, -0.5, lambda c, k: -c * k / (k + 1.0))
    if np.any(~small):
        d = dm[~small]
        out[~small] = np.log1p(d) - d
    return out


def _pow1p_minus_linear(dm: np.ndarray, p: float) -> np.ndarray:
    """(1 + dm)^p - 1 - p*dm without subtractive cancellation, any real p."""
    dm = np.asarray(dm, dtype=float)
    out = np.empty_like(dm)
    small = np.abs(dm) <= 0.5
    if np.any(small):
        d = dm[small]
        out[small] = _series_tail(
            d, 0.5 * p * (p - 1.0), lambda c, k: c * (p - k) / (k + 1.0)
        )
    if np.any(~small):
        d = dm[~small]
        out[~small] = np.expm1(p * np.log1p(d)) - p * d
    return out


def _nexpm1_minus_linear(u: float) -> float:
    """-expm1(-u) - u for u >= 0 without subtractive cancellation."""
    if u > 0.5:
        return -math.expm1(-u) - u
    acc, term = 0.0, -0.5 * u * u
    for k in range(3, 60):
        acc += term
        if abs(term) <= 1e-18 * max(abs(acc), 1e-300):
            break
        term *= -u / k
    return acc


def _neglog1m_over(y: np.ndarray) -> np.ndarray:
    """-log(1 - y)/y on [0, 1), continuous value 1 at y = 0."""
    safe = np.where(y > 0.0, y, 1.0)
    return np.where(y > 0.0, -np.log1p(-safe) / safe, 1.0)


def _neglog1m_over_minus_one(y: np.ndarray) -> np.ndarray:
    """-log(1 - y)/y - 1 = y/2 + y^2/3 + ... without cancellation."""
    out = np.empty_like(y)
    small = y <= 0.5
    if np.any(small):
        d = y[small]
        out[small] = 0.5 * d + _series_tail(d, 1.0 / 3.0, lambda c, k: c * (k + 1.0) / (k + 2.0))
    if np.any(~small):
        out[~small] = _neglog1m_over(y[~small]) - 1.0
    return out


def _normalized_setup(h0: float, p: float, s: float):
    """Shared scalar setup for the matching-substituted radicand.

    Every quantity that would otherwise be a small difference of O(1) numbers
    (the energy-ratio complement q1, both endpoint slopes) is assembled from
    cancellation-free pieces.  Plain formulas lose ~(s - 1) of relative
    precision, a visible bias when the aspect window is narrow.
    """
    w2 = h0 * h0
    span = s - 1.0
    dlog = math.log1p(span)
    e_span = math.expm1(p * dlog) if p > 0.0 else dlog
    u = 0.5 * w2 * span * (span + 2.0)  # w2*(s^2-1)/2 without forming s^2-1
    q1 = -math.expm1(-u)
    q = math.exp(-u)
    c1 = 2.0 * q1 / w2
    tp0 = (p if p > 0.0 else 1.0) / e_span
    em_u = _nexpm1_minus_linear(u)  # q1 - u, second order in u
    if p > 0.0:
        b2p = float(_pow1p_minus_linear(np.array([span]), p)[0])
        # q1*p - w2*e_span, with the O(span) parts cancelled analytically
        num_a = w2 * (0.5 * p * span * span - b2p) + p * em_u
    else:
        l2s = float(_log1p_minus_linear(np.array([span]))[0])
        num_a = w2 * (0.5 * span * span - l2s) + em_u
    slope_a = 2.0 * num_a / (w2 * e_span)
    if p > 0.0:
        # s*(p*s^(p-2)*q1 - w2*e_span) + s*w2*e_span*q1, all pieces O(span^2)
        b2m = float(_pow1p_minus_linear(np.array([span]), p - 2.0)[0])
        gpiece = (
            0.5 * p * span * span
            + p * (p - 2.0) * span * span * (1.0 + 0.5 * span)
            + p * b2m * span * (1.0 + 0.5 * span)
            - b2p
        )
        inner = w2 * gpiece + p * s ** (p - 2.0) * em_u
        slope_b = 2.0 * (s * inner + s * w2 * e_span * q1) / (w2 * e_span * q)
    else:
        nb = num_a - w2 * dlog * span * (span + 2.0) + w2 * dlog * s * s * q1
        slope_b = 2.0 * nb / (w2 * s * q * dlog)
    return w2, span, dlog, e_span, u, q1, q, c1, tp0, slope_a, slope_b


def _normalized_integrand(gs: GoodSet):
    """Integrand with the level-matching identity substituted into the radicand.

    Narrow windows evaluate an endpoint-anchored expansion: the radicand is
    written as slope*dist plus second-order remainders about whichever end of
    [1, s] is closer, each remainder cancellation-free, so relative accuracy
    holds right down to the singularities.  Wide windows keep the direct
    formula, switching to the linearized slope form inside a thin layer at
    each end.
    """
    h0, p, s = gs.h0, gs.p, gs.s
    (w2, span, dlog, e_span, u, q1, q, c1, tp0, slope_a, slope_b) = _normalized_setup(
        h0, p, s
    )
    _check_slopes(slope_a, slope_b)
    negtol = 1e3 * np.finfo(float).eps * max(1.0, abs(slope_a) * span + span * span)

    def guard(radicand):
        if np.any(radicand <= -negtol):
            raise IntegrandNegativeError(
                "radicand went negative in the interior of [1, s]"
            )
        return np.where(radicand <= 0.0, np.inf, radicand)

    if span <= _NARROW_SPAN:

        def fvals(x, dlo, dhi):
            out = np.empty_like(x)
            near_a = dlo <= dhi
            near_b = ~near_a
            if np.any(near_a):
                dm = dlo[near_a]
                if p > 0.0:
                    e_val = np.expm1(p * np.log1p(dm))
                    e_tail = _pow1p_minus_linear(dm, p)
                else:
                    e_val = np.log1p(dm)
                    e_tail = _log1p_minus_linear(dm)
                y = (e_val / e_span) * q1
                rad = (
                    slope_a * dm
                    - dm * dm
                    + c1 * (e_tail / e_span) * _neglog1m_over(y)
                    + c1 * tp0 * dm * _neglog1m_over_minus_one(y)
                )
                out[near_a] = 1.0 / np.sqrt(guard(rad))
            if np.any(near_b):
                d = dhi[near_b]
                if p > 0.0:
                    vcoef = q1 * s**p / (q * e_span)
                    v = vcoef * (-np.expm1(p * np.log1p(-d / s)))
                    corr = (2.0 * vcoef / w2) * _pow1p_minus_linear(-d / s, p)
                else:
                    vcoef = q1 / (q * dlog)
                    v = vcoef * (-np.log1p(-d / s))
                    corr = (2.0 * vcoef / w2) * _log1p_minus_linear(-d / s)
                rad = (
                    -slope_b * d
                    - d * d
                    + corr
                    - (2.0 / w2) * _log1p_minus_linear(v)
                )
                out[near_b] = 1.0 / np.sqrt(guard(rad))
            return out

        return fvals

    switch = _SWITCH_FRAC * span

    def fvals(x, dlo, dhi):
        out = np.empty_like(x)
        na = dlo < switch
        nb = dhi < switch
        mid = ~(na | nb)
        if np.any(mid):
            xm, dm = x[mid], dlo[mid]
            if p > 0.0:
                frac = np.expm1(p * np.log1p(dm)) / e_span
            else:
                frac = np.log1p(dm) / e_span
            rad = -dm * (1.0 + xm) - (2.0 / w2) * np.log1p(-frac * q1)
            out[mid] = 1.0 / np.sqrt(guard(rad))
        out[na] = 1.0 / np.sqrt(slope_a * dlo[na])
        out[nb] = 1.0 / np.sqrt(-slope_b * dhi[nb])
        return out

    return fvals


def _validate(gs: GoodSet, tol: float) -> None:
    if tol < _MIN_TOL:
        raise ValueError(f"tolerance below the supported floor {_MIN_TOL}")
    if not is_good_set(gs.c, gs.h0, gs.p, gs.s):
        raise NotGoodSetError(f"{gs} fails the good-set conditions")


def theta(gs: GoodSet, tol: float = 1e-9) -> ThetaResult:
    """Half period from the raw energy radicand."""
    _validate(gs, tol)
    value, err = _tanh_sinh(_raw_integrand(gs), 1.0, gs.s, tol)
    return ThetaResult(value, err, "raw")


def theta_normalized(gs: GoodSet, tol: float = 1e-9) -> ThetaResult:
    """Half period from the matching-normalized radicand."""
    _validate(gs, tol)
    value, err = _tanh_sinh(_normalized_integrand(gs), 1.0, gs.s, tol)
    return ThetaResult(value, err, "normalized")


def pi_over_k_distance(value: float) -> tuple[float, int]:
    """Distance from value to the nearest pi/k, k a positive integer."""
    if value <= 0.0:
        raise ValueError("half period must be positive")
    kmax = math.ceil(math.pi / value) + 2
    best_k = 1
    best = abs(value - math.pi)
    for k in range(2, kmax + 1):
        d = abs(value - math.pi / k)
        if d < best:
            best, best_k = d, k
    return best, best_k


def admissible_c_ceiling(p: float, s: float, iters: int = 80) -> float:
    """Largest level c whose admissible aspect interval still contains s."""
    if s <= 1.0:
        raise ValueError(f"aspect s must exceed 1, got {s}")
    cp = c_threshold(p)

    def admits(c: float) -> bool:
        try:
            return aspect_bound(c, p).admits(s)
        except ToolkitError:
            return False

    lo = 1e-8 * cp
    hi = (1.0 - 1e-9) * cp
    if not admits(lo):
        return 0.0
    if admits(hi):
        return hi
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if admits(mid):
            lo = mid
        else:
            hi = mid
    return lo


# ---------------------------------------------------------------------------
# scanning


@dataclass
class ScanCell:
    """One (c, p, s) cell of a half-period scan."""

    c: float
    p: float
    s: float
    h0: Optional[float] = None
    theta: Optional[float] = None
    err: Optional[float] = None
    gt_pi: Optional[bool] = None
    dist_pi_over_k: Optional[float] = None
    k_nearest: Optional[int] = None
    dc_flag: Optional[bool] = None
    dp_flag: Optional[bool] = None
    error: str = ""


@dataclass(frozen=True)
class ScanGrid:
    """Scan specification; levels are laid out as log-spaced fractions of the
    per-(p, s) admissible ceiling so every generated cell is admissible."""

    p_values: tuple
    s_values: tuple
    n_c: int = 10
    frac_lo: float = 0.05
    frac_hi: float = 0.95

    def cells(self) -> list[tuple[float, float, float]]:
        if not 0.0 < self.frac_lo < self.frac_hi < 1.0:
            raise ValueError("level fractions must satisfy 0 < lo < hi < 1")
        fracs = np.geomspace(self.frac_lo, self.frac_hi, self.n_c)
        out = []
        for p in self.p_values:
            for s in self.s_values:
                ceiling = admissible_c_ceiling(p, s)
                for f in fracs:
                    out.append((float(f * ceiling), float(p), float(s)))
        return out


def default_grid() -> ScanGrid:
    return ScanGrid(
        p_values=(0.0, 0.25, 0.5, 0.75, 1.0), s_values=(1.1, 2.0, 5.0), n_c=10
    )


_DP_DELTA = 1e-3
_DP_SLOPE_TOL = 1e-6
_DP_ZERO_PTILDE = 1e-4
_DP_ZERO_TOL = 1e-3


@lru_cache(maxsize=512)
def _fixed_level_p_slope(p_lo: float, p_hi: float, s: float, tol: float) -> float:
    """Secant slope of Theta in p along the fixed-level path near (p_lo, s).

    The level is pinned at half the admissible ceiling for p_lo, small enough
    that the matched heights stay in the regime where the path is defined for
    every probed exponent; the height is re-solved at each endpoint.  The
    slope depends only on (p_lo, p_hi, s), so it is shared by every scanned
    level at that exponent and aspect.
    """
    eps = 0.5 * eps_ceiling(p_lo)
    th_lo = theta_normalized(
        GoodSet(c=eps, h0=h0_of_p_path(eps, p_lo, s, p_lo), p=p_lo, s=s), tol
    ).value
    th_hi = theta_normalized(
        GoodSet(c=eps, h0=h0_of_p_path(eps, p_hi, s, p_lo), p=p_hi, s=s), tol
    ).value
    return (th_hi - th_lo) / (p_hi - p_lo)


def _p_direction_flag(c: float, p: float, s: float, h0: float, th: float, tol: float) -> bool:
    """Monotonicity probe in the exponent direction.

    For p > 0 the probe walks a fixed-level path with a small level below the
    admissible ceiling, re-solving the matched height at each exponent, and
    flags true when the finite-difference slope of Theta in p is nonpositive
    up to quadrature noise.  The measured slope on these paths is positive
    and stable under refinement, so a false flag is the expected report, not
    a probe failure.  For p = 0 the probe instead checks continuity against
    a slightly positive exponent along the level path that keeps (h0, s)
    fixed, the only direction in which the exponent can move from zero.
    """
    if p == 0.0:
        ptil = _DP_ZERO_PTILDE
        ctil = c_of_p_path(h0, s, ptil)
        gs2 = GoodSet(c=ctil, h0=h0, p=ptil, s=s)
        th2 = theta_normalized(gs2, tol).value
        return abs(th2 - th) <= _DP_ZERO_TOL
    if p >= 1.0 - _DP_DELTA:
        p_lo, p_hi = 1.0 - _DP_DELTA, 1.0
    else:
        p_lo, p_hi = p, p + _DP_DELTA
    return _fixed_level_p_slope(p_lo, p_hi, s, tol) <= _DP_SLOPE_TOL


def _scan_cell(args) -> ScanCell:
    c, p, s, tol, dp_checks = args
    cell = ScanCell(c=c, p=p, s=s)
    try:
        cell.h0 = solve_h0(c, p, s)
        gs = GoodSet(c=c, h0=cell.h0, p=p, s=s)
        res = theta_normalized(gs, tol)
        cell.theta = res.value
        cell.err = res.est_error
        cell.gt_pi = bool(res.value > math.pi)
        cell.dist_pi_over_k, cell.k_nearest = pi_over_k_distance(res.value)
        if dp_checks:
            cell.dp_flag = _p_direction_flag(c, p, s, cell.h0, res.value, tol)
    except (ToolkitError, ValueError) as exc:
        cell.error = f"{type(exc).__name__}: {exc}"
    return cell


_DC_SLOPE_FLOOR = -1e-8


def _fill_dc_flags(cells: list[ScanCell]) -> None:
    groups: dict[tuple[float, float], list[ScanCell]] = {}
    for cell in cells:
        groups.setdefault((cell.p, cell.s), []).append(cell)
    for series in groups.values():
        series.sort(key=lambda cl: cl.c)
        valid = [cl for cl in series if not cl.error]
        if len(valid) < 2:
            continue
        slopes = []
        for left, right in zip(valid[:-1], valid[1:]):
            slopes.append((right.theta - left.theta) / (right.c - left.c))
        for i, cl in enumerate(valid):
            if i == 0:
                cl.dc_flag = slopes[0] >= _DC_SLOPE_FLOOR
            elif i == len(valid) - 1:
                cl.dc_flag = slopes[-1] >= _DC_SLOPE_FLOOR
            else:
                cl.dc_flag = (
                    slopes[i - 1] >= _DC_SLOPE_FLOOR and slopes[i] >= _DC_SLOPE_FLOOR
                )


@dataclass
class ScanReport:
    """Results of a half-period scan over a (c, p, s) grid."""

    cells: list[ScanCell] = field(default_factory=list)
    tol: float = 1e-9

    @property
    def n_errors(self) -> int:
        return sum(1 for cell in self.cells if cell.error)

    def to_dict(self) -> dict:
        rows = []
        for cl in self.cells:
            rows.append(
                {
                    "c": cl.c,
                    "p": cl.p,
                    "s": cl.s,
                    "h0": cl.h0,
                    "theta": cl.theta,
                    "err": cl.err,
                    "gt_pi": cl.gt_pi,
                    "dist_pi_over_k": cl.dist_pi_over_k,
                    "k_nearest": cl.k_nearest,
                    "dc_flag": cl.dc_flag,
                    "dp_flag": cl.dp_flag,
                    "error": cl.error,
                }
            )
        return {"tol": self.tol, "n_errors": self.n_errors, "cells": rows}

    def csv_text(self) -> str:
        lines = [",".join(CSV_COLUMNS)]
        for cl in self.cells:
            row = []
            for name in CSV_COLUMNS:
                v = getattr(cl, name)
                if v is None:
                    row.append("")
                elif isinstance(v, bool):
                    row.append("true" if v else "false")
                else:
                    row.append(f"{v:.17g}")
            lines.append(",".join(row))
        return "\n".join(lines) + "\n"

    def write_csv(self, path) -> None:
        with open(path, "w", encoding="ascii", newline="\n") as fh:
            fh.write(self.csv_text())

    def write_json(self, path) -> None:
        import json

        with open(path, "w", encoding="ascii", newline="\n") as fh:
            json.dump(self.to_dict(), fh, indent=1, sort_keys=True)
            fh.write("\n")


def theta_scan(
    grid: ScanGrid | Iterable[tuple],
    tol: float = 1e-9,
    jobs: int = 1,
    dp_checks: bool = True,
) -> ScanReport:
    """Evaluate the half period over a grid, recording per-cell errors.

    Cell failures never abort the scan; they are stored on the cell and
    counted by the report.  Results are deterministic and independent of the
    worker count.
    """
    cell_specs = grid.cells() if isinstance(grid, ScanGrid) else [tuple(x) for x in grid]
    args = [(c, p, s, tol, dp_checks) for (c, p, s) in cell_specs]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            cells = list(pool.map(_scan_cell, args))
    else:
        cells = [_scan_cell(a) for a in args]
    _fill_dc_flags(cells)
    return ScanReport(cells=cells, tol=tol)
