"""Periodic-grid containers for support functions and curvature densities.

Functions on the circle are stored by their values at the uniform nodes
theta_j = 2*pi*j/n.  Differentiation is trigonometric: exact for band-limited
data, spectrally accurate for smooth data.  Support functions of
origin-symmetric bodies take equal values at antipodal nodes, which is what
the parity tag tracks; grids therefore have even length, and powers of two
keep the transforms fast.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConvexityLostError, NonPositiveSupportError, ParityError

PARITY_EVEN = "even-symmetric"
PARITY_GENERAL = "general"

_PARITY_TOL = 1e-12
_MIN_N = 8


def _require_power_of_two(n: int) -> None:
    if n < _MIN_N or n & (n - 1):
        raise ValueError(f"grid size must be a power of two at least {_MIN_N}, got {n}")


def grid_angles(n: int) -> np.ndarray:
    """Uniform angular nodes 2*pi*j/n for j = 0..n-1."""
    return 2.0 * np.pi * np.arange(n) / n


def spectral_derivative(values: np.ndarray, order: int = 1) -> np.ndarray:
    """Differentiate a periodic nodal function by Fourier multipliers.

    Odd orders zero the Nyquist mode: its derivative cannot be represented
    on the grid and keeping it would inject a spurious imaginary part.
    """
    values = np.asarray(values, dtype=float)
    n = values.size
    spec = np.fft.rfft(values)
    k = np.arange(spec.size, dtype=float)
    mult = (1j * k) ** order
    if order % 2 == 1 and n % 2 == 0:
        mult[-1] = 0.0
    return np.fft.irfft(spec * mult, n)


def antipodal_gap(values: np.ndarray) -> float:
    """Sup distance between a nodal function and its antipodal translate."""
    values = np.asarray(values, dtype=float)
    if values.size % 2:
        raise ValueError("antipodal comparison needs an even grid size")
    return float(np.max(np.abs(values - np.roll(values, values.size // 2))))


def antipodal_project(values: np.ndarray) -> np.ndarray:
    """Average a nodal function with its antipodal translate."""
    values = np.asarray(values, dtype=float)
    if values.size % 2:
        raise ValueError("antipodal projection needs an even grid size")
    return 0.5 * (values + np.roll(values, values.size // 2))


def is_antipodally_even(values: np.ndarray, rtol: float = _PARITY_TOL) -> bool:
    values = np.asarray(values, dtype=float)
    scale = float(np.max(np.abs(values)))
    return antipodal_gap(values) <= rtol * max(scale, 1.0)


@dataclass(frozen=True)
class SupportFn:
    """Support function samples of a planar convex body with interior origin.

    Validation enforces positivity, strict discrete convexity of the
    curvature factor h'' + h under the spectral stencil, and, when the
    even-symmetric parity is declared, equality at antipodal nodes.
    """

    values: np.ndarray
    parity: str = PARITY_GENERAL

    def __post_init__(self):
        vals = np.ascontiguousarray(self.values, dtype=float)
        object.__setattr__(self, "values", vals)
        _require_power_of_two(vals.size)
        if not np.all(np.isfinite(vals)):
            raise ValueError("support values must be finite")
        if np.min(vals) <= 0.0:
            raise NonPositiveSupportError(
                f"support function must be positive; min value {np.min(vals)}"
            )
        if self.parity not in (PARITY_EVEN, PARITY_GENERAL):
            raise ValueError(f"unknown parity tag {self.parity!r}")
        curv = self.curvature_factor()
        if np.min(curv) <= 0.0:
            raise ConvexityLostError(
                f"h'' + h must be positive at every node; min {np.min(curv):.3e}"
            )
        if self.parity == PARITY_EVEN and not is_antipodally_even(vals):
            raise ParityError(
                "even-symmetric parity declared but antipodal values differ "
                f"by {antipodal_gap(vals):.3e}"
            )

    @property
    def n(self) -> int:
        return self.values.size

    @property
    def thetas(self) -> np.ndarray:
        return grid_angles(self.n)

    def derivative(self, order: int = 1) -> np.ndarray:
        return spectral_derivative(self.values, order)

    def curvature_factor(self) -> np.ndarray:
        """Nodal h'' + h, the planar curvature determinant."""
        return spectral_derivative(self.values, 2) + self.values

    def convexity_margin(self) -> float:
        return float(np.min(self.curvature_factor()))

    def boundary_points(self) -> np.ndarray:
        """Boundary parametrization x(theta) = h*v + h'*v_perp, shape (n, 2)."""
        th = self.thetas
        hp = self.derivative(1)
        vx, vy = np.cos(th), np.sin(th)
        return np.stack(
            [self.values * vx - hp * vy, self.values * vy + hp * vx], axis=1
        )


@dataclass(frozen=True)
class DensityFn:
    """Prescribed curvature density with a two-sided bound certificate.

    The certificate tau declares 1/tau < f < tau everywhere, the hypothesis
    under which the a priori estimates operate.
    """

    values: np.ndarray
    tau: float

    def __post_init__(self):
        vals = np.ascontiguousarray(self.values, dtype=float)
        object.__setattr__(self, "values", vals)
        if vals.size < _MIN_N or vals.size % 2:
            raise ValueError(f"density grid size must be even and >= {_MIN_N}")
        if not np.all(np.isfinite(vals)):
            raise ValueError("density values must be finite")
        if np.min(vals) <= 0.0:
            raise ValueError(f"density must be positive; min value {np.min(vals)}")
        if not self.tau > 1.0:
            raise ValueError(f"bound certificate tau must exceed 1, got {self.tau}")
        if not (np.min(vals) > 1.0 / self.tau and np.max(vals) < self.tau):
            raise ValueError(
                f"certificate violated: values in [{np.min(vals):.6g}, "
                f"{np.max(vals):.6g}] not inside (1/{self.tau:.6g}, {self.tau:.6g})"
            )

    @classmethod
    def from_values(cls, values, tau: float | None = None, margin: float = 1e-6):
        vals = np.ascontiguousarray(values, dtype=float)
        if tau is None:
            if vals.size == 0 or np.min(vals) <= 0.0:
                raise ValueError("density must be positive to certify bounds")
            tau = max(float(np.max(vals)), 1.0 / float(np.min(vals))) * (1.0 + margin)
            tau = max(tau, 1.0 + margin)
        return cls(values=vals, tau=float(tau))

    @property
    def n(self) -> int:
        return self.values.size

    @property
    def thetas(self) -> np.ndarray:
        return grid_angles(self.n)

    @property
    def is_even(self) -> bool:
        return is_antipodally_even(self.values)
