"""Numerical toolkit for the planar weighted-Gaussian Minkowski problem
with support-power exponent 0 <= p <= 1.

Uniqueness side: constant solutions of the isotropic equation, admissible
oscillation data, and half-period integrals whose distance from pi/k rules
out closed nonconstant solutions.  Existence side: homotopy-continuation
solving of the prescribed curvature-density equation on the circle, a priori
bound verification, and the degenerating sequence showing those bounds need
antipodal symmetry.  Measure side: exact polygon atoms and smooth densities
of the weighted Gaussian boundary measure.
"""

from .errors import (
    AspectTooLargeError,
    ConvexityLostError,
    EpsTooLargeError,
    HomotopyStallError,
    HReachedZeroError,
    IntegrandNegativeError,
    InvalidPolygonError,
    NoGoodSetError,
    NonPositiveSupportError,
    NoRootsError,
    NotGoodSetError,
    NoTurningPointError,
    ParityError,
    QuadratureError,
    StepFailureError,
    ToolkitError,
)
from .scalar_kernel import (
    Params,
    RootPair,
    c_threshold,
    constant_radii,
    count_constant_solutions,
    critical_radius,
    density_threshold,
    disk_measure,
    potential,
    potential_deriv,
)
from .good_set import (
    AspectBound,
    GoodSet,
    aspect_bound,
    c_of_p_path,
    eps_ceiling,
    h0_of_p_path,
    implied_aspect,
    is_good_set,
    make_good_set,
    matching_level,
    solve_h0,
)
from .theta_quad import (
    ScanCell,
    ScanGrid,
    ScanReport,
    ThetaResult,
    admissible_c_ceiling,
    default_grid,
    pi_over_k_distance,
    theta,
    theta_normalized,
    theta_scan,
)
from .ode_shoot import (
    ClosedOrbitScan,
    ShootResult,
    Trajectory,
    find_closed_solutions,
    first_integral,
    integrate,
    shoot_half_period,
)
from .support import (
    PARITY_EVEN,
    PARITY_GENERAL,
    DensityFn,
    SupportFn,
    antipodal_gap,
    antipodal_project,
    grid_angles,
    is_antipodally_even,
    spectral_derivative,
)
from .minkowski_pde import (
    AprioriChecklist,
    AprioriSummary,
    SolveOptions,
    SolveReport,
    abs_cos_moment,
    du_counterexample,
    jacobian_apply,
    jacobian_matrix,
    residual,
    solve,
    verify_apriori,
)
from .gauss_measure import (
    ConvergenceCurve,
    DiscreteMeasure,
    Polygon,
    measure_convergence_check,
    polygon_measure,
    regular_ngon,
    smooth_measure_density,
    smooth_total_measure,
)

__version__ = "0.1.0"

__all__ = [
    "AspectBound",
    "AspectTooLargeError",
    "AprioriChecklist",
    "AprioriSummary",
    "ClosedOrbitScan",
    "ConvergenceCurve",
    "ConvexityLostError",
    "DensityFn",
    "DiscreteMeasure",
    "EpsTooLargeError",
    "GoodSet",
    "HomotopyStallError",
    "HReachedZeroError",
    "IntegrandNegativeError",
    "InvalidPolygonError",
    "NoGoodSetError",
    "NonPositiveSupportError",
    "NoRootsError",
    "NotGoodSetError",
    "NoTurningPointError",
    "PARITY_EVEN",
    "PARITY_GENERAL",
    "Params",
    "ParityError",
    "Polygon",
    "QuadratureError",
    "RootPair",
    "ScanCell",
    "ScanGrid",
    "ScanReport",
    "ShootResult",
    "SolveOptions",
    "SolveReport",
    "StepFailureError",
    "SupportFn",
    "ThetaResult",
    "ToolkitError",
    "Trajectory",
    "abs_cos_moment",
    "admissible_c_ceiling",
    "antipodal_gap",
    "antipodal_project",
    "aspect_bound",
    "c_of_p_path",
    "c_threshold",
    "constant_radii",
    "count_constant_solutions",
    "critical_radius",
    "default_grid",
    "density_threshold",
    "disk_measure",
    "du_counterexample",
    "eps_ceiling",
    "find_closed_solutions",
    "first_integral",
    "grid_angles",
    "h0_of_p_path",
    "implied_aspect",
    "integrate",
    "is_antipodally_even",
    "is_good_set",
    "jacobian_apply",
    "jacobian_matrix",
    "make_good_set",
    "matching_level",
    "measure_convergence_check",
    "pi_over_k_distance",
    "polygon_measure",
    "potential",
    "potential_deriv",
    "regular_ngon",
    "residual",
    "shoot_half_period",
    "smooth_measure_density",
    "smooth_total_measure",
    "solve",
    "solve_h0",
    "spectral_derivative",
    "theta",
    "theta_normalized",
    "theta_scan",
    "verify_apriori",
]
