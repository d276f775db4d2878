"""Sobolev-type metrics, gradient flows and distances on closed curves."""

__version__ = "0.1.0"

from .curve import (
    Curve,
    CurveError,
    check_field,
    ds_derivative,
    length,
    load_curve,
    mean_field,
    resample_arclength,
    save_curve,
    tangent_normal_curvature,
    to_arc_uniform,
    unit_tangent,
)
from .spectral import (
    SpectralField,
    analyze,
    frac_inner,
    sobolev_transfer,
    spectral_derivative,
    synthesize,
)
from .metrics import (
    MetricSpec,
    equivalence_bounds,
    inner,
    linf_finsler,
    norm,
)
from .energies import (
    EnergyKind,
    average_energy,
    center_of_mass_energy,
    elastic_energy,
    evaluate,
    grad_h0,
    grad_sobolev,
    length_energy,
    std_dev_energy,
)
from .flows import (
    AmplificationReport,
    FlowConfig,
    FlowTrajectory,
    run_flow,
    stability_probe,
    stability_sweep,
)
from .paths import (
    Homotopy,
    PathResult,
    dinf_distance,
    frechet_distance,
    geodesic_distance,
    length_lipschitz_check,
    linear_homotopy,
    path_action,
    path_length,
    reparametrize_constant_speed,
)
from .smoothing import (
    DirectionFunction,
    SmoothingSchedule,
    direction_function,
    elastic_lipschitz_check,
    flat_lift,
    fourier_smoothing_homotopy,
    h1_smoothing_path,
    is_flat,
    project_closure,
    reconstruct_curve,
)
from .inequalities import (
    InequalityReport,
    check_all,
    check_fundamental_h1,
    check_poincare_l2,
    check_poincare_sup,
)
from . import generators
