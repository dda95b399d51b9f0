"""Zero-surface-tension Hele-Shaw growth with its integrable structure.

Subpackages by concern:

- ``geometry``   contours, spectral quadrature, Cauchy transform, metrics
- ``conformal``  exterior Laurent maps, fitting, harmonic moments
- ``dynamics``   growth flows for point pumps and the sink at infinity
- ``schwarz``    Schwarz-function continuation and pole/residue extraction
- ``curve``      the one-pole Hermitian curve family and section tracing
- ``hodograph``  branch-point invariants, differentials, hodograph solver
- ``cli``        command-line front end (simulate / family / trace / verify)
"""
from ._kernels import KERNEL_BACKEND
from .conformal import (
    FitResult,
    LaurentMap,
    MomentVector,
    boundary_contour,
    fit_map,
    harmonic_moments,
    random_univalent_map,
)
from .curve import (
    CurveN1,
    HermitianCurve,
    TracedComponent,
    build_curve,
    quartic_from_curve,
    schwarz_two_sheeted,
    solve_double_point,
    sqrt_branch,
    trace_real_section,
)
from .dynamics import (
    CommutativityReport,
    EvolutionState,
    PumpSpec,
    commutativity_test,
    green_function,
    pg_velocity,
    pump_velocity_field,
    step,
)
from .geometry import (
    Contour,
    area,
    cauchy_transform,
    hausdorff_distance,
    read_contour_csv,
    write_contour_csv,
)
from .hodograph import (
    BranchPoints,
    GenusZeroDifferential,
    HodographParams,
    bifurcation_scan,
    eval_differential,
    f1_f2_split,
    hodograph_residual,
    pump_differential,
    sdz_decomposition_check,
    solve_hodograph,
    solved_curve,
    string_rhs,
    whitham_velocity,
)
from .schwarz import (
    PoleData,
    PoleInfo,
    RationalMap,
    SchwarzEvaluator,
    extract_poles,
    residue_flow_check,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
