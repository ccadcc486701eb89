"""Chebyshev collocation for 1D/2D conservation laws with shock regularization
by convolution against compactly supported polynomial delta kernels."""

from .kernels import (
    KernelError,
    KernelSpec,
    DeltaKernel,
    ScaledKernel,
    build_kernel,
    eval_polynomial,
    eval_scaled,
    eval_scaled_2d,
    kernel_to_json,
)
from .spectral import (
    GridError,
    SpectralGrid,
    QuadratureRule,
    cgl_nodes,
    build_grid,
    interpolate,
    basis_matrix,
    clenshaw_curtis,
    integrate,
)
from .filtering import (
    FilterError,
    FilterMatrix,
    scaling_parameter,
    theoretical_scaling_parameter,
    build_filter_matrix,
    apply_1d,
    apply_2d,
    filter_error_indicator,
    save_filter_matrix,
    load_filter_matrix,
)
from .reference import (
    MissingReferenceError,
    OracleError,
    RiemannSolution,
    ErrorReport,
    exact_advection,
    exact_burgers,
    solve_riemann,
    exact_sod,
    SOD_LEFT,
    SOD_RIGHT,
    shu_osher_initial,
    reference_shu_osher,
    explosion_initial,
    error_report,
    fit_convergence_rate,
)
from .pde import (
    GasModel,
    PositivityError,
    SimulationError,
    State1D,
    State2D,
    rhs_advection,
    rhs_burgers,
    rhs_euler_1d,
    rhs_euler_2d,
    tvd_rk3_step,
    run_case,
    RunResult,
)
from .config import CaseConfig, ConfigError, CASES

__version__ = "0.1.0"
