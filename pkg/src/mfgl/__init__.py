"""Mean-field Gibbs laboratory.

Exact small-n machinery for Gibbs distributions on the Boolean hypercube:
sparse Fourier Hamiltonians, tilts and product approximations, gradient
complexity estimation, tanh fixed-point solvers, smoothed-cutoff
large-deviation constructions, and a numerical audit harness for the
quantitative inequalities the package is built around.
"""

__version__ = "0.1.0"

from .boolfn import (
    CapExceeded,
    DimensionMismatch,
    FourierExpansion,
    compose,
    eval_extension,
    gradient_extension,
    lipschitz_l1,
    lipschitz_l2,
)
from .complexity import GradientCloud, complexity_params, gaussian_width_mc, gradient_cloud
from .gibbs import (
    DenseMeasure,
    ProductMeasure,
    densify,
    gibbs_measure,
    tanh_covariance,
    mean,
    product_approx,
    tilt,
    tv,
    w1_exact,
)
from .hamiltonians import (
    BuiltHamiltonian,
    ComplexityParams,
    CurieWeissSpec,
    CutoffShape,
    InvalidSpec,
    IsingSpec,
    LinearSpec,
    CubicQuinticShape,
    ScalarShape,
    SmoothedCutoffSpec,
    SparseFourierSpec,
    TriangleCountSpec,
    build_hamiltonian,
    composition_params,
    cutoff_shape_eval,
    ising_complexity_bounds,
    smoothed_cutoff_weights,
)
from .meanfield import (
    FixedPointSolution,
    curie_weiss_roots,
    lambda_scan,
    mean_field_functional,
    mf_iterate,
    solve_multistart,
    structural_set_test,
)
from .verify import AuditRow, WitnessMissing

__all__ = [
    "AuditRow",
    "BuiltHamiltonian",
    "CapExceeded",
    "ComplexityParams",
    "CurieWeissSpec",
    "CutoffShape",
    "DenseMeasure",
    "DimensionMismatch",
    "FixedPointSolution",
    "FourierExpansion",
    "GradientCloud",
    "InvalidSpec",
    "IsingSpec",
    "LinearSpec",
    "ProductMeasure",
    "CubicQuinticShape",
    "ScalarShape",
    "SmoothedCutoffSpec",
    "SparseFourierSpec",
    "TriangleCountSpec",
    "WitnessMissing",
    "build_hamiltonian",
    "complexity_params",
    "compose",
    "composition_params",
    "curie_weiss_roots",
    "cutoff_shape_eval",
    "densify",
    "eval_extension",
    "gaussian_width_mc",
    "gibbs_measure",
    "gradient_cloud",
    "gradient_extension",
    "tanh_covariance",
    "ising_complexity_bounds",
    "lambda_scan",
    "lipschitz_l1",
    "lipschitz_l2",
    "mean",
    "mean_field_functional",
    "mf_iterate",
    "product_approx",
    "smoothed_cutoff_weights",
    "solve_multistart",
    "tilt",
    "tv",
    "w1_exact",
    "structural_set_test",
    "__version__",
]
