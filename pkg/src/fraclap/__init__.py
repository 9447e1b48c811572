"""Weak fractional calculus on an interval.

Riemann-Liouville integrals, one-sided and Riesz weak fractional
derivatives, the fractional Sobolev bookkeeping built on them, Galerkin
solvers for the associated boundary value problems at p = 2, and a direct
energy minimizer for general p.
"""

from .errors import (
    ConvergenceError,
    CoercivityError,
    DecompositionError,
    DomainError,
    ExpectedKernelError,
    FraclapError,
    NonIntegrableError,
    NormGateError,
    ShapeError,
    SpecificationError,
    TraceNotConvergedError,
    TraceSingularError,
    TraceUndefinedError,
)
from .grids import (
    FracParams,
    GridFunction,
    Interval,
    default_grading,
    from_callable,
    graded_mesh,
    grid_function,
    read_csv,
    uniform_mesh,
    write_csv,
)
from .specfun import (
    JacobiBasis,
    WeightedMeasure,
    gamma_fn,
    gauss_2f1,
    jacobi_basis,
    jacobi_coeff,
    jacobi_eval,
    weighted_inner,
    weighted_measure,
)
from .fracops import (
    FundamentalDecomposition,
    fundamental_decomposition,
    inner_l2,
    integrate,
    kernel_left,
    kernel_right,
    lp_integral,
    power_rule_derivative,
    power_rule_integral,
    riesz_kernels,
    riesz_weak_derivative,
    rl_derivative,
    rl_integral,
)

__version__ = "0.1.0"
