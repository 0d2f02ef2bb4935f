"""Numerical laboratory for nonlocal convolution diffusion with gradient-dependent flux.

The package discretizes the evolution problem

    u_t(x) = integral of J(x - y) [u(y) - u(x)] G(x, u(y) - u(x)) dy

on boxes in 1D and 2D, both with Dirichlet collar data and as a truncated
whole-space problem, and provides the rescaled operators whose continuum
limit is the viscous Hamilton-Jacobi equation u_t = Lap u + mu(x) |grad u|^2.
"""

from .analysis import (
    dj_functional,
    double_energy,
    energy_dissipation_gap,
    fit_exponential_rate,
    fit_power_law,
    gns_ratio,
    lambda1,
    lq_norm,
    rayleigh_quotient,
)
from .config import ConfigError, ExperimentConfig, load_config, validate_config
from .evolution import (
    CauchyProblem,
    ComparisonResult,
    DirichletProblem,
    EvolutionBlowupError,
    EvolveResult,
    IntegratorConfig,
    PicardDivergenceError,
    PicardResult,
    evolve,
    evolve_comparison_pair,
    picard_contraction_bound,
    picard_solve,
    prepare,
    stable_dt,
    suggested_half_width,
)
from .experiments import (
    EXPERIMENTS,
    exp_comparison,
    exp_convergence_cauchy,
    exp_convergence_dirichlet,
    exp_decay_bounded,
    exp_decay_cauchy,
    exp_property_suite,
    run_experiment,
)
from .grids import Field, Grid, build_grid, field_from, zero_field
from .kernels import (
    DiscreteKernel,
    KernelSpec,
    RescaledKernel,
    ResolutionError,
    discretize,
    fourier_symbol,
    make_kernel,
    rescale,
    second_moment,
)
from .nonlinearity import (
    MuField,
    Nonlinearity,
    certify_class,
    flux,
    g_eval,
    identity_nonlinearity,
    kpz_nonlinearity,
    make_nonlinearity,
    mu_of,
    power_gap_constant,
    psi,
    sample_power_gap_inequality,
)
from .operators import (
    RescalePlan,
    StencilOperator,
    assemble_dirichlet_form,
    nonlocal_rhs,
    rescale_plan,
)
from .reference import (
    HopfColeSolution,
    SurrogateSolution,
    build_local_surrogate,
    dirichlet_data_from,
    eval_gradients,
    eval_v,
    heat_kernel,
    residual_kpz,
)
from .reports import (
    Check,
    ConvergenceReport,
    DecayReport,
    ExperimentResult,
    PropertyReport,
    verdict_line,
    write_csv,
)

__all__ = [
    "CauchyProblem",
    "Check",
    "ComparisonResult",
    "ConfigError",
    "ConvergenceReport",
    "DecayReport",
    "DirichletProblem",
    "DiscreteKernel",
    "EXPERIMENTS",
    "EvolutionBlowupError",
    "EvolveResult",
    "ExperimentConfig",
    "ExperimentResult",
    "Field",
    "Grid",
    "HopfColeSolution",
    "IntegratorConfig",
    "KernelSpec",
    "MuField",
    "Nonlinearity",
    "PicardDivergenceError",
    "PicardResult",
    "PropertyReport",
    "RescalePlan",
    "RescaledKernel",
    "ResolutionError",
    "StencilOperator",
    "SurrogateSolution",
    "assemble_dirichlet_form",
    "build_grid",
    "build_local_surrogate",
    "certify_class",
    "dirichlet_data_from",
    "discretize",
    "dj_functional",
    "double_energy",
    "energy_dissipation_gap",
    "eval_gradients",
    "eval_v",
    "evolve",
    "evolve_comparison_pair",
    "exp_comparison",
    "exp_convergence_cauchy",
    "exp_convergence_dirichlet",
    "exp_decay_bounded",
    "exp_decay_cauchy",
    "exp_property_suite",
    "field_from",
    "fit_exponential_rate",
    "fit_power_law",
    "flux",
    "fourier_symbol",
    "g_eval",
    "gns_ratio",
    "heat_kernel",
    "identity_nonlinearity",
    "kpz_nonlinearity",
    "lambda1",
    "load_config",
    "lq_norm",
    "make_kernel",
    "make_nonlinearity",
    "mu_of",
    "nonlocal_rhs",
    "picard_contraction_bound",
    "picard_solve",
    "power_gap_constant",
    "prepare",
    "psi",
    "rayleigh_quotient",
    "rescale",
    "rescale_plan",
    "residual_kpz",
    "run_experiment",
    "sample_power_gap_inequality",
    "second_moment",
    "stable_dt",
    "suggested_half_width",
    "validate_config",
    "verdict_line",
    "write_csv",
    "zero_field",
]

__version__ = "0.1.0"
