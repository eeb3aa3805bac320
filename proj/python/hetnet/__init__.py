"""Coverage probability of heterogeneous cellular networks with clustered
base stations: analytic evaluation and Monte Carlo simulation."""

from ._core import (
    ConfigError,
    CoverageResult,
    DegenerateCondition,
    DomainError,
    Error,
    McEstimate,
    NetworkModel,
    NonConvergence,
    OffspringKernel,
    QuadratureConfig,
    TierSpec,
    UserModel,
    WindowPolicy,
    association_probability,
    bessel_i0_scaled,
    build_scene,
    cluster_factor,
    conditional_distance_cdf,
    conditional_distance_pdf,
    contact_distance_cdf_given_parents,
    coverage,
    coverage_ppp_closed_form,
    coverage_tier,
    db_to_linear,
    default_window,
    estimate_association,
    estimate_coverage,
    estimate_coverage_sweep,
    linear_to_db,
    rho,
    run_config,
    sample_ppp,
    scale_network,
)

__all__ = [name for name in dir() if not name.startswith("_")]
