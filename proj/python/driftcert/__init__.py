"""Convergence bounds for Markov chains from drift and minorization conditions."""

from ._core import (
    BoundPolynomial,
    DomainError,
    DriftParams,
    NumericError,
    RateParams,
    VNormBound,
    compute_rate_params,
    cubic_scaling,
    distance_curves,
    extract_minorization,
    hitting_drift,
    make_lazy,
    minorization_epsilon,
    mixing_time,
    nearly_periodic_chain,
    pump_pv,
    regeneration_tail,
    reproduce_pump_table,
    simulate_tail,
    spectral_report,
    stationary_distribution,
    tail_bound,
    tv_bound_poly,
    tv_rate,
    validate_instance,
    vnorm_bound_poly,
)

__all__ = [name for name in dir() if not name.startswith("_")]
