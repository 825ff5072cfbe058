#pragma once

#include "driftcert/random.hpp"

namespace driftcert {

/// log Gamma(a) for a > 0.
double ln_gamma(double a);

/// Regularized lower incomplete gamma P(a, x) = gamma(a, x) / Gamma(a), a > 0, x >= 0.
double regularized_gamma_P(double a, double x);

/// Upper complement Q(a, x) = 1 - P(a, x), computed without cancellation.
double regularized_gamma_Q(double a, double x);

/// Density of Gamma(shape, rate) at x (rate parameterization: b^a x^(a-1) e^(-bx) / Gamma(a)).
double gamma_density(double shape, double rate, double x);

/// log of gamma_density; -inf for x <= 0 when shape >= 1.
double gamma_log_density(double shape, double rate, double x);

/// CDF of Gamma(shape, rate).
double gamma_cdf(double shape, double rate, double x);

/// Quantile of Gamma(shape, rate) at probability p in (0, 1).
double gamma_quantile(double shape, double rate, double p);

/// Exact draw from Gamma(shape, rate). Marsaglia-Tsang squeeze/rejection for shape >= 1;
/// shape < 1 boosts through Gamma(shape + 1) * U^(1/shape).
double sample_gamma(double shape, double rate, Rng& rng);

/// Standard normal quantile.
double normal_quantile(double p);

}  // namespace driftcert
