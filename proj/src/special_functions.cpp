#include "driftcert/special_functions.hpp"

#include <boost/math/distributions/normal.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <limits>
#include <string>

#include "driftcert/errors.hpp"

namespace driftcert {
namespace {

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw DomainError(std::string(what) + " must be positive and finite, got " + std::to_string(v));
  }
}

void require_nonnegative(double v, const char* what) {
  if (!(v >= 0.0) || std::isnan(v)) {
    throw DomainError(std::string(what) + " must be nonnegative, got " + std::to_string(v));
  }
}

}  // namespace

double ln_gamma(double a) {
  require_positive(a, "ln_gamma argument");
  return boost::math::lgamma(a);
}

double regularized_gamma_P(double a, double x) {
  require_positive(a, "shape a");
  require_nonnegative(x, "x");
  if (std::isinf(x)) return 1.0;
  return boost::math::gamma_p(a, x);
}

double regularized_gamma_Q(double a, double x) {
  require_positive(a, "shape a");
  require_nonnegative(x, "x");
  if (std::isinf(x)) return 0.0;
  return boost::math::gamma_q(a, x);
}

double gamma_log_density(double shape, double rate, double x) {
  require_positive(shape, "shape");
  require_positive(rate, "rate");
  if (x < 0.0) return -std::numeric_limits<double>::infinity();
  if (x == 0.0) {
    if (shape == 1.0) return std::log(rate);
    return shape < 1.0 ? std::numeric_limits<double>::infinity()
                       : -std::numeric_limits<double>::infinity();
  }
  return shape * std::log(rate) - boost::math::lgamma(shape) + (shape - 1.0) * std::log(x) -
         rate * x;
}

double gamma_density(double shape, double rate, double x) {
  return std::exp(gamma_log_density(shape, rate, x));
}

double gamma_cdf(double shape, double rate, double x) {
  require_positive(rate, "rate");
  if (x <= 0.0) return 0.0;
  return regularized_gamma_P(shape, rate * x);
}

double gamma_quantile(double shape, double rate, double p) {
  require_positive(shape, "shape");
  require_positive(rate, "rate");
  if (!(p > 0.0 && p < 1.0)) {
    throw DomainError("gamma quantile probability must lie in (0, 1)");
  }
  return boost::math::gamma_p_inv(shape, p) / rate;
}

double sample_gamma(double shape, double rate, Rng& rng) {
  require_positive(shape, "shape");
  require_positive(rate, "rate");
  if (shape < 1.0) {
    const double boost_factor = std::pow(rng.uniform(), 1.0 / shape);
    return sample_gamma(shape + 1.0, rate, rng) * boost_factor;
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double z, v;
    do {
      z = rng.normal();
      v = 1.0 + c * z;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.uniform();
    const double z2 = z * z;
    if (u < 1.0 - 0.0331 * z2 * z2) return d * v / rate;
    if (std::log(u) < 0.5 * z2 + d * (1.0 - v + std::log(v))) return d * v / rate;
  }
}

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw DomainError("normal quantile probability must lie in (0, 1)");
  }
  return boost::math::quantile(boost::math::normal_distribution<double>(), p);
}

}  // namespace driftcert
