#include "driftcert/bound_calculator.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "driftcert/errors.hpp"

namespace driftcert {
namespace {

std::string fmt(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double positive_part(double v) { return std::max(v, 0.0); }

// Real roots of a + b t + c t^2 (degree reduced when leading coefficients vanish).
std::vector<double> real_roots(double a, double b, double c) {
  std::vector<double> roots;
  if (c == 0.0) {
    if (b != 0.0) roots.push_back(-a / b);
    return roots;
  }
  const double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) return roots;
  const double sq = std::sqrt(disc);
  // Numerically stable pairing.
  const double q = -0.5 * (b + std::copysign(sq, b));
  if (q != 0.0) {
    roots.push_back(q / c);
    roots.push_back(a / q);
  } else {
    roots.push_back(0.0);
  }
  return roots;
}

template <class Bound>
std::int64_t scan_mixing_time(const Bound& bound, double target, std::int64_t t_max) {
  if (!(target > 0.0)) {
    throw DomainError("mixing-time target must be positive, got " + fmt(target));
  }
  if (t_max < 0) throw DomainError("t_max must be nonnegative");
  if (bound.tail_sup(static_cast<double>(t_max)) > target) {
    throw NotReachedError("bound does not stay below target " + fmt(target) +
                          " beyond t_max = " + std::to_string(t_max));
  }
  std::int64_t t = t_max;
  while (t > 0 && bound.value(static_cast<double>(t - 1)) <= target) --t;
  return t;
}

}  // namespace

void DriftParams::validate() const {
  if (!(lambda > 0.0 && lambda < 1.0)) {
    throw DomainError("lambda must lie in (0, 1), got " + fmt(lambda));
  }
  if (!(K >= 1.0) || !std::isfinite(K)) {
    throw DomainError("K must be finite and >= 1, got " + fmt(K));
  }
  if (m < 1) throw DomainError("m must be >= 1, got " + std::to_string(m));
  if (!(epsilon > 0.0 && epsilon <= 1.0)) {
    throw DomainError("epsilon must lie in (0, 1], got " + fmt(epsilon));
  }
}

double drift_ceiling(const DriftParams& p) {
  const double lm = std::pow(p.lambda, p.m);
  return (1.0 - lm) / (1.0 - p.lambda) * (p.K - p.lambda) + lm;
}

RateParams compute_rate_params(const DriftParams& p) {
  p.validate();
  RateParams out;
  out.B = drift_ceiling(p);
  if (p.epsilon == 1.0) {
    out.rho = p.lambda;
    out.r = 1.0;
    return out;
  }
  if (!(out.B > p.epsilon)) {
    throw DomainError("drift ceiling B = " + fmt(out.B) + " must exceed epsilon = " +
                      fmt(p.epsilon) + "; drift and minorization data are inconsistent");
  }
  const double log_lambda = std::log(p.lambda);
  const double log_tails = std::log1p(-p.epsilon);
  const double denom = -p.m * log_lambda + std::log(out.B - p.epsilon) - log_tails;
  const double rho0 = std::exp(-log_tails * log_lambda / denom);
  out.rho = std::max(p.lambda, rho0);
  out.r = std::log(out.rho) / log_lambda;
  if (!(out.rho < 1.0)) {
    throw NumericError("rate evaluated to rho = " + fmt(out.rho) + " (not below 1)");
  }
  return out;
}

double tail_bound(const RateParams& rate, int m, double muV, std::int64_t t) {
  if (!(muV >= 1.0)) throw DomainError("mu(V) must be >= 1, got " + fmt(muV));
  const double exponent = static_cast<double>(t) + 1.0 - m;
  return std::exp(rate.r * std::log(muV) + exponent * std::log(rate.rho));
}

double nu_drift_bound(const RateParams& rate, double epsilon) {
  return (rate.B - (1.0 - epsilon)) / epsilon;
}

double PolyExpTerm::value(double t) const {
  const double poly = c[0] + t * (c[1] + t * c[2]);
  if (poly == 0.0) return 0.0;
  return poly * std::exp(log_rate * t);
}

double PolyExpTerm::tail_sup(double t) const {
  // d/dt [p(t) e^{st}] = (p'(t) + s p(t)) e^{st}; its real roots are the critical points.
  double best = std::max(value(t), 0.0);
  const double s = log_rate;
  for (double root : real_roots(c[1] + s * c[0], 2.0 * c[2] + s * c[1], s * c[2])) {
    if (root > t) best = std::max(best, value(root));
  }
  return best;
}

double BoundPolynomial::value(double t) const {
  return PolyExpTerm{{f0, f1, 0.0}, std::log(rho)}.value(t);
}

double BoundPolynomial::tail_sup(double t) const {
  return PolyExpTerm{{f0, f1, 0.0}, std::log(rho)}.tail_sup(t);
}

TvConstants tv_constants(const RateParams& rate, const DriftParams& p, double Vx) {
  p.validate();
  if (!(Vx >= 1.0)) throw DomainError("V(x) must be >= 1, got " + fmt(Vx));
  const double log_rho = std::log(rate.rho);
  const double shift = (1.0 - p.m) * log_rho;
  TvConstants out;
  out.a_nu = std::exp(rate.r * std::log(nu_drift_bound(rate, p.epsilon)) + shift);
  out.a_x = std::exp(rate.r * std::log(Vx) + shift);
  out.d = 0.5 * std::sqrt(out.a_nu * rate.rho / (1.0 - rate.rho));
  return out;
}

BoundPolynomial tv_bound_poly(const RateParams& rate, const DriftParams& p, double Vx) {
  const TvConstants k = tv_constants(rate, p, Vx);
  BoundPolynomial out;
  out.rho = rate.rho;
  out.f1 = (1.0 - rate.rho) / rate.rho * k.d * k.a_x;
  out.f0 = positive_part(1.0 - k.d) * k.a_x + k.d;
  return out;
}

double VNormBound::value(double t) const {
  const double log_lambda = std::log(lambda);
  if (branch == Branch::rho_equals_lambda) {
    return PolyExpTerm{{g0, g1, g2}, log_lambda}.value(t);
  }
  return PolyExpTerm{{h0, h1, 0.0}, std::log(rho)}.value(t) +
         PolyExpTerm{{g0 - h0, 0.0, 0.0}, log_lambda}.value(t);
}

double VNormBound::tail_sup(double t) const {
  const double log_lambda = std::log(lambda);
  if (branch == Branch::rho_equals_lambda) {
    return PolyExpTerm{{g0, g1, g2}, log_lambda}.tail_sup(t);
  }
  return PolyExpTerm{{h0, h1, 0.0}, std::log(rho)}.tail_sup(t) +
         PolyExpTerm{{g0 - h0, 0.0, 0.0}, log_lambda}.tail_sup(t);
}

VNormBound vnorm_bound_poly(const RateParams& rate, const DriftParams& p, double Vx) {
  const BoundPolynomial tv = tv_bound_poly(rate, p, Vx);
  VNormBound out;
  out.rho = rate.rho;
  out.lambda = p.lambda;
  out.f0 = tv.f0;
  out.f1 = tv.f1;
  out.g0 = Vx + (p.K - p.lambda) / (1.0 - p.lambda);
  if (rate.rho == p.lambda) {
    out.branch = VNormBound::Branch::rho_equals_lambda;
    out.g1 = p.K / p.lambda * (2.0 * tv.f0 - tv.f1);
    out.g2 = p.K / p.lambda * tv.f1;
  } else {
    out.branch = VNormBound::Branch::rho_above_lambda;
    const double gap = rate.rho - p.lambda;
    out.h0 = 2.0 * p.K * (tv.f0 / gap - rate.rho * tv.f1 / (gap * gap));
    out.h1 = 2.0 * p.K * tv.f1 / gap;
  }
  return out;
}

std::int64_t mixing_time(const BoundPolynomial& bound, double target, std::int64_t t_max) {
  return scan_mixing_time(bound, target, t_max);
}

std::int64_t mixing_time(const VNormBound& bound, double target, std::int64_t t_max) {
  return scan_mixing_time(bound, target, t_max);
}

}  // namespace driftcert
