#pragma once

// Closed-form convergence bounds from drift and minorization data.
//
// Given a drift function V with rate lambda and ceiling K on a small set C, and an m-step
// minorization P^m(x, .) >= epsilon nu(.) on C, the functions here produce:
//   * the tail rate of the split-chain regeneration time (B, rho, r),
//   * a total variation bound (f1 t + f0) rho^t,
//   * a V-norm bound, quadratic-in-t times lambda^t when rho == lambda and a two-rate
//     combination otherwise,
// and certified mixing times read off those curves.

#include <array>
#include <cstdint>

namespace driftcert {

struct DriftParams {
  double lambda = 0.5;   ///< drift rate, in (0, 1)
  double K = 1.0;        ///< bound on PV over C, >= 1
  int m = 1;             ///< minorization step count, >= 1
  double epsilon = 1.0;  ///< minorization mass, in (0, 1]

  /// Throws DomainError naming the violated constraint.
  void validate() const;
};

struct RateParams {
  double B = 1.0;    ///< m-step drift ceiling
  double rho = 0.5;  ///< tail decay rate, lambda <= rho < 1
  double r = 1.0;    ///< Jensen exponent log(rho) / log(lambda)
};

/// m-step ceiling (1 - lambda^m)/(1 - lambda) (K - lambda) + lambda^m.
double drift_ceiling(const DriftParams& p);

RateParams compute_rate_params(const DriftParams& p);

/// Tail bound muV^r rho^(t + 1 - m) on P(T > t); not clipped at 1.
double tail_bound(const RateParams& rate, int m, double muV, std::int64_t t);

/// Upper bound (B - (1 - epsilon)) / epsilon on nu(V).
double nu_drift_bound(const RateParams& rate, double epsilon);

/// (f1 t + f0) rho^t, evaluated in the log domain.
struct BoundPolynomial {
  double f1 = 0.0;
  double f0 = 0.0;
  double rho = 0.5;

  double value(double t) const;
  /// Supremum of value over [t, infinity).
  double tail_sup(double t) const;
};

/// Intermediate constants of the total variation recipe.
struct TvConstants {
  double a_nu = 1.0;  ///< A(nu) = [(B - (1 - eps))/eps]^r rho^(1-m)
  double a_x = 1.0;   ///< A(x)  = V(x)^r rho^(1-m)
  double d = 0.0;     ///< D = sqrt(A(nu) rho / (1 - rho)) / 2
};

TvConstants tv_constants(const RateParams& rate, const DriftParams& p, double Vx);

BoundPolynomial tv_bound_poly(const RateParams& rate, const DriftParams& p, double Vx);

struct VNormBound {
  enum class Branch { rho_equals_lambda, rho_above_lambda };

  Branch branch = Branch::rho_above_lambda;
  double f0 = 0.0;  ///< TV coefficients the V-norm bound is built from
  double f1 = 0.0;
  double g0 = 0.0;
  double g1 = 0.0;  ///< rho_equals_lambda only
  double g2 = 0.0;  ///< rho_equals_lambda only
  double h0 = 0.0;  ///< rho_above_lambda only
  double h1 = 0.0;  ///< rho_above_lambda only
  double rho = 0.5;
  double lambda = 0.5;

  double value(double t) const;
  /// Upper bound on the supremum of value over [t, infinity).
  double tail_sup(double t) const;
};

VNormBound vnorm_bound_poly(const RateParams& rate, const DriftParams& p, double Vx);

/// Smallest t with bound.value(u) <= target for every integer u in [t, t_max] and
/// sup_{u >= t_max} bound.value(u) <= target. Throws NotReachedError otherwise.
std::int64_t mixing_time(const BoundPolynomial& bound, double target,
                         std::int64_t t_max = 1'000'000);
std::int64_t mixing_time(const VNormBound& bound, double target, std::int64_t t_max = 1'000'000);

/// (c0 + c1 t + c2 t^2) exp(log_rate t) with log_rate < 0. Building block for the bound
/// curves; exposed for reuse and testing.
struct PolyExpTerm {
  std::array<double, 3> c{0.0, 0.0, 0.0};
  double log_rate = -1.0;

  double value(double t) const;
  /// Exact supremum over [t, infinity): the max of the value at t, at every critical point
  /// past t, and the limit 0.
  double tail_sup(double t) const;
};

}  // namespace driftcert
