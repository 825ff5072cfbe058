#pragma once

// Exact computations on finite chains: stationary laws, distance curves, the law of the
// split-chain regeneration time by dynamic programming, and executable checks of the
// convergence lemmas and theorems on concrete instances.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "driftcert/bound_calculator.hpp"
#include "driftcert/chain_model.hpp"

namespace driftcert {

/// Solves pi P = pi, sum pi = 1 directly. Throws ReducibleChainError when not irreducible.
Vector stationary_distribution(const FiniteChain& chain);

struct DistanceCurves {
  int horizon = 0;
  std::vector<double> tv;     ///< total variation to pi
  std::vector<double> l2;     ///< L2(pi) distance
  std::vector<double> vnorm;  ///< V-norm distance
};

DistanceCurves distance_curves(const FiniteChain& chain, const Vector& initial, const Vector& V,
                               int horizon);
DistanceCurves distance_curves(const FiniteChain& chain, std::size_t x, const Vector& V,
                               int horizon);

struct RegenerationTail {
  std::vector<double> tail;  ///< P(T > t), t = 0..horizon
  double expected_T = 0.0;   ///< exact: truncated sum plus the solved remainder
  double residual_mass = 0.0;  ///< P(T > horizon)
  double residual_sum = 0.0;   ///< sum_{n >= horizon} P(T > n), solved exactly
  std::vector<Vector> occupation;  ///< u_n(y) = P(X_n = y, T > n), n = 0..horizon
};

/// Sub-probability recursion for m = 1 splitting started from `initial`.
RegenerationTail exact_regeneration_tail(const FiniteChain& chain, const StateSet& C,
                                         const MinorizationSpec& spec, const Vector& initial,
                                         int horizon, bool keep_occupation = false);

/// Regeneration representation of pi from nu. Throws HorizonTooSmallError if the tail mass
/// left beyond the horizon exceeds `residual_tol`.
Vector stationary_via_regeneration(const FiniteChain& chain, const StateSet& C,
                                   const MinorizationSpec& spec, int horizon,
                                   double residual_tol = 1e-12);

struct L2TheoremReport {
  double max_slack_violation = 0.0;  ///< max_t (l2^2[t] - sum_{n > 2t} P_nu(T > n))
  int worst_t = 0;
  std::vector<double> l2_squared;
  std::vector<double> tail_sum;
};

/// Precondition: reversible with min eigenvalue >= -1e-10, m = 1. Throws DomainError else.
L2TheoremReport check_l2_theorem(const FiniteChain& chain, const StateSet& C,
                                 const MinorizationSpec& spec, int horizon);

struct CoreLemmaReport {
  double max_monotonicity_violation = 0.0;  ///< max_t (E f(X_{t+1}) - E f(X_t))
  double max_inequality_violation = 0.0;
  int worst_t = 0;
  std::vector<double> expectation;  ///< E_nu[f(X_t)], f = dnu/dpi
  bool holds(double tol = 1e-10) const {
    return max_monotonicity_violation <= 1e-12 && max_inequality_violation <= tol;
  }
};

CoreLemmaReport check_core_lemma(const FiniteChain& chain, const StateSet& C,
                                 const MinorizationSpec& spec, int horizon);

/// h(x) = E_x[lambda^{-tau_C}]: h = 1 on C, h = lambda^{-1} P h off C.
Vector exponential_hitting_moment(const FiniteChain& chain, const StateSet& C, double lambda);

struct SupportingLemmasReport {
  bool b_bound = true;      ///< P^m(delta_x, V) <= B on C
  bool pi_v_bound = true;   ///< pi(V) <= (K - lambda)/(1 - lambda) pi(C)
  bool tv_to_vnorm = true;  ///< V-norm distance dominated by the TV convolution
  double b_bound_slack = 0.0;     ///< max (lhs - rhs); <= tol when holding
  double pi_v_slack = 0.0;
  double tv_to_vnorm_slack = 0.0;
  std::size_t witness_state = 0;
  int witness_t = 0;
  std::string failure;  ///< empty when all hold

  bool all() const { return b_bound && pi_v_bound && tv_to_vnorm; }
};

SupportingLemmasReport check_supporting_lemmas(const FiniteChain& chain, const DriftSpec& drift,
                                               const MinorizationSpec& mino, int horizon,
                                               double tol = 1e-10);

/// Drift data from hitting moments: V = E_x[lambda^{-tau_C}] at `lambda`, declared with rate
/// lambda + slack, and K = max(1, max_C PV).
DriftSpec hitting_drift(const FiniteChain& chain, const StateSet& C, double lambda,
                        double slack = 1e-6);

struct InstanceCheck {
  std::string name;
  bool applicable = true;
  bool passed = true;
  double slack = 0.0;  ///< worst (lhs - rhs) seen; <= tolerance when passing
  std::string note;
};

struct InstanceReport {
  std::vector<InstanceCheck> checks;
  bool all_passed() const;
};

/// Names accepted by validate_instance.
const std::vector<std::string>& instance_check_names();

/// Runs the named checks (all of them when `only` is empty) on one chain with its drift and
/// minorization data. Distance and tail curves are compared from every start state and from
/// nu over t = 0..horizon. With `only` empty, checks whose preconditions fail are marked
/// not applicable; when named explicitly they throw DomainError instead.
InstanceReport validate_instance(const FiniteChain& chain, const DriftSpec& drift,
                                 const MinorizationSpec& mino, int horizon,
                                 const std::vector<std::string>& only = {},
                                 double tol = 1e-10);

struct NearlyPeriodic {
  FiniteChain chain;
  DriftSpec drift;
  MinorizationSpec minorization;
};

/// Cycle on Z/N: j -> j-1 for j != 0, and 0 -> {0, N-1} with probability 1/2 each.
NearlyPeriodic nearly_periodic_chain(int N);

/// Second-largest eigenvalue modulus (the unit eigenvalue removed once).
double tv_rate(const FiniteChain& chain);

struct ScalingPoint {
  int N = 0;
  double gap = 0.0;  ///< 1 - tv_rate
};

struct ScalingReport {
  double slope = 0.0;
  double intercept = 0.0;
  std::vector<ScalingPoint> per_N;
};

/// Least-squares slope of ln(1 - rho_TV) against ln N over nearly periodic chains.
ScalingReport cubic_scaling_experiment(std::span<const int> N_values);

}  // namespace driftcert
