#pragma once

// Pump-failure hierarchical Gibbs sampler, collapsed to the chain on S = sum_j theta_j:
//   beta | S ~ Gamma(18.03, 1 + S),   theta_j | beta ~ Gamma(1.802 + s_j, beta + t_j).
// Drift function V(x) = 1 + (x - 6.5)^2. Everything needed to derive drift and minorization
// constants for that chain, pick lambda, and turn the result into mixing-time bounds.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "driftcert/random.hpp"
#include "driftcert/regeneration_simulator.hpp"

namespace driftcert {

struct PumpObservation {
  int failures = 0;      ///< s_j
  double exposure = 1.0; ///< t_j
};

struct PumpModel {
  double shape_beta = 18.03;
  double rate_offset = 1.0;
  double theta_shape_offset = 1.802;
  double center = 6.5;
  std::vector<PumpObservation> data;

  /// The ten-pump failure dataset.
  static PumpModel standard();

  void validate() const;

  double drift(double x) const { return 1.0 + (x - center) * (x - center); }
  double beta_rate(double x) const { return rate_offset + x; }
  /// E[S' | beta] and Var[S' | beta].
  double conditional_mean(double beta) const;
  double conditional_variance(double beta) const;
  /// E[V(S') | beta].
  double conditional_drift(double beta) const;
};

/// Dataset text: one "s t" pair per line; blank lines and '#' comments ignored.
std::vector<PumpObservation> read_pump_data(std::istream& in);
PumpModel load_pump_model(const std::string& path);

/// One transition of the S-chain.
double gibbs_step(const PumpModel& model, double x, Rng& rng);

/// PV(x) = E[V(S_1) | S_0 = x] by adaptive Gauss-Kronrod quadrature over beta.
double pv(const PumpModel& model, double x, double rel_tol = 1e-9);

struct ScanOptions {
  double x_max = 40.0;
  double step = 0.005;
  double endpoint_tol = 1e-6;
  unsigned threads = 0;  ///< 0 picks the hardware concurrency
};

/// PV tabulated on the scan grid; shared by every lambda of a search.
struct PvGrid {
  std::vector<double> x;
  std::vector<double> pv;
};

PvGrid tabulate_pv(const PumpModel& model, const ScanOptions& opts = {});

struct SmallSet {
  double lo = 0.0;
  double hi = 0.0;
  double K = 0.0;  ///< sup of PV over [lo, hi], full precision
};

/// C = {x : PV(x) > lambda V(x)}. Throws NonIntervalError when C is not one bounded interval
/// on [0, x_max].
SmallSet find_small_set(const PumpModel& model, double lambda, const ScanOptions& opts = {});
SmallSet find_small_set(const PumpModel& model, double lambda, const PvGrid& grid,
                        const ScanOptions& opts = {});

struct PumpMinorization {
  double epsilon = 0.0;
  double beta_cross = 0.0;  ///< where the endpoint beta densities cross
  double rate_lo = 0.0;     ///< 1 + C_lo
  double rate_hi = 0.0;     ///< 1 + C_hi
  std::string nu_description;

  /// Pointwise minimum of the endpoint densities (unnormalized: integrates to epsilon).
  double overlap_density(double shape, double beta) const;
};

/// epsilon = integral of min_{x in C} Gamma(18.03, 1 + x) density over beta.
PumpMinorization minorization_epsilon(const PumpModel& model, double C_lo, double C_hi);

struct SmallSetResult {
  double lambda = 0.0;
  double C_lo = 0.0;
  double C_hi = 0.0;
  double K = 0.0;           ///< full precision
  double K_reported = 0.0;  ///< K rounded up to 0.01
  double epsilon = 0.0;
  double rho = 0.0;
};

struct LambdaPoint {
  double lambda = 0.0;
  std::optional<SmallSetResult> result;
  std::string skipped_reason;  ///< why this lambda produced no rate
};

struct LambdaSearch {
  SmallSetResult best;
  std::vector<LambdaPoint> curve;
};

/// 0.01, 0.02, ..., 0.99.
std::vector<double> default_lambda_grid();

/// Minimizes rho(lambda) over the grid; ties go to the smaller lambda.
LambdaSearch optimize_lambda(const PumpModel& model, std::span<const double> grid,
                             const ScanOptions& opts = {});

struct TableReport {
  LambdaSearch search;
  std::int64_t tau_tv = 0;  ///< bound on min{t : ||P^t(x0, .) - pi||_TV <= 0.01}
  std::int64_t tau_v = 0;   ///< bound on min{t : ||P^t(x0, .) - pi||_V <= 0.02}
  double rho = 0.0;
  double start = 6.5;
};

TableReport reproduce_table(const PumpModel& model, std::span<const double> grid,
                            const ScanOptions& opts = {}, double tv_target = 0.01,
                            double v_target = 0.02);

/// Split kernel for the S-chain with a retrospective coin: beta is drawn from its
/// conditional law, then heads is decided with probability min_endpoint_density(beta) /
/// density_x(beta). Given heads, beta follows the normalized overlap density, so the next
/// S is a draw from nu.
class PumpSplitKernel {
 public:
  using state_type = double;

  PumpSplitKernel(PumpModel model, double C_lo, double C_hi);

  double step(double x, Rng& rng) const { return gibbs_step(model_, x, rng); }
  bool in_small_set(double x) const { return x >= lo_ && x <= hi_; }
  RegenBlock<double> regen_block(double x, Rng& rng) const;
  int m() const { return 1; }
  double epsilon() const { return mino_.epsilon; }
  const PumpMinorization& minorization() const { return mino_; }

 private:
  PumpModel model_;
  double lo_;
  double hi_;
  PumpMinorization mino_;
};

}  // namespace driftcert
