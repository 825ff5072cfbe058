#include "driftcert/pump_gibbs.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <sstream>
#include <thread>

#include "driftcert/bound_calculator.hpp"
#include "driftcert/errors.hpp"
#include "driftcert/special_functions.hpp"

namespace driftcert {
namespace {

constexpr double kTailMass = 1e-12;

double bisect_root(const std::function<double(double)>& g, double neg, double pos, double tol) {
  // g(neg) <= 0 < g(pos); neg and pos may be in either order.
  while (std::abs(pos - neg) > tol) {
    const double mid = 0.5 * (neg + pos);
    if (g(mid) > 0.0) {
      pos = mid;
    } else {
      neg = mid;
    }
  }
  return 0.5 * (neg + pos);
}

double golden_max(const std::function<double(double)>& f, double a, double b, double tol) {
  const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return std::max(fc, fd);
}

}  // namespace

PumpModel PumpModel::standard() {
  PumpModel model;
  const int s[] = {5, 1, 5, 14, 3, 19, 1, 1, 4, 22};
  const double t[] = {94.320, 15.720, 62.880, 125.760, 5.240, 31.440, 1.048, 1.048, 2.096, 10.480};
  for (int j = 0; j < 10; ++j) model.data.push_back({s[j], t[j]});
  return model;
}

void PumpModel::validate() const {
  if (data.size() != 10) {
    throw DomainError("pump dataset must have exactly 10 (s, t) pairs, got " +
                      std::to_string(data.size()));
  }
  for (const auto& obs : data) {
    if (obs.failures < 0) throw DomainError("failure counts must be nonnegative");
    if (!(obs.exposure > 0.0)) throw DomainError("exposure times must be positive");
  }
  if (!(shape_beta > 0.0 && rate_offset > 0.0 && theta_shape_offset > 0.0)) {
    throw DomainError("pump hyperparameters must be positive");
  }
}

double PumpModel::conditional_mean(double beta) const {
  double m = 0.0;
  for (const auto& obs : data) m += (theta_shape_offset + obs.failures) / (beta + obs.exposure);
  return m;
}

double PumpModel::conditional_variance(double beta) const {
  double v = 0.0;
  for (const auto& obs : data) {
    const double rate = beta + obs.exposure;
    v += (theta_shape_offset + obs.failures) / (rate * rate);
  }
  return v;
}

double PumpModel::conditional_drift(double beta) const {
  const double shift = conditional_mean(beta) - center;
  return 1.0 + conditional_variance(beta) + shift * shift;
}

std::vector<PumpObservation> read_pump_data(std::istream& in) {
  std::vector<PumpObservation> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    double s = 0.0, t = 0.0;
    if (!(ls >> s)) continue;
    std::string extra;
    if (!(ls >> t) || (ls >> extra)) {
      throw DomainError("pump data line " + std::to_string(lineno) + " must hold two columns 's t'");
    }
    if (s < 0.0 || s != std::floor(s)) {
      throw DomainError("pump data line " + std::to_string(lineno) + ": s must be a count");
    }
    out.push_back({static_cast<int>(s), t});
  }
  return out;
}

PumpModel load_pump_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open pump dataset '" + path + "'");
  PumpModel model;
  model.data = read_pump_data(in);
  model.validate();
  return model;
}

double gibbs_step(const PumpModel& model, double x, Rng& rng) {
  if (!(x >= 0.0)) throw DomainError("pump chain state must be nonnegative");
  const double beta = sample_gamma(model.shape_beta, model.beta_rate(x), rng);
  double s = 0.0;
  for (const auto& obs : model.data) {
    s += sample_gamma(model.theta_shape_offset + obs.failures, beta + obs.exposure, rng);
  }
  return s;
}

double pv(const PumpModel& model, double x, double rel_tol) {
  if (!(x >= 0.0)) throw DomainError("PV needs x >= 0");
  const double a = model.shape_beta;
  const double b = model.beta_rate(x);
  const double lo = gamma_quantile(a, b, kTailMass);
  const double hi = gamma_quantile(a, b, 1.0 - kTailMass);
  auto integrand = [&](double beta) {
    return model.conditional_drift(beta) * gamma_density(a, b, beta);
  };
  double error = 0.0;
  const double value = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      integrand, lo, hi, 20, rel_tol, &error);
  if (!std::isfinite(value) || error > rel_tol * std::abs(value) * 10.0) {
    throw QuadratureError("PV quadrature did not converge at x = " + std::to_string(x));
  }
  return value;
}

PvGrid tabulate_pv(const PumpModel& model, const ScanOptions& opts) {
  if (!(opts.step > 0.0 && opts.x_max > opts.step)) throw DomainError("invalid scan grid");
  PvGrid grid;
  const auto count = static_cast<std::size_t>(std::llround(opts.x_max / opts.step)) + 1;
  grid.x.resize(count);
  grid.pv.resize(count);
  for (std::size_t i = 0; i < count; ++i) grid.x[i] = static_cast<double>(i) * opts.step;

  unsigned threads = opts.threads ? opts.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(count));
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < threads; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < count; i += threads) grid.pv[i] = pv(model, grid.x[i]);
      });
    }
  }
  return grid;
}

SmallSet find_small_set(const PumpModel& model, double lambda, const ScanOptions& opts) {
  return find_small_set(model, lambda, tabulate_pv(model, opts), opts);
}

SmallSet find_small_set(const PumpModel& model, double lambda, const PvGrid& grid,
                        const ScanOptions& opts) {
  if (!(lambda > 0.0 && lambda < 1.0)) throw DomainError("lambda must lie in (0, 1)");
  const std::size_t n = grid.x.size();
  std::vector<bool> inside(n);
  for (std::size_t i = 0; i < n; ++i) inside[i] = grid.pv[i] > lambda * model.drift(grid.x[i]);

  std::size_t changes = 0;
  for (std::size_t i = 1; i < n; ++i) changes += inside[i] != inside[i - 1];
  const auto first = std::find(inside.begin(), inside.end(), true);
  if (first == inside.end()) {
    throw NonIntervalError("PV(x) <= lambda V(x) everywhere on the scan; C is empty");
  }
  if (inside.back()) {
    throw NonIntervalError("PV(x) > lambda V(x) at the scan boundary x_max; C is unbounded at "
                           "lambda = " + std::to_string(lambda));
  }
  const std::size_t allowed = inside.front() ? 1 : 2;
  if (changes > allowed) {
    throw NonIntervalError("{PV > lambda V} has " + std::to_string(changes) +
                           " boundary crossings at lambda = " + std::to_string(lambda) +
                           "; not a single interval");
  }

  auto excess = [&](double x) { return pv(model, x) - lambda * model.drift(x); };
  const std::size_t i_first = static_cast<std::size_t>(first - inside.begin());
  std::size_t i_last = i_first;
  while (i_last + 1 < n && inside[i_last + 1]) ++i_last;

  SmallSet out;
  out.lo = i_first == 0 ? 0.0
                        : bisect_root(excess, grid.x[i_first - 1], grid.x[i_first], opts.endpoint_tol);
  out.hi = bisect_root(excess, grid.x[i_last + 1], grid.x[i_last], opts.endpoint_tol);

  std::size_t arg = i_first;
  for (std::size_t i = i_first; i <= i_last; ++i) {
    if (grid.pv[i] > grid.pv[arg]) arg = i;
  }
  const double a = std::max(out.lo, arg > 0 ? grid.x[arg - 1] : 0.0);
  const double b = std::min(out.hi, arg + 1 < n ? grid.x[arg + 1] : out.hi);
  auto pv_at = [&](double x) { return pv(model, x); };
  out.K = std::max({golden_max(pv_at, a, b, 1e-9), grid.pv[arg], pv(model, out.lo), pv(model, out.hi)});
  return out;
}

double PumpMinorization::overlap_density(double shape, double beta) const {
  return std::min(gamma_density(shape, rate_lo, beta), gamma_density(shape, rate_hi, beta));
}

PumpMinorization minorization_epsilon(const PumpModel& model, double C_lo, double C_hi) {
  if (!(C_lo >= 0.0)) throw DomainError("C_lo must be nonnegative");
  if (!(C_hi > C_lo)) throw DomainError("C must have C_lo < C_hi");
  PumpMinorization out;
  const double a = model.shape_beta;
  out.rate_lo = model.beta_rate(C_lo);
  out.rate_hi = model.beta_rate(C_hi);
  // a log b - b beta is concave in b, so the minimum over C sits at an endpoint; the lower
  // rate wins left of the crossing and the higher rate right of it.
  out.beta_cross = a * std::log(out.rate_hi / out.rate_lo) / (out.rate_hi - out.rate_lo);
  out.epsilon = gamma_cdf(a, out.rate_lo, out.beta_cross) +
                regularized_gamma_Q(a, out.rate_hi * out.beta_cross);
  std::ostringstream os;
  os.precision(6);
  os << "beta ~ min(Gamma(" << a << ", " << out.rate_lo << "), Gamma(" << a << ", "
     << out.rate_hi << ")) / " << out.epsilon << " (densities cross at beta = " << out.beta_cross
     << "); then S | beta = sum_j Gamma(" << model.theta_shape_offset << " + s_j, beta + t_j)";
  out.nu_description = os.str();
  return out;
}

std::vector<double> default_lambda_grid() {
  std::vector<double> grid;
  for (int i = 1; i <= 99; ++i) grid.push_back(i / 100.0);
  return grid;
}

LambdaSearch optimize_lambda(const PumpModel& model, std::span<const double> grid,
                             const ScanOptions& opts) {
  model.validate();
  if (grid.empty()) throw DomainError("lambda grid is empty");
  const PvGrid table = tabulate_pv(model, opts);

  LambdaSearch out;
  out.curve.resize(grid.size());
  {
    unsigned threads = opts.threads ? opts.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(grid.size()));
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < threads; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < grid.size(); i += threads) {
          LambdaPoint& point = out.curve[i];
          point.lambda = grid[i];
          try {
            const SmallSet c = find_small_set(model, grid[i], table, opts);
            const PumpMinorization mino = minorization_epsilon(model, c.lo, c.hi);
            DriftParams p{grid[i], std::max(c.K, 1.0), 1, mino.epsilon};
            const RateParams rate = compute_rate_params(p);
            point.result = SmallSetResult{grid[i], c.lo, c.hi, c.K, std::ceil(c.K * 100.0) / 100.0,
                                          mino.epsilon, rate.rho};
          } catch (const std::exception& e) {
            point.skipped_reason = e.what();
          }
        }
      });
    }
  }

  const SmallSetResult* best = nullptr;
  for (const auto& point : out.curve) {
    if (!point.result) continue;
    const auto& r = *point.result;
    if (!best || r.rho < best->rho || (r.rho == best->rho && r.lambda < best->lambda)) best = &r;
  }
  if (!best) throw NumericError("no lambda on the grid produced a valid small set");
  out.best = *best;
  return out;
}

TableReport reproduce_table(const PumpModel& model, std::span<const double> grid,
                            const ScanOptions& opts, double tv_target, double v_target) {
  TableReport out;
  out.search = optimize_lambda(model, grid, opts);
  const SmallSetResult& best = out.search.best;
  const DriftParams p{best.lambda, std::max(best.K, 1.0), 1, best.epsilon};
  const RateParams rate = compute_rate_params(p);
  out.rho = rate.rho;
  out.start = model.center;
  const double v_start = model.drift(out.start);
  out.tau_tv = mixing_time(tv_bound_poly(rate, p, v_start), tv_target);
  out.tau_v = mixing_time(vnorm_bound_poly(rate, p, v_start), v_target);
  return out;
}

PumpSplitKernel::PumpSplitKernel(PumpModel model, double C_lo, double C_hi)
    : model_(std::move(model)), lo_(C_lo), hi_(C_hi), mino_(minorization_epsilon(model_, C_lo, C_hi)) {
  model_.validate();
}

RegenBlock<double> PumpSplitKernel::regen_block(double x, Rng& rng) const {
  const double a = model_.shape_beta;
  const double beta = sample_gamma(a, model_.beta_rate(x), rng);
  const double log_ratio = std::log(mino_.overlap_density(a, beta)) -
                           gamma_log_density(a, model_.beta_rate(x), beta);
  RegenBlock<double> block;
  block.heads = std::log(rng.uniform()) < log_ratio;
  double s = 0.0;
  for (const auto& obs : model_.data) {
    s += sample_gamma(model_.theta_shape_offset + obs.failures, beta + obs.exposure, rng);
  }
  block.states.push_back(s);
  return block;
}

}  // namespace driftcert
