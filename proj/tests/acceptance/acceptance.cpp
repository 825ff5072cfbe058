// One line per acceptance criterion; exit status is the number of failures.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "driftcert/bound_calculator.hpp"
#include "driftcert/errors.hpp"
#include "driftcert/finite_chain_oracle.hpp"
#include "driftcert/pump_gibbs.hpp"
#include "driftcert/regeneration_simulator.hpp"
#include "driftcert/special_functions.hpp"
#include "../support/random_chains.hpp"

namespace dc = driftcert;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

constexpr std::uint64_t kSuiteSeed = 0x5eed2024;
constexpr std::size_t kSuiteSize = 120;

int failures = 0;

void criterion(int id, const char* title, double budget_s, const std::function<Verdict()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Verdict v;
  try {
    v = body();
  } catch (const std::exception& e) {
    v = {false, std::string("threw: ") + e.what()};
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (secs > budget_s) {
    v.pass = false;
    v.detail += " [over time budget]";
  }
  if (!v.pass) ++failures;
  std::printf("%s %2d %-28s %s (%.2fs / %.0fs)\n", v.pass ? "PASS" : "FAIL", id, title,
              v.detail.c_str(), secs, budget_s);
  std::fflush(stdout);
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

const std::vector<dc::testing::SuiteChain>& suite() {
  static const auto chains = dc::testing::random_suite(kSuiteSeed, kSuiteSize);
  return chains;
}

std::vector<dc::NearlyPeriodic> nearly_periodic_family() {
  std::vector<dc::NearlyPeriodic> out;
  for (int N = 5; N <= 50; ++N) out.push_back(dc::nearly_periodic_chain(N));
  return out;
}

// Worst slack of one named instance check over a family of chains.
template <class Family, class Get>
Verdict instance_sweep(const Family& family, Get get, const std::string& check, int horizon,
                       double tol) {
  double worst = -std::numeric_limits<double>::infinity();
  std::size_t checked = 0, failed = 0;
  for (const auto& item : family) {
    const auto& [chain, drift, mino] = get(item);
    const dc::InstanceReport r = dc::validate_instance(chain, drift, mino, horizon, {check});
    const dc::InstanceCheck& c = r.checks.front();
    worst = std::max(worst, c.slack);
    ++checked;
    if (!(c.slack <= tol)) ++failed;
  }
  return {failed == 0, std::to_string(checked) + " chains, worst slack " + num(worst) +
                           ", violations " + std::to_string(failed)};
}

auto suite_get = [](const dc::testing::SuiteChain& s) {
  return std::tie(s.chain, s.drift, s.mino);
};
auto np_get = [](const dc::NearlyPeriodic& s) {
  return std::tie(s.chain, s.drift, s.minorization);
};

struct GammaRef {
  double a, x, P, Q;
};

const GammaRef kGammaRefs[] = {
    {0.5, 0.05, 0.24817036595415072417, 0.75182963404584927583},
    {0.5, 1.0, 0.84270079294971486934, 0.15729920705028513066},
    {1.3, 0.5850000000000001, 0.31068842647224381213, 0.68931157352775618787},
    {1.3, 4.55, 0.98036897839428187333, 0.019631021605718126672},
    {2.7, 2.43, 0.5143021811497573861, 0.4856978188502426139},
    {2.7, 16.200000000000003, 0.99999246903200706431, 7.5309679929356901829e-6},
    {5.0, 5.0, 0.55950671493478758856, 0.44049328506521241144},
    {5.0, 40.0, 0.99999999999949795357, 5.0204643188291333513e-13},
    {9.5, 10.450000000000001, 0.65764735093595954009, 0.34235264906404045991},
    {9.5, 95.0, 1.0, 3.283131723701460057e-30},
    {17.0, 34.0, 0.99952635111713815059, 0.00047364888286184941366},
    {17.0, 1.7000000000000002, 4.6892580319203517193e-12, 0.99999999999531074197},
    {25.5, 89.25, 0.99999999999999952515, 4.7484591209672447955e-16},
    {25.5, 11.475, 0.00024127052694555711685, 0.99975872947305444288},
    {33.0, 198.0, 1.0, 1.4416739708490003984e-48},
    {33.0, 29.7, 0.2958960896828802146, 0.7041039103171197854},
    {41.7, 333.6, 1.0, 6.7839030029087315164e-92},
    {41.7, 41.7, 0.52059565135140602267, 0.47940434864859397733},
    {50.0, 500.0, 1.0, 2.3060767380353980174e-148},
    {50.0, 55.00000000000001, 0.76779521949914395631, 0.23220478050085604369},
};

}  // namespace

int main() {
  criterion(1, "rate formula", 1.0, [] {
    const dc::RateParams r = dc::compute_rate_params({0.61, 3.05, 1, 0.287});
    return Verdict{r.rho >= 0.913 && r.rho <= 0.915, "rho = " + num(r.rho)};
  });

  dc::TableReport table;
  bool have_table = false;
  criterion(2, "pump pipeline", 60.0, [&] {
    const auto grid = dc::default_lambda_grid();
    table = dc::reproduce_table(dc::PumpModel::standard(), grid);
    have_table = true;
    const auto& b = table.search.best;
    const bool ok = std::abs(b.lambda - 0.61) < 1e-12 && std::abs(b.C_lo - 4.74) <= 0.02 &&
                    std::abs(b.C_hi - 8.50) <= 0.02 && std::abs(b.K - 3.05) <= 0.02 &&
                    std::abs(b.epsilon - 0.287) <= 0.003;
    return Verdict{ok, "lambda = " + num(b.lambda) + ", C = [" + num(b.C_lo) + ", " +
                           num(b.C_hi) + "], K = " + num(b.K) + ", eps = " + num(b.epsilon) +
                           ", rho = " + num(b.rho)};
  });

  criterion(3, "mixing times", 1.0, [&] {
    if (!have_table) return Verdict{false, "pump pipeline unavailable"};
    return Verdict{table.tau_tv == 83 && table.tau_v == 111,
                   "tau_TV = " + std::to_string(table.tau_tv) +
                       ", tau_V = " + std::to_string(table.tau_v)};
  });

  criterion(4, "L2 theorem", 60.0, [] {
    double worst = -std::numeric_limits<double>::infinity();
    for (const auto& s : suite()) {
      const auto r = dc::check_l2_theorem(s.chain, s.drift.C, s.mino, 200);
      worst = std::max(worst, r.max_slack_violation);
    }
    return Verdict{worst <= 1e-10, std::to_string(suite().size()) +
                                       " chains, max(l2^2 - tail sum) = " + num(worst)};
  });

  criterion(5, "tail-bound dominance", 30.0, [] {
    const auto np = nearly_periodic_family();
    const Verdict a = instance_sweep(np, np_get, "tail-bound", 300, 1e-12);
    const Verdict b = instance_sweep(suite(), suite_get, "tail-bound", 300, 1e-12);
    return Verdict{a.pass && b.pass, "nearly periodic: " + a.detail + "; suite: " + b.detail};
  });

  criterion(6, "TV theorem validity", 60.0, [] {
    return instance_sweep(suite(), suite_get, "tv-bound", 200, 1e-12);
  });

  criterion(7, "cubic scaling", 120.0, [] {
    const int Ns[] = {32, 64, 128, 256};
    const dc::ScalingReport r = dc::cubic_scaling_experiment(Ns);
    return Verdict{r.slope >= -3.2 && r.slope <= -2.8, "slope = " + num(r.slope)};
  });

  criterion(8, "stationary formula", 60.0, [] {
    return instance_sweep(suite(), suite_get, "stationary", 200, 1e-10);
  });

  criterion(9, "supporting lemmas", 60.0, [] {
    const auto np = nearly_periodic_family();
    const Verdict a = instance_sweep(np, np_get, "supporting-lemmas", 200, 1e-10);
    const Verdict b = instance_sweep(suite(), suite_get, "supporting-lemmas", 200, 1e-10);
    return Verdict{a.pass && b.pass, "nearly periodic: " + a.detail + "; suite: " + b.detail};
  });

  criterion(10, "simulator fidelity", 120.0, [&] {
    constexpr std::int64_t reps = 100000;
    constexpr int horizon = 100;
    std::size_t kernels = 0, misses = 0;
    auto finite = [&](const dc::FiniteChain& chain, const dc::StateSet& C,
                      const dc::MinorizationSpec& mino, std::uint64_t seed) {
      const dc::FiniteSplitKernel kernel(chain, C, mino);
      const auto cdf = dc::FiniteSplitKernel::cumulative(mino.nu);
      const auto est = dc::estimate_tail(
          kernel, [&cdf](dc::Rng& rng) { return dc::FiniteSplitKernel::sample_discrete(cdf, rng); },
          reps, horizon, seed);
      const auto exact = dc::exact_regeneration_tail(chain, C, mino, mino.nu, horizon);
      for (int t = 0; t <= horizon; ++t) {
        const auto i = static_cast<std::size_t>(t);
        if (exact.tail[i] < est.wilson_lower[i] || exact.tail[i] > est.wilson_upper[i]) ++misses;
      }
      ++kernels;
    };
    const dc::NearlyPeriodic np = dc::nearly_periodic_chain(20);
    finite(np.chain, np.drift.C, np.minorization, 101);
    for (std::size_t i = 0; i < 3; ++i) {
      const auto& s = suite()[i];
      finite(s.chain, s.drift.C, s.mino, 202 + i);
    }

    if (!have_table) return Verdict{false, "pump pipeline unavailable"};
    const auto& b = table.search.best;
    const dc::PumpSplitKernel pump(dc::PumpModel::standard(), b.C_lo, b.C_hi);
    std::string heads_detail;
    bool heads_ok = true;
    const double xs[] = {b.C_lo, 0.5 * (b.C_lo + b.C_hi), b.C_hi};
    for (std::size_t k = 0; k < 3; ++k) {
      std::int64_t heads = 0;
      for (std::int64_t i = 0; i < reps; ++i) {
        dc::Rng rng(dc::derive_seed(303 + k, static_cast<std::uint64_t>(i)));
        heads += pump.regen_block(xs[k], rng).heads;
      }
      const dc::WilsonInterval w = dc::wilson_interval(heads, reps);
      heads_ok = heads_ok && w.lower <= pump.epsilon() && pump.epsilon() <= w.upper;
      heads_detail += (k ? ", " : "") + num(static_cast<double>(heads) / reps);
    }
    return Verdict{misses == 0 && heads_ok,
                   std::to_string(kernels) + " finite kernels, exact tail outside band at " +
                       std::to_string(misses) + " (kernel, t); pump heads " + heads_detail +
                       " vs eps " + num(pump.epsilon())};
  });

  criterion(11, "special functions", 1.0, [] {
    double worst = 0.0;
    for (const auto& ref : kGammaRefs) {
      const double p = dc::regularized_gamma_P(ref.a, ref.x);
      const double q = dc::regularized_gamma_Q(ref.a, ref.x);
      worst = std::max(worst, std::abs(p - ref.P) / ref.P);
      worst = std::max(worst, std::abs(q - ref.Q) / ref.Q);
    }
    return Verdict{worst <= 1e-12, "20 points, max relative error " + num(worst)};
  });

  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
