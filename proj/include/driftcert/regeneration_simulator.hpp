#pragma once

// Monte Carlo construction of the split-chain regeneration time T.
//
// A split kernel supplies one ordinary chain step and, for states in the small set, a
// regeneration block: flip a coin with heads probability epsilon; on heads the block ends
// in a draw from nu, on tails in a draw from the remainder law. T is the end time of the
// first heads block. After T the chain continues with ordinary steps.

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include "driftcert/bound_calculator.hpp"
#include "driftcert/chain_model.hpp"
#include "driftcert/errors.hpp"
#include "driftcert/random.hpp"

namespace driftcert {

template <class State>
struct RegenBlock {
  bool heads = false;
  std::vector<State> states;  ///< X_{n+1}, ..., X_{n+m}
};

template <class K>
concept SplitKernel = requires(const K& k, const typename K::state_type& x, Rng& rng) {
  typename K::state_type;
  { k.step(x, rng) } -> std::convertible_to<typename K::state_type>;
  { k.in_small_set(x) } -> std::convertible_to<bool>;
  { k.regen_block(x, rng) } -> std::same_as<RegenBlock<typename K::state_type>>;
  { k.m() } -> std::convertible_to<int>;
  { k.epsilon() } -> std::convertible_to<double>;
};

template <class State>
struct TSample {
  std::int64_t T = 0;       ///< regeneration time, or the cap when truncated
  bool truncated = false;
  std::int64_t length = 0;  ///< number of chain steps simulated
  State state{};            ///< X_T (or the state at the cap)
};

/// Runs the split chain from x0 until the first heads block or until `cap` steps.
template <SplitKernel K>
TSample<typename K::state_type> simulate_T(const K& kernel, typename K::state_type x0,
                                           std::int64_t cap, Rng& rng) {
  TSample<typename K::state_type> out;
  auto x = std::move(x0);
  std::int64_t n = 0;
  while (n < cap) {
    if (!kernel.in_small_set(x)) {
      x = kernel.step(x, rng);
      ++n;
      continue;
    }
    auto block = kernel.regen_block(x, rng);
    n += static_cast<std::int64_t>(block.states.size());
    x = std::move(block.states.back());
    if (block.heads) {
      out.T = n;
      out.length = n;
      out.state = std::move(x);
      return out;
    }
  }
  out.T = cap;
  out.truncated = true;
  out.length = n;
  out.state = std::move(x);
  return out;
}

template <class State>
struct SplitTrajectory {
  std::vector<State> path;     ///< X_0, ..., X_length
  std::int64_t T = -1;         ///< first regeneration time, -1 if none within the path
};

/// Full trajectory of the split construction, continuing with plain steps after T.
template <SplitKernel K>
SplitTrajectory<typename K::state_type> simulate_path(const K& kernel, typename K::state_type x0,
                                                      std::int64_t length, Rng& rng) {
  SplitTrajectory<typename K::state_type> out;
  out.path.reserve(static_cast<std::size_t>(length) + 1);
  out.path.push_back(std::move(x0));
  while (static_cast<std::int64_t>(out.path.size()) <= length) {
    const auto& x = out.path.back();
    if (out.T >= 0 || !kernel.in_small_set(x)) {
      out.path.push_back(kernel.step(x, rng));
      continue;
    }
    auto block = kernel.regen_block(x, rng);
    for (auto& s : block.states) out.path.push_back(std::move(s));
    if (block.heads) out.T = static_cast<std::int64_t>(out.path.size()) - 1;
  }
  out.path.resize(static_cast<std::size_t>(length) + 1);
  if (out.T > length) out.T = -1;
  return out;
}

struct TailEstimate {
  std::int64_t reps = 0;
  int horizon = 0;
  std::vector<double> empirical_tail;  ///< fraction of replications with T > t
  std::vector<double> wilson_lower;
  std::vector<double> wilson_upper;
  std::int64_t truncated_count = 0;    ///< replications with T > horizon
  std::vector<std::int64_t> T_counts;  ///< histogram of T on 0..horizon
};

struct WilsonInterval {
  double lower = 0.0;
  double upper = 1.0;
};

/// Score interval for a binomial proportion at two-sided confidence `level`.
WilsonInterval wilson_interval(std::int64_t successes, std::int64_t trials, double level = 0.997);

/// Builds a TailEstimate from per-replication T values (truncated ones recorded as > horizon).
TailEstimate summarize_tail(const std::vector<std::int64_t>& T_values, int horizon,
                            double level = 0.997);

/// Runs `reps` independent replications; replication i uses seed derive_seed(seed, i).
/// `initial(rng)` draws X_0. Results are merged in replication order, so the output does not
/// depend on `threads`.
template <SplitKernel K, class Initial>
TailEstimate estimate_tail(const K& kernel, Initial initial, std::int64_t reps, int horizon,
                           std::uint64_t seed, unsigned threads = 0) {
  if (reps < 1) throw DomainError("reps must be >= 1");
  if (horizon < 0) throw DomainError("horizon must be nonnegative");
  std::vector<std::int64_t> T_values(static_cast<std::size_t>(reps));
  auto run_range = [&](std::int64_t begin, std::int64_t end) {
    for (std::int64_t i = begin; i < end; ++i) {
      Rng rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
      auto x0 = initial(rng);
      const auto s = simulate_T(kernel, std::move(x0), static_cast<std::int64_t>(horizon) + 1, rng);
      T_values[static_cast<std::size_t>(i)] = s.truncated ? horizon + 1 : s.T;
    }
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::int64_t>(threads, reps));
  if (threads <= 1) {
    run_range(0, reps);
  } else {
    std::vector<std::jthread> pool;
    const std::int64_t chunk = (reps + threads - 1) / threads;
    for (unsigned w = 0; w < threads; ++w) {
      const std::int64_t b = static_cast<std::int64_t>(w) * chunk;
      const std::int64_t e = std::min(reps, b + chunk);
      if (b < e) pool.emplace_back(run_range, b, e);
    }
  }
  return summarize_tail(T_values, horizon);
}

struct TailBoundComparison {
  std::vector<int> violations;  ///< t where empirical - 3 se exceeds the bound
  std::vector<double> bound;    ///< theory curve, t = 0..horizon
  double max_excess = 0.0;      ///< max_t (empirical - 3 se - bound)
  bool ok() const { return violations.empty(); }
};

TailBoundComparison compare_tail_to_bound(const TailEstimate& est, const RateParams& rate, int m,
                                          double muV);

/// Exact split of a finite chain with m = 1: heads draws nu, tails draws the remainder
/// (P(x, .) - eps nu) / (1 - eps).
class FiniteSplitKernel {
 public:
  using state_type = std::size_t;

  FiniteSplitKernel(const FiniteChain& chain, const StateSet& C, const MinorizationSpec& spec);

  std::size_t step(std::size_t x, Rng& rng) const;
  bool in_small_set(std::size_t x) const { return in_c_[x]; }
  RegenBlock<std::size_t> regen_block(std::size_t x, Rng& rng) const;
  int m() const { return 1; }
  double epsilon() const { return epsilon_; }

  /// Draws from a probability vector (used for initial laws).
  static std::size_t sample_discrete(const std::vector<double>& cdf, Rng& rng);
  static std::vector<double> cumulative(const Vector& p);

 private:
  std::vector<std::vector<double>> row_cdf_;
  std::vector<std::vector<double>> remainder_cdf_;
  std::vector<double> nu_cdf_;
  std::vector<bool> in_c_;
  double epsilon_;
};

}  // namespace driftcert
