#include "driftcert/regeneration_simulator.hpp"

#include <algorithm>
#include <cmath>

#include "driftcert/special_functions.hpp"

namespace driftcert {

WilsonInterval wilson_interval(std::int64_t successes, std::int64_t trials, double level) {
  if (trials < 1) throw DomainError("Wilson interval needs at least one trial");
  if (!(level > 0.0 && level < 1.0)) throw DomainError("confidence level must lie in (0, 1)");
  const double z = normal_quantile(0.5 + 0.5 * level);
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2n = z * z / n;
  const double centre = (p + 0.5 * z2n) / (1.0 + z2n);
  const double half = z / (1.0 + z2n) * std::sqrt(p * (1.0 - p) / n + 0.25 * z2n / n);
  WilsonInterval out{std::max(0.0, centre - half), std::min(1.0, centre + half)};
  if (successes == 0) out.lower = 0.0;
  if (successes == trials) out.upper = 1.0;
  return out;
}

TailEstimate summarize_tail(const std::vector<std::int64_t>& T_values, int horizon,
                            double level) {
  TailEstimate out;
  out.reps = static_cast<std::int64_t>(T_values.size());
  out.horizon = horizon;
  out.T_counts.assign(static_cast<std::size_t>(horizon) + 1, 0);
  for (std::int64_t T : T_values) {
    if (T > horizon) {
      ++out.truncated_count;
    } else {
      ++out.T_counts[static_cast<std::size_t>(T)];
    }
  }
  // Truncated replications count as T > t for every t in range.
  std::int64_t above = out.reps;
  for (int t = 0; t <= horizon; ++t) {
    above -= out.T_counts[static_cast<std::size_t>(t)];
    out.empirical_tail.push_back(static_cast<double>(above) / static_cast<double>(out.reps));
    const WilsonInterval w = wilson_interval(above, out.reps, level);
    out.wilson_lower.push_back(w.lower);
    out.wilson_upper.push_back(w.upper);
  }
  return out;
}

TailBoundComparison compare_tail_to_bound(const TailEstimate& est, const RateParams& rate, int m,
                                          double muV) {
  TailBoundComparison out;
  out.max_excess = -1.0;
  const double n = static_cast<double>(est.reps);
  for (int t = 0; t <= est.horizon; ++t) {
    const double p = est.empirical_tail[static_cast<std::size_t>(t)];
    const double se = std::sqrt(p * (1.0 - p) / n);
    const double b = tail_bound(rate, m, muV, t);
    out.bound.push_back(b);
    const double excess = p - 3.0 * se - b;
    out.max_excess = std::max(out.max_excess, excess);
    if (excess > 0.0) out.violations.push_back(t);
  }
  return out;
}

std::vector<double> FiniteSplitKernel::cumulative(const Vector& p) {
  std::vector<double> cdf(static_cast<std::size_t>(p.size()));
  double acc = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    acc += std::max(p(i), 0.0);
    cdf[static_cast<std::size_t>(i)] = acc;
  }
  for (double& c : cdf) c /= acc;
  return cdf;
}

std::size_t FiniteSplitKernel::sample_discrete(const std::vector<double>& cdf, Rng& rng) {
  const double u = rng.uniform();
  const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  const auto idx = static_cast<std::size_t>(it - cdf.begin());
  // Skip zero-mass states that share the final cdf value.
  return std::min(idx, cdf.size() - 1);
}

FiniteSplitKernel::FiniteSplitKernel(const FiniteChain& chain, const StateSet& C,
                                     const MinorizationSpec& spec)
    : in_c_(membership(C, chain.size())), epsilon_(spec.epsilon) {
  spec.validate(chain.size());
  if (spec.m != 1) throw DomainError("finite split kernel supports m = 1 only");
  if (!verify_minorization(chain, C, spec)) throw DomainError("minorization fails on C");
  const auto n = static_cast<Eigen::Index>(chain.size());
  row_cdf_.reserve(chain.size());
  remainder_cdf_.resize(chain.size());
  for (Eigen::Index x = 0; x < n; ++x) {
    const Vector row = chain.kernel().row(x).transpose();
    row_cdf_.push_back(cumulative(row));
    if (in_c_[static_cast<std::size_t>(x)] && epsilon_ < 1.0) {
      remainder_cdf_[static_cast<std::size_t>(x)] =
          cumulative((row - epsilon_ * spec.nu).cwiseMax(0.0));
    }
  }
  nu_cdf_ = cumulative(spec.nu);
}

std::size_t FiniteSplitKernel::step(std::size_t x, Rng& rng) const {
  return sample_discrete(row_cdf_[x], rng);
}

RegenBlock<std::size_t> FiniteSplitKernel::regen_block(std::size_t x, Rng& rng) const {
  RegenBlock<std::size_t> block;
  block.heads = epsilon_ >= 1.0 || rng.uniform() < epsilon_;
  block.states.push_back(block.heads ? sample_discrete(nu_cdf_, rng)
                                     : sample_discrete(remainder_cdf_[x], rng));
  return block;
}

}  // namespace driftcert
