#pragma once

// Random lazy reversible chains with verified drift and minorization data.

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cstdint>
#include <vector>

#include "driftcert/chain_model.hpp"
#include "driftcert/errors.hpp"
#include "driftcert/finite_chain_oracle.hpp"
#include "driftcert/random.hpp"

namespace driftcert::testing {

struct SuiteChain {
  FiniteChain chain;
  DriftSpec drift;
  MinorizationSpec mino;
};

inline double off_c_radius(const FiniteChain& chain, const StateSet& C) {
  const auto in_c = membership(C, chain.size());
  std::vector<Eigen::Index> off;
  for (std::size_t x = 0; x < chain.size(); ++x) {
    if (!in_c[x]) off.push_back(static_cast<Eigen::Index>(x));
  }
  if (off.empty()) return 0.0;
  const auto k = static_cast<Eigen::Index>(off.size());
  Matrix A(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) A(i, j) = chain(off[i], off[j]);
  }
  return Eigen::EigenSolver<Matrix>(A, false).eigenvalues().cwiseAbs().maxCoeff();
}

/// Symmetric random weights over a spanning path, normalized and made lazy; C of size 1-3
/// with epsilon >= 0.05; V the exponential hitting moment of C.
inline SuiteChain random_suite_chain(Rng& rng, std::size_t max_n = 12) {
  for (;;) {
    const std::size_t n = 3 + static_cast<std::size_t>(rng.uniform() * static_cast<double>(max_n - 2));
    Matrix W = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i; j < n; ++j) {
        double w = rng.uniform() < 0.6 ? rng.uniform() : 0.0;
        if (j == i + 1) w = std::max(w, 0.1);
        W(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = w;
        W(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = w;
      }
    }
    Matrix P = W;
    for (Eigen::Index i = 0; i < P.rows(); ++i) P.row(i) /= P.row(i).sum();
    FiniteChain chain = make_lazy(FiniteChain(P));

    const std::size_t c_size = 1 + static_cast<std::size_t>(rng.uniform() * 3.0);
    std::vector<std::size_t> states(n);
    for (std::size_t i = 0; i < n; ++i) states[i] = i;
    for (std::size_t i = 0; i < c_size; ++i) {
      const auto j = i + static_cast<std::size_t>(rng.uniform() * static_cast<double>(n - i));
      std::swap(states[i], states[j]);
    }
    StateSet C(states.begin(), states.begin() + static_cast<std::ptrdiff_t>(c_size));
    std::sort(C.begin(), C.end());

    MinorizationSpec mino;
    try {
      mino = extract_minorization(chain, C, 1);
    } catch (const DomainError&) {
      continue;
    }
    if (mino.epsilon < 0.05) continue;

    const double radius = off_c_radius(chain, C);
    const double lambda = radius + (1.0 - radius) * (0.1 + 0.8 * rng.uniform());
    if (!(lambda + 1e-6 < 1.0) || lambda <= 0.0) continue;
    DriftSpec drift = hitting_drift(chain, C, lambda);
    return SuiteChain{std::move(chain), std::move(drift), std::move(mino)};
  }
}

inline std::vector<SuiteChain> random_suite(std::uint64_t seed, std::size_t count,
                                            std::size_t max_n = 12) {
  std::vector<SuiteChain> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    Rng rng(derive_seed(seed, i));
    out.push_back(random_suite_chain(rng, max_n));
  }
  return out;
}

}  // namespace driftcert::testing
