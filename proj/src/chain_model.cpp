#include "driftcert/chain_model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "driftcert/errors.hpp"
#include "driftcert/finite_chain_oracle.hpp"

namespace driftcert {
namespace {

void require_size(std::size_t got, std::size_t want, const char* what) {
  if (got != want) {
    throw DimensionError(std::string(what) + " has length " + std::to_string(got) +
                         ", expected " + std::to_string(want));
  }
}

// Forward/backward reachability from state 0 on the support graph.
bool reaches_all(const Matrix& P, bool transpose) {
  const auto n = static_cast<std::size_t>(P.rows());
  std::vector<bool> seen(n, false);
  std::vector<std::size_t> stack{0};
  seen[0] = true;
  while (!stack.empty()) {
    const std::size_t x = stack.back();
    stack.pop_back();
    for (std::size_t y = 0; y < n; ++y) {
      const double w = transpose ? P(y, x) : P(x, y);
      if (w > 0.0 && !seen[y]) {
        seen[y] = true;
        stack.push_back(y);
      }
    }
  }
  return std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
}

}  // namespace

FiniteChain::FiniteChain(Matrix kernel, std::vector<std::string> labels)
    : kernel_(std::move(kernel)), labels_(std::move(labels)) {
  if (kernel_.rows() != kernel_.cols()) {
    throw DimensionError("transition matrix must be square");
  }
  if (kernel_.rows() < 2) throw DomainError("chain needs at least 2 states");
  if (!labels_.empty()) require_size(labels_.size(), size(), "label list");
  for (Eigen::Index x = 0; x < kernel_.rows(); ++x) {
    double sum = 0.0;
    for (Eigen::Index y = 0; y < kernel_.cols(); ++y) {
      const double p = kernel_(x, y);
      if (!(p >= 0.0) || !std::isfinite(p)) {
        throw DomainError("negative or non-finite transition probability at row " +
                          std::to_string(x));
      }
      sum += p;
    }
    if (std::abs(sum - 1.0) > kRowSumTolerance) {
      std::ostringstream os;
      os.precision(17);
      os << "row " << x << " sums to " << sum << ", not 1";
      throw DomainError(os.str());
    }
  }
}

Vector FiniteChain::push(const Vector& mu) const {
  require_size(static_cast<std::size_t>(mu.size()), size(), "distribution");
  return kernel_.transpose() * mu;
}

Vector FiniteChain::apply(const Vector& f) const {
  require_size(static_cast<std::size_t>(f.size()), size(), "function");
  return kernel_ * f;
}

Matrix FiniteChain::power(int m) const {
  if (m < 0) throw DomainError("matrix power must be nonnegative");
  Matrix out = Matrix::Identity(kernel_.rows(), kernel_.cols());
  for (int i = 0; i < m; ++i) out = out * kernel_;
  return out;
}

bool FiniteChain::irreducible() const {
  return reaches_all(kernel_, false) && reaches_all(kernel_, true);
}

std::vector<bool> membership(const StateSet& C, std::size_t n) {
  if (C.empty()) throw DomainError("small set C must be nonempty");
  std::vector<bool> in(n, false);
  for (std::size_t x : C) {
    if (x >= n) throw DimensionError("state " + std::to_string(x) + " out of range");
    in[x] = true;
  }
  return in;
}

void DriftSpec::validate(std::size_t n) const {
  require_size(static_cast<std::size_t>(V.size()), n, "drift function V");
  membership(C, n);
  if ((V.array() < 1.0).any()) throw DomainError("drift function must satisfy V >= 1");
  if (!(lambda > 0.0 && lambda < 1.0)) throw DomainError("lambda must lie in (0, 1)");
  if (!(K >= 1.0)) throw DomainError("K must be >= 1");
}

void MinorizationSpec::validate(std::size_t n) const {
  require_size(static_cast<std::size_t>(nu.size()), n, "minorization measure nu");
  if (m < 1) throw DomainError("m must be >= 1");
  if (!(epsilon > 0.0 && epsilon <= 1.0)) throw DomainError("epsilon must lie in (0, 1]");
  if ((nu.array() < 0.0).any() || std::abs(nu.sum() - 1.0) > 1e-12) {
    throw DomainError("nu must be a probability vector");
  }
}

DriftCheck verify_drift(const FiniteChain& chain, const DriftSpec& spec, double tol) {
  const std::size_t n = chain.size();
  spec.validate(n);
  const auto in_c = membership(spec.C, n);
  const Vector pv = chain.apply(spec.V);
  DriftCheck out;
  out.worst_violation = -std::numeric_limits<double>::infinity();
  for (std::size_t x = 0; x < n; ++x) {
    const double ceiling = in_c[x] ? spec.K : spec.lambda * spec.V(x);
    const double excess = pv(x) - ceiling;
    if (excess > out.worst_violation) {
      out.worst_violation = excess;
      out.witness = x;
    }
  }
  out.holds = out.worst_violation <= tol;
  return out;
}

MinorizationSpec extract_minorization(const FiniteChain& chain, const StateSet& C, int m) {
  if (m < 1) throw DomainError("m must be >= 1");
  const std::size_t n = chain.size();
  membership(C, n);
  const Matrix Q = chain.power(m);
  Vector mins(static_cast<Eigen::Index>(n));
  for (std::size_t y = 0; y < n; ++y) {
    double lo = std::numeric_limits<double>::infinity();
    for (std::size_t x : C) lo = std::min(lo, Q(x, y));
    mins(y) = lo;
  }
  const double eps = mins.sum();
  if (!(eps > 0.0)) {
    throw DegenerateMinorizationError(
        "rows of P^m over C have disjoint support; no minorization exists");
  }
  MinorizationSpec out;
  out.m = m;
  out.epsilon = std::min(eps, 1.0);
  out.nu = mins / eps;
  return out;
}

bool verify_minorization(const FiniteChain& chain, const StateSet& C,
                         const MinorizationSpec& spec, double tol) {
  const std::size_t n = chain.size();
  spec.validate(n);
  membership(C, n);
  const Matrix Q = chain.power(spec.m);
  for (std::size_t x : C) {
    for (std::size_t y = 0; y < n; ++y) {
      if (Q(x, y) < spec.epsilon * spec.nu(y) - tol) return false;
    }
  }
  return true;
}

FiniteChain make_lazy(const FiniteChain& chain) {
  const auto n = chain.kernel().rows();
  return FiniteChain(0.5 * (Matrix::Identity(n, n) + chain.kernel()), chain.labels());
}

SpectralReport spectral_report(const FiniteChain& chain, double reversibility_tol) {
  SpectralReport out;
  out.stationary = stationary_distribution(chain);
  const Vector& pi = out.stationary;
  const Matrix& P = chain.kernel();
  const auto n = P.rows();

  out.reversible = true;
  for (Eigen::Index x = 0; x < n && out.reversible; ++x) {
    for (Eigen::Index y = x + 1; y < n; ++y) {
      if (std::abs(pi(x) * P(x, y) - pi(y) * P(y, x)) > reversibility_tol) {
        out.reversible = false;
        break;
      }
    }
  }

  if (out.reversible) {
    const Vector root = pi.cwiseSqrt();
    Matrix S = root.asDiagonal() * P * root.cwiseInverse().asDiagonal();
    S = 0.5 * (S + S.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Matrix> solver(S, Eigen::EigenvaluesOnly);
    out.min_eigenvalue = solver.eigenvalues().minCoeff();
  } else {
    Eigen::EigenSolver<Matrix> solver(P, false);
    out.min_eigenvalue = solver.eigenvalues().real().minCoeff();
  }
  return out;
}

FiniteChain read_chain(std::istream& in) {
  std::vector<std::string> labels;
  std::vector<std::vector<double>> rows;
  std::string line;
  bool first_content = true;
  while (std::getline(in, line)) {
    const auto start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos) continue;
    if (line[start] == '#') {
      if (first_content && rows.empty() && labels.empty()) {
        std::istringstream hs(line.substr(start + 1));
        std::string tok;
        while (hs >> tok) {
          if (labels.empty() && tok == "labels:") continue;
          labels.push_back(tok);
        }
      }
      continue;
    }
    first_content = false;
    std::istringstream ls(line);
    std::vector<double> row;
    std::string tok;
    while (ls >> tok) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(tok, &used));
        if (used != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::exception&) {
        throw DomainError("malformed matrix entry '" + tok + "' in row " +
                          std::to_string(rows.size()));
      }
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw DomainError("matrix file contains no rows");
  const std::size_t n = rows.size();
  Matrix P(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    require_size(rows[i].size(), n, ("row " + std::to_string(i)).c_str());
    for (std::size_t j = 0; j < n; ++j) {
      P(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  return FiniteChain(std::move(P), std::move(labels));
}

FiniteChain load_chain(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open chain file '" + path + "'");
  return read_chain(in);
}

void write_chain(std::ostream& out, const FiniteChain& chain) {
  if (!chain.labels().empty()) {
    out << "# labels:";
    for (const auto& l : chain.labels()) out << ' ' << l;
    out << '\n';
  }
  const auto old = out.precision(17);
  for (Eigen::Index x = 0; x < chain.kernel().rows(); ++x) {
    for (Eigen::Index y = 0; y < chain.kernel().cols(); ++y) {
      if (y) out << ' ';
      out << chain.kernel()(x, y);
    }
    out << '\n';
  }
  out.precision(old);
}

}  // namespace driftcert
