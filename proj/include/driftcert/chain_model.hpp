#pragma once

// Finite Markov chains with drift and minorization data, and exact checks of both
// conditions on a dense kernel.

#include <Eigen/Dense>

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace driftcert {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using StateSet = std::vector<std::size_t>;

/// Dense row-stochastic kernel. Immutable once constructed.
class FiniteChain {
 public:
  static constexpr double kRowSumTolerance = 1e-12;

  /// Validates nonnegativity and unit row sums; throws DomainError otherwise.
  explicit FiniteChain(Matrix kernel, std::vector<std::string> labels = {});

  std::size_t size() const { return static_cast<std::size_t>(kernel_.rows()); }
  const Matrix& kernel() const { return kernel_; }
  double operator()(std::size_t x, std::size_t y) const { return kernel_(x, y); }
  const std::vector<std::string>& labels() const { return labels_; }

  /// One step of a distribution (row vector) through the kernel: mu -> mu P.
  Vector push(const Vector& mu) const;
  /// Function applied by the kernel: f -> P f.
  Vector apply(const Vector& f) const;
  /// m-step kernel P^m.
  Matrix power(int m) const;
  /// Strong connectivity of the support graph.
  bool irreducible() const;

 private:
  Matrix kernel_;
  std::vector<std::string> labels_;
};

struct DriftSpec {
  Vector V;
  StateSet C;
  double lambda = 0.5;
  double K = 1.0;

  void validate(std::size_t n) const;
};

struct MinorizationSpec {
  int m = 1;
  double epsilon = 1.0;
  Vector nu;

  void validate(std::size_t n) const;
};

struct DriftCheck {
  bool holds = true;
  double worst_violation = 0.0;  ///< max over states of PV(x) minus its allowed ceiling
  std::size_t witness = 0;       ///< state attaining worst_violation
};

struct SpectralReport {
  bool reversible = false;
  double min_eigenvalue = 0.0;
  Vector stationary;
};

/// Indicator of C as a boolean mask of length n; throws on out-of-range or empty C.
std::vector<bool> membership(const StateSet& C, std::size_t n);

DriftCheck verify_drift(const FiniteChain& chain, const DriftSpec& spec, double tol = 1e-12);

/// Canonical maximal split: eps = sum_y min_{x in C} P^m(x, y), nu proportional to the minima.
MinorizationSpec extract_minorization(const FiniteChain& chain, const StateSet& C, int m);

bool verify_minorization(const FiniteChain& chain, const StateSet& C,
                         const MinorizationSpec& spec, double tol = 1e-12);

/// Kernel (I + P) / 2.
FiniteChain make_lazy(const FiniteChain& chain);

/// Detailed balance and spectrum of the pi-symmetrized kernel. For non-reversible chains
/// min_eigenvalue is the smallest real part of the spectrum of P.
SpectralReport spectral_report(const FiniteChain& chain, double reversibility_tol = 1e-10);

/// Plain-text matrix: one row per line, whitespace-separated decimals. An optional leading
/// line starting with '#' carries state labels ("# a b c" or "# labels: a b c").
FiniteChain read_chain(std::istream& in);
FiniteChain load_chain(const std::string& path);
void write_chain(std::ostream& out, const FiniteChain& chain);

}  // namespace driftcert
