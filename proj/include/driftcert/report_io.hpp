#pragma once

// Output plumbing shared by the CLI and the Python module: number formatting, CSV tables,
// JSON summaries of the result structs, atomic file writes.

#include <string>
#include <vector>

#include <json.hpp>

#include "driftcert/bound_calculator.hpp"
#include "driftcert/finite_chain_oracle.hpp"
#include "driftcert/pump_gibbs.hpp"
#include "driftcert/regeneration_simulator.hpp"

namespace driftcert {

/// 6 significant digits, or round-trip precision when `full`. Integral values print bare.
std::string format_number(double v, bool full = false);

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  void add_row(const std::vector<double>& row);
  std::string render(bool full_precision = false) const;
  std::size_t rows() const { return rows_.size(); }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<double>> rows_;
};

/// Writes to a sibling temp file, then renames over `path`.
void write_file_atomic(const std::string& path, const std::string& content);

/// Rounds every double in a JSON tree to 6 significant digits unless `full`.
nlohmann::json round_json(const nlohmann::json& j, bool full);

nlohmann::json to_json(const RateParams& rate);
nlohmann::json to_json(const SmallSetResult& r);
nlohmann::json to_json(const TableReport& report);
nlohmann::json to_json(const TailEstimate& est, const TailBoundComparison* cmp = nullptr);
nlohmann::json to_json(const ScalingReport& report);

/// (t, tv, l2, vnorm, bound) with the TV bound in the last column.
CsvTable distance_csv(const DistanceCurves& curves, const BoundPolynomial& bound);
/// (t, empirical, wilson_upper, theory_bound).
CsvTable tail_csv(const TailEstimate& est, const std::vector<double>& bound);
/// (lambda, rho) for every lambda that produced a small set.
CsvTable lambda_curve_csv(const LambdaSearch& search);

}  // namespace driftcert
