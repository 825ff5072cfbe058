#include "driftcert/report_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <system_error>

#include "driftcert/errors.hpp"

namespace driftcert {

std::string format_number(double v, bool full) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  if (v == std::trunc(v) && std::abs(v) < 1e15) {
    std::snprintf(buf, sizeof buf, "%.0f", v);
  } else if (full) {
    return std::string(buf, std::to_chars(buf, buf + sizeof buf, v).ptr);
  } else {
    std::snprintf(buf, sizeof buf, "%.6g", v);
  }
  return buf;
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

void CsvTable::add_row(const std::vector<double>& row) {
  if (row.size() != header_.size()) throw DimensionError("CSV row width does not match header");
  rows_.push_back(row);
}

std::string CsvTable::render(bool full_precision) const {
  std::string out;
  for (std::size_t i = 0; i < header_.size(); ++i) out += (i ? "," : "") + header_[i];
  out += '\n';
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += format_number(row[i], full_precision);
    }
    out += '\n';
  }
  return out;
}

void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + tmp.string() + "'");
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write to '" + tmp.string() + "' failed");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw std::runtime_error("cannot rename onto '" + path + "': " + ec.message());
  }
}

nlohmann::json round_json(const nlohmann::json& j, bool full) {
  if (full) return j;
  if (j.is_number_float()) {
    const double v = j.get<double>();
    if (!std::isfinite(v)) return j;
    return std::stod(format_number(v, false));
  }
  if (j.is_array() || j.is_object()) {
    nlohmann::json out = j;
    for (auto it = out.begin(); it != out.end(); ++it) *it = round_json(*it, false);
    return out;
  }
  return j;
}

nlohmann::json to_json(const RateParams& rate) {
  return {{"B", rate.B}, {"rho", rate.rho}, {"r", rate.r}};
}

nlohmann::json to_json(const SmallSetResult& r) {
  return {{"lambda", r.lambda}, {"C_lo", r.C_lo},     {"C_hi", r.C_hi},
          {"K", r.K_reported},  {"K_exact", r.K},     {"epsilon", r.epsilon},
          {"rho", r.rho}};
}

nlohmann::json to_json(const TableReport& report) {
  nlohmann::json j = to_json(report.search.best);
  j["tau_tv"] = report.tau_tv;
  j["tau_v"] = report.tau_v;
  j["start"] = report.start;
  nlohmann::json skipped = nlohmann::json::array();
  for (const auto& p : report.search.curve) {
    if (!p.result) skipped.push_back({{"lambda", p.lambda}, {"reason", p.skipped_reason}});
  }
  j["skipped"] = skipped;
  return j;
}

nlohmann::json to_json(const TailEstimate& est, const TailBoundComparison* cmp) {
  nlohmann::json j = {{"reps", est.reps},
                      {"horizon", est.horizon},
                      {"truncated_count", est.truncated_count},
                      {"empirical_tail_at_1", est.empirical_tail.size() > 1 ? est.empirical_tail[1] : 1.0}};
  if (cmp) {
    j["violations"] = cmp->violations;
    j["max_excess"] = cmp->max_excess;
  }
  return j;
}

nlohmann::json to_json(const ScalingReport& report) {
  nlohmann::json points = nlohmann::json::array();
  for (const auto& p : report.per_N) points.push_back({{"N", p.N}, {"gap", p.gap}});
  return {{"slope", report.slope}, {"intercept", report.intercept}, {"points", points}};
}

CsvTable distance_csv(const DistanceCurves& curves, const BoundPolynomial& bound) {
  CsvTable table({"t", "tv", "l2", "vnorm", "bound"});
  for (int t = 0; t <= curves.horizon; ++t) {
    const auto i = static_cast<std::size_t>(t);
    table.add_row({double(t), curves.tv[i], curves.l2[i], curves.vnorm[i], bound.value(t)});
  }
  return table;
}

CsvTable tail_csv(const TailEstimate& est, const std::vector<double>& bound) {
  CsvTable table({"t", "empirical", "wilson_upper", "theory_bound"});
  for (int t = 0; t <= est.horizon; ++t) {
    const auto i = static_cast<std::size_t>(t);
    const double b = i < bound.size() ? bound[i] : std::numeric_limits<double>::quiet_NaN();
    table.add_row({double(t), est.empirical_tail[i], est.wilson_upper[i], b});
  }
  return table;
}

CsvTable lambda_curve_csv(const LambdaSearch& search) {
  CsvTable table({"lambda", "rho"});
  for (const auto& p : search.curve) {
    if (p.result) table.add_row({p.lambda, p.result->rho});
  }
  return table;
}

}  // namespace driftcert
