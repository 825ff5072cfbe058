// driftcert: convergence bounds from drift and minorization data.

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "driftcert/bound_calculator.hpp"
#include "driftcert/chain_model.hpp"
#include "driftcert/errors.hpp"
#include "driftcert/finite_chain_oracle.hpp"
#include "driftcert/pump_gibbs.hpp"
#include "driftcert/regeneration_simulator.hpp"
#include "driftcert/report_io.hpp"

namespace dc = driftcert;
using nlohmann::json;

namespace {

struct Global {
  bool json_out = false;
  bool full = false;
  std::string out_dir = ".";
};

std::string resolve(const Global& g, const std::string& path) {
  const std::filesystem::path p(path);
  if (p.is_absolute() || g.out_dir.empty()) return path;
  return (std::filesystem::path(g.out_dir) / p).string();
}

void emit(const Global& g, const json& j) {
  if (g.json_out) {
    std::cout << dc::round_json(j, g.full).dump(2) << '\n';
    return;
  }
  for (auto it = j.begin(); it != j.end(); ++it) {
    std::cout << it.key() << ": ";
    if (it->is_number_float()) {
      std::cout << dc::format_number(it->get<double>(), g.full);
    } else if (it->is_string()) {
      std::cout << it->get<std::string>();
    } else {
      std::cout << dc::round_json(*it, g.full).dump();
    }
    std::cout << '\n';
  }
}

dc::StateSet to_states(const std::vector<long long>& raw) {
  dc::StateSet out;
  for (long long v : raw) {
    if (v < 0) throw dc::DomainError("state indices in C must be nonnegative");
    out.push_back(static_cast<std::size_t>(v));
  }
  return out;
}

dc::Vector read_vector_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw dc::DomainError("cannot open '" + path + "'");
  std::vector<double> values;
  double v = 0.0;
  while (in >> v) values.push_back(v);
  if (!in.eof()) throw dc::DomainError("'" + path + "' holds a non-numeric entry");
  return Eigen::Map<dc::Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

// Chain, drift and minorization assembled from --nearly-periodic or --chain flags.
struct Instance {
  std::optional<dc::FiniteChain> chain;
  dc::DriftSpec drift;
  dc::MinorizationSpec mino;
};

struct InstanceFlags {
  int nearly_periodic = 0;
  std::string chain_path;
  std::vector<long long> C;
  double lambda = 0.0;
  std::string V_path;
  bool lazy = false;

  void attach(CLI::App* sub) {
    auto* np = sub->add_option("--nearly-periodic", nearly_periodic, "Nearly periodic chain on Z/N");
    auto* ch = sub->add_option("--chain", chain_path, "Matrix file of the chain");
    np->excludes(ch);
    sub->add_option("--C", C, "Small set as state indices (chain file only)")->delimiter(',');
    sub->add_option("--lambda", lambda, "Drift rate for hitting-moment V (chain file only)");
    sub->add_option("--V", V_path, "File with V values; default is the hitting moment");
    sub->add_flag("--lazy", lazy, "Replace the chain by (I + P)/2");
  }

  bool given() const { return nearly_periodic > 0 || !chain_path.empty(); }

  Instance build() const {
    Instance out;
    if (nearly_periodic > 0) {
      dc::NearlyPeriodic np = dc::nearly_periodic_chain(nearly_periodic);
      if (lazy) throw dc::DomainError("--lazy is not available with --nearly-periodic");
      out.chain.emplace(np.chain);
      out.drift = np.drift;
      out.mino = np.minorization;
      return out;
    }
    if (chain_path.empty()) throw dc::DomainError("give --chain FILE or --nearly-periodic N");
    dc::FiniteChain chain = dc::load_chain(chain_path);
    if (lazy) chain = dc::make_lazy(chain);
    if (C.empty()) throw dc::DomainError("--C is required with --chain");
    const dc::StateSet states = to_states(C);
    out.mino = dc::extract_minorization(chain, states, 1);
    if (!V_path.empty()) {
      out.drift.V = read_vector_file(V_path);
      out.drift.C = states;
      out.drift.lambda = lambda;
      out.drift.validate(chain.size());
      const dc::Vector pv = chain.apply(out.drift.V);
      out.drift.K = 1.0;
      for (std::size_t x : states) out.drift.K = std::max(out.drift.K, pv(static_cast<Eigen::Index>(x)));
    } else {
      if (!(lambda > 0.0)) throw dc::DomainError("--lambda in (0, 1) is required to build V");
      out.drift = dc::hitting_drift(chain, states, lambda);
    }
    out.chain.emplace(std::move(chain));
    return out;
  }
};

int run_rate(const Global& g, const dc::DriftParams& p) {
  const dc::RateParams rate = dc::compute_rate_params(p);
  emit(g, dc::to_json(rate));
  return 0;
}

int run_bound(const Global& g, const dc::DriftParams& p, double Vx, double target_tv,
              double target_v, const std::string& csv, std::int64_t t_max) {
  if (!(Vx >= 1.0)) throw dc::DomainError("Vx must be >= 1");
  const dc::RateParams rate = dc::compute_rate_params(p);
  const dc::BoundPolynomial tv = dc::tv_bound_poly(rate, p, Vx);
  const dc::VNormBound vn = dc::vnorm_bound_poly(rate, p, Vx);
  const std::int64_t tau_tv = dc::mixing_time(tv, target_tv, t_max);
  const std::int64_t tau_v = dc::mixing_time(vn, target_v, t_max);

  dc::CsvTable table({"t", "tv_bound", "vnorm_bound"});
  const std::int64_t last = std::max(tau_tv, tau_v) + 20;
  for (std::int64_t t = 0; t <= last; ++t) {
    table.add_row({double(t), tv.value(double(t)), vn.value(double(t))});
  }
  const std::string path = resolve(g, csv);
  dc::write_file_atomic(path, table.render(g.full));

  json j = dc::to_json(rate);
  j["tau_tv"] = tau_tv;
  j["tau_v"] = tau_v;
  j["f1"] = tv.f1;
  j["f0"] = tv.f0;
  j["csv"] = path;
  emit(g, j);
  return 0;
}

int run_oracle(const Global& g, const InstanceFlags& flags, std::vector<std::string> checks,
               bool all_checks, int horizon, const std::vector<int>& scaling,
               const std::string& csv, long long from) {
  if (!scaling.empty()) {
    const dc::ScalingReport r = dc::cubic_scaling_experiment(scaling);
    json j = dc::to_json(r);
    j["within_cubic_band"] = r.slope >= -3.2 && r.slope <= -2.8;
    emit(g, j);
    if (!flags.given()) return 0;
  }
  const Instance inst = flags.build();
  if (all_checks) checks.clear();
  const dc::InstanceReport report =
      dc::validate_instance(*inst.chain, inst.drift, inst.mino, horizon, checks);

  if (!csv.empty()) {
    if (from < 0 || static_cast<std::size_t>(from) >= inst.chain->size()) {
      throw dc::DomainError("--from must be a state index");
    }
    const auto x = static_cast<std::size_t>(from);
    const dc::DriftParams p{inst.drift.lambda, inst.drift.K, inst.mino.m, inst.mino.epsilon};
    const dc::RateParams rate = dc::compute_rate_params(p);
    const dc::DistanceCurves curves = dc::distance_curves(*inst.chain, x, inst.drift.V, horizon);
    const auto table =
        dc::distance_csv(curves, dc::tv_bound_poly(rate, p, inst.drift.V(static_cast<Eigen::Index>(x))));
    dc::write_file_atomic(resolve(g, csv), table.render(g.full));
  }

  json list = json::array();
  for (const auto& c : report.checks) {
    json item = {{"name", c.name}, {"applicable", c.applicable}, {"passed", c.passed}};
    if (c.applicable) item["slack"] = c.slack;
    if (!c.note.empty()) item["note"] = c.note;
    list.push_back(item);
  }
  if (g.json_out) {
    emit(g, {{"all_passed", report.all_passed()}, {"checks", list}});
  } else {
    for (const auto& c : report.checks) {
      std::cout << c.name << ": "
                << (!c.applicable ? "n/a" : c.passed ? "pass" : "FAIL");
      if (c.applicable) std::cout << " (slack " << dc::format_number(c.slack, g.full) << ")";
      if (!c.note.empty()) std::cout << "  " << c.note;
      std::cout << '\n';
    }
    std::cout << "all_passed: " << (report.all_passed() ? "true" : "false") << '\n';
  }
  return report.all_passed() ? 0 : 1;
}

struct SimulateFlags {
  bool pump = false;
  std::string data;
  double pump_lambda = 0.61;
  double from = -1.0;
  std::int64_t reps = 100000;
  int horizon = -1;
  std::uint64_t seed = 1;
  unsigned threads = 0;
  std::string csv = "tail.csv";
};

int finish_simulation(const Global& g, const SimulateFlags& f, const dc::TailEstimate& est,
                      const dc::TailBoundComparison& cmp, json extra) {
  dc::write_file_atomic(resolve(g, f.csv), dc::tail_csv(est, cmp.bound).render(g.full));
  json j = dc::to_json(est, &cmp);
  for (auto it = extra.begin(); it != extra.end(); ++it) j[it.key()] = *it;
  j["csv"] = resolve(g, f.csv);
  emit(g, j);
  return 0;
}

int run_simulate(const Global& g, const InstanceFlags& flags, const SimulateFlags& f) {
  if (f.pump == flags.given()) {
    throw dc::DomainError("choose exactly one of --pump, --nearly-periodic, --chain");
  }
  if (f.pump) {
    const dc::PumpModel model = f.data.empty() ? dc::PumpModel::standard() : dc::load_pump_model(f.data);
    const double x0 = f.from < 0.0 ? model.center : f.from;
    const int horizon = f.horizon < 0 ? 200 : f.horizon;
    const dc::SmallSet c = dc::find_small_set(model, f.pump_lambda);
    const dc::PumpSplitKernel kernel(model, c.lo, c.hi);
    const dc::DriftParams p{f.pump_lambda, std::max(c.K, 1.0), 1, kernel.epsilon()};
    const dc::RateParams rate = dc::compute_rate_params(p);
    const auto est = dc::estimate_tail(kernel, [x0](dc::Rng&) { return x0; }, f.reps, horizon,
                                       f.seed, f.threads);
    const auto cmp = dc::compare_tail_to_bound(est, rate, 1, model.drift(x0));
    return finish_simulation(g, f, est, cmp,
                             {{"C_lo", c.lo}, {"C_hi", c.hi}, {"K", c.K}, {"epsilon", kernel.epsilon()},
                              {"rho", rate.rho}, {"from", x0}});
  }

  const Instance inst = flags.build();
  const dc::FiniteChain& chain = *inst.chain;
  const int horizon = f.horizon < 0 ? 100 : f.horizon;
  const dc::FiniteSplitKernel kernel(chain, inst.drift.C, inst.mino);
  dc::Vector init;
  if (f.from >= 0.0) {
    const auto x = static_cast<Eigen::Index>(f.from);
    if (x != f.from || static_cast<std::size_t>(x) >= chain.size()) {
      throw dc::DomainError("--from must be a state index");
    }
    init = dc::Vector::Unit(static_cast<Eigen::Index>(chain.size()), x);
  } else {
    init = inst.mino.nu;
  }
  const auto cdf = dc::FiniteSplitKernel::cumulative(init);
  const auto est = dc::estimate_tail(
      kernel, [&cdf](dc::Rng& rng) { return dc::FiniteSplitKernel::sample_discrete(cdf, rng); },
      f.reps, horizon, f.seed, f.threads);
  const dc::DriftParams p{inst.drift.lambda, inst.drift.K, inst.mino.m, inst.mino.epsilon};
  const dc::RateParams rate = dc::compute_rate_params(p);
  const auto cmp = dc::compare_tail_to_bound(est, rate, 1, init.dot(inst.drift.V));

  const dc::RegenerationTail exact =
      dc::exact_regeneration_tail(chain, inst.drift.C, inst.mino, init, horizon);
  json outside = json::array();
  for (int t = 0; t <= horizon; ++t) {
    const auto i = static_cast<std::size_t>(t);
    if (exact.tail[i] < est.wilson_lower[i] || exact.tail[i] > est.wilson_upper[i]) outside.push_back(t);
  }
  return finish_simulation(g, f, est, cmp,
                           {{"exact_outside_wilson", outside}, {"epsilon", inst.mino.epsilon},
                            {"rho", rate.rho}});
}

int run_pump_reproduce(const Global& g, const std::string& data, std::vector<double> grid,
                       const dc::ScanOptions& opts, const std::string& curve,
                       const std::string& report_path) {
  const dc::PumpModel model = data.empty() ? dc::PumpModel::standard() : dc::load_pump_model(data);
  if (grid.empty()) grid = dc::default_lambda_grid();
  const dc::TableReport report = dc::reproduce_table(model, grid, opts);
  json j = dc::to_json(report);
  if (!curve.empty()) {
    dc::write_file_atomic(resolve(g, curve), dc::lambda_curve_csv(report.search).render(g.full));
    j["curve_csv"] = resolve(g, curve);
  }
  if (!report_path.empty()) {
    dc::write_file_atomic(resolve(g, report_path), dc::round_json(j, g.full).dump(2) + "\n");
  }
  if (!g.json_out) j.erase("skipped");
  emit(g, j);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Convergence bounds for Markov chains from drift and minorization conditions"};
  app.require_subcommand(1);
  app.set_config("--config", "", "TOML/INI file supplying any flags; command-line flags win");
  Global g;
  app.add_flag("--json", g.json_out, "Machine-readable JSON on stdout");
  app.add_flag("--full-precision", g.full, "Print round-trip precision instead of 6 digits");
  app.add_option("--out-dir", g.out_dir, "Directory for relative output paths")
      ->envname("DRIFTCERT_OUT_DIR");

  dc::DriftParams params;
  auto add_drift = [&params](CLI::App* sub) {
    sub->add_option("--lambda", params.lambda, "Drift rate in (0, 1)")->required();
    sub->add_option("--K", params.K, "Drift ceiling on C, >= 1")->required();
    sub->add_option("--m", params.m, "Minorization steps")->capture_default_str();
    sub->add_option("--eps", params.epsilon, "Minorization mass in (0, 1]")->required();
  };

  auto* rate = app.add_subcommand("rate", "Tail rate (B, rho, r)");
  add_drift(rate);

  auto* bound = app.add_subcommand("bound", "Mixing-time bounds and bound curves");
  add_drift(bound);
  double Vx = 1.0, target_tv = 0.01, target_v = 0.02;
  std::string bound_csv = "bound_curve.csv";
  std::int64_t t_max = 1'000'000;
  bound->add_option("--Vx", Vx, "V at the start state")->capture_default_str();
  bound->add_option("--target-tv", target_tv)->capture_default_str();
  bound->add_option("--target-v", target_v)->capture_default_str();
  bound->add_option("--csv", bound_csv, "Bound-curve CSV path")->capture_default_str();
  bound->add_option("--t-max", t_max, "Search limit for mixing times")->capture_default_str();

  auto* oracle = app.add_subcommand("oracle", "Exact checks on finite chains");
  InstanceFlags oracle_flags;
  oracle_flags.attach(oracle);
  std::vector<std::string> checks;
  bool all_checks = false;
  int oracle_horizon = 200;
  std::vector<int> scaling;
  std::string oracle_csv;
  long long oracle_from = 0;
  oracle->add_option("--check", checks, "Named check (repeatable)")
      ->check(CLI::IsMember(dc::instance_check_names()));
  oracle->add_flag("--all-checks", all_checks, "Run every applicable check");
  oracle->add_option("--horizon", oracle_horizon, "Largest t compared")->capture_default_str();
  oracle->add_option("--scaling", scaling, "N values for the TV-rate scaling fit")->delimiter(',');
  oracle->add_option("--csv", oracle_csv, "Distance curves (t, tv, l2, vnorm, bound) from --from");
  oracle->add_option("--from", oracle_from, "Start state for --csv")->capture_default_str();

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo regeneration-time tails");
  InstanceFlags sim_flags;
  sim_flags.attach(simulate);
  SimulateFlags sim;
  simulate->add_flag("--pump", sim.pump, "Pump-failure Gibbs chain");
  simulate->add_option("--data", sim.data, "Pump dataset file");
  simulate->add_option("--pump-lambda", sim.pump_lambda, "Drift rate defining the pump small set")
      ->capture_default_str();
  simulate->add_option("--from", sim.from, "Start state (pump value or state index; default nu)");
  simulate->add_option("--reps", sim.reps)->capture_default_str();
  simulate->add_option("--horizon", sim.horizon, "Largest t (default 200 pump, 100 finite)");
  simulate->add_option("--seed", sim.seed)->capture_default_str();
  simulate->add_option("--threads", sim.threads, "0 uses all cores")->capture_default_str();
  simulate->add_option("--csv", sim.csv, "Tail CSV path")->capture_default_str();

  auto* pump = app.add_subcommand("pump", "Pump-failure chain experiments");
  pump->require_subcommand(1);
  auto* reproduce = pump->add_subcommand("reproduce", "Small set, rate and mixing-time table");
  std::string pump_data, curve_csv, pump_report;
  std::vector<double> lambda_grid;
  dc::ScanOptions scan;
  reproduce->add_option("--data", pump_data, "Dataset file (default: built-in pump data)");
  reproduce->add_option("--lambda-grid", lambda_grid, "Comma-separated lambdas")->delimiter(',');
  reproduce->add_option("--emit-curve", curve_csv, "Write the (lambda, rho) CSV here");
  reproduce->add_option("--report", pump_report, "Write the JSON report here");
  reproduce->add_option("--x-max", scan.x_max)->capture_default_str();
  reproduce->add_option("--step", scan.step)->capture_default_str();
  reproduce->add_option("--threads", scan.threads)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*rate) return run_rate(g, params);
    if (*bound) return run_bound(g, params, Vx, target_tv, target_v, bound_csv, t_max);
    if (*oracle) {
      return run_oracle(g, oracle_flags, checks, all_checks, oracle_horizon, scaling, oracle_csv,
                        oracle_from);
    }
    if (*simulate) return run_simulate(g, sim_flags, sim);
    if (*reproduce) return run_pump_reproduce(g, pump_data, lambda_grid, scan, curve_csv, pump_report);
  } catch (const dc::DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
