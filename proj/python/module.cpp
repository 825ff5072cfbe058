#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "driftcert/bound_calculator.hpp"
#include "driftcert/chain_model.hpp"
#include "driftcert/errors.hpp"
#include "driftcert/finite_chain_oracle.hpp"
#include "driftcert/pump_gibbs.hpp"
#include "driftcert/regeneration_simulator.hpp"

namespace py = pybind11;
namespace dc = driftcert;
using namespace pybind11::literals;

namespace {

dc::FiniteChain chain_of(const dc::Matrix& P) { return dc::FiniteChain(P); }

py::dict drift_dict(const dc::DriftSpec& d) {
  return py::dict("V"_a = d.V, "C"_a = d.C, "lambda_"_a = d.lambda, "K"_a = d.K);
}

py::dict mino_dict(const dc::MinorizationSpec& m) {
  return py::dict("m"_a = m.m, "epsilon"_a = m.epsilon, "nu"_a = m.nu);
}

dc::DriftSpec drift_of(const dc::Vector& V, const dc::StateSet& C, double lambda, double K) {
  dc::DriftSpec d;
  d.V = V;
  d.C = C;
  d.lambda = lambda;
  d.K = K;
  return d;
}

dc::MinorizationSpec mino_of(double epsilon, const dc::Vector& nu, int m) {
  dc::MinorizationSpec s;
  s.m = m;
  s.epsilon = epsilon;
  s.nu = nu;
  return s;
}

}  // namespace

PYBIND11_MODULE(_core, mod) {
  mod.doc() = "Drift/minorization convergence bounds";

  auto domain = py::register_exception<dc::DomainError>(mod, "DomainError", PyExc_ValueError);
  py::register_exception<dc::NumericError>(mod, "NumericError", PyExc_ArithmeticError);
  (void)domain;

  py::class_<dc::DriftParams>(mod, "DriftParams")
      .def(py::init([](double lambda, double K, int m, double epsilon) {
             return dc::DriftParams{lambda, K, m, epsilon};
           }),
           "lambda_"_a, "K"_a, "m"_a = 1, "epsilon"_a)
      .def_readwrite("lambda_", &dc::DriftParams::lambda)
      .def_readwrite("K", &dc::DriftParams::K)
      .def_readwrite("m", &dc::DriftParams::m)
      .def_readwrite("epsilon", &dc::DriftParams::epsilon);

  py::class_<dc::RateParams>(mod, "RateParams")
      .def_readonly("B", &dc::RateParams::B)
      .def_readonly("rho", &dc::RateParams::rho)
      .def_readonly("r", &dc::RateParams::r)
      .def("__repr__", [](const dc::RateParams& r) {
        return "RateParams(B=" + std::to_string(r.B) + ", rho=" + std::to_string(r.rho) +
               ", r=" + std::to_string(r.r) + ")";
      });

  py::class_<dc::BoundPolynomial>(mod, "BoundPolynomial")
      .def_readonly("f1", &dc::BoundPolynomial::f1)
      .def_readonly("f0", &dc::BoundPolynomial::f0)
      .def_readonly("rho", &dc::BoundPolynomial::rho)
      .def("__call__", &dc::BoundPolynomial::value, "t"_a)
      .def("tail_sup", &dc::BoundPolynomial::tail_sup, "t"_a);

  py::class_<dc::VNormBound>(mod, "VNormBound")
      .def_property_readonly("rho_equals_lambda",
                             [](const dc::VNormBound& b) {
                               return b.branch == dc::VNormBound::Branch::rho_equals_lambda;
                             })
      .def_readonly("g0", &dc::VNormBound::g0)
      .def_readonly("g1", &dc::VNormBound::g1)
      .def_readonly("g2", &dc::VNormBound::g2)
      .def_readonly("h0", &dc::VNormBound::h0)
      .def_readonly("h1", &dc::VNormBound::h1)
      .def("__call__", &dc::VNormBound::value, "t"_a)
      .def("tail_sup", &dc::VNormBound::tail_sup, "t"_a);

  mod.def("compute_rate_params", &dc::compute_rate_params, "params"_a);
  mod.def("tail_bound", &dc::tail_bound, "rate"_a, "m"_a, "muV"_a, "t"_a);
  mod.def("tv_bound_poly", &dc::tv_bound_poly, "rate"_a, "params"_a, "Vx"_a);
  mod.def("vnorm_bound_poly", &dc::vnorm_bound_poly, "rate"_a, "params"_a, "Vx"_a);
  mod.def("mixing_time", py::overload_cast<const dc::BoundPolynomial&, double, std::int64_t>(&dc::mixing_time),
          "bound"_a, "target"_a, "t_max"_a = 1'000'000);
  mod.def("mixing_time", py::overload_cast<const dc::VNormBound&, double, std::int64_t>(&dc::mixing_time),
          "bound"_a, "target"_a, "t_max"_a = 1'000'000);

  mod.def("stationary_distribution", [](const dc::Matrix& P) {
    return dc::stationary_distribution(chain_of(P));
  }, "P"_a);
  mod.def("make_lazy", [](const dc::Matrix& P) { return dc::make_lazy(chain_of(P)).kernel(); }, "P"_a);
  mod.def("spectral_report", [](const dc::Matrix& P) {
    const auto r = dc::spectral_report(chain_of(P));
    return py::dict("reversible"_a = r.reversible, "min_eigenvalue"_a = r.min_eigenvalue,
                    "stationary"_a = r.stationary);
  }, "P"_a);
  mod.def("tv_rate", [](const dc::Matrix& P) { return dc::tv_rate(chain_of(P)); }, "P"_a);
  mod.def("extract_minorization", [](const dc::Matrix& P, const dc::StateSet& C, int m) {
    return mino_dict(dc::extract_minorization(chain_of(P), C, m));
  }, "P"_a, "C"_a, "m"_a = 1);
  mod.def("hitting_drift", [](const dc::Matrix& P, const dc::StateSet& C, double lambda) {
    return drift_dict(dc::hitting_drift(chain_of(P), C, lambda));
  }, "P"_a, "C"_a, "lambda_"_a);
  mod.def("distance_curves", [](const dc::Matrix& P, std::size_t x, const dc::Vector& V, int horizon) {
    const auto d = dc::distance_curves(chain_of(P), x, V, horizon);
    return py::dict("tv"_a = d.tv, "l2"_a = d.l2, "vnorm"_a = d.vnorm);
  }, "P"_a, "x"_a, "V"_a, "horizon"_a);
  mod.def("regeneration_tail", [](const dc::Matrix& P, const dc::StateSet& C, double epsilon,
                                  const dc::Vector& nu, const dc::Vector& initial, int horizon) {
    const auto r = dc::exact_regeneration_tail(chain_of(P), C, mino_of(epsilon, nu, 1), initial, horizon);
    return py::dict("tail"_a = r.tail, "expected_T"_a = r.expected_T);
  }, "P"_a, "C"_a, "epsilon"_a, "nu"_a, "initial"_a, "horizon"_a);
  mod.def("validate_instance",
          [](const dc::Matrix& P, const dc::Vector& V, const dc::StateSet& C, double lambda,
             double K, double epsilon, const dc::Vector& nu, int horizon,
             const std::vector<std::string>& only) {
            const auto r = dc::validate_instance(chain_of(P), drift_of(V, C, lambda, K),
                                                 mino_of(epsilon, nu, 1), horizon, only);
            py::dict out;
            for (const auto& c : r.checks) {
              out[py::str(c.name)] = py::dict("applicable"_a = c.applicable, "passed"_a = c.passed,
                                              "slack"_a = c.slack, "note"_a = c.note);
            }
            return out;
          },
          "P"_a, "V"_a, "C"_a, "lambda_"_a, "K"_a, "epsilon"_a, "nu"_a, "horizon"_a = 200,
          "only"_a = std::vector<std::string>{});
  mod.def("nearly_periodic_chain", [](int N) {
    const auto np = dc::nearly_periodic_chain(N);
    return py::dict("P"_a = np.chain.kernel(), "drift"_a = drift_dict(np.drift),
                    "minorization"_a = mino_dict(np.minorization));
  }, "N"_a);
  mod.def("cubic_scaling", [](const std::vector<int>& Ns) {
    const auto r = dc::cubic_scaling_experiment(Ns);
    std::vector<double> gaps;
    for (const auto& p : r.per_N) gaps.push_back(p.gap);
    return py::dict("slope"_a = r.slope, "intercept"_a = r.intercept, "gaps"_a = gaps);
  }, "N_values"_a);
  mod.def("simulate_tail",
          [](const dc::Matrix& P, const dc::StateSet& C, double epsilon, const dc::Vector& nu,
             std::int64_t reps, int horizon, std::uint64_t seed) {
            const dc::FiniteChain chain = chain_of(P);
            const dc::FiniteSplitKernel k(chain, C, mino_of(epsilon, nu, 1));
            const auto cdf = dc::FiniteSplitKernel::cumulative(nu);
            dc::TailEstimate est;
            {
              py::gil_scoped_release release;
              est = dc::estimate_tail(
                  k, [&cdf](dc::Rng& rng) { return dc::FiniteSplitKernel::sample_discrete(cdf, rng); },
                  reps, horizon, seed);
            }
            return py::dict("empirical"_a = est.empirical_tail, "wilson_lower"_a = est.wilson_lower,
                            "wilson_upper"_a = est.wilson_upper,
                            "truncated_count"_a = est.truncated_count);
          },
          "P"_a, "C"_a, "epsilon"_a, "nu"_a, "reps"_a, "horizon"_a, "seed"_a = 1);

  mod.def("pump_pv", [](double x) { return dc::pv(dc::PumpModel::standard(), x); }, "x"_a);
  mod.def("minorization_epsilon", [](double lo, double hi) {
    return dc::minorization_epsilon(dc::PumpModel::standard(), lo, hi).epsilon;
  }, "C_lo"_a, "C_hi"_a);
  mod.def("reproduce_pump_table", [](std::vector<double> grid) {
    if (grid.empty()) grid = dc::default_lambda_grid();
    dc::TableReport t;
    {
      py::gil_scoped_release release;
      t = dc::reproduce_table(dc::PumpModel::standard(), grid);
    }
    const auto& b = t.search.best;
    return py::dict("lambda_"_a = b.lambda, "C_lo"_a = b.C_lo, "C_hi"_a = b.C_hi, "K"_a = b.K,
                    "K_reported"_a = b.K_reported, "epsilon"_a = b.epsilon, "rho"_a = b.rho,
                    "tau_tv"_a = t.tau_tv, "tau_v"_a = t.tau_v);
  }, "lambda_grid"_a = std::vector<double>{});
}
