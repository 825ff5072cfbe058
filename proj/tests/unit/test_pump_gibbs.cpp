#include <doctest.h>

#include <cmath>
#include <sstream>

#include "driftcert/errors.hpp"
#include "driftcert/pump_gibbs.hpp"

using namespace driftcert;

namespace {
const PvGrid& shared_grid() {
  static const PvGrid grid = tabulate_pv(PumpModel::standard());
  return grid;
}
}  // namespace

TEST_SUITE("pump_gibbs") {

TEST_CASE("dataset") {
  const PumpModel m = PumpModel::standard();
  REQUIRE(m.data.size() == 10);
  CHECK(m.data[3].failures == 14);
  CHECK(m.data[3].exposure == 125.760);
  std::istringstream in("# s t\n5 94.32\n\n1 15.72  # trailing comment\n");
  const auto obs = read_pump_data(in);
  REQUIRE(obs.size() == 2);
  CHECK(obs[1].exposure == 15.72);
  PumpModel short_model;
  short_model.data = obs;
  CHECK_THROWS_AS(short_model.validate(), DomainError);
  std::istringstream bad("5 94.32 7\n");
  CHECK_THROWS_AS(read_pump_data(bad), DomainError);
}

TEST_CASE("conditional drift in closed form") {
  CHECK(PumpModel::standard().conditional_drift(3.0) ==
        doctest::Approx(2.131167667700464).epsilon(1e-14));
}

TEST_CASE("PV against high-precision quadrature") {
  const PumpModel m = PumpModel::standard();
  CHECK(pv(m, 0.0) == doctest::Approx(17.702047360921493).epsilon(1e-9));
  CHECK(pv(m, 2.0) == doctest::Approx(5.9441118456969968).epsilon(1e-9));
  CHECK(pv(m, 6.5) == doctest::Approx(2.402334843948077).epsilon(1e-9));
  CHECK(pv(m, 12.0) == doctest::Approx(4.9550859375875581).epsilon(1e-9));
  CHECK(pv(m, 40.0) == doctest::Approx(18.94198453708057).epsilon(1e-9));
  CHECK_THROWS_AS(pv(m, -1.0), DomainError);
}

TEST_CASE("minorization mass") {
  const PumpModel m = PumpModel::standard();
  CHECK(minorization_epsilon(m, 4.74, 8.5).epsilon == doctest::Approx(0.28783217349532298).epsilon(1e-12));
  CHECK(minorization_epsilon(m, 0.0, 1.0).epsilon == doctest::Approx(0.14428847353439814).epsilon(1e-12));
  CHECK_THROWS_AS(minorization_epsilon(m, 5.0, 5.0), DomainError);
  CHECK_THROWS_AS(minorization_epsilon(m, 6.0, 5.0), DomainError);
}

TEST_CASE("small set at lambda = 0.61") {
  const SmallSet c = find_small_set(PumpModel::standard(), 0.61, shared_grid());
  CHECK(c.lo == doctest::Approx(4.73858).epsilon(2e-6));
  CHECK(c.hi == doctest::Approx(8.49812).epsilon(2e-6));
  CHECK(c.K == doctest::Approx(3.04541).epsilon(2e-6));
}

TEST_CASE("small set failure modes") {
  const PumpModel m = PumpModel::standard();
  CHECK_THROWS_WITH_AS(find_small_set(m, 0.01, shared_grid()), doctest::Contains("unbounded"),
                       NonIntervalError);
  CHECK_THROWS_WITH_AS(find_small_set(m, 0.3, shared_grid()), doctest::Contains("single interval"),
                       NonIntervalError);
  const SmallSet wide = find_small_set(m, 0.05, shared_grid());
  CHECK(wide.lo == 0.0);
  const SmallSet narrow = find_small_set(m, 0.95, shared_grid());
  CHECK(narrow.lo == doctest::Approx(5.28).epsilon(0.01));
  CHECK(narrow.hi == doctest::Approx(7.89).epsilon(0.01));
  CHECK_THROWS_AS(find_small_set(m, 1.0, shared_grid()), DomainError);
}

TEST_CASE("lambda search picks 0.61 and the table reproduces") {
  const double grid[] = {0.55, 0.6, 0.61, 0.62, 0.3};
  const TableReport t = reproduce_table(PumpModel::standard(), grid);
  CHECK(t.search.best.lambda == 0.61);
  CHECK(t.search.best.K_reported == doctest::Approx(3.05));
  CHECK(t.tau_tv == 83);
  CHECK(t.tau_v == 111);
  REQUIRE(t.search.curve.size() == 5);
  CHECK_FALSE(t.search.curve[4].result.has_value());
  CHECK_FALSE(t.search.curve[4].skipped_reason.empty());
}

TEST_CASE("one Gibbs step has mean drift PV") {
  const PumpModel m = PumpModel::standard();
  const int n = 100000;
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < n; ++i) {
    Rng rng(derive_seed(31, static_cast<std::uint64_t>(i)));
    const double v = m.drift(gibbs_step(m, 6.5, rng));
    sum += v;
    sq += v * v;
  }
  const double mean = sum / n;
  const double se = std::sqrt((sq / n - mean * mean) / n);
  CHECK(std::abs(mean - pv(m, 6.5)) < 4.0 * se);
}

TEST_CASE("retrospective coin lands heads with probability epsilon") {
  const PumpSplitKernel k(PumpModel::standard(), 4.74, 8.5);
  const int n = 40000;
  std::int64_t heads = 0;
  for (int i = 0; i < n; ++i) {
    Rng rng(derive_seed(8, static_cast<std::uint64_t>(i)));
    heads += k.regen_block(8.5, rng).heads;
  }
  const auto w = wilson_interval(heads, n);
  CHECK(w.lower <= k.epsilon());
  CHECK(k.epsilon() <= w.upper);
  CHECK(k.in_small_set(6.5));
  CHECK_FALSE(k.in_small_set(9.0));
}

}
