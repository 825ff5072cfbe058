#include <doctest.h>

#include <cmath>

#include "driftcert/bound_calculator.hpp"
#include "driftcert/errors.hpp"

using namespace driftcert;

TEST_SUITE("bound_calculator") {

TEST_CASE("rate parameters for the pump inputs") {
  const RateParams r = compute_rate_params({0.61, 3.05, 1, 0.287});
  CHECK(r.B == doctest::Approx(3.05).epsilon(1e-15));
  CHECK(r.rho == doctest::Approx(0.9135320279005676).epsilon(1e-13));
  CHECK(r.r == doctest::Approx(0.1829607851423276).epsilon(1e-12));
  CHECK(nu_drift_bound(r, 0.287) == doctest::Approx(8.142857142857142).epsilon(1e-13));
}

TEST_CASE("epsilon = 1 gives rho = lambda and r = 1") {
  const RateParams r = compute_rate_params({0.5, 2.0, 1, 1.0});
  CHECK(r.rho == 0.5);
  CHECK(r.r == 1.0);
}

TEST_CASE("multi-step ceiling and rate") {
  const DriftParams p{0.7, 2.5, 2, 0.4};
  CHECK(drift_ceiling(p) == doctest::Approx(3.55).epsilon(1e-14));
  const RateParams r = compute_rate_params(p);
  CHECK(r.rho == doctest::Approx(0.92605103024102012).epsilon(1e-13));
  CHECK(r.r == doctest::Approx(0.21539482632095598).epsilon(1e-12));
}

TEST_CASE("precondition violations name the parameter") {
  auto message = [](const DriftParams& p) {
    try {
      compute_rate_params(p);
    } catch (const DomainError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(message({0.5, 0.9, 1, 0.5}).find("K") == 0);
  CHECK(message({1.0, 2.0, 1, 0.5}).find("lambda") == 0);
  CHECK(message({0.5, 2.0, 0, 0.5}).find("m") == 0);
  CHECK(message({0.5, 2.0, 1, 0.0}).find("epsilon") == 0);
}

TEST_CASE("tail bound") {
  const RateParams r = compute_rate_params({0.61, 3.05, 1, 0.287});
  CHECK(tail_bound(r, 1, 1.0, 0) == doctest::Approx(1.0));
  CHECK(tail_bound(r, 1, 1.0, 10) == doctest::Approx(std::pow(r.rho, 10)));
  CHECK(tail_bound(r, 1, 5.0, 3) == doctest::Approx(std::pow(5.0, r.r) * std::pow(r.rho, 3)));
  CHECK_THROWS_AS(tail_bound(r, 1, 0.5, 0), DomainError);
}

TEST_CASE("total variation curve for the pump inputs") {
  const DriftParams p{0.61, 3.05, 1, 0.287};
  const RateParams r = compute_rate_params(p);
  const TvConstants k = tv_constants(r, p, 1.0);
  CHECK(k.d == doctest::Approx(1.9688946420578228).epsilon(1e-12));
  const BoundPolynomial tv = tv_bound_poly(r, p, 1.0);
  CHECK(tv.f1 == doctest::Approx(0.1863605454177989).epsilon(1e-12));
  CHECK(tv.f0 == doctest::Approx(1.9688946420578228).epsilon(1e-12));
  CHECK(tv.value(82) == doctest::Approx(0.010378879409311167).epsilon(1e-11));
  CHECK(tv.value(83) == doctest::Approx(0.009583868843667296).epsilon(1e-11));
  CHECK(mixing_time(tv, 0.01) == 83);
}

TEST_CASE("V-norm curve for the pump inputs") {
  const DriftParams p{0.61, 3.05, 1, 0.287};
  const RateParams r = compute_rate_params(p);
  const VNormBound vn = vnorm_bound_poly(r, p, 1.0);
  CHECK(vn.branch == VNormBound::Branch::rho_above_lambda);
  CHECK(vn.h1 == doctest::Approx(3.745236820349551).epsilon(1e-12));
  CHECK(vn.h0 == doctest::Approx(28.29639952164948).epsilon(1e-12));
  CHECK(vn.g0 == doctest::Approx(7.256410256410256).epsilon(1e-14));
  CHECK(vn.value(110) == doctest::Approx(0.021054120174389415).epsilon(1e-11));
  CHECK(vn.value(111) == doctest::Approx(0.01939722641574521).epsilon(1e-11));
  CHECK(mixing_time(vn, 0.02) == 111);
}

TEST_CASE("V-norm curve on the rho = lambda branch") {
  const DriftParams p{0.5, 2.0, 1, 1.0};
  const RateParams r = compute_rate_params(p);
  const VNormBound vn = vnorm_bound_poly(r, p, 3.0);
  CHECK(vn.branch == VNormBound::Branch::rho_equals_lambda);
  CHECK(vn.g0 == doctest::Approx(6.0));
  CHECK(vn.g1 == doctest::Approx(4.2010101267766693).epsilon(1e-13));
  CHECK(vn.g2 == doctest::Approx(8.4852813742385703).epsilon(1e-13));
  CHECK(vn.value(10) == doctest::Approx(0.87552562372228879).epsilon(1e-12));
  CHECK(tv_bound_poly(r, p, 3.0).value(10) == doctest::Approx(0.022264638548069659).epsilon(1e-12));
}

TEST_CASE("slow-rate case with m = 3") {
  const DriftParams p{0.9, 1.5, 3, 0.05};
  const RateParams r = compute_rate_params(p);
  CHECK(r.rho == doctest::Approx(0.99551570799299087).epsilon(1e-13));
  const VNormBound vn = vnorm_bound_poly(r, p, 10.0);
  CHECK(vn.value(10) == doctest::Approx(162.95149021147902).epsilon(1e-11));
  CHECK(tv_bound_poly(r, p, 10.0).value(10) == doctest::Approx(8.0672824689323351).epsilon(1e-11));
  const DriftParams q{0.7, 2.5, 2, 0.4};
  const VNormBound vq = vnorm_bound_poly(compute_rate_params(q), q, 3.0);
  CHECK(vq.value(10) == doctest::Approx(37.946487540031723).epsilon(1e-11));
}

TEST_CASE("mixing time edge cases") {
  const DriftParams p{0.61, 3.05, 1, 0.287};
  const RateParams r = compute_rate_params(p);
  const BoundPolynomial tv = tv_bound_poly(r, p, 1.0);
  CHECK(mixing_time(tv, 10.0) == 0);
  CHECK_THROWS_AS(mixing_time(tv, 1e-300, 100), NotReachedError);
  CHECK_THROWS_AS(mixing_time(tv, -1.0), DomainError);
  // Every later t stays below the target.
  const auto tau = mixing_time(tv, 0.01);
  for (int t = static_cast<int>(tau); t < 2000; ++t) CHECK(tv.value(t) <= 0.01);
}

TEST_CASE("exact supremum of a polynomial-exponential term") {
  const PolyExpTerm term{{1.0, 2.0, -0.1}, -0.3};
  CHECK(term.tail_sup(0.0) == doctest::Approx(2.543624459791983).epsilon(1e-13));
  CHECK(term.tail_sup(3.0) == doctest::Approx(term.value(3.0)));
  CHECK(term.tail_sup(100.0) >= 0.0);
  const PolyExpTerm falling{{5.0, 0.0, 0.0}, -1.0};
  CHECK(falling.tail_sup(2.0) == doctest::Approx(5.0 * std::exp(-2.0)));
}

}
