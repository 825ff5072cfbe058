#include <doctest.h>

#include <sstream>

#include "driftcert/chain_model.hpp"
#include "driftcert/errors.hpp"

using namespace driftcert;

namespace {
FiniteChain two_state(double a, double b) {
  Matrix P(2, 2);
  P << 1 - a, a, b, 1 - b;
  return FiniteChain(P);
}
FiniteChain lazy_path() {
  Matrix P(3, 3);
  P << 0.5, 0.5, 0, 0.25, 0.5, 0.25, 0, 0.5, 0.5;
  return FiniteChain(P);
}
}  // namespace

TEST_SUITE("chain_model") {

TEST_CASE("kernel validation") {
  Matrix bad(2, 2);
  bad << 0.5, 0.6, 0.5, 0.5;
  CHECK_THROWS_AS(FiniteChain{bad}, DomainError);
  bad << 1.1, -0.1, 0.5, 0.5;
  CHECK_THROWS_AS(FiniteChain{bad}, DomainError);
  CHECK_THROWS_AS(FiniteChain{Matrix::Ones(2, 3) / 3.0}, DomainError);
  CHECK_THROWS_AS(FiniteChain(Matrix::Ones(1, 1)), DomainError);
}

TEST_CASE("push, apply and powers") {
  const FiniteChain c = two_state(0.3, 0.6);
  Vector mu(2);
  mu << 1, 0;
  const Vector next = c.push(mu);
  CHECK(next(0) == doctest::Approx(0.7));
  CHECK(next(1) == doctest::Approx(0.3));
  Vector f(2);
  f << 1, 2;
  CHECK(c.apply(f)(1) == doctest::Approx(0.6 + 0.8));
  CHECK((c.power(3) - c.kernel() * c.kernel() * c.kernel()).norm() < 1e-15);
}

TEST_CASE("irreducibility") {
  CHECK(lazy_path().irreducible());
  Matrix P = Matrix::Identity(2, 2);
  CHECK_FALSE(FiniteChain(P).irreducible());
}

TEST_CASE("canonical minorization on a two-state chain") {
  const double a = 0.3, b = 0.6;
  const MinorizationSpec m = extract_minorization(two_state(a, b), {0, 1}, 1);
  CHECK(m.epsilon == doctest::Approx(std::min(1 - a, b) + std::min(a, 1 - b)));
  CHECK(m.nu.sum() == doctest::Approx(1.0));
  CHECK(verify_minorization(two_state(a, b), {0, 1}, m));
  MinorizationSpec too_big = m;
  too_big.epsilon = 0.95;
  CHECK_FALSE(verify_minorization(two_state(a, b), {0, 1}, too_big));
}

TEST_CASE("disjoint rows have no minorization") {
  Matrix P(2, 2);
  P << 0, 1, 1, 0;
  CHECK_THROWS_AS(extract_minorization(FiniteChain(P), {0, 1}, 1), DegenerateMinorizationError);
}

TEST_CASE("drift verification") {
  const FiniteChain c = lazy_path();
  DriftSpec spec;
  spec.V = Vector::Ones(3);
  spec.V(2) = 4.0;
  spec.C = {0, 1};
  spec.lambda = 0.8;
  spec.K = 2.0;
  // Off C: PV(2) = 0.5 * 1 + 0.5 * 4 = 2.5 <= 0.8 * 4.
  CHECK(verify_drift(c, spec).holds);
  spec.lambda = 0.6;
  const DriftCheck bad = verify_drift(c, spec);
  CHECK_FALSE(bad.holds);
  CHECK(bad.witness == 2);
  CHECK(bad.worst_violation == doctest::Approx(0.1));
}

TEST_CASE("spec validation") {
  DriftSpec d;
  d.V = Vector::Ones(3);
  d.C = {5};
  CHECK_THROWS_AS(d.validate(3), DomainError);
  d.C = {0};
  d.V(1) = 0.5;
  CHECK_THROWS_AS(d.validate(3), DomainError);
  CHECK_THROWS_AS(membership({}, 3), DomainError);
}

TEST_CASE("lazy transform and spectrum") {
  Matrix flip(2, 2);
  flip << 0, 1, 1, 0;
  const FiniteChain lazy = make_lazy(FiniteChain(flip));
  CHECK(lazy(0, 0) == doctest::Approx(0.5));
  const SpectralReport r = spectral_report(lazy);
  CHECK(r.reversible);
  CHECK(r.min_eigenvalue == doctest::Approx(0.0).epsilon(1e-14));
  const SpectralReport raw = spectral_report(FiniteChain(flip));
  CHECK(raw.min_eigenvalue == doctest::Approx(-1.0));
  CHECK(spectral_report(make_lazy(lazy_path())).min_eigenvalue == doctest::Approx(0.5));
}

TEST_CASE("non-reversible cycle") {
  Matrix P(3, 3);
  P << 0.2, 0.8, 0, 0, 0.2, 0.8, 0.8, 0, 0.2;
  CHECK_FALSE(spectral_report(FiniteChain(P)).reversible);
}

TEST_CASE("matrix file round trip with labels") {
  std::istringstream in("# labels: a b c\n0.5 0.5 0\n0.25 0.5 0.25\n\n0 0.5 0.5\n");
  const FiniteChain c = read_chain(in);
  CHECK(c.size() == 3);
  REQUIRE(c.labels().size() == 3);
  CHECK(c.labels()[2] == "c");
  std::ostringstream out;
  write_chain(out, c);
  std::istringstream again(out.str());
  const FiniteChain d = read_chain(again);
  CHECK((d.kernel() - c.kernel()).norm() == 0.0);
  CHECK(d.labels() == c.labels());

  std::istringstream ragged("0.5 0.5\n1\n");
  CHECK_THROWS_AS(read_chain(ragged), DomainError);
}

}
