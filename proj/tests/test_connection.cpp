#include <catch_amalgamated.hpp>
#include <random>

#include "cs3/connection.hpp"

using namespace cs3;

namespace {

MetricSpec berger_metric(const Rational& lambda) {
  MetricSpec m;
  m.complex = &su2_complex();
  m.gram = MatR(3, 3);
  m.gram(0, 0) = Rational(1);
  m.gram(1, 1) = Rational(1);
  m.gram(2, 2) = -(lambda * lambda);
  return m;
}

MetricSpec rp3_metric() {
  MetricSpec m;
  m.complex = &so3_complex();
  m.gram = MatR(3, 3);
  for (int i = 0; i < 3; ++i) m.gram(i, i) = Rational(1, 4);
  return m;
}

}  // namespace

TEST_CASE("Berger connection matches the printed matrix entry-wise") {
  for (const Rational& lambda : {Rational(1), Rational(1, 2), Rational(2), Rational(5, 3)}) {
    auto conn = levi_civita_coframe<Rational>(berger_metric(lambda));
    const Rational big = lambda * lambda + Rational(2);
    // theta^1_2 = -(lambda^2+2) kappa, theta^1_3 = -lambda rho,
    // theta^2_3 = lambda xi, and the eta-lowered symmetries.
    CHECK(conn.gamma(0, 1, 2) == -big);
    CHECK(conn.gamma(1, 0, 2) == big);
    CHECK(conn.gamma(0, 2, 1) == -lambda);
    CHECK(conn.gamma(2, 0, 1) == -lambda);
    CHECK(conn.gamma(1, 2, 0) == lambda);
    CHECK(conn.gamma(2, 1, 0) == lambda);
    // Everything else vanishes.
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) {
          bool printed = (i == 0 && j == 1 && k == 2) || (i == 1 && j == 0 && k == 2) ||
                         (i == 0 && j == 2 && k == 1) || (i == 2 && j == 0 && k == 1) ||
                         (i == 1 && j == 2 && k == 0) || (i == 2 && j == 1 && k == 0);
          if (!printed) CHECK(conn.gamma(i, j, k).is_zero());
        }
    CHECK(conn.eta == std::vector<int>{1, 1, -1});
  }
}

TEST_CASE("lambda = 1 gives the -3 kappa entry") {
  auto conn = levi_civita_coframe<Rational>(berger_metric(Rational(1)));
  CHECK(conn.gamma(0, 1, 2) == Rational(-3));
}

TEST_CASE("round quarter metric on SO(3) gives half the printed matrix") {
  auto conn = levi_civita_coframe<Rational>(rp3_metric());
  CHECK(conn.gamma(0, 1, 2) == Rational(-1, 2));  // -(1/2) psi
  CHECK(conn.gamma(0, 2, 1) == Rational(1, 2));   // +(1/2) omega2
  CHECK(conn.gamma(1, 2, 0) == Rational(-1, 2));  // -(1/2) omega1
  CHECK(conn.eta == std::vector<int>{1, 1, 1});
  auto [torsion, antisym] = verify_connection(conn, rp3_metric());
  CHECK(torsion == 0.0);
  CHECK(antisym == 0.0);
}

TEST_CASE("flat abelian coframe has the zero connection") {
  static const CoframeComplex flat = abelian_complex(3);
  MetricSpec m;
  m.complex = &flat;
  m.gram = MatR::identity(3);
  auto conn = levi_civita_coframe<Rational>(m);
  CHECK(conn.gamma.max_abs() == 0.0);
}

TEST_CASE("verify_connection accepts the printed matrix at lambda = 2") {
  const Rational lambda(2);
  MetricSpec m = berger_metric(lambda);
  ConnectionMatrix<Rational> printed;
  printed.complex = m.complex;
  printed.eta = {1, 1, -1};
  printed.frame_map = MatR(3, 3);
  printed.frame_map(0, 0) = Rational(1);
  printed.frame_map(1, 1) = Rational(1);
  printed.frame_map(2, 2) = lambda;
  printed.gamma = Tensor3<Rational>(3);
  const Rational big = lambda * lambda + Rational(2);
  printed.gamma(0, 1, 2) = -big;
  printed.gamma(1, 0, 2) = big;
  printed.gamma(0, 2, 1) = -lambda;
  printed.gamma(2, 0, 1) = -lambda;
  printed.gamma(1, 2, 0) = lambda;
  printed.gamma(2, 1, 0) = lambda;
  auto [torsion, antisym] = verify_connection(printed, m);
  CHECK(torsion == 0.0);
  CHECK(antisym == 0.0);

  // Perturbing any entry must surface in the residuals.
  printed.gamma(0, 1, 2) = -big + Rational(1, 7);
  auto [t2, a2] = verify_connection(printed, m);
  CHECK(t2 + a2 > 1e-3);
}

TEST_CASE("two unknown orderings give the same solution") {
  for (const Rational& lambda : {Rational(1), Rational(3, 2)}) {
    MetricSpec m = berger_metric(lambda);
    auto a = levi_civita_coframe<Rational>(m, std::nullopt, false);
    auto b = levi_civita_coframe<Rational>(m, std::nullopt, true);
    CHECK(a.gamma == b.gamma);
  }
  // Double path for a metric whose entries are not rational squares.
  MetricSpec m;
  m.complex = &su2_complex();
  m.gram = MatR(3, 3);
  m.gram(0, 0) = Rational(1);
  m.gram(1, 1) = Rational(1);
  m.gram(2, 2) = Rational(-2);
  auto a = levi_civita_coframe<double>(m, std::nullopt, false);
  auto b = levi_civita_coframe<double>(m, std::nullopt, true);
  double worst = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        worst = std::max(worst, std::fabs(a.gamma(i, j, k) - b.gamma(i, j, k)));
  CHECK(worst < 1e-12);
  auto [torsion, antisym] = verify_connection(a, m);
  CHECK(torsion < 1e-12);
  CHECK(antisym < 1e-12);
}

TEST_CASE("lambda sign flip: kappa entry even, xi and rho entries odd") {
  const Rational lambda(3, 2);
  MetricSpec m = berger_metric(lambda);
  MatR plus(3, 3), minus(3, 3);
  plus(0, 0) = minus(0, 0) = Rational(1);
  plus(1, 1) = minus(1, 1) = Rational(1);
  plus(2, 2) = lambda;
  minus(2, 2) = -lambda;
  auto cp = levi_civita_coframe<Rational>(m, plus);
  auto cm = levi_civita_coframe<Rational>(m, minus);
  CHECK(cp.gamma(0, 1, 2) == cm.gamma(0, 1, 2));    // kappa slot, even
  CHECK(cp.gamma(0, 2, 1) == -cm.gamma(0, 2, 1));   // rho slot, odd
  CHECK(cp.gamma(1, 2, 0) == -cm.gamma(1, 2, 0));   // xi slot, odd
  auto [torsion, antisym] = verify_connection(cm, m);
  CHECK(torsion == 0.0);
  CHECK(antisym == 0.0);
}

TEST_CASE("connection converts to an so(2,1)-valued form") {
  auto conn = levi_civita_coframe<Rational>(berger_metric(Rational(2)));
  auto theta = conn.to_valued(algebra("so21"));
  // K1 coefficient on kappa is (lambda^2+2) = 6; boosts carry -+lambda.
  CHECK(theta.coefficient(mask_of({2}))[0] == Rational(6));
  CHECK(theta.coefficient(mask_of({1}))[1] == Rational(-2));
  CHECK(theta.coefficient(mask_of({0}))[2] == Rational(2));
}

TEST_CASE("input validation") {
  MetricSpec bad;
  bad.complex = &su2_complex();
  bad.gram = MatR(3, 3);
  bad.gram(0, 1) = Rational(1);  // asymmetric and singular
  CHECK_THROWS_AS(levi_civita_coframe<Rational>(bad), Error);

  MetricSpec offdiag;
  offdiag.complex = &su2_complex();
  offdiag.gram = MatR::identity(3);
  offdiag.gram(0, 1) = Rational(1, 2);
  offdiag.gram(1, 0) = Rational(1, 2);
  CHECK_THROWS_AS(levi_civita_coframe<Rational>(offdiag), Error);

  MetricSpec nonsquare;
  nonsquare.complex = &su2_complex();
  nonsquare.gram = MatR::identity(3);
  nonsquare.gram(2, 2) = Rational(-3);
  CHECK_THROWS_AS(levi_civita_coframe<Rational>(nonsquare), Error);
}
