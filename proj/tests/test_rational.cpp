#include <catch_amalgamated.hpp>

#include "cs3/linalg.hpp"
#include "cs3/rational.hpp"

using namespace cs3;

TEST_CASE("rational arithmetic normalizes") {
  CHECK(Rational(2, 4) == Rational(1, 2));
  CHECK(Rational(1, -2) == Rational(-1, 2));
  CHECK(Rational(1, 2) + Rational(1, 3) == Rational(5, 6));
  CHECK(Rational(1, 2) * Rational(2, 3) == Rational(1, 3));
  CHECK(Rational(7, 3) / Rational(7, 3) == Rational(1));
  CHECK((-Rational(3, 5)).num() == -3);
  CHECK(Rational(-7, 2).floor() == -4);
  CHECK(Rational(7, 2).floor() == 3);
}

TEST_CASE("rational parsing") {
  CHECK(Rational::parse("3/2") == Rational(3, 2));
  CHECK(Rational::parse("-5") == Rational(-5));
  CHECK(Rational::parse("1.5") == Rational(3, 2));
  CHECK(Rational::parse("-0.25") == Rational(-1, 4));
  CHECK_THROWS_AS(Rational(1, 0), Error);
}

TEST_CASE("rational square detection") {
  CHECK(Rational(9, 4).abs_is_square());
  CHECK(Rational(-9, 4).abs_is_square());
  CHECK(Rational(9, 4).abs_sqrt() == Rational(3, 2));
  CHECK_FALSE(Rational(2).abs_is_square());
  CHECK_FALSE(Rational(1, 3).abs_is_square());
}

TEST_CASE("pi scalar bookkeeping") {
  PiScalar scale(Rational(1, 16), -2);
  PiScalar volume(Rational(2), 2);
  PiScalar product = scale * volume;
  CHECK(product.pi_pow() == 0);
  CHECK(product.as_rational() == Rational(1, 8));
  CHECK_THROWS_AS((scale + volume), Error);
  CHECK((PiScalar(Rational(0)) + volume) == volume);
  CHECK(PiScalar(Rational(1), 2).to_double() == Catch::Approx(9.8696044010893586).epsilon(1e-14));
  CHECK_THROWS_AS(scale.as_rational(), Error);
}

TEST_CASE("linear solves are exact over rationals") {
  MatR a(3, 3,
         {Rational(2), Rational(1), Rational(0),
          Rational(1), Rational(3), Rational(1),
          Rational(0), Rational(1), Rational(4)});
  MatR rhs(3, 1, {Rational(1), Rational(0), Rational(2)});
  MatR x = solve_linear(a, rhs);
  MatR back = a * x;
  CHECK(back == rhs);
  CHECK(determinant(a) == Rational(18));
  CHECK(inverse(a) * a == MatR::identity(3));
}

TEST_CASE("span solver coordinates and residual") {
  MatR span(3, 2, {Rational(1), Rational(0), Rational(0), Rational(1), Rational(1), Rational(1)});
  SpanSolver solver(span);
  double resid = -1.0;
  auto coords = solver.coordinates<Rational>({Rational(2), Rational(3), Rational(5)}, &resid);
  CHECK(coords[0] == Rational(2));
  CHECK(coords[1] == Rational(3));
  CHECK(resid == 0.0);
  solver.coordinates<Rational>({Rational(1), Rational(1), Rational(0)}, &resid);
  CHECK(resid > 0.0);
}

TEST_CASE("kernel basis spans the nullspace") {
  MatR a(2, 4,
         {Rational(1), Rational(0), Rational(1), Rational(0),
          Rational(0), Rational(1), Rational(0), Rational(1)});
  auto basis = kernel_basis(a);
  REQUIRE(basis.size() == 2);
  for (const auto& v : basis) {
    for (int r = 0; r < 2; ++r) {
      Rational s(0);
      for (int c = 0; c < 4; ++c) s += a(r, c) * v[c];
      CHECK(s.is_zero());
    }
  }
}
