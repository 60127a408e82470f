#include <catch_amalgamated.hpp>
#include <random>

#include "cs3/poly_form.hpp"
#include "cs3/sphere_maps.hpp"

using namespace cs3;

namespace {

Polynomial x4(int v) { return Polynomial::variable(4, v); }

PolyForm dx(int v) { return PolyForm::d_coordinate(4, v); }

Polynomial random_poly(int num_vars, int max_deg, std::mt19937& rng) {
  std::uniform_int_distribution<int> coeff(-3, 3);
  std::uniform_int_distribution<int> expo(0, max_deg);
  Polynomial p(num_vars);
  for (int t = 0; t < 4; ++t) {
    Polynomial::Exponents e(num_vars, 0);
    int budget = max_deg;
    for (int v = 0; v < num_vars && budget > 0; ++v) {
      int d = expo(rng) % (budget + 1);
      e[v] = static_cast<std::uint8_t>(d);
      budget -= d;
    }
    p.add_term(e, Rational(coeff(rng)));
  }
  return p;
}

}  // namespace

TEST_CASE("exterior derivative on monomial forms") {
  PolyForm f(4, 1);
  f.add_term(1u << 1, x4(0));  // x1 dx2
  PolyForm df = exterior_derivative_poly(f);
  CHECK(df.coefficient(mask_of({0, 1})) == Polynomial::constant(4, Rational(1)));
  CHECK(df.terms().size() == 1);
  PolyForm c = PolyForm::zero_form(4, Polynomial::constant(4, Rational(7)));
  CHECK(exterior_derivative_poly(c).is_zero());
}

TEST_CASE("d xi matches the term-wise differentiation oracle") {
  const auto& forms = su2_left_invariant_forms();
  PolyForm dxi = exterior_derivative_poly(forms[0]);
  // d xi = 2 dx1^dx3 + 2 dx4^dx2 = 2 dx1^dx3 - 2 dx2^dx4.
  PolyForm expect = Rational(2) * wedge(dx(0), dx(2)) - Rational(2) * wedge(dx(1), dx(3));
  CHECK(dxi == expect);
}

TEST_CASE("d o d vanishes on random forms") {
  std::mt19937 rng(41);
  for (int trial = 0; trial < 20; ++trial)
    for (int deg = 0; deg <= 2; ++deg) {
      PolyForm f(4, deg);
      for (Mask m = 0; m < 16u; ++m)
        if (mask_degree(m) == deg) f.add_term(m, random_poly(4, 3, rng));
      CHECK(exterior_derivative_poly(exterior_derivative_poly(f)).is_zero());
    }
}

TEST_CASE("reduce_mod_sphere basics") {
  Polynomial norm = x4(0) * x4(0) + x4(1) * x4(1) + x4(2) * x4(2) + x4(3) * x4(3);
  PolyForm f(4, 1);
  f.add_term(1u << 0, norm);  // |x|^2 dx1
  PolyForm r = reduce_mod_sphere(f);
  CHECK(r == dx(0));
  CHECK(reduce_mod_sphere(r) == r);
  // Degree in x4 never exceeds one afterwards.
  for (const auto& [m, p] : r.terms()) CHECK(p.degree_in(3) <= 1);
}

TEST_CASE("xi^rho^kappa reduces to the contracted volume form") {
  const auto& forms = su2_left_invariant_forms();
  PolyForm vol = wedge(wedge(forms[0], forms[1]), forms[2]);
  PolyForm reduced = reduce_mod_sphere(vol);
  PolyForm expect(4, 3);
  expect.add_term(mask_of({0, 1, 2}), x4(3));
  expect.add_term(mask_of({0, 1, 3}), -x4(2));
  expect.add_term(mask_of({0, 2, 3}), x4(1));
  expect.add_term(mask_of({1, 2, 3}), -x4(0));
  CHECK(reduced == expect);
}

TEST_CASE("full sphere reduction kills the conormal direction") {
  // x . dx restricts to zero on the sphere.
  PolyForm conormal(4, 1);
  for (int v = 0; v < 4; ++v) conormal.add_term(1u << v, x4(v));
  CHECK_FALSE(reduce_mod_sphere(conormal).is_zero());
  CHECK(reduce_mod_sphere_forms(conormal).is_zero());
}

TEST_CASE("pullback is exact and commutes with d") {
  std::mt19937 rng(43);
  // phi : R^2 -> R^4 with quadratic components.
  std::vector<Polynomial> phi;
  for (int i = 0; i < 4; ++i) phi.push_back(random_poly(2, 2, rng));
  for (int trial = 0; trial < 10; ++trial) {
    PolyForm f(4, 1);
    for (int v = 0; v < 4; ++v) f.add_term(1u << v, random_poly(4, 2, rng));
    CHECK(pullback(phi, exterior_derivative_poly(f)) ==
          exterior_derivative_poly(pullback(phi, f)));
  }
}

TEST_CASE("section pullback reproduces the printed matrix modulo the ideal") {
  auto theta = mc_pullback(so4_section());
  const auto& f = su2_left_invariant_forms();
  const PolyForm &xi = f[0], &rho = f[1], &kappa = f[2];
  PolyForm zero(4, 1);
  const PolyForm* expected[4][4] = {{&zero, &kappa, &xi, &rho},
                                    {&kappa, &zero, &rho, &xi},
                                    {&xi, &rho, &zero, &kappa},
                                    {&rho, &xi, &kappa, &zero}};
  const int sign[4][4] = {{0, 1, -1, -1}, {-1, 0, 1, -1}, {1, -1, 0, -1}, {1, 1, 1, 0}};
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) {
      PolyForm diff = theta.at(r, c) - Rational(sign[r][c]) * (*expected[r][c]);
      CHECK(reduce_mod_sphere_forms(diff).is_zero());
    }
}

TEST_CASE("constant section pulls back to zero") {
  auto id = PolyMatrixMap::make(3, 4, PolyMatrixMap::Inverse::orthogonal, false);
  for (int i = 0; i < 3; ++i) id.at(i, i) = Polynomial::constant(4, Rational(1));
  auto theta = mc_pullback(id);
  for (const auto& e : theta.entries) CHECK(e.is_zero());
}

TEST_CASE("double cover pullback is antisymmetric and flat modulo the ideal") {
  auto h = so3_double_cover();
  // Validation inside mc_pullback also asserts the Maurer-Cartan equation.
  auto theta = mc_pullback(h);
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) {
      PolyForm sym = theta.at(r, c) + theta.at(c, r);
      CHECK(reduce_mod_sphere_forms(sym).is_zero());
    }
}

TEST_CASE("non-orthogonal maps are rejected") {
  auto bad = PolyMatrixMap::make(3, 4, PolyMatrixMap::Inverse::orthogonal, true);
  for (int i = 0; i < 3; ++i) bad.at(i, i) = Rational(2) * Polynomial::constant(4, Rational(1));
  CHECK_THROWS_AS(mc_pullback(bad), NotInGroup);
}

TEST_CASE("unimodular shear: adjugate inverse and trace-free pullback") {
  auto shear = PolyMatrixMap::make(2, 4, PolyMatrixMap::Inverse::unimodular, false);
  shear.at(0, 0) = Polynomial::constant(4, Rational(1));
  shear.at(1, 1) = Polynomial::constant(4, Rational(1));
  shear.at(0, 1) = x4(0) * x4(1);
  auto theta = mc_pullback(shear);
  PolyForm trace = theta.at(0, 0) + theta.at(1, 1);
  CHECK(trace.is_zero());
  // d(x1 x2) lands in the upper-right corner.
  CHECK(theta.at(0, 1) == exterior_derivative_poly(PolyForm::zero_form(4, x4(0) * x4(1))));
  CHECK(theta.at(1, 0).is_zero());
}

TEST_CASE("trace CS of the section gives eight times the volume form") {
  auto cs = trace_cs_poly(mc_pullback(so4_section()), standard_cs_scale());
  const auto& f = su2_left_invariant_forms();
  PolyForm vol = wedge(wedge(f[0], f[1]), f[2]);
  auto ratio = as_multiple_of(cs.form, vol);
  REQUIRE(ratio.has_value());
  CHECK(*ratio == Rational(8));
  CHECK(cs.scale == PiScalar(Rational(1, 16), -2));
}

TEST_CASE("trace CS of zero is zero") {
  auto zero = MatrixPolyForm::make(3, 4, 1);
  CHECK(trace_cs_poly(zero, standard_cs_scale()).form.is_zero());
}

TEST_CASE("naturality: pullback of CS equals CS of pullback, exactly") {
  std::mt19937 rng(47);
  for (int trial = 0; trial < 8; ++trial) {
    // theta: 2x2 matrix of 1-forms on R^3 with linear coefficients.
    MatrixPolyForm theta = MatrixPolyForm::make(2, 3, 1);
    for (int i = 0; i < 4; ++i) {
      PolyForm e(3, 1);
      for (int v = 0; v < 3; ++v) e.add_term(1u << v, random_poly(3, 1, rng));
      theta.entries[i] = e;
    }
    // phi : R^3 -> R^3 polynomial (quadratic).
    std::vector<Polynomial> phi;
    for (int i = 0; i < 3; ++i) phi.push_back(random_poly(3, 2, rng));
    auto lhs = pullback(phi, trace_cs_poly(theta, PiScalar(Rational(1))).form);
    auto rhs = trace_cs_poly(pullback(phi, theta), PiScalar(Rational(1))).form;
    CHECK(lhs == rhs);
  }
}

TEST_CASE("as_multiple_of detects non-multiples") {
  const auto& f = su2_left_invariant_forms();
  PolyForm vol = wedge(wedge(f[0], f[1]), f[2]);
  PolyForm off = vol + wedge(wedge(dx(0), dx(1)), dx(2));
  CHECK(as_multiple_of(Rational(5) * vol, vol) == Rational(5));
  CHECK_FALSE(as_multiple_of(off, vol).has_value());
}
