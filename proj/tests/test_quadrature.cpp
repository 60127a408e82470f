#include <catch_amalgamated.hpp>
#include <random>

#include "cs3/quadrature.hpp"
#include "cs3/sphere_maps.hpp"

using namespace cs3;

namespace {

const double kPi = std::numbers::pi;

PolyForm volume_form_s3() {
  const auto& f = su2_left_invariant_forms();
  return wedge(wedge(f[0], f[1]), f[2]);
}

PolyForm volume_form_so3() {
  const auto& f = so3_left_invariant_forms();
  return wedge(wedge(f[0], f[1]), f[2]);
}

MatrixPolyForm so3_mc_matrix() {
  MatrixPolyForm mu = MatrixPolyForm::make(3, 9, 1);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      PolyForm e(9, 1);
      for (int k = 0; k < 3; ++k) e.add_term(1u << (3 * k + j), Polynomial::variable(9, 3 * k + i));
      mu.at(i, j) = e;
    }
  return mu;
}

}  // namespace

TEST_CASE("Gauss-Legendre rule has positive weights summing to the interval") {
  for (int n : {4, 8, 32}) {
    QuadratureRule r(n);
    double sum = 0.0;
    for (double w : r.weights) {
      CHECK(w > 0.0);
      sum += w;
    }
    CHECK(sum == Catch::Approx(2.0).epsilon(1e-13));
    double ix2 = 0.0;
    for (int i = 0; i < n; ++i) ix2 += r.weights[i] * r.nodes[i] * r.nodes[i];
    CHECK(ix2 == Catch::Approx(2.0 / 3.0).epsilon(1e-13));
  }
}

TEST_CASE("charts land on their manifolds at 1000 random points") {
  std::mt19937 rng(53);
  for (const Chart& chart : {s3_chart(), so3_chart()}) {
    std::vector<double> x(chart.ambient_dim);
    for (int trial = 0; trial < 1000; ++trial) {
      double u[3];
      for (int ax = 0; ax < 3; ++ax) {
        std::uniform_real_distribution<double> d(chart.lo[ax], chart.hi[ax]);
        u[ax] = d(rng);
      }
      chart.embed(u, x.data());
      CHECK(chart.manifold_residual(x.data()) < 1e-12);
    }
  }
}

TEST_CASE("volume of S^3 is 2 pi^2") {
  double v = integrate_threeform(make_integrand(volume_form_s3()), s3_chart(), QuadratureRule(32));
  CHECK(std::fabs(v - 2.0 * kPi * kPi) / (2.0 * kPi * kPi) < 1e-8);
}

TEST_CASE("contracted ambient volume form also integrates to 2 pi^2") {
  auto x4 = [](int v) { return Polynomial::variable(4, v); };
  PolyForm vol(4, 3);
  vol.add_term(mask_of({0, 1, 2}), x4(3));
  vol.add_term(mask_of({0, 1, 3}), -x4(2));
  vol.add_term(mask_of({0, 2, 3}), x4(1));
  vol.add_term(mask_of({1, 2, 3}), -x4(0));
  double v = integrate_threeform(make_integrand(vol), s3_chart(), QuadratureRule(32));
  CHECK(std::fabs(v - 2.0 * kPi * kPi) / (2.0 * kPi * kPi) < 1e-8);
}

TEST_CASE("volume of SO(3) is 8 pi^2") {
  double v =
      integrate_threeform(make_integrand(volume_form_so3()), so3_chart(), QuadratureRule(32));
  CHECK(std::fabs(v - 8.0 * kPi * kPi) / (8.0 * kPi * kPi) < 1e-6);
}

TEST_CASE("exact forms integrate to zero over the closed manifold") {
  std::mt19937 rng(59);
  std::uniform_int_distribution<int> coeff(-3, 3);
  for (int trial = 0; trial < 5; ++trial) {
    PolyForm two_form(4, 2);
    for (Mask m = 0; m < 16u; ++m) {
      if (mask_degree(m) != 2) continue;
      Polynomial p(4);
      Polynomial::Exponents e(4, 0);
      e[trial % 4] = 1;
      e[(trial + 1) % 4] = 2;
      p.add_term(e, Rational(coeff(rng)));
      two_form.add_term(m, p);
    }
    PolyForm exact = exterior_derivative_poly(two_form);
    double v = integrate_threeform(make_integrand(exact), s3_chart(), QuadratureRule(32));
    CHECK(std::fabs(v) < 1e-8);
  }
}

TEST_CASE("integration is linear in the integrand") {
  std::mt19937 rng(61);
  std::uniform_real_distribution<double> scale(-2.0, 2.0);
  PolyForm a = volume_form_s3();
  auto cs = trace_cs_poly(mc_pullback(so4_section()), PiScalar(Rational(1))).form;
  QuadratureRule r(16);
  const Chart chart = s3_chart();
  double ia = integrate_threeform(make_integrand(a), chart, r);
  double ib = integrate_threeform(make_integrand(cs), chart, r);
  for (int trial = 0; trial < 10; ++trial) {
    double ca = scale(rng), cb = scale(rng);
    Integrand3 combo = [&, ca, cb](const double* x, const double* t) {
      return ca * a.value_on(x, t) + cb * cs.value_on(x, t);
    };
    double ic = integrate_threeform(combo, chart, r);
    CHECK(std::fabs(ic - (ca * ia + cb * ib)) < 1e-10 * (1.0 + std::fabs(ic)));
  }
}

TEST_CASE("refinement error decays by at least 10x per doubling") {
  auto res = grid_refinement_estimate(make_integrand(volume_form_s3()), s3_chart(), 4, 4);
  REQUIRE(res.sequence.size() == 4);
  double d1 = std::fabs(res.sequence[1] - res.sequence[0]);
  double d2 = std::fabs(res.sequence[2] - res.sequence[1]);
  double d3 = std::fabs(res.sequence[3] - res.sequence[2]);
  CHECK(d2 * 10.0 <= d1);
  CHECK(d3 * 10.0 <= d2);
}

TEST_CASE("refinement of the zero integrand returns zero with zero error") {
  Integrand3 zero = [](const double*, const double*) { return 0.0; };
  auto res = grid_refinement_estimate(zero, s3_chart(), 8, 3);
  CHECK(res.value == 0.0);
  CHECK(res.error_estimate == 0.0);
}

TEST_CASE("refinement of the volume form at (8,16,32) hits 2 pi^2") {
  auto res = grid_refinement_estimate(make_integrand(volume_form_s3()), s3_chart(), 8, 3);
  CHECK(std::fabs(res.value - 2.0 * kPi * kPi) < 1e-8);
  CHECK(res.error_estimate < 1e-8);
}

TEST_CASE("increasing differences raise NonConvergent") {
  auto counter = std::make_shared<long>(0);
  Integrand3 staircase = [counter](const double*, const double*) {
    long c = (*counter)++;
    if (c < 8 * 8 * 8) return 0.0;
    if (c < 8 * 8 * 8 + 16 * 16 * 16) return 1.0;
    return 10.0;
  };
  CHECK_THROWS_AS(grid_refinement_estimate(staircase, s3_chart(), 8, 3), NonConvergent);
}

TEST_CASE("non-finite integrand values surface as EvaluationError") {
  Integrand3 bad = [](const double*, const double*) {
    return std::numeric_limits<double>::quiet_NaN();
  };
  CHECK_THROWS_AS(integrate_threeform(bad, s3_chart(), QuadratureRule(4)), EvaluationError);
}

TEST_CASE("matrix CS integrand agrees with the symbolic trace CS pointwise") {
  auto theta = mc_pullback(so4_section());
  auto symbolic = trace_cs_poly(theta, standard_cs_scale());
  auto numeric = matrix_cs_integrand(theta, standard_cs_scale());
  const Chart chart = s3_chart();
  std::mt19937 rng(67);
  std::vector<double> x(4), t(12);
  for (int trial = 0; trial < 200; ++trial) {
    double u[3];
    for (int ax = 0; ax < 3; ++ax) {
      std::uniform_real_distribution<double> d(chart.lo[ax], chart.hi[ax]);
      u[ax] = d(rng);
    }
    chart.embed(u, x.data());
    chart.tangents(u, t.data());
    double a = symbolic.value_on(x.data(), t.data());
    double b = numeric(x.data(), t.data());
    CHECK(std::fabs(a - b) < 1e-10 * (1.0 + std::fabs(a)));
  }
}

TEST_CASE("normalization integrals of the two generators are both one") {
  QuadratureRule r(32);
  auto zeta_pullback = trace_cs_poly(mc_pullback(so4_section()), standard_cs_scale());
  double second = integrate_threeform(make_integrand(zeta_pullback), s3_chart(), r);
  CHECK(std::fabs(second - 1.0) < 1e-6);
  double first =
      integrate_threeform(matrix_cs_integrand(so3_mc_matrix(), standard_cs_scale()), so3_chart(), r);
  CHECK(std::fabs(first - 1.0) < 1e-6);
}

TEST_CASE("double cover integrates CS to two") {
  auto cs = trace_cs_poly(mc_pullback(so3_double_cover()), standard_cs_scale());
  double v = integrate_threeform(make_integrand(cs), s3_chart(), QuadratureRule(32));
  CHECK(std::fabs(v - 2.0) < 1e-4);
}
