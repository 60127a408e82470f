#pragma once

#include <vector>

#include "cs3/poly_form.hpp"

namespace cs3 {

/// The global left-invariant coframe (xi, rho, kappa) of S^3 = SU(2) as
/// polynomial 1-forms on ambient R^4:
///   xi    = -x3 dx1 + x4 dx2 + x1 dx3 - x2 dx4
///   rho   = -x4 dx1 - x3 dx2 + x2 dx3 + x1 dx4
///   kappa =  x2 dx1 - x1 dx2 + x4 dx3 - x3 dx4
inline const std::vector<PolyForm>& su2_left_invariant_forms() {
  static const std::vector<PolyForm> forms = [] {
    auto x = [](int v) { return Polynomial::variable(4, v); };
    auto mk = [&](std::array<Polynomial, 4> coeffs) {
      PolyForm f(4, 1);
      for (int v = 0; v < 4; ++v) f.add_term(1u << v, coeffs[v]);
      return f;
    };
    std::vector<PolyForm> out;
    out.push_back(mk({-x(2), x(3), x(0), -x(1)}));
    out.push_back(mk({-x(3), -x(2), x(1), x(0)}));
    out.push_back(mk({x(1), -x(0), x(3), -x(2)}));
    return out;
  }();
  return forms;
}

/// The smooth section S^3 -> SO(4) sending x to the orthogonal matrix whose
/// first column is x (quaternion left multiplication).
inline PolyMatrixMap so4_section() {
  auto m = PolyMatrixMap::make(4, 4, PolyMatrixMap::Inverse::orthogonal, true);
  auto x = [](int v) { return Polynomial::variable(4, v); };
  const int sign[4][4] = {{1, -1, -1, -1}, {1, 1, 1, -1}, {1, -1, 1, 1}, {1, 1, -1, 1}};
  const int var[4][4] = {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) m.at(r, c) = Rational(sign[r][c]) * x(var[r][c]);
  return m;
}

/// The double cover S^3 -> SO(3), a unit quaternion acting by conjugation
/// on its imaginary part; entries are homogeneous quadratics, orthogonal
/// modulo |x|^2 = 1. The inverse-rotation convention is used so that the
/// covering has degree +2 for the orientations fixed by the charts.
inline PolyMatrixMap so3_double_cover() {
  auto m = PolyMatrixMap::make(3, 4, PolyMatrixMap::Inverse::orthogonal, true);
  auto x = [](int v) { return Polynomial::variable(4, v); };
  auto sq = [&](int v) { return x(v) * x(v); };
  auto two = [](const Polynomial& p) { return Rational(2) * p; };
  m.at(0, 0) = sq(0) + sq(1) - sq(2) - sq(3);
  m.at(1, 0) = two(x(1) * x(2) - x(0) * x(3));
  m.at(2, 0) = two(x(1) * x(3) + x(0) * x(2));
  m.at(0, 1) = two(x(1) * x(2) + x(0) * x(3));
  m.at(1, 1) = sq(0) - sq(1) + sq(2) - sq(3);
  m.at(2, 1) = two(x(2) * x(3) - x(0) * x(1));
  m.at(0, 2) = two(x(1) * x(3) - x(0) * x(2));
  m.at(1, 2) = two(x(2) * x(3) + x(0) * x(1));
  m.at(2, 2) = sq(0) - sq(1) - sq(2) + sq(3);
  return m;
}

/// The left-invariant coframe (omega1, omega2, psi) of SO(3) as polynomial
/// 1-forms on ambient R^9, with variables x_{3r+c} = R(r,c):
/// omega1 = mu_{21}, omega2 = mu_{31}, psi = mu_{32} for mu = R^T dR.
inline const std::vector<PolyForm>& so3_left_invariant_forms() {
  static const std::vector<PolyForm> forms = [] {
    auto entry_form = [](int i, int j) {
      // mu_{ij} = sum_k R(k,i) dR(k,j)
      PolyForm f(9, 1);
      for (int k = 0; k < 3; ++k)
        f.add_term(1u << (3 * k + j), Polynomial::variable(9, 3 * k + i));
      return f;
    };
    return std::vector<PolyForm>{entry_form(1, 0), entry_form(2, 0), entry_form(2, 1)};
  }();
  return forms;
}

/// Substitutes polynomial 1-forms for the coframe generators of a scalar
/// constant-coefficient form.
inline PolyForm scalar_coframe_to_poly(const ValuedForm<Rational>& form,
                                       const std::vector<PolyForm>& gens) {
  if (!form.is_scalar()) throw AlgebraMismatch("scalar_coframe_to_poly expects a scalar form");
  const int nv = gens.front().num_vars();
  PolyForm out(nv, form.degree);
  for (const auto& [mask, v] : form.terms) {
    PolyForm term = PolyForm::zero_form(nv, Polynomial::constant(nv, v[0]));
    for (int i : mask_indices(mask)) term = wedge(term, gens[i]);
    out = out + term;
  }
  return out;
}

/// Realizes an algebra-valued coframe 1-form as a matrix of polynomial
/// 1-forms by substituting generator polynomials.
inline MatrixPolyForm valued_coframe_to_matrix_poly(const ValuedForm<Rational>& theta,
                                                    const std::vector<PolyForm>& gens) {
  if (theta.is_scalar() || theta.degree != 1)
    throw AlgebraMismatch("expected an algebra-valued 1-form");
  const LieAlgebra& g = *theta.algebra;
  const int nv = gens.front().num_vars();
  auto out = MatrixPolyForm::make(g.mat_size(), nv, 1);
  for (const auto& [mask, coords] : theta.terms) {
    MatR value = g.from_coordinates(coords);
    auto idx = mask_indices(mask);
    const PolyForm& gen = gens[idx.front()];
    for (int r = 0; r < g.mat_size(); ++r)
      for (int c = 0; c < g.mat_size(); ++c) {
        if (value(r, c).is_zero()) continue;
        out.at(r, c) = out.at(r, c) + value(r, c) * gen;
      }
  }
  return out;
}

}  // namespace cs3
