#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "cs3/coframe.hpp"

namespace cs3 {

/// Constant-coefficient (pseudo-)Riemannian metric on a coframe, given by
/// its Gram matrix, e.g. diag(1, 1, -lambda^2).
struct MetricSpec {
  const CoframeComplex* complex = nullptr;
  MatR gram;

  void validate() const {
    if (!(gram == gram.transpose())) throw Error("metric Gram matrix not symmetric");
    if (determinant(gram).is_zero()) throw Error("metric Gram matrix singular");
  }
};

/// Connection 1-forms theta^i_j in the orthonormal gauge, with entries
/// expressed in the original coframe. The lowered matrix theta_{ij} (index
/// lowered with eta = diag(+-1)) is antisymmetric.
template <class S>
struct ConnectionMatrix {
  const CoframeComplex* complex = nullptr;
  std::vector<int> eta;   // +-1 per orthonormal direction
  Matrix<S> frame_map;    // A with eta-coframe = A * original coframe
  Tensor3<S> gamma;       // gamma(i,j,k): coefficient of w^k in theta^i_j

  ValuedForm<S> entry(int i, int j) const {
    auto f = ValuedForm<S>::scalar(1);
    for (int k = 0; k < complex->rank(); ++k) {
      if (scalar_traits<S>::is_zero(gamma(i, j, k))) continue;
      f.add_term(1u << k, {gamma(i, j, k)});
    }
    return f;
  }

  /// Expresses the matrix as a 1-form valued in the given algebra by solving
  /// for basis coordinates at each coframe slot.
  ValuedForm<S> to_valued(const LieAlgebra& g, double tol = 0.0) const {
    const int n = complex->rank();
    auto out = ValuedForm<S>::valued(1, g);
    for (int k = 0; k < n; ++k) {
      Matrix<S> slot(g.mat_size(), g.mat_size());
      for (int i = 0; i < g.mat_size(); ++i)
        for (int j = 0; j < g.mat_size(); ++j) slot(i, j) = gamma(i, j, k);
      out.add_term(1u << k, g.coordinates(slot, tol));
    }
    return out;
  }
};

namespace detail {

/// Structure constants of the orthonormal coframe eta = A w:
/// F^k_{ij} = A(k,l) f^l_{ab} Ainv(a,i) Ainv(b,j).
template <class S>
Tensor3<S> transform_structure(const Tensor3<Rational>& f, const Matrix<S>& a) {
  const int n = a.rows();
  Matrix<S> ainv = inverse(a);
  Tensor3<S> out(n);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        S sum{};
        for (int l = 0; l < n; ++l) {
          for (int p = 0; p < n; ++p)
            for (int q = 0; q < n; ++q) {
              const Rational& c = f(l, p, q);
              if (c.is_zero()) continue;
              sum = sum + a(k, l) * scalar_traits<S>::from_rational(c) * ainv(p, i) * ainv(q, j);
            }
        }
        out(k, i, j) = sum;
      }
  return out;
}

inline std::pair<int, int> pair_of(int index, int n) {
  int p = 0;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b, ++p)
      if (p == index) return {a, b};
  throw Error("bad pair index");
}

inline int index_of_pair(int a, int b, int n) {
  int p = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j, ++p)
      if (i == a && j == b) return p;
  throw Error("bad pair");
}

}  // namespace detail

/// Default orthonormalizer for a diagonal Gram matrix: A = diag(sqrt|g_ii|),
/// exact when every |g_ii| is a rational square.
template <class S>
Matrix<S> diagonal_frame_map(const MetricSpec& m) {
  const int n = m.gram.rows();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j && !m.gram(i, j).is_zero())
        throw Error("default frame map needs a diagonal metric; pass one explicitly");
  Matrix<S> a(n, n);
  for (int i = 0; i < n; ++i) {
    const Rational g = m.gram(i, i);
    if constexpr (scalar_traits<S>::exact) {
      if (!g.abs_is_square())
        throw Error("metric entry " + g.str() + " is not a rational square; use double");
      a(i, i) = scalar_traits<S>::from_rational(g.abs_sqrt());
    } else {
      a(i, i) = std::sqrt(std::fabs(g.to_double()));
    }
  }
  return a;
}

/// Signs eta with A^T diag(eta) A = gram; validates the frame map.
template <class S>
std::vector<int> signature_of_frame(const MetricSpec& m, const Matrix<S>& a, double tol = 1e-12) {
  const int n = a.rows();
  Matrix<S> ainv = inverse(a);
  Matrix<S> d = ainv.transpose() * m.gram.template cast<S>() * ainv;
  std::vector<int> eta(n);
  for (int i = 0; i < n; ++i) {
    double v = scalar_traits<S>::to_double(d(i, i));
    if (std::fabs(std::fabs(v) - 1.0) > tol)
      throw Error("frame map does not orthonormalize the metric");
    eta[i] = v > 0 ? 1 : -1;
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j && std::fabs(scalar_traits<S>::to_double(d(i, j))) > tol)
        throw Error("frame map does not orthonormalize the metric");
  return eta;
}

/// Solves Cartan's first structure equation d eta^i + theta^i_j ^ eta^j = 0
/// together with metric antisymmetry for the unique Levi-Civita connection,
/// as a 9x9 linear system over the lowered components. The unknown ordering
/// is switchable so that uniqueness can be cross-checked.
template <class S>
ConnectionMatrix<S> levi_civita_coframe(const MetricSpec& m,
                                        std::optional<Matrix<S>> frame_map = std::nullopt,
                                        bool reversed_unknowns = false) {
  m.validate();
  const int n = m.complex->rank();
  if (n != 3) throw Error("levi_civita_coframe expects a rank-3 coframe");
  Matrix<S> a = frame_map ? *frame_map : diagonal_frame_map<S>(m);
  std::vector<int> eta = signature_of_frame(m, a);
  Tensor3<S> f_on = detail::transform_structure(m.complex->structure(), a);

  const int pairs = n * (n - 1) / 2;
  const int unknowns = pairs * n;
  auto unknown_index = [&](int pair, int k) {
    int idx = pair * n + k;
    return reversed_unknowns ? unknowns - 1 - idx : idx;
  };
  // x[(ab), m]: coefficient of eta^m in the lowered theta_{ab}, a < b.
  auto coeff_of = [&](int i, int l, int m) {
    // theta^i_l = eta_i * theta_{il}; theta_{il} = +-x[(il)].
    struct Ref {
      int index;
      int sign;
    };
    if (i == l) return Ref{-1, 0};
    int aa = std::min(i, l), bb = std::max(i, l);
    int sgn = (i < l ? 1 : -1) * eta[i];
    return Ref{unknown_index(detail::index_of_pair(aa, bb, n), m), sgn};
  };
  Matrix<S> sys(unknowns, unknowns);
  Matrix<S> rhs(unknowns, 1);
  int row = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = j + 1; k < n; ++k, ++row) {
        // -F^i_{jk} + gamma^i_{k,j} - gamma^i_{j,k} = 0 on eta^j ^ eta^k.
        rhs(row, 0) = f_on(i, j, k);
        auto t1 = coeff_of(i, k, j);
        if (t1.index >= 0)
          sys(row, t1.index) = sys(row, t1.index) + scalar_traits<S>::from_rational(Rational(t1.sign));
        auto t2 = coeff_of(i, j, k);
        if (t2.index >= 0)
          sys(row, t2.index) = sys(row, t2.index) - scalar_traits<S>::from_rational(Rational(t2.sign));
      }
  Matrix<S> sol = solve_linear(sys, rhs);

  ConnectionMatrix<S> out;
  out.complex = m.complex;
  out.eta = eta;
  out.frame_map = a;
  out.gamma = Tensor3<S>(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      for (int mm = 0; mm < n; ++mm) {
        auto ref = coeff_of(i, j, mm);
        S value = scalar_traits<S>::from_rational(Rational(ref.sign)) * sol(ref.index, 0);
        // Express eta^mm back in the original coframe: eta^mm = A(mm, l) w^l.
        for (int l = 0; l < n; ++l)
          out.gamma(i, j, l) = out.gamma(i, j, l) + value * a(mm, l);
      }
    }
  return out;
}

/// (max torsion residual, max antisymmetry residual), both zero for the
/// solver's own output. Residuals are evaluated in the orthonormal gauge.
template <class S>
std::pair<double, double> verify_connection(const ConnectionMatrix<S>& c, const MetricSpec& m) {
  const int n = m.complex->rank();
  Tensor3<S> f_on = detail::transform_structure(m.complex->structure(), c.frame_map);
  Matrix<S> ainv = inverse(c.frame_map);
  // gamma in the eta-coframe: gtilde(i,j,m) = gamma(i,j,l) Ainv(l,m).
  Tensor3<S> gt(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int mm = 0; mm < n; ++mm) {
        S sum{};
        for (int l = 0; l < n; ++l) sum = sum + c.gamma(i, j, l) * ainv(l, mm);
        gt(i, j, mm) = sum;
      }
  double torsion = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = j + 1; k < n; ++k) {
        S resid = -f_on(i, j, k) + gt(i, k, j) - gt(i, j, k);
        torsion = std::max(torsion, std::fabs(scalar_traits<S>::to_double(resid)));
      }
  double antisym = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int mm = 0; mm < n; ++mm) {
        S resid = scalar_traits<S>::from_rational(Rational(c.eta[i])) * gt(i, j, mm) +
                  scalar_traits<S>::from_rational(Rational(c.eta[j])) * gt(j, i, mm);
        antisym = std::max(antisym, std::fabs(scalar_traits<S>::to_double(resid)));
      }
  return {torsion, antisym};
}

}  // namespace cs3
